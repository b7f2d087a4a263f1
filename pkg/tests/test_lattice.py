import itertools
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import determinantal_divisors, leibniz_det, matrix_power_order, perm_sign
from homcount.arith import RatPoly, one_minus_t_pow
from homcount.lattice import (
    IntMatrix,
    LatticeError,
    det,
    elementary_divisors,
    is_unimodular,
    matrix_order,
    reverse_charpoly,
    right_inverse,
    smith_normal_form,
    unimodular_inverse,
)

t = RatPoly.t()


def square(n, lo=-4, hi=4):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


any_square = st.integers(1, 4).flatmap(square)
rect = st.tuples(st.integers(1, 3), st.integers(1, 4)).flatmap(
    lambda mn: st.lists(st.lists(st.integers(-5, 5), min_size=mn[1], max_size=mn[1]), min_size=mn[0], max_size=mn[0])
)


def poly_det(rows):
    """Leibniz expansion over polynomial entries."""
    n = len(rows)
    total = RatPoly()
    for p in itertools.permutations(range(n)):
        total = total + prod((rows[i][p[i]] for i in range(n)), start=RatPoly.const(1)).scale(perm_sign(p))
    return total


def reverse_charpoly_oracle(m: IntMatrix) -> RatPoly:
    n = m.rows
    return poly_det([[RatPoly.const(int(i == j)) - t.scale(m[i, j]) for j in range(n)] for i in range(n)])


def test_det_examples():
    assert det(IntMatrix.from_rows([[-1, 2], [2, -1]])) == -3 == leibniz_det([[-1, 2], [2, -1]])
    assert det(IntMatrix.identity(0)) == 1
    assert det(IntMatrix.from_rows([[0, 1], [1, 0]])) == -1


def test_snf_example():
    m = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert elementary_divisors(m) == determinantal_divisors(m.to_rows()) == [2, 6, 12]
    assert elementary_divisors(IntMatrix.from_rows([[2, 0], [0, 3]])) == [1, 6]


def test_order_examples():
    m = IntMatrix.from_rows([[0, -1], [1, -1]])
    assert matrix_order(m) == 3 == matrix_power_order(m.to_rows())
    with pytest.raises(LatticeError):
        matrix_order(IntMatrix.from_rows([[1, 1], [0, 1]]), cap=50)
    with pytest.raises(LatticeError):
        matrix_order(IntMatrix.from_rows([[2]]))


def test_reverse_charpoly_example():
    assert reverse_charpoly(IntMatrix.from_rows([[0, 1], [1, 0]])) == 1 - t ** 2
    assert reverse_charpoly(IntMatrix.identity(0)) == RatPoly.const(1)


def test_matrix_ops_and_errors():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert (a @ IntMatrix.identity(2)) == a
    assert a.transpose().to_rows() == [[1, 3], [2, 4]]
    assert IntMatrix.from_json(a.to_json(), 2) == a
    assert IntMatrix.from_json([["12345678901234567890"]], 1)[0, 0] == 12345678901234567890
    with pytest.raises(LatticeError):
        IntMatrix.from_json([["1.5"]], 1)
    with pytest.raises(LatticeError):
        IntMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(LatticeError):
        unimodular_inverse(IntMatrix.from_rows([[2, 0], [0, 1]]))
    with pytest.raises(LatticeError):
        right_inverse(IntMatrix.from_rows([[2, 0]]))


@given(any_square)
def test_det_matches_leibniz(rows):
    assert det(IntMatrix.from_rows(rows)) == leibniz_det(rows)


@given(rect)
def test_snf_properties(rows):
    m = IntMatrix.from_rows(rows)
    snf = smith_normal_form(m)
    assert is_unimodular(snf.U) and is_unimodular(snf.V)
    assert snf.U @ m @ snf.V == snf.D
    d = snf.D
    assert all(d[i, j] == 0 for i in range(d.rows) for j in range(d.cols) if i != j)
    divs = [x for x in snf.divisors if x]
    assert all(x > 0 for x in divs)
    assert all(b % a == 0 for a, b in zip(divs, divs[1:]))
    assert divs == determinantal_divisors(rows)


@given(any_square)
def test_abs_det_is_divisor_product(rows):
    m = IntMatrix.from_rows(rows)
    assert abs(det(m)) == prod(elementary_divisors(m))


@given(any_square)
def test_reverse_charpoly_matches_expansion(rows):
    m = IntMatrix.from_rows(rows)
    rc = reverse_charpoly(m)
    assert rc == reverse_charpoly_oracle(m)
    assert rc(0) == 1


SIGNED_PERMS = [
    IntMatrix.from_rows([[s[i] * int(p[i] == j) for j in range(3)] for i in range(3)])
    for p in itertools.permutations(range(3)) for s in itertools.product((1, -1), repeat=3)
]


@given(st.sampled_from(SIGNED_PERMS), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_finite_order_properties(g, shear):
    u = IntMatrix.from_rows([[1, shear[0], shear[1]], [0, 1, shear[2]], [0, 0, 1]])
    conj = u @ g @ unimodular_inverse(u)
    k = matrix_order(g)
    assert matrix_order(conj) == k == matrix_power_order(g.to_rows())
    # det(I - t g) divides (1 - t^k)^d for g of order k
    _, rem = one_minus_t_pow(k, 3).divmod(reverse_charpoly(conj))
    assert rem.is_zero()
    assert reverse_charpoly(conj) == reverse_charpoly(g)


def _elementary_product(n, ops):
    m = IntMatrix.identity(n)
    for i, j, c, flip in ops:
        e = IntMatrix.identity(n).to_rows()
        if i % n != j % n:
            e[i % n][j % n] = c
        if flip:
            e[i % n][i % n] = -1
        m = m @ IntMatrix.from_rows(e)
    return m


ops = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3), st.booleans()), max_size=8)


@given(st.integers(1, 4), ops)
def test_unimodular_inverse(n, steps):
    m = _elementary_product(n, steps)
    assert abs(leibniz_det(m.to_rows())) == 1
    inv = unimodular_inverse(m)
    assert m @ inv == IntMatrix.identity(n) == inv @ m
    assert m ** -1 == inv


@given(st.integers(1, 4), st.integers(0, 2), ops, ops)
def test_right_inverse(h, extra, left, right):
    d = h + extra
    proj = IntMatrix.from_rows([[int(i == j) for j in range(d)] for i in range(h)], d)
    m = _elementary_product(h, left) @ proj @ _elementary_product(d, right)
    s = right_inverse(m)
    assert m @ s == IntMatrix.identity(h)
