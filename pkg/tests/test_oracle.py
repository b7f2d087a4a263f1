import itertools

import pytest

from homcount.arith import RatPoly
from homcount.engine import count_at
from homcount import corpus
from homcount.lattice import IntMatrix
from homcount.oracle import (
    OracleError,
    SmallField,
    conic_count,
    flag_count,
    get_field,
    glr_closed_form,
    p1_pair_count,
    twisted_torus_count,
    twisted_torus_det,
)
from homcount.weyl import build_root_datum, coset_poincare

FIELDS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


@pytest.mark.parametrize("q", FIELDS)
def test_field_structure(q):
    f = get_field(q)
    assert f.metadata()["q"] == q
    units = range(1, q)
    # multiplicative group cyclic of order q-1: some element has full order
    assert any(len({f.pow(g, k) for k in range(q - 1)}) == q - 1 for g in units)
    # Frobenius x -> x^p is additive
    p = f.p
    for a, b in itertools.product(range(q), repeat=2):
        assert f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p))
    assert sum(1 for a in units if f.is_square(a)) == (q - 1 if p == 2 else (q - 1) // 2)


def test_field_errors():
    with pytest.raises(OracleError):
        SmallField(6)
    with pytest.raises(OracleError):
        SmallField(4096)
    with pytest.raises(ZeroDivisionError):
        get_field(5).inv(0)
    assert SmallField(81, check=False).q == 81
    SmallField(64).check_axioms()


@pytest.mark.parametrize("a,b,q,expected", [(2, 1, 3, 4), (1, 1, 3, 2), (2, 1, 9, 8)])
def test_conic_examples(a, b, q, expected):
    assert conic_count(a, b, get_field(q)) == expected


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 25])
def test_conic_values(q):
    f = get_field(q)
    for a in range(1, q):
        for b in range(1, q):
            assert conic_count(a, b, f) == (q - 1 if f.is_square(a) else q + 1)
    with pytest.raises(OracleError):
        conic_count(0, 1, f)


def test_conic_matches_engine():
    spec = corpus.load("conic_torus").to_spec()
    for p in (3, 5, 7):
        for n in (1, 2, 3):
            q = p ** n
            if q > 400:
                continue
            # the prime-field nonsquare stays a nonsquare exactly for odd n
            a = next(a for a in range(1, p) if not get_field(p).is_square(a))
            assert conic_count(a, 1, get_field(q)) == count_at(spec, p, n)


@pytest.mark.parametrize("f,n,dims,expected", [(2, 3, (1, 2), 21), (3, 2, (1,), 4), (2, 3, (1,), 7)])
def test_flag_examples(f, n, dims, expected):
    assert flag_count(get_field(f), n, dims) == expected


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("n", [3, 4])
def test_flags_match_coset_poincare(q, n):
    rd = build_root_datum("SL", n)
    f = get_field(q)
    for k in range(1, n):
        for dims in itertools.combinations(range(1, n), k):
            # the parabolic for dims keeps the simple roots a_j with j+1 not a jump
            subset = [j for j in range(n - 1) if j + 1 not in dims]
            assert flag_count(f, n, dims) == coset_poincare(rd, subset)(q), dims


def test_flag_errors():
    with pytest.raises(OracleError):
        flag_count(get_field(2), 3, (2, 1))
    with pytest.raises(OracleError):
        flag_count(get_field(2), 3, (3,))


@pytest.mark.parametrize("q,mode,expected", [(2, "ordered", 6), (2, "unordered_variety", 4), (3, "unordered_variety", 9)])
def test_p1_examples(q, mode, expected):
    assert p1_pair_count(get_field(q), mode) == expected


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_p1_unordered_is_square(q):
    assert p1_pair_count(get_field(q), "unordered_variety") == q * q
    assert p1_pair_count(get_field(q), "ordered") == q * (q + 1)
    with pytest.raises(OracleError):
        p1_pair_count(get_field(q), "cyclic")


@pytest.mark.parametrize("rows,q,k,expected", [([[-1]], 3, 2, 4), ([[1]], 3, 1, 2), ([[0, 1], [1, 0]], 2, 2, 3)])
def test_twisted_torus_examples(rows, q, k, expected):
    a = IntMatrix.from_rows(rows)
    assert twisted_torus_count(a, q, k) == twisted_torus_det(a, q) == expected


def test_twisted_torus_errors():
    with pytest.raises(OracleError):
        twisted_torus_count(IntMatrix.from_rows([[-1]]), 3, 1)
    with pytest.raises(OracleError):
        twisted_torus_count(IntMatrix.identity(3), 1024, 1)


@pytest.mark.parametrize("r,q,expected", [(1, 2, 4), (1, 3, 18), (2, 2, 11200)])
def test_glr_examples(r, q, expected):
    assert glr_closed_form(r, q) == expected


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("q", [2, 3])
def test_glr_matches_engine(r, q):
    assert glr_closed_form(r, q) == count_at(corpus.load(f"gl2r_h_r{r}").to_spec(), q, 1)
