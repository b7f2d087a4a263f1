"""Slow, obviously-correct reference computations used only by the tests."""

import itertools
from functools import reduce
from math import gcd, prod

import numpy as np


def perm_sign(p) -> int:
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def leibniz_det(rows) -> int:
    n = len(rows)
    return sum(perm_sign(p) * prod(rows[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def determinantal_divisors(rows) -> list[int]:
    """Elementary divisors as ratios of gcds of k x k minors."""
    m, n = len(rows), len(rows[0]) if rows else 0
    ds = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                g = gcd(g, leibniz_det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        ds.append(g)
    return [ds[k] // ds[k - 1] for k in range(1, len(ds))]


def count_matrices(p: int, n: int, pred) -> int:
    """Number of n x n matrices over F_p satisfying ``pred(det mod p)``."""
    total = 0
    for entries in itertools.product(range(p), repeat=n * n):
        rows = [entries[i * n:(i + 1) * n] for i in range(n)]
        if pred(leibniz_det(rows) % p):
            total += 1
    return total


def monomial_orbits(perms, nvars: int, degree: int) -> int:
    """Number of orbits of a permutation group on degree-``degree`` monomials."""
    seen, orbits = set(), 0
    for exps in itertools.product(range(degree + 1), repeat=nvars):
        if sum(exps) != degree or exps in seen:
            continue
        orbits += 1
        for p in perms:
            seen.add(tuple(exps[p[i]] for i in range(nvars)))
    return orbits


def inversions(p) -> int:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])


def matrix_power_order(rows, cap=100) -> int:
    a = np.array(rows, dtype=object)
    ident = np.identity(len(rows), dtype=int).astype(object)
    cur = a.copy()
    for k in range(1, cap + 1):
        if (cur == ident).all():
            return k
        cur = cur.dot(a)
    raise ValueError("order exceeds cap")


def lcm_all(xs) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), xs, 1)
