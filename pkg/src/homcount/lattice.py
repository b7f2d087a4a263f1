"""Integer matrices acting on lattices Z^d (column vectors)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arith import RatPoly


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major. The 0x0 matrix is the identity of Z^0."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LatticeError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise LatticeError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise LatticeError("column count needed for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise LatticeError(f"ragged matrix: expected {cols} columns, got {len(r)}")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls(m, n, (0,) * (m * n))

    @classmethod
    def diag(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise LatticeError(f"shape mismatch {self.shape} @ {other.shape}")
        a, b = self.to_rows(), other.to_rows()
        n, p = self.cols, other.cols
        out = []
        for row in a:
            for j in range(p):
                out.append(sum(row[k] * b[k][j] for k in range(n)))
        return IntMatrix(self.rows, p, tuple(out))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise LatticeError("vector length mismatch")
        c = self.cols
        return tuple(
            sum(self.entries[i * c + k] * v[k] for k in range(c)) for i in range(self.rows)
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise LatticeError("shape mismatch in addition")
        return IntMatrix(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise LatticeError("shape mismatch in subtraction")
        return IntMatrix(self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(c * x for x in self.entries))

    def __pow__(self, k: int) -> "IntMatrix":
        if not self.is_square:
            raise LatticeError("power of a non-square matrix")
        if k < 0:
            return unimodular_inverse(self) ** (-k)
        result, base = IntMatrix.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.to_rows()]

    @classmethod
    def from_json(cls, data, cols: int | None = None) -> "IntMatrix":
        return cls.from_rows([[_parse_int(x) for x in r] for r in data], cols=cols)

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix(0x{self.cols})"


def _parse_int(x) -> int:
    if isinstance(x, bool):
        raise LatticeError(f"boolean {x!r} is not an integer entry")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            raise LatticeError(f"matrix entry {x!r} is not a decimal integer") from None
    raise LatticeError(f"matrix entry {x!r} is not an integer")


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square:
        raise LatticeError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    a = m.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SnfResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def divisors(self) -> list[int]:
        """Diagonal of D (including trailing zeros up to min(rows, cols))."""
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """Unimodular U, V and diagonal D with U @ m @ V == D and d_1 | d_2 | ..."""
    rows, cols = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(rows).to_rows()
    v = IntMatrix.identity(cols).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for t in range(min(rows, cols)):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        while True:
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, pi, pj = min(rest)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
            pi, pj = t, t
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SnfResult(
        IntMatrix.from_rows(u, rows), IntMatrix.from_rows(a, cols), IntMatrix.from_rows(v, cols)
    )


def elementary_divisors(m: IntMatrix) -> list[int]:
    return smith_normal_form(m).divisors


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a matrix in GL_n(Z)."""
    if not m.is_square:
        raise LatticeError("inverse of a non-square matrix")
    n = m.rows
    if n == 0:
        return m
    snf = smith_normal_form(m)
    if any(d != 1 for d in snf.divisors):
        raise LatticeError(f"matrix is not invertible over Z: {m!r}")
    # U m V = I  =>  m^-1 = V U
    return snf.V @ snf.U


def right_inverse(m: IntMatrix) -> IntMatrix:
    """Integer S with m @ S = I, for m surjective onto Z^rows."""
    snf = smith_normal_form(m)
    divs = snf.divisors
    if len(divs) < m.rows or any(d != 1 for d in divs[: m.rows]):
        raise LatticeError("matrix is not surjective over Z")
    # U m V = [I | 0]  =>  m (V [I;0] U) = I
    embed = IntMatrix.from_rows(
        [[int(i == j) for j in range(m.rows)] for i in range(m.cols)], m.rows
    )
    return snf.V @ embed @ snf.U


def matrix_order(m: IntMatrix, cap: int = 1000) -> int:
    """Smallest k <= cap with m**k == I."""
    if not m.is_square:
        raise LatticeError("order of a non-square matrix")
    if abs(det(m)) != 1:
        raise LatticeError(f"matrix is not invertible over Z: {m!r}")
    ident = IntMatrix.identity(m.rows)
    p = m
    for k in range(1, cap + 1):
        if p == ident:
            return k
        p = p @ m
    raise LatticeError(f"matrix order exceeds cap {cap}; not of finite order?")


def reverse_charpoly(m: IntMatrix) -> RatPoly:
    """det(I - t*m), via Faddeev-LeVerrier on the characteristic polynomial."""
    if not m.is_square:
        raise LatticeError("characteristic polynomial of a non-square matrix")
    n = m.rows
    # c[k] is the coefficient of lambda^(n-k) in det(lambda I - m)
    c = [1] + [0] * n
    mk = IntMatrix.zeros(n, n)
    ident = IntMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(c[k - 1])
        tr = sum((m @ mk)[i, i] for i in range(n))
        q, r = divmod(-tr, k)
        assert r == 0
        c[k] = q
    # det(I - t m) = t^n det(t^-1 I - m) = sum_k c[k] t^k
    return RatPoly(c)


def is_unimodular(m: IntMatrix) -> bool:
    return m.is_square and abs(det(m)) == 1

