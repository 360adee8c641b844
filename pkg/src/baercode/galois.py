"""Exact arithmetic over prime fields GF(p) plus the dense-matrix kit.

Field elements are plain Python ints in [0, p); matrices are small row-major
grids bound to a Field.  Python integers never overflow, so 64-bit residues
multiply exactly (effectively 128-bit products) before reduction.  Field and
Mat are immutable after construction and safe to share; all operations are
pure functions of their inputs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import (
    DimensionMismatchError,
    DuplicatePointError,
    NoPrimitiveElementError,
    NotPrimeError,
    SingularMatrixError,
    ZeroPointError,
    ZeroToNegativePowerError,
)

# Deterministic Miller-Rabin witness set, valid for every n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


class Field:
    """GF(p) for a prime p >= 3, with its canonical generator.

    The generator g is the smallest integer of multiplicative order p-1,
    so everything derived from the field (evaluation points, repair
    matrices) is reproducible byte for byte.
    """

    __slots__ = ("p", "g")

    def __init__(self, p: int):
        if not isinstance(p, int) or isinstance(p, bool) or p < 3 or not is_prime(p):
            raise NotPrimeError(f"modulus must be a prime >= 3, got {p!r}")
        self.p = p
        self.g = self._find_generator()

    def _find_generator(self) -> int:
        p = self.p
        factors = _prime_factors(p - 1)
        for cand in range(2, p):
            if all(pow(cand, (p - 1) // q, p) != 1 for q in factors):
                return cand
        raise NoPrimitiveElementError(f"no generator mod {p}")  # unreachable for prime p

    # -- scalar ops --------------------------------------------------

    def elem(self, x: int) -> int:
        return x % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroToNegativePowerError("zero has no multiplicative inverse")
        return pow(a, -1, self.p)

    def pow(self, e: int, k: int) -> int:
        """e**k with negative k meaning powers of the inverse; pow(e, 0) == 1."""
        e %= self.p
        if e == 0:
            if k < 0:
                raise ZeroToNegativePowerError("zero to a negative power")
            return 0 if k > 0 else 1
        return pow(e, k, self.p)

    def point(self, node: int) -> int:
        """Evaluation point g**node for a node index (1-based)."""
        return pow(self.g, node, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    def __repr__(self) -> str:
        return f"Field(p={self.p}, g={self.g})"


def field_new(p: int) -> Field:
    """Build GF(p); rejects non-primes and p < 3."""
    return Field(p)


class Mat:
    """Dense row-major matrix over a Field.  Treat instances as immutable."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: Iterable[Iterable[int]], *, cols: int | None = None):
        p = field.p
        data = [[v % p for v in row] for row in rows]
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise DimensionMismatchError("ragged rows")
        else:
            width = 0
        if cols is not None:
            if data and width != cols:
                raise DimensionMismatchError(f"expected {cols} columns, got {width}")
            width = cols
        self.field = field
        self.rows = len(data)
        self.cols = width
        self.data = data

    # -- constructors ------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        return cls(field, [[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def vandermonde(cls, field: Field, points: Sequence[int], cols: int) -> "Mat":
        """Row i = [points[i]^0, ..., points[i]^(cols-1)].  Points must be distinct and nonzero."""
        pts = [x % field.p for x in points]
        if any(x == 0 for x in pts):
            raise ZeroPointError("vandermonde points must be nonzero")
        if len(set(pts)) != len(pts):
            raise DuplicatePointError(f"duplicate vandermonde points in {pts}")
        p = field.p
        rows = []
        for x in pts:
            row, acc = [], 1
            for _ in range(cols):
                row.append(acc)
                acc = acc * x % p
            rows.append(row)
        return cls(field, rows, cols=cols)

    # -- access ------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.data[r][c]

    def row(self, r: int) -> tuple[int, ...]:
        return tuple(self.data[r])

    def col(self, c: int) -> tuple[int, ...]:
        return tuple(row[c] for row in self.data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mat)
            and other.field == self.field
            and other.data == self.data
        )

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self.data)))

    def __repr__(self) -> str:
        return f"Mat({self.rows}x{self.cols} over GF({self.field.p}))"

    # -- algebra -----------------------------------------------------

    def __matmul__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        if self.field != other.field:
            raise DimensionMismatchError("fields differ")
        if self.cols != other.rows:
            raise DimensionMismatchError(f"{self.shape} @ {other.shape}")
        p = self.field.p
        bt = [other.col(j) for j in range(other.cols)]
        out = [
            [sum(a * b for a, b in zip(arow, bcol)) % p for bcol in bt]
            for arow in self.data
        ]
        return Mat(self.field, out, cols=other.cols)

    def transpose(self) -> "Mat":
        return Mat(self.field, [self.col(j) for j in range(self.cols)], cols=self.rows)

    def left_mul(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Row vector times matrix: vec @ self."""
        if len(vec) != self.rows:
            raise DimensionMismatchError(f"vector of {len(vec)} vs {self.shape}")
        p = self.field.p
        return tuple(
            sum(v * row[j] for v, row in zip(vec, self.data)) % p
            for j in range(self.cols)
        )

    def right_mul(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector: self @ vec."""
        if len(vec) != self.cols:
            raise DimensionMismatchError(f"{self.shape} vs vector of {len(vec)}")
        p = self.field.p
        return tuple(sum(a * v for a, v in zip(row, vec)) % p for row in self.data)

    def inv(self) -> "Mat":
        """Gauss-Jordan inverse with first-nonzero pivoting (positional tie-break)."""
        if self.rows != self.cols:
            raise DimensionMismatchError("inverse of a non-square matrix")
        n = self.rows
        p = self.field.p
        aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(self.data)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise SingularMatrixError(f"singular {n}x{n} matrix over GF({p})")
            if piv != col:
                aug[col], aug[piv] = aug[piv], aug[col]
            inv_piv = pow(aug[col][col], -1, p)
            aug[col] = [v * inv_piv % p for v in aug[col]]
            prow = aug[col]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [(v - f * w) % p for v, w in zip(aug[r], prow)]
        return Mat(self.field, [row[n:] for row in aug], cols=n)

    def rank(self) -> int:
        p = self.field.p
        m = [list(row) for row in self.data]
        rank = 0
        for col in range(self.cols):
            piv = next((r for r in range(rank, self.rows) if m[r][col] != 0), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            inv_piv = pow(m[rank][col], -1, p)
            m[rank] = [v * inv_piv % p for v in m[rank]]
            prow = m[rank]
            for r in range(self.rows):
                if r != rank and m[r][col]:
                    f = m[r][col]
                    m[r] = [(v - f * w) % p for v, w in zip(m[r], prow)]
            rank += 1
            if rank == self.rows:
                break
        return rank

    def solve_right(self, y: Sequence[int]) -> tuple[int, ...]:
        """Solve x @ self == y for the row vector x (self square, non-singular)."""
        if self.rows != self.cols:
            raise DimensionMismatchError("solve_right needs a square matrix")
        if len(y) != self.cols:
            raise DimensionMismatchError(f"rhs of {len(y)} vs {self.shape}")
        # x A = y  <=>  A^T x^T = y^T
        n = self.rows
        p = self.field.p
        aug = [[self.data[r][c] for r in range(n)] + [y[c] % p] for c in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise SingularMatrixError(f"singular {n}x{n} system over GF({p})")
            if piv != col:
                aug[col], aug[piv] = aug[piv], aug[col]
            inv_piv = pow(aug[col][col], -1, p)
            aug[col] = [v * inv_piv % p for v in aug[col]]
            prow = aug[col]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [(v - f * w) % p for v, w in zip(aug[r], prow)]
        return tuple(aug[r][n] for r in range(n))


# Functional aliases matching the operation-style surface.

def vandermonde(field: Field, points: Sequence[int], cols: int) -> Mat:
    return Mat.vandermonde(field, points, cols)


def mat_mul(a: Mat, b: Mat) -> Mat:
    return a @ b


def mat_inv(a: Mat) -> Mat:
    return a.inv()


def rank(a: Mat) -> int:
    return a.rank()


def solve_right(y: Sequence[int], a: Mat) -> tuple[int, ...]:
    return a.solve_right(y)
