"""Exact ground fields and dense linear algebra over them.

Matrices are plain lists of rows.  Entries are ``fractions.Fraction`` over
the rationals and reduced ``int`` residues over a prime field.  Every routine
takes the field explicitly so the same code path serves both kinds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list  # list[list[element]]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class GroundField:
    """Either the rationals (``p == 0``) or the prime field with ``p`` elements."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")

    @classmethod
    def rationals(cls) -> "GroundField":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "GroundField":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    # scalar arithmetic -------------------------------------------------
    def __call__(self, x):
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else (a * b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p == 0 else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self):
        """Iterate the elements of a prime field (undefined for Q)."""
        if self.p == 0:
            raise ValueError("Q is infinite")
        return range(self.p)

    def fmt(self, a) -> str:
        return str(a)


QQ = GroundField(0)


# matrix constructors ---------------------------------------------------------

def zeros(K: GroundField, rows: int, cols: int) -> Matrix:
    return [[K.zero] * cols for _ in range(rows)]


def identity(K: GroundField, n: int) -> Matrix:
    m = zeros(K, n, n)
    for i in range(n):
        m[i][i] = K.one
    return m


def coerce(K: GroundField, rows: Iterable[Iterable]) -> Matrix:
    return [[K(x) for x in row] for row in rows]


def shape(m: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not m:
        return 0, (cols or 0)
    return len(m), len(m[0])


# arithmetic ------------------------------------------------------------------

def matmul(K: GroundField, a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product ``a @ b``.  ``cols`` fixes the width when ``a`` has no rows or ``b`` is empty."""
    n = len(a)
    k = len(b)
    m = len(b[0]) if b else (cols or 0)
    if a and len(a[0]) != k:
        raise ValueError(f"shape mismatch {len(a)}x{len(a[0])} @ {k}x{m}")
    out = []
    p = K.p
    for i in range(n):
        row = a[i]
        acc = [0] * m
        for t in range(k):
            x = row[t]
            if x:
                bt = b[t]
                for j in range(m):
                    y = bt[j]
                    if y:
                        acc[j] += x * y
        if p:
            acc = [v % p for v in acc]
        else:
            acc = [Fraction(v) for v in acc]
        out.append(acc)
    return out


def madd(K: GroundField, a: Matrix, b: Matrix) -> Matrix:
    return [[K.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(K: GroundField, c, a: Matrix) -> Matrix:
    return [[K.mul(c, x) for x in row] for row in a]


def transpose(a: Matrix, rows_if_empty: int = 0) -> Matrix:
    if not a:
        return [[] for _ in range(rows_if_empty)]
    return [list(col) for col in zip(*a)]


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def hstack(blocks: Sequence[Matrix], rows: int) -> Matrix:
    return [sum((list(b[i]) for b in blocks), []) for i in range(rows)]


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    return [list(r) for b in blocks for r in b]


# elimination -----------------------------------------------------------------

def rref(K: GroundField, a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    m = [list(r) for r in a]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = K.inv(m[r][c])
        m[r] = [K.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [K.sub(x, K.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(K: GroundField, a: Matrix) -> int:
    return len(rref(K, a)[1])


def nullspace(K: GroundField, a: Matrix, ncols: int | None = None) -> Matrix:
    """Basis (as rows) of ``{v : a v = 0}``, one vector per free column."""
    n = len(a[0]) if a else (ncols or 0)
    r, piv = rref(K, a)
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [K.zero] * n
        v[f] = K.one
        for row, pc in zip(r, piv):
            v[pc] = K.neg(row[f])
        basis.append(v)
    return basis


def left_nullspace(K: GroundField, a: Matrix, nrows: int) -> Matrix:
    """Rows ``y`` with ``y a = 0``."""
    if nrows == 0:
        return []
    return nullspace(K, transpose(a, nrows), ncols=nrows) if a and a[0] else identity(K, nrows)


def inverse(K: GroundField, a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + identity(K, n)[i] for i in range(n)]
    r, piv = rref(K, aug)
    if piv[:n] != list(range(n)) or len(r) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def solve(K: GroundField, a: Matrix, b: Sequence, ncols: int | None = None):
    """One solution ``x`` of ``a x = b`` (free variables set to zero) or ``None``."""
    n = len(a[0]) if a else (ncols or 0)
    if not a:
        return [K.zero] * n if all(x == 0 for x in b) else None
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, piv = rref(K, aug)
    if n in piv:
        return None
    x = [K.zero] * n
    for row, pc in zip(r, piv):
        x[pc] = row[n]
    return x


# subspaces -------------------------------------------------------------------

class Subspace:
    """A subspace of ``K^n`` stored as a reduced echelon basis.

    Two subspaces are equal iff their echelon bases are equal, which makes
    comparisons exact and cheap.
    """

    __slots__ = ("K", "n", "basis", "pivots")

    def __init__(self, K: GroundField, n: int, vectors: Iterable[Sequence] = ()):
        self.K = K
        self.n = n
        vecs = [list(v) for v in vectors]
        self.basis, self.pivots = rref(K, vecs) if vecs else ([], [])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence) -> list:
        """Normal form of ``v`` modulo the subspace (pivot entries cleared)."""
        K = self.K
        w = list(v)
        for row, pc in zip(self.basis, self.pivots):
            c = w[pc]
            if c != 0:
                w = [K.sub(x, K.mul(c, y)) for x, y in zip(w, row)]
        return w

    def contains(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.K, self.n, self.basis + other.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.n == other.n
            and self.pivots == other.pivots
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.n, tuple(map(tuple, self.basis))))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, n={self.n})"

    def complement_in(self, bigger: "Subspace") -> list:
        """Vectors of ``bigger`` whose classes form a basis of ``bigger / self``."""
        acc = Subspace(self.K, self.n, self.basis)
        out = []
        for v in bigger.basis:
            if not acc.contains(v):
                out.append(v)
                acc = Subspace(self.K, self.n, acc.basis + [v])
        return out
