"""Finite field arithmetic over F_q (q = p^k) and dense linear algebra.

Elements are plain ints in ``range(q)``.  For k > 1 the base-p digits of an
element are the coefficients (lowest degree first) of its residue modulo the
field's defining polynomial, so ``0`` and ``1`` are always the additive and
multiplicative identities.

The defining polynomial for (p, k) is the monic primitive polynomial of degree
k whose coefficient vector (c_0, ..., c_{k-1}) has the smallest encoding
``sum(c_j * p**j)``.  The choice is fixed, so element labels are identical
across runs and machines.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Optional, Sequence

from .errors import FieldError

DEFAULT_CEILING = 1 << 16

# Elementwise tables are only materialized below this order.
_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _digits(v: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _power_cycle(p: int, k: int, low: Sequence[int]) -> Optional[list[int]]:
    """Powers x^0, x^1, ... modulo x^k + low(x), or None if x is not primitive."""
    q = p**k
    cur = [1] + [0] * (k - 1)
    seq = []
    for j in range(q - 1):
        v = _undigits(cur, p)
        if j > 0 and v == 1:
            return None
        seq.append(v)
        # multiply by x, then reduce x^k = -low(x)
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [(c - top * l) % p for c, l in zip(cur, low)]
    if _undigits(cur, p) != 1:
        return None
    return seq


@lru_cache(maxsize=None)
def primitive_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Coefficients (c_0, ..., c_{k-1}, 1) of the defining polynomial for F_{p^k}."""
    for code in range(1, p**k):
        low = _digits(code, p, k)
        if low[0] == 0:
            continue
        if _power_cycle(p, k, low) is not None:
            return tuple(low) + (1,)
    raise FieldError(f"no primitive polynomial of degree {k} over F_{p}")


class GF:
    """The finite field with ``q = p**k`` elements.

    >>> F = GF(5)
    >>> F.mul(2, 3), F.inv(2)
    (1, 3)
    """

    def __init__(self, p: int, k: int = 1, ceiling: int = DEFAULT_CEILING):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"characteristic must be prime, got {p!r}")
        if not isinstance(k, int) or k < 1:
            raise FieldError(f"extension degree must be >= 1, got {k!r}")
        if p**k > ceiling:
            raise FieldError(f"field order {p}^{k} exceeds ceiling {ceiling}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = primitive_polynomial(p, k) if k > 1 else (0, 1)
        q = self.q

        if k == 1:
            g = next(g for g in range(1, q) if _order_mod(g, p) == q - 1) if q > 2 else 1
            exp = [1]
            for _ in range(q - 2):
                exp.append(exp[-1] * g % p)
            self.generator = g
        else:
            exp = _power_cycle(p, k, self.modulus[:-1])
            self.generator = p  # the residue of x
        self._exp = exp + exp  # doubled so log sums never need a modulus
        self._log = [0] * q
        for j, v in enumerate(exp):
            self._log[v] = j

        self._neg = [self._neg_raw(a) for a in range(q)]
        self._inv = [0] + [exp[(q - 1 - self._log[a]) % (q - 1)] for a in range(1, q)]
        self._add_table = None
        self._mul_table = None
        if q <= _TABLE_LIMIT:
            self._add_table = [[self._add_raw(a, b) for b in range(q)] for a in range(q)]
            self._mul_table = [[self._mul_raw(a, b) for b in range(q)] for a in range(q)]

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((GF, self.p, self.k))

    def __reduce__(self):
        return (GF, (self.p, self.k, max(self.q, DEFAULT_CEILING)))

    @property
    def elements(self) -> range:
        return range(self.q)

    # raw arithmetic, used to fill tables and for large q

    def _add_raw(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        return _undigits([(x + y) % p for x, y in zip(_digits(a, p, self.k), _digits(b, p, self.k))], p)

    def _neg_raw(self, a: int) -> int:
        p = self.p
        if self.k == 1:
            return (-a) % p
        if p == 2:
            return a
        return _undigits([(-x) % p for x in _digits(a, p, self.k)], p)

    def _mul_raw(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    # public arithmetic

    def add(self, a: int, b: int) -> int:
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_raw(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    # vector helpers

    def vadd(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.add(a, b) for a, b in zip(u, v))

    def vsub(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.sub(a, b) for a, b in zip(u, v))

    def vscale(self, c: int, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.mul(c, a) for a in v)

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        acc = 0
        for a, b in zip(u, v):
            acc = self.add(acc, self.mul(a, b))
        return acc


def _order_mod(g: int, p: int) -> int:
    v, n = g % p, 1
    while v != 1:
        v = v * g % p
        n += 1
    return n


def field_new(p: int, k: int = 1, ceiling: int = DEFAULT_CEILING) -> GF:
    return GF(p, k, ceiling)


@lru_cache(maxsize=64)
def field_of_order(q: int) -> GF:
    """Field with q elements, q a prime power."""
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return GF(p, k)
    raise FieldError(f"{q} is not a prime power")


@dataclass(frozen=True)
class Matrix:
    field: GF
    entries: tuple[tuple[int, ...], ...]
    ncols: int = dc_field(default=-1)

    def __post_init__(self):
        entries = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.ncols < 0:
            object.__setattr__(self, "ncols", len(entries[0]) if entries else 0)
        if any(len(r) != self.ncols for r in entries):
            raise ValueError("ragged matrix")
        if any(not 0 <= x < self.field.q for r in entries for x in r):
            raise ValueError("entry outside the field")

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.entries)) if self.entries else (), self.nrows)

    def rank(self) -> int:
        return rank_and_solve(self).rank

    @classmethod
    def identity(cls, field: GF, n: int) -> "Matrix":
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, field: GF, rows: int, cols: int) -> "Matrix":
        return cls(field, tuple((0,) * cols for _ in range(rows)), cols)


@dataclass(frozen=True)
class Reduction:
    """Result of :func:`rank_and_solve`.

    ``solution`` is None when no right-hand side was given or the system is
    inconsistent; ``consistent`` tells the two apart.
    """

    rank: int
    rref: Matrix
    pivots: tuple[int, ...]
    solution: Optional[tuple[int, ...]] = None
    consistent: bool = True


def row_reduce(field: GF, rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = field.inv(work[r][c])
        work[r] = [field.mul(inv, x) for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank_and_solve(m: Matrix, rhs: Optional[Sequence[int]] = None) -> Reduction:
    """Row-reduce ``m``; if ``rhs`` is given, also solve ``m @ x = rhs``."""
    F = m.field
    if rhs is None:
        rows, pivots = row_reduce(F, m.entries, m.ncols)
        return Reduction(len(rows), Matrix(F, rows, m.ncols), tuple(pivots))
    if len(rhs) != m.nrows:
        raise ValueError(f"rhs has length {len(rhs)}, matrix has {m.nrows} rows")
    aug = [list(r) + [b] for r, b in zip(m.entries, rhs)]
    rows, pivots = row_reduce(F, aug, m.ncols + 1)
    if pivots and pivots[-1] == m.ncols:
        rows, pivots = rows[:-1], pivots[:-1]
        sol, ok = None, False
    else:
        x = [0] * m.ncols
        for row, c in zip(rows, pivots):
            x[c] = row[-1]
        sol, ok = tuple(x), True
    rref = Matrix(F, [r[:-1] for r in rows], m.ncols)
    return Reduction(len(pivots), rref, tuple(pivots), sol, ok)


def rank(field: GF, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> int:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return len(row_reduce(field, rows, ncols)[1])
