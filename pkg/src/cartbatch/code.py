"""Affine Cartesian codes C_X(rho): evaluation of bounded-degree polynomials on X.

X = A_1 x ... x A_mu is enumerated in lexicographic order of subset positions,
so codeword coordinate j always refers to ``domain.points[j]``.  Coordinates are
numbered 1..mu wherever they double as recovery directions (direction 0 is
direct access); tuple indexing stays 0-based.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError
from .gf import GF, Matrix, rank_and_solve

Point = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class EvaluationDomain:
    field: GF
    subsets: tuple[tuple[int, ...], ...]
    points: tuple[Point, ...] = field(repr=False)
    point_index: Mapping[Point, int] = field(repr=False)

    @property
    def mu(self) -> int:
        return len(self.subsets)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.subsets)

    @property
    def is_full(self) -> bool:
        """True when X is the whole ambient space F_q^mu."""
        return all(len(a) == self.field.q for a in self.subsets)

    def __eq__(self, other) -> bool:
        return isinstance(other, EvaluationDomain) and (self.field, self.subsets) == (other.field, other.subsets)

    def __hash__(self) -> int:
        return hash((self.field, self.subsets))

    def __contains__(self, p) -> bool:
        return tuple(p) in self.point_index

    def index(self, p: Sequence[int]) -> int:
        try:
            return self.point_index[tuple(p)]
        except KeyError:
            raise DomainError(f"point {tuple(p)} is not in X") from None

    def line(self, p: Point, i: int) -> tuple[Point, ...]:
        """Points of X agreeing with p off coordinate i (1-based), p excluded."""
        j = i - 1
        return tuple(p[:j] + (a,) + p[j + 1:] for a in self.subsets[j] if a != p[j])


def build_domain(field: GF, subsets: Iterable[Iterable[int]]) -> EvaluationDomain:
    subs = tuple(tuple(a) for a in subsets)
    if not subs:
        raise DomainError("need at least one coordinate (mu >= 1)")
    for i, a in enumerate(subs, 1):
        if not a:
            raise DomainError(f"A_{i} is empty")
        if len(set(a)) != len(a):
            raise DomainError(f"A_{i} has duplicate elements: {list(a)}")
        bad = [x for x in a if not (isinstance(x, int) and 0 <= x < field.q)]
        if bad:
            raise DomainError(f"A_{i} has elements outside F_{field.q}: {bad}")
    points = tuple(itertools.product(*subs))
    return EvaluationDomain(field, subs, points, {p: j for j, p in enumerate(points)})


def full_space(field: GF, mu: int) -> EvaluationDomain:
    return build_domain(field, [tuple(field.elements)] * mu)


class Polynomial:
    """Multivariate polynomial over F_q, stored as {exponent vector: coefficient}."""

    def __init__(self, field: GF, mu: int, terms: Optional[Mapping[Sequence[int], int]] = None):
        self.field = field
        self.mu = mu
        clean: dict[tuple[int, ...], int] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != mu or any(x < 0 for x in e):
                raise DomainError(f"bad exponent vector {e} for mu={mu}")
            if field.k == 1:
                c %= field.p
            elif not 0 <= c < field.q:
                raise DomainError(f"coefficient {c} is not an element of F_{field.q}")
            c = field.add(clean.get(e, 0), c)
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        self.terms = clean

    @classmethod
    def monomial(cls, field: GF, exponents: Sequence[int], coeff: int = 1) -> "Polynomial":
        return cls(field, len(exponents), {tuple(exponents): coeff})

    @classmethod
    def variable(cls, field: GF, mu: int, i: int) -> "Polynomial":
        """The coordinate function x_i (1-based)."""
        return cls.monomial(field, tuple(int(j == i - 1) for j in range(mu)))

    @classmethod
    def random(cls, field: GF, mu: int, degree: int, rng: random.Random) -> "Polynomial":
        return cls(field, mu, {e: rng.randrange(field.q) for e in monomials_up_to(mu, degree)})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __call__(self, point: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = F.mul(term, F.pow(x, k))
            acc = F.add(acc, term)
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = self.field.add(out.get(e, 0), c)
        return Polynomial(self.field, self.mu, out)

    def scale(self, c: int) -> "Polynomial":
        return Polynomial(self.field, self.mu, {e: self.field.mul(c, v) for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms and self.mu == other.mu

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


def monomials_up_to(mu: int, degree: int, caps: Optional[Sequence[int]] = None) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= degree, graded then lexicographic.

    ``caps[i]`` bounds the exponent of x_{i+1} (inclusive) when given.
    """
    caps = caps or [degree] * mu
    out = [e for e in itertools.product(*(range(min(c, degree) + 1) for c in caps)) if sum(e) <= degree]
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


@dataclass(frozen=True, eq=False)
class CartesianCode:
    domain: EvaluationDomain
    rho: int
    basis: tuple[tuple[int, ...], ...]
    generator: Matrix = field(repr=False)
    dimension: int

    @property
    def field(self) -> GF:
        return self.domain.field

    @property
    def n(self) -> int:
        return self.domain.n


def build_code(domain: EvaluationDomain, rho: int) -> CartesianCode:
    """C_X(rho) with the reduced monomial basis (each exponent below |A_i|)."""
    if not isinstance(rho, int) or rho < 0:
        raise DomainError(f"rho must be a non-negative integer, got {rho!r}")
    basis = tuple(monomials_up_to(domain.mu, rho, [s - 1 for s in domain.sizes]))
    rows = [[Polynomial.monomial(domain.field, e)(p) for p in domain.points] for e in basis]
    gen = Matrix(domain.field, rows, domain.n)
    return CartesianCode(domain, rho, basis, gen, rank_and_solve(gen).rank)


def encode(code: CartesianCode, f: Polynomial) -> tuple[int, ...]:
    if f.mu != code.domain.mu:
        raise DomainError(f"polynomial has {f.mu} variables, code has {code.domain.mu}")
    if f.degree > code.rho:
        raise DomainError(f"deg f = {f.degree} exceeds rho = {code.rho}")
    return tuple(f(p) for p in code.domain.points)


def encode_message(code: CartesianCode, message: Sequence[int]) -> tuple[int, ...]:
    """Codeword ``message @ generator``."""
    F = code.field
    if len(message) != len(code.basis):
        raise DomainError(f"message length {len(message)} != {len(code.basis)}")
    cols = zip(*code.generator.entries)
    return tuple(F.dot(message, col) for col in cols)


def nu(code: CartesianCode) -> tuple[int, tuple[int, ...]]:
    """Number and list of coordinates i (1-based) with rho + 1 < |A_i|."""
    good = tuple(i for i, s in enumerate(code.domain.sizes, 1) if code.rho + 1 < s)
    return len(good), good
