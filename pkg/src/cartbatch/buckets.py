"""Quotient-space bucket configurations: buckets are cosets p + V restricted to X."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, TextIO

from .code import EvaluationDomain, Point
from .errors import DomainError
from .gf import GF, rank, row_reduce


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^mu held by its reduced row echelon basis."""

    field: GF
    mu: int
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, field: GF, rows: Iterable[Sequence[int]], mu: Optional[int] = None) -> "Subspace":
        rows = [tuple(r) for r in rows]
        if mu is None:
            if not rows:
                raise DomainError("cannot infer ambient dimension from an empty basis")
            mu = len(rows[0])
        for r in rows:
            if len(r) != mu:
                raise DomainError(f"basis vector {r} has length {len(r)}, expected {mu}")
            if any(not 0 <= x < field.q for x in r):
                raise DomainError(f"basis vector {r} has entries outside F_{field.q}")
        red, piv = row_reduce(field, rows, mu)
        return cls(field, mu, tuple(tuple(r) for r in red), tuple(piv))

    @classmethod
    def diagonal(cls, field: GF, mu: int) -> "Subspace":
        return cls.span(field, [(1,) * mu])

    @classmethod
    def zero(cls, field: GF, mu: int) -> "Subspace":
        return cls.span(field, [], mu)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_diagonal(self) -> bool:
        return self.basis == ((1,) * self.mu,)

    def coset_key(self, p: Sequence[int]) -> Point:
        """Representative of p + V with zeros in the pivot coordinates."""
        F = self.field
        v = list(p)
        for row, c in zip(self.basis, self.pivots):
            a = v[c]
            if a:
                v = [F.sub(x, F.mul(a, y)) for x, y in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return not any(self.coset_key(v))

    def project(self, coords: Sequence[int]) -> "Subspace":
        """Image of V under keeping only ``coords`` (0-based), in that order."""
        return Subspace.span(self.field, [tuple(r[c] for c in coords) for r in self.basis], len(coords))


def subspace_condition(V: Subspace) -> bool:
    """V meets every coordinate plane <e_i, e_j> only in 0."""
    F, mu = V.field, V.mu
    if mu < 2:
        raise DomainError("the coordinate-plane condition needs mu >= 2")
    rows = list(V.basis)
    for i in range(mu):
        for j in range(i + 1, mu):
            ei = tuple(int(c == i) for c in range(mu))
            ej = tuple(int(c == j) for c in range(mu))
            if rank(F, rows + [ei, ej], mu) != V.dim + 2:
                return False
    return True


def bucket_id(V: Subspace, p: Sequence[int]) -> Point:
    return V.coset_key(p)


@dataclass(frozen=True, eq=False)
class BucketConfig:
    """A partition of the coordinates of C_X into buckets.

    Buckets are numbered 0..m-1.  For a quotient configuration, bucket b is
    the coset with the b-th smallest canonical key.  After a tau-fold
    merge, ``parent`` is the unmerged configuration and ``keys[b]`` lists the
    coset keys that were merged into b.
    """

    domain: EvaluationDomain
    subspace: Subspace
    bucket_of_point: tuple[int, ...] = field(repr=False)
    buckets: tuple[tuple[int, ...], ...] = field(repr=False)
    keys: tuple = field(repr=False)
    tau: int = 1
    parent: Optional["BucketConfig"] = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return len(self.buckets)

    @property
    def root(self) -> "BucketConfig":
        c = self
        while c.parent is not None:
            c = c.parent
        return c

    def bucket_of(self, p: Sequence[int]) -> int:
        return self.bucket_of_point[self.domain.index(p)]


def build_bucket_config(domain: EvaluationDomain, V: Subspace) -> BucketConfig:
    if V.mu != domain.mu:
        raise DomainError(f"subspace lives in F_q^{V.mu}, domain has mu = {domain.mu}")
    if V.field != domain.field:
        raise DomainError("subspace and domain are over different fields")
    point_keys = [V.coset_key(p) for p in domain.points]
    keys = sorted(set(point_keys))
    number = {k: b for b, k in enumerate(keys)}
    of_point = tuple(number[k] for k in point_keys)
    members: list[list[int]] = [[] for _ in keys]
    for j, b in enumerate(of_point):
        members[b].append(j)
    return BucketConfig(domain, V, of_point, tuple(tuple(b) for b in members), tuple(keys))


def bucket_image(config: BucketConfig, points: Iterable[Sequence[int]]) -> frozenset[int]:
    return frozenset(config.bucket_of(p) for p in points)


def merge_buckets(config: BucketConfig, tau: int) -> BucketConfig:
    """Group consecutive buckets ``tau`` at a time: ceil(m / tau) buckets, load tau."""
    if not isinstance(tau, int) or tau < 1:
        raise DomainError(f"tau must be a positive integer, got {tau!r}")
    if config.tau != 1:
        raise DomainError("merging applies to a tau = 1 configuration")
    if tau == 1:
        return config
    of_point = tuple(b // tau for b in config.bucket_of_point)
    groups = [config.buckets[s:s + tau] for s in range(0, config.m, tau)]
    buckets = tuple(tuple(sorted(j for b in g for j in b)) for g in groups)
    keys = tuple(tuple(config.keys[s:s + tau]) for s in range(0, config.m, tau))
    return BucketConfig(config.domain, config.subspace, of_point, buckets, keys, tau, config)


def export_csv(config: BucketConfig, fh: TextIO) -> None:
    """Write ``index, x1..x_mu, bucket`` rows for every point of X."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["index"] + [f"x{i}" for i in range(1, config.domain.mu + 1)] + ["bucket"])
    for j, p in enumerate(config.domain.points):
        w.writerow([j, *p, config.bucket_of_point[j]])
