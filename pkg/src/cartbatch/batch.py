"""Constructive query recovery for quotient-space bucket configurations (tau = 1).

The solver works on the diagonal subspace V = <(1, ..., 1)>:

* mu = 3 is settled by a case analysis on how the four query points fall
  into buckets;
* a query of mu + 1 points in F_q^mu is lifted from the solution for its
  first mu points with the last coordinate dropped;
* a general X = A_1 x ... x A_mu keeps only the coordinates with
  rho + 1 < |A_i|, solves there, and restricts the lines back to X.

Everything the solver emits is re-checked against the bucket partition before
it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .buckets import BucketConfig, Subspace, build_bucket_config, subspace_condition
from .code import CartesianCode, EvaluationDomain, Point, nu
from .errors import (
    ConstructionError,
    DomainError,
    InsufficientDirections,
    InvalidConfiguration,
    UnsupportedParameters,
)
from .gf import GF
from .recovery import RecoverySet, recovery_set

Query = Sequence[Sequence[int]]


@dataclass(frozen=True)
class QueryRecoverySet:
    """One recovery set per query position, in query order."""

    sets: tuple[RecoverySet, ...]

    @property
    def query(self) -> tuple[Point, ...]:
        return tuple(r.anchor for r in self.sets)

    @property
    def directions(self) -> tuple[int, ...]:
        return tuple(r.direction for r in self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    @classmethod
    def from_directions(cls, domain: EvaluationDomain, query: Query, directions: Sequence[int]) -> "QueryRecoverySet":
        if len(query) != len(directions):
            raise DomainError(f"{len(query)} query points but {len(directions)} directions")
        return cls(tuple(recovery_set(domain, p, i) for p, i in zip(query, directions)))


# -- full-space helpers (points of F_q^mu as tuples) --


def _line(F: GF, p: Point, i: int) -> list[Point]:
    if i == 0:
        return [p]
    j = i - 1
    return [p[:j] + (a,) + p[j + 1:] for a in range(F.q) if a != p[j]]


def _line_keys(V: Subspace, p: Point, i: int) -> set[Point]:
    return {V.coset_key(z) for z in _line(V.field, p, i)}


def _one_per_bucket(keys: Sequence, members: Sequence) -> bool:
    # tau = 1: all members distinct and no two in one bucket
    return len(set(keys)) == len(members)


def _valid_in_space(V: Subspace, query: Sequence[Point], directions: Sequence[int]) -> bool:
    members = [z for p, i in zip(query, directions) for z in _line(V.field, p, i)]
    return _one_per_bucket([V.coset_key(z) for z in members], members)


def full_star(domain: EvaluationDomain, p: Sequence[int]) -> tuple[list[RecoverySet], frozenset[Point]]:
    """All recovery sets R_{p,0..mu} of p and their union E_p."""
    sets = [recovery_set(domain, p, i) for i in range(domain.mu + 1)]
    return sets, frozenset(z for r in sets for z in r.members)


def normalize_query(V: Subspace, query: Query) -> list[Point]:
    """Replace every point by the first query point in the same coset."""
    first: dict[Point, Point] = {}
    out = []
    for p in query:
        p = tuple(p)
        out.append(first.setdefault(V.coset_key(p), p))
    return out


def _pad(query: Query, t: int) -> list[Point]:
    q = [tuple(p) for p in query]
    if not q:
        raise DomainError("empty query")
    if len(q) > t:
        raise DomainError(f"query has {len(q)} points, at most t = {t} are supported")
    return q + [q[-1]] * (t - len(q))


def _base_directions(V: Subspace, query: Sequence[Point]) -> list[int]:
    """Directions for four points of F_q^3 under V = <(1,1,1)>."""
    reps = normalize_query(V, query)
    groups: dict[Point, list[int]] = {}
    for s, a in enumerate(reps):
        groups.setdefault(a, []).append(s)
    dirs = [0] * 4
    shape = sorted((len(g) for g in groups.values()), reverse=True)
    by_size = sorted(groups.items(), key=lambda kv: -len(kv[1]))  # stable: ties keep query order

    if shape == [1, 1, 1, 1]:
        return dirs
    if shape == [4]:
        return [0, 1, 2, 3]

    (a, pos_a), rest = by_size[0], by_size[1:]
    others = [V.coset_key(b) for b, _ in rest]
    if shape == [3, 1]:
        hit = [i for i in (1, 2, 3) if others[0] in _line_keys(V, a, i)]
        if len(hit) > 1:
            raise ConstructionError(f"bucket of {rest[0][0]} meets several lines through {a}")
        free = [j for j in (1, 2, 3) if j not in hit]
        for s, d in zip(pos_a, [0] + free[:2]):
            dirs[s] = d
    elif shape == [2, 1, 1]:
        free = [j for j in (1, 2, 3) if not _line_keys(V, a, j) & set(others)]
        if not free:
            raise ConstructionError(f"no free direction for {a} against {others}")
        dirs[pos_a[1]] = free[0]
    else:  # [2, 2]
        b, pos_b = rest[0]
        j = next(j for j in (1, 2, 3) if others[0] not in _line_keys(V, a, j))
        dirs[pos_a[1]] = j
        dirs[pos_b[1]] = j
    return dirs


def _lift_direction(V: Subspace, query: Sequence[Point], lower: Sequence[int]) -> int:
    mu = V.mu
    target = V.coset_key(query[mu])
    for p, i in zip(query[:mu], lower):
        for z in _line(V.field, p, i):
            if V.coset_key(z) == target:
                return mu
    return 0


def _diagonal_directions(V: Subspace, query: Sequence[Point]) -> list[int]:
    mu = V.mu
    if mu == 3:
        return _base_directions(V, query)
    lower_V = V.project(range(mu - 1))
    lower = _diagonal_directions(lower_V, [p[:-1] for p in query[:mu]])
    return lower + [_lift_direction(V, query, lower)]


def _check_diagonal_full(config: BucketConfig, mu: Optional[int] = None) -> None:
    dom, V = config.domain, config.subspace
    if not dom.is_full:
        raise UnsupportedParameters("this construction needs X = F_q^mu")
    if not V.is_diagonal:
        raise UnsupportedParameters("this construction needs V = <(1, ..., 1)>")
    if dom.field.q < 3:
        raise UnsupportedParameters(f"needs q >= 3, got q = {dom.field.q}")
    if mu is not None and dom.mu != mu:
        raise UnsupportedParameters(f"needs mu = {mu}, got mu = {dom.mu}")
    if dom.mu < 3:
        raise UnsupportedParameters(f"needs mu >= 3, got mu = {dom.mu}")


def _emit(config: BucketConfig, query: Sequence[Point], dirs: Sequence[int], n_out: int) -> QueryRecoverySet:
    qrs = QueryRecoverySet.from_directions(config.domain, query, dirs)
    members = [z for r in qrs.sets for z in r.members]
    if not _one_per_bucket([config.bucket_of(z) for z in members], members):
        raise ConstructionError(f"construction produced an invalid set for query {list(query)}: {list(dirs)}")
    return QueryRecoverySet(qrs.sets[:n_out])


def satisfy_same_point(config: BucketConfig, p: Sequence[int], t_count: int) -> QueryRecoverySet:
    """R_{p,0}, ..., R_{p,t_count-1} for the query (p, ..., p)."""
    mu = config.domain.mu
    if not 1 <= t_count <= mu + 1:
        raise DomainError(f"t_count must be in 1..{mu + 1}, got {t_count}")
    if not subspace_condition(config.subspace):
        raise InvalidConfiguration("invalid configuration: V meets a coordinate plane")
    p = tuple(p)
    return _emit(config, [p] * t_count, list(range(t_count)), t_count)


def satisfy_diagonal_mu3(config: BucketConfig, query: Query) -> QueryRecoverySet:
    _check_diagonal_full(config, mu=3)
    q = _pad(query, 4)
    return _emit(config, q, _base_directions(config.subspace, q), len(query))


def lift_recovery(config: BucketConfig, query: Query, lower_qrs: QueryRecoverySet) -> QueryRecoverySet:
    """Extend a solution for the first mu points (last coordinate dropped) to mu + 1 points."""
    dom, V = config.domain, config.subspace
    mu = dom.mu
    if not dom.is_full:
        raise UnsupportedParameters("lifting needs X = F_q^mu")
    q = [tuple(p) for p in query]
    if len(q) != mu + 1:
        raise DomainError(f"lifting needs exactly {mu + 1} query points, got {len(q)}")
    if not subspace_condition(V):
        raise InvalidConfiguration("invalid configuration: V meets a coordinate plane")
    lower_V = V.project(range(mu - 1))
    if tuple(lower_qrs.query) != tuple(p[:-1] for p in q[:mu]):
        raise DomainError("lower solution does not answer the punctured query")
    lower = list(lower_qrs.directions)
    if any(not 0 <= i < mu for i in lower) or not _valid_in_space(lower_V, lower_qrs.query, lower):
        raise DomainError("lower solution is not a valid query recovery set")
    return _emit(config, q, lower + [_lift_direction(V, q, lower)], mu + 1)


def satisfy_query_reed_muller(config: BucketConfig, query: Query, rho: Optional[int] = None) -> QueryRecoverySet:
    _check_diagonal_full(config)
    mu, q = config.domain.mu, config.domain.field.q
    if rho is not None and not rho < q - 1:
        raise UnsupportedParameters(f"needs rho < q - 1, got rho = {rho}, q = {q}")
    padded = _pad(query, mu + 1)
    return _emit(config, padded, _diagonal_directions(config.subspace, padded), len(query))


def satisfy_query_cartesian(
    code: CartesianCode, query: Query, config: Optional[BucketConfig] = None
) -> QueryRecoverySet:
    """Solve a query of up to nu + 1 points of X with buckets (p + V) ∩ X, V diagonal."""
    dom = code.domain
    F = dom.field
    if config is None:
        config = build_bucket_config(dom, Subspace.diagonal(F, dom.mu))
    if config.domain != dom:
        raise DomainError("bucket configuration belongs to a different domain")
    if not config.subspace.is_diagonal:
        raise UnsupportedParameters("this construction needs V = <(1, ..., 1)>")
    count, good = nu(code)
    if count < 3:
        raise InsufficientDirections(f"insufficient recoverable directions: nu = {count} < 3")
    if F.q < 3:
        raise UnsupportedParameters(f"needs q >= 3, got q = {F.q}")
    padded = _pad(query, count + 1)
    for p in padded:
        dom.index(p)

    # good coordinates first; the bad ones are punctured away
    keep = [g - 1 for g in good]
    punctured = [tuple(p[c] for c in keep) for p in padded]
    sub_dirs = _diagonal_directions(Subspace.diagonal(F, count), punctured)
    dirs = [0 if d == 0 else good[d - 1] for d in sub_dirs]
    if any(d != 0 and d not in good for d in dirs):
        raise ConstructionError(f"direction outside the recoverable coordinates: {dirs}")
    return _emit(config, padded, dirs, len(query))


def max_query_size(code: CartesianCode) -> int:
    return nu(code)[0] + 1


def solve_query(code: CartesianCode, config: BucketConfig, query: Query) -> QueryRecoverySet:
    """Constructive solution on ``config`` (or on its unmerged parent)."""
    base = config.root
    if not base.subspace.is_diagonal:
        raise UnsupportedParameters("no constructive solver for this subspace")
    return satisfy_query_cartesian(code, query, base)
