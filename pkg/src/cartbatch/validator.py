"""Brute-force oracle for query recovery sets and t,tau-validity.

Nothing here calls into the solver's construction logic except
:func:`exhaustive_validate`, which runs the solver only to compare it with the
oracle.  Recovery-set memberships are recomputed from the definition (points
of X that agree with the anchor off one coordinate) and bucket loads are read
straight off the partition.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Optional, Sequence

from .batch import QueryRecoverySet, max_query_size, solve_query
from .buckets import BucketConfig, Subspace, build_bucket_config
from .code import CartesianCode, EvaluationDomain, Point, full_space
from .errors import BatchCodeError, ConstructionError
from .gf import GF, rank, row_reduce

DEFAULT_BUDGET = 2_000_000
MODES = ("full", "bucket-classes", "sample")


class _Members:
    """Definition-level recovery sets as frozensets of point indices, cached."""

    def __init__(self, domain: EvaluationDomain):
        self.domain = domain
        self._cache: dict[tuple[int, int], frozenset[int]] = {}

    def get(self, j: int, i: int) -> frozenset[int]:
        key = (j, i)
        hit = self._cache.get(key)
        if hit is None:
            pts = self.domain.points
            p = pts[j]
            if i == 0:
                hit = frozenset((j,))
            else:
                c = i - 1
                hit = frozenset(
                    x for x, z in enumerate(pts)
                    if x != j and all(z[a] == p[a] for a in range(len(p)) if a != c)
                )
            self._cache[key] = hit
        return hit


@dataclass
class Verdict:
    ok: bool
    condition1: bool
    condition2: bool
    problems: list[str] = field(default_factory=list)
    max_load: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_qrs(
    config: BucketConfig,
    query: Sequence[Sequence[int]],
    qrs: QueryRecoverySet,
    tau: Optional[int] = None,
    rho: Optional[int] = None,
    _members: Optional[_Members] = None,
) -> Verdict:
    """Check both query-recovery conditions by direct set arithmetic.

    With ``rho`` given, every indirect direction i must also satisfy
    rho + 1 < |A_i| so that the set really recovers its anchor.
    """
    dom = config.domain
    tau = config.tau if tau is None else tau
    mem = _members or _Members(dom)
    problems: list[str] = []
    if len(qrs.sets) != len(query):
        return Verdict(False, False, False, [f"{len(qrs.sets)} sets for {len(query)} query points"])

    index_sets = []
    for s, (p, r) in enumerate(zip(query, qrs.sets)):
        p = tuple(p)
        if r.anchor != p:
            problems.append(f"position {s}: anchor {r.anchor} != query point {p}")
        if p not in dom.point_index:
            problems.append(f"position {s}: {p} not in X")
            index_sets.append(frozenset())
            continue
        if not 0 <= r.direction <= dom.mu:
            problems.append(f"position {s}: direction {r.direction} out of range")
            index_sets.append(frozenset())
            continue
        if rho is not None and r.direction and not rho + 1 < dom.sizes[r.direction - 1]:
            problems.append(f"position {s}: direction {r.direction} cannot recover with rho={rho}")
        ids = mem.get(dom.point_index[p], r.direction)
        if frozenset(dom.point_index.get(tuple(z), -1) for z in r.members) != ids:
            problems.append(f"position {s}: members differ from R_{{p,{r.direction}}}")
        index_sets.append(ids)

    cond2 = True
    for r_, s_ in itertools.combinations(range(len(index_sets)), 2):
        if index_sets[r_] & index_sets[s_]:
            cond2 = False
            problems.append(f"condition 2: sets {r_} and {s_} intersect")
    union = frozenset().union(*index_sets)
    loads = Counter(config.bucket_of_point[j] for j in union)
    max_load = max(loads.values(), default=0)
    cond1 = max_load <= tau
    if not cond1:
        over = sorted(b for b, c in loads.items() if c > tau)
        problems.append(f"condition 1: buckets {over} used more than tau={tau} times")
    return Verdict(not problems and cond1 and cond2, cond1, cond2, problems, max_load)


@dataclass
class SearchResult:
    status: str  # "found" | "none" | "truncated"
    qrs: Optional[QueryRecoverySet]
    nodes: int
    deepest: tuple[int, ...] = ()

    @property
    def found(self) -> bool:
        return self.status == "found"


class _Truncated(Exception):
    pass


def allowed_directions(domain: EvaluationDomain, rho: Optional[int] = None) -> tuple[int, ...]:
    """Indirect directions usable as recovery sets (nonempty; recoverable given rho)."""
    bound = 1 if rho is None else rho + 1
    return tuple(i for i, s in enumerate(domain.sizes, 1) if bound < s)


def brute_force_qrs(
    config: BucketConfig,
    query: Sequence[Sequence[int]],
    tau: Optional[int] = None,
    directions: Optional[Iterable[int]] = None,
    budget: int = DEFAULT_BUDGET,
    _members: Optional[_Members] = None,
) -> SearchResult:
    """First assignment in {0, directions...}^t (lexicographic) that is a valid set.

    Exhaustive depth-first search; branches that already break disjointness or
    the bucket load are cut, which never discards a valid assignment.
    """
    dom = config.domain
    tau = config.tau if tau is None else tau
    mem = _members or _Members(dom)
    dirs = (0,) + tuple(sorted(allowed_directions(dom) if directions is None else directions))
    idx = [dom.index(p) for p in query]
    of = config.bucket_of_point
    cands = []
    for j in idx:
        row = []
        for d in dirs:
            ids = mem.get(j, d)
            if ids:
                row.append((d, ids, tuple(Counter(of[x] for x in ids).items())))
        cands.append(row)

    t = len(idx)
    used: set[int] = set()
    load: Counter = Counter()
    chosen: list[int] = []
    state = {"nodes": 0, "deepest": ()}

    def go(s: int) -> bool:
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise _Truncated
        if len(chosen) > len(state["deepest"]):
            state["deepest"] = tuple(chosen)
        if s == t:
            return True
        for d, ids, loads in cands[s]:
            if not used.isdisjoint(ids):
                continue
            if any(load[b] + c > tau for b, c in loads):
                continue
            used.update(ids)
            for b, c in loads:
                load[b] += c
            chosen.append(d)
            if go(s + 1):
                return True
            chosen.pop()
            used.difference_update(ids)
            for b, c in loads:
                load[b] -= c
        return False

    try:
        ok = go(0)
    except _Truncated:
        return SearchResult("truncated", None, state["nodes"], state["deepest"])
    if not ok:
        return SearchResult("none", None, state["nodes"], state["deepest"])
    qrs = QueryRecoverySet.from_directions(dom, [dom.points[j] for j in idx], chosen)
    return SearchResult("found", qrs, state["nodes"], tuple(chosen))


# -- exhaustive validation --


@dataclass
class ValidationReport:
    parameters: dict
    mode: str
    seed: Optional[int]
    totals: dict
    witnesses: list[dict]
    wall_ms: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.totals["failures"] == 0 and self.totals["truncated"] == 0

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "parameters": self.parameters,
            "mode": self.mode,
            "seed": self.seed,
            "totals": self.totals,
            "witnesses": self.witnesses,
            "wall_ms": round(self.wall_ms, 1) if timing and self.wall_ms is not None else None,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"

    def table(self) -> str:
        par = self.parameters
        lines = [
            f"q={par['q']} mu={par['mu']} sizes={par['sizes']} rho={par['rho']} V={par['subspace']}",
            f"t={par['t']} tau={par['tau']} m={par['m']} mode={self.mode} seed={self.seed}",
        ]
        w = max(len(k) for k in self.totals)
        lines += [f"  {k:<{w}}  {v}" for k, v in self.totals.items()]
        for wit in self.witnesses:
            lines.append(f"  FAIL {wit['query']}: {wit['reason']}")
        if self.wall_ms is not None:
            lines.append(f"  wall_ms  {self.wall_ms:.1f}")
        lines.append("RESULT " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines)


def _queries(config: BucketConfig, t: int, mode: str, n_samples: Optional[int], seed: Optional[int]):
    """(query iterator over point indices, number of queries)."""
    n = config.domain.n
    if mode == "full":
        return itertools.combinations_with_replacement(range(n), t), comb(n + t - 1, t)
    if mode == "bucket-classes":
        base = config.root
        reps = [min(b) for b in base.buckets]
        classes = itertools.combinations_with_replacement(range(base.m), t)
        return (tuple(reps[b] for b in c) for c in classes), comb(base.m + t - 1, t)
    if mode == "sample":
        if not n_samples or n_samples < 1:
            raise ValueError("sample mode needs a positive sample count")
        rng = random.Random(seed)
        return (tuple(rng.randrange(n) for _ in range(t)) for _ in range(n_samples)), n_samples
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def _solver_applies(code: Optional[CartesianCode], config: BucketConfig, t: int) -> bool:
    if code is None or code.domain != config.domain:
        return False
    if not config.root.subspace.is_diagonal or config.domain.field.q < 3:
        return False
    return 4 <= max_query_size(code) and t <= max_query_size(code)


@dataclass
class _Chunk:
    config: BucketConfig
    code: Optional[CartesianCode]
    t: int
    tau: int
    budget: int
    queries: list[tuple[int, ...]]


def _check_chunk(job: _Chunk) -> tuple[Counter, list[dict]]:
    config, code = job.config, job.code
    dom = config.domain
    rho = code.rho if code is not None else None
    dirs = allowed_directions(dom, rho)
    mem = _Members(dom)
    use_solver = _solver_applies(code, config, job.t)
    tot: Counter = Counter()
    wits: list[dict] = []
    for qi in job.queries:
        Q = [dom.points[j] for j in qi]
        tot["queries"] += 1
        reasons = []
        con_found = None
        if use_solver:
            tot["constructive_checked"] += 1
            try:
                qrs = solve_query(code, config, Q)
                v = verify_qrs(config, Q, qrs, job.tau, rho, mem)
                con_found = v.ok
                if not v.ok:
                    reasons.append("constructive set rejected: " + "; ".join(v.problems))
            except (BatchCodeError, ConstructionError) as e:
                con_found = False
                reasons.append(f"constructive solver raised {type(e).__name__}: {e}")
            tot["constructive_valid"] += bool(con_found)
        res = brute_force_qrs(config, Q, job.tau, dirs, job.budget, mem)
        tot["search_nodes"] += res.nodes
        if res.status == "truncated":
            tot["truncated"] += 1
            reasons.append(f"search truncated after {res.nodes} nodes")
        elif res.status == "none":
            reasons.append("no query recovery set exists")
        else:
            tot["brute_found"] += 1
            if not verify_qrs(config, Q, res.qrs, job.tau, rho, mem).ok:
                reasons.append("oracle emitted a set that fails verification")
        if con_found is not None and res.status != "truncated":
            if con_found == res.found:
                tot["agreements"] += 1
            else:
                reasons.append(f"disagreement: constructive={con_found} brute_force={res.found}")
        if reasons:
            tot["failures"] += 1
            wits.append({
                "query": [list(p) for p in Q],
                "reason": "; ".join(reasons),
                "search": {"status": res.status, "nodes": res.nodes, "deepest": list(res.deepest)},
            })
    return tot, wits


def exhaustive_validate(
    config: BucketConfig,
    t: int,
    tau: Optional[int] = None,
    mode: str = "full",
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
    code: Optional[CartesianCode] = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    max_witnesses: int = 25,
    chunk_size: int = 2000,
) -> ValidationReport:
    """Check every query of the chosen mode with the oracle (and the solver, when it applies).

    Modes: ``full`` is every multiset of t points; ``bucket-classes`` is one
    query per multiset of buckets, each bucket represented by its lowest point
    index; ``sample`` draws ``n_samples`` ordered queries uniformly with
    ``random.Random(seed)``.
    """
    start = time.perf_counter()
    tau = config.tau if tau is None else tau
    if t < 1:
        raise ValueError("t must be >= 1")
    if mode == "sample" and seed is None:
        seed = 0
    it, count = _queries(config, t, mode, n_samples, seed)

    def chunks() -> Iterator[_Chunk]:
        while True:
            block = list(itertools.islice(it, chunk_size))
            if not block:
                return
            yield _Chunk(config, code, t, tau, budget, block)

    totals: Counter = Counter()
    witnesses: list[dict] = []
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_chunk, chunks()))
    else:
        results = map(_check_chunk, chunks())
    for tot, wits in results:
        totals.update(tot)
        witnesses.extend(wits)

    dom = config.domain
    keys = ["queries", "classes", "failures", "truncated", "constructive_checked",
            "constructive_valid", "brute_found", "agreements", "search_nodes"]
    totals["classes"] = count
    params = {
        "q": dom.field.q,
        "p": dom.field.p,
        "k": dom.field.k,
        "mu": dom.mu,
        "sizes": list(dom.sizes),
        "rho": code.rho if code is not None else None,
        "subspace": [list(r) for r in config.subspace.basis],
        "t": t,
        "tau": tau,
        "m": config.m,
        "n_samples": n_samples if mode == "sample" else None,
        "budget": budget,
    }
    return ValidationReport(
        params, mode, seed if mode == "sample" else None,
        {k: totals.get(k, 0) for k in keys},
        witnesses[:max_witnesses],
        (time.perf_counter() - start) * 1000.0,
    )


# -- structural checks on V and the bucket partition --


@dataclass(frozen=True)
class EquivResult:
    coordinate_planes: bool  # V ∩ <e_i, e_j> = {0}
    star_separated: bool  # distinct points of every E_p lie in distinct buckets
    star_recovers: bool  # R_p answers (p, ..., p) for every p

    @property
    def agree(self) -> bool:
        return self.coordinate_planes == self.star_separated == self.star_recovers

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (self.coordinate_planes, self.star_separated, self.star_recovers)


def check_equiv_theorem(field: GF, mu: int, V: Subspace, budget: int = DEFAULT_BUDGET) -> EquivResult:
    """Evaluate the three equivalent conditions independently over F_q^mu."""
    if field.q**mu > 100_000:
        raise ValueError(f"F_{field.q}^{mu} is beyond the enumeration budget")
    basis = [list(r) for r in V.basis]
    planes = all(
        rank(field, basis + [[int(c == i) for c in range(mu)], [int(c == j) for c in range(mu)]], mu) == V.dim + 2
        for i, j in itertools.combinations(range(mu), 2)
    )

    dom = full_space(field, mu)
    config = build_bucket_config(dom, V)
    mem = _Members(dom)
    of = config.bucket_of_point

    separated = True
    for j in range(dom.n):
        star = frozenset().union(*(mem.get(j, i) for i in range(mu + 1)))
        if len({of[x] for x in star}) != len(star):
            separated = False
            break

    recovers = True
    for p in dom.points:
        res = brute_force_qrs(config, [p] * (mu + 1), 1, budget=budget, _members=mem)
        if res.status == "truncated":
            raise RuntimeError(f"search truncated for {p}")
        if not res.found:
            recovers = False
            break
    return EquivResult(planes, separated, recovers)


def enumerate_subspaces(field: GF, mu: int, dim: int) -> Iterator[Subspace]:
    """Every dim-dimensional subspace of F_q^mu, once each (by RREF basis)."""
    q = field.q
    for pivots in itertools.combinations(range(mu), dim):
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, mu) if c not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * mu for _ in range(dim)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            red, piv = row_reduce(field, rows, mu)
            yield Subspace(field, mu, tuple(tuple(r) for r in red), tuple(piv))


def find_same_point_failure(
    config: BucketConfig, tau: int = 1, budget: int = DEFAULT_BUDGET
) -> Optional[tuple[Point, ...]]:
    """First query (p, ..., p) of length mu + 1 with no valid recovery set."""
    mem = _Members(config.domain)
    for p in config.domain.points:
        Q = (p,) * (config.domain.mu + 1)
        res = brute_force_qrs(config, Q, tau, budget=budget, _members=mem)
        if res.status == "none":
            return Q
    return None


def check_collapsible(config: BucketConfig) -> list[tuple[Point, Point, int]]:
    """Pairs p1 ~ p2 and directions i whose recovery sets hit different buckets."""
    dom = config.domain
    mem = _Members(dom)
    of = config.bucket_of_point
    bad = []
    for bucket in config.buckets:
        for a, b in itertools.permutations(bucket, 2):
            for i in range(1, dom.mu + 1):
                if {of[x] for x in mem.get(a, i)} != {of[x] for x in mem.get(b, i)}:
                    bad.append((dom.points[a], dom.points[b], i))
    return bad
