"""Command-line front end: ``cartbatch {build,query,validate,merge,equiv-check}``.

Every command takes a JSON code description::

    {
      "field": {"p": 3, "k": 1},
      "subsets": [[0, 1, 2], [0, 1, 2], [0, 1, 2]],
      "rho": 1,
      "subspace_basis": [[1, 1, 1]],
      "tau": 1,
      "t": 4
    }

``subspace_basis`` defaults to the all-ones vector; ``tau`` and ``t`` are
optional overrides.  Exit status: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .batch import QueryRecoverySet, max_query_size, solve_query
from .buckets import BucketConfig, Subspace, build_bucket_config, export_csv, merge_buckets, subspace_condition
from .code import CartesianCode, build_code, build_domain, nu
from .errors import BatchCodeError, ConstructionError, UnsupportedParameters
from .gf import GF
from .validator import MODES, brute_force_qrs, check_equiv_theorem, exhaustive_validate, verify_qrs

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class SpecError(BatchCodeError):
    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass
class SpecDocument:
    field: GF
    code: CartesianCode
    subspace: Subspace
    config: BucketConfig  # already merged when tau > 1
    tau: int
    t: int

    @property
    def base_config(self) -> BucketConfig:
        return self.config.root


def _int(v, where: str, lo: Optional[int] = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(where, f"expected an integer, got {json.dumps(v)}")
    if lo is not None and v < lo:
        raise SpecError(where, f"must be >= {lo}, got {v}")
    return v


def _int_rows(v, where: str) -> list[list[int]]:
    if not isinstance(v, list):
        raise SpecError(where, "expected a list of lists")
    out = []
    for i, row in enumerate(v):
        if not isinstance(row, list):
            raise SpecError(f"{where}[{i}]", "expected a list")
        out.append([_int(x, f"{where}[{i}][{j}]", 0) for j, x in enumerate(row)])
    return out


def parse_spec(doc) -> SpecDocument:
    if not isinstance(doc, dict):
        raise SpecError("$", "expected a JSON object")
    unknown = set(doc) - {"field", "subsets", "rho", "subspace_basis", "tau", "t"}
    if unknown:
        raise SpecError("$", f"unknown keys {sorted(unknown)}")
    fd = doc.get("field")
    if not isinstance(fd, dict) or "p" not in fd:
        raise SpecError("field", 'expected {"p": <prime>, "k": <degree>}')
    try:
        F = GF(_int(fd["p"], "field.p"), _int(fd.get("k", 1), "field.k", 1))
    except BatchCodeError as e:
        if isinstance(e, SpecError):
            raise
        raise SpecError("field", str(e)) from None

    if "subsets" not in doc:
        raise SpecError("subsets", "missing")
    subsets = _int_rows(doc["subsets"], "subsets")
    for i, a in enumerate(subsets):
        for j, x in enumerate(a):
            if x >= F.q:
                raise SpecError(f"subsets[{i}][{j}]", f"element {x} outside F_{F.q}")
            if x in a[:j]:
                raise SpecError(f"subsets[{i}][{j}]", f"duplicate element {x}")
    try:
        domain = build_domain(F, subsets)
    except BatchCodeError as e:
        raise SpecError("subsets", str(e)) from None

    if "rho" not in doc:
        raise SpecError("rho", "missing")
    code = build_code(domain, _int(doc["rho"], "rho", 0))

    basis = _int_rows(doc.get("subspace_basis", [[1] * domain.mu]), "subspace_basis")
    for i, r in enumerate(basis):
        if len(r) != domain.mu:
            raise SpecError(f"subspace_basis[{i}]", f"length {len(r)} != mu = {domain.mu}")
        for j, x in enumerate(r):
            if x >= F.q:
                raise SpecError(f"subspace_basis[{i}][{j}]", f"element {x} outside F_{F.q}")
    V = Subspace.span(F, basis, domain.mu)
    config = build_bucket_config(domain, V)

    tau = _int(doc.get("tau", 1), "tau", 1)
    if tau > 1:
        config = merge_buckets(config, tau)
    t = _int(doc["t"], "t", 1) if "t" in doc else max(max_query_size(code), 1)
    return SpecDocument(F, code, V, config, tau, t)


def load_spec(path: str) -> SpecDocument:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise SpecError(path, f"cannot read: {e.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    return parse_spec(doc)


def parse_point(text: str, mu: int) -> tuple[int, ...]:
    try:
        p = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise SpecError(f"point {text!r}", "expected comma-separated integers") from None
    if len(p) != mu:
        raise SpecError(f"point {text!r}", f"has {len(p)} coordinates, expected {mu}")
    return p


def _fmt(p) -> str:
    return "(" + ",".join(map(str, p)) + ")"


def summary(spec: SpecDocument) -> dict:
    count, good = nu(spec.code)
    base = spec.base_config
    return {
        "n": spec.code.n,
        "k": spec.code.dimension,
        "m": base.m,
        "nu": count,
        "good_coordinates": list(good),
        "condition": subspace_condition(spec.subspace) if spec.subspace.mu >= 2 else False,
        "tau": spec.tau,
        "m_merged": spec.config.m,
    }


def cmd_build(args) -> int:
    spec = load_spec(args.spec)
    s = summary(spec)
    line = f"n={s['n']} k={s['k']} m={s['m']} ν={s['nu']} condition={'OK' if s['condition'] else 'FAIL'}"
    if spec.tau > 1:
        line += f" tau={spec.tau} m_merged={s['m_merged']}"
    print(line)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            export_csv(spec.config, fh)
    return EXIT_OK if s["condition"] else EXIT_FAIL


def cmd_query(args) -> int:
    spec = load_spec(args.spec)
    dom = spec.code.domain
    points = [parse_point(s, dom.mu) for s in args.points]
    if len(points) > spec.t:
        raise SpecError("query", f"arity error: {len(points)} points, but t = {spec.t}")
    for p in points:
        if p not in dom:
            raise SpecError(f"point {_fmt(p)}", "not in X")

    source = "constructive"
    try:
        qrs: Optional[QueryRecoverySet] = solve_query(spec.code, spec.config, points)
    except UnsupportedParameters:
        source = "search"
        res = brute_force_qrs(spec.config, points, spec.tau)
        qrs = res.qrs
        if res.status == "truncated":
            print("search truncated; no answer")
            return EXIT_FAIL
    except ConstructionError as e:
        print(f"construction failed: {e}")
        return EXIT_FAIL
    if qrs is None:
        print("no query recovery set exists")
        return EXIT_FAIL

    print(f"t={len(points)} tau={spec.tau} m={spec.config.m} source={source}")
    for s, r in enumerate(qrs.sets):
        idx = [dom.index(z) for z in r.members]
        bks = [spec.config.bucket_of_point[j] for j in idx]
        kind = "direct" if r.direction == 0 else "line"
        print(f"  [{s}] anchor={_fmt(r.anchor)} direction={r.direction} ({kind}) members={idx} buckets={bks}")
    v = verify_qrs(spec.config, points, qrs, spec.tau, spec.code.rho)
    print("verdict=" + ("OK" if v.ok else "FAIL " + "; ".join(v.problems)))
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_validate(args) -> int:
    spec = load_spec(args.spec)
    t = args.t or spec.t
    config = spec.config
    tau = args.tau or spec.tau
    if tau != config.tau:
        config = merge_buckets(spec.base_config, tau)
    report = exhaustive_validate(
        config, t, tau, mode=args.mode, n_samples=args.samples, seed=args.seed,
        code=spec.code, budget=args.budget, workers=args.workers,
    )
    if not args.timing:
        report.wall_ms = None
    print(report.table())
    if args.out:
        Path(args.out).write_text(report.to_json(timing=args.timing))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_merge(args) -> int:
    spec = load_spec(args.spec)
    merged = merge_buckets(spec.base_config, args.tau)
    print(f"m={spec.base_config.m} tau=1 -> m={merged.m} tau={args.tau}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            export_csv(merged, fh)
    return EXIT_OK


def cmd_equiv(args) -> int:
    spec = load_spec(args.spec)
    res = check_equiv_theorem(spec.field, spec.code.domain.mu, spec.subspace)
    words = ["OK" if x else "FAIL" for x in res.as_tuple()]
    print(f"i={words[0]} ii={words[1]} iii={words[2]} agree={'yes' if res.agree else 'NO'}")
    return EXIT_OK if res.agree else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cartbatch", description="Affine Cartesian codes as batch codes.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="summarize code and bucket configuration")
    b.add_argument("spec")
    b.add_argument("--csv", help="write the bucket table here")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="solve and verify one query")
    q.add_argument("spec")
    q.add_argument("points", nargs="+", help="points as comma-separated coordinates, e.g. 0,1,2")
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("validate", help="exhaustively validate the configuration")
    v.add_argument("spec")
    v.add_argument("--mode", choices=MODES, default="full")
    v.add_argument("--t", type=int)
    v.add_argument("--tau", type=int)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=2_000_000)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--timing", action="store_true", help="include wall time (makes output nondeterministic)")
    v.set_defaults(func=cmd_validate)

    m = sub.add_parser("merge", help="merge buckets for load tau")
    m.add_argument("spec")
    m.add_argument("--tau", type=int, required=True)
    m.add_argument("--csv")
    m.set_defaults(func=cmd_merge)

    e = sub.add_parser("equiv-check", help="three-way check of the subspace conditions")
    e.add_argument("spec")
    e.set_defaults(func=cmd_equiv)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BatchCodeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
