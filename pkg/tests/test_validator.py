import json

import pytest

from cartbatch.batch import QueryRecoverySet, satisfy_diagonal_mu3
from cartbatch.buckets import Subspace, build_bucket_config, merge_buckets, subspace_condition
from cartbatch.code import build_code, build_domain, full_space
from cartbatch.gf import GF
from cartbatch.validator import (
    brute_force_qrs,
    check_collapsible,
    check_equiv_theorem,
    enumerate_subspaces,
    exhaustive_validate,
    find_same_point_failure,
    verify_qrs,
)

F3 = GF(3)
DOM3 = full_space(F3, 3)
CODE3 = build_code(DOM3, 1)
CFG3 = build_bucket_config(DOM3, Subspace.diagonal(F3, 3))


def test_verify_all_direct_distinct_buckets():
    Q = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    qrs = QueryRecoverySet.from_directions(DOM3, Q, [0] * 4)
    v = verify_qrs(CFG3, Q, qrs, tau=1)
    assert v.ok and v.condition1 and v.condition2 and v.max_load == 1


def test_verify_identical_indirect_sets():
    Q = [(0, 0, 0), (0, 0, 0)]
    qrs = QueryRecoverySet.from_directions(DOM3, Q, [1, 1])
    v = verify_qrs(CFG3, Q, qrs)
    assert not v.ok and not v.condition2


def test_verify_bucket_overload():
    Q = [(0, 0, 0), (1, 1, 1)]
    qrs = QueryRecoverySet.from_directions(DOM3, Q, [0, 0])
    v = verify_qrs(CFG3, Q, qrs)
    assert v.condition2 and not v.condition1 and not v.ok
    assert verify_qrs(merge_buckets(CFG3, 2), Q, qrs, tau=2).ok


def test_verify_detects_tampered_members_and_anchor():
    Q = [(0, 0, 0)]
    good = QueryRecoverySet.from_directions(DOM3, Q, [1])
    from cartbatch.recovery import RecoverySet

    forged = QueryRecoverySet((RecoverySet((0, 0, 0), 1, ((1, 0, 0),)),))
    assert verify_qrs(CFG3, Q, good).ok
    assert not verify_qrs(CFG3, Q, forged).ok
    assert not verify_qrs(CFG3, [(1, 1, 1)], good).ok


def test_verify_checks_recoverability_with_rho():
    dom = build_domain(GF(5), [[0, 1, 2]] * 3 + [[0, 1]])
    cfg = build_bucket_config(dom, Subspace.diagonal(GF(5), 4))
    Q = [(0, 0, 0, 0)]
    qrs = QueryRecoverySet.from_directions(dom, Q, [4])
    assert verify_qrs(cfg, Q, qrs).ok
    assert not verify_qrs(cfg, Q, qrs, rho=1).ok


def test_verify_matches_solver_everywhere():
    import itertools

    for Q in itertools.combinations_with_replacement(DOM3.points, 4):
        assert verify_qrs(CFG3, Q, satisfy_diagonal_mu3(CFG3, Q)).ok


def test_brute_force_examples():
    res = brute_force_qrs(CFG3, [(0, 1, 2)] * 4)
    assert res.found and verify_qrs(CFG3, [(0, 1, 2)] * 4, res.qrs).ok
    assert res.qrs.directions == (0, 1, 2, 3)
    one = brute_force_qrs(CFG3, [(2, 2, 0)])
    assert one.found and one.qrs.directions == (0,)
    bad = build_bucket_config(DOM3, Subspace.span(F3, [(1, 0, 0)]))
    none = brute_force_qrs(bad, [(0, 0, 0)] * 4)
    assert none.status == "none" and none.qrs is None


def test_brute_force_truncation_is_explicit():
    bad = build_bucket_config(DOM3, Subspace.span(F3, [(1, 0, 0)]))
    res = brute_force_qrs(bad, [(0, 0, 0)] * 4, budget=3)
    assert res.status == "truncated" and not res.found


def test_brute_force_respects_direction_restriction():
    res = brute_force_qrs(CFG3, [(0, 0, 0)] * 3, directions=[2, 3])
    assert res.qrs.directions == (0, 2, 3)
    assert brute_force_qrs(CFG3, [(0, 0, 0)] * 4, directions=[2, 3]).status == "none"


def test_exhaustive_full_small():
    rep = exhaustive_validate(CFG3, 3, code=CODE3)
    assert rep.ok and rep.totals["queries"] == rep.totals["classes"] == 3654
    assert rep.totals["agreements"] == 3654


def test_exhaustive_bucket_classes():
    rep = exhaustive_validate(CFG3, 4, mode="bucket-classes", code=CODE3)
    assert rep.ok and rep.totals["classes"] == 495


def test_exhaustive_reports_failures_for_bad_subspace():
    cfg = build_bucket_config(DOM3, Subspace.span(F3, [(1, 1, 0)]))
    rep = exhaustive_validate(cfg, 4, mode="bucket-classes", code=CODE3)
    assert not rep.ok and rep.totals["failures"] > 0
    assert rep.totals["constructive_checked"] == 0
    same = [w for w in rep.witnesses if len({tuple(p) for p in w["query"]}) == 1]
    assert same and same[0]["search"]["status"] == "none"


def test_sample_mode_is_reproducible():
    a = exhaustive_validate(CFG3, 4, mode="sample", n_samples=300, seed=5, code=CODE3)
    b = exhaustive_validate(CFG3, 4, mode="sample", n_samples=300, seed=5, code=CODE3)
    assert a.to_json(timing=False) == b.to_json(timing=False)
    assert a.seed == 5


def test_report_schema():
    rep = exhaustive_validate(CFG3, 2, code=CODE3)
    d = json.loads(rep.to_json())
    assert set(d) == {"parameters", "mode", "seed", "totals", "witnesses", "wall_ms"}
    assert d["parameters"]["m"] == 9 and d["parameters"]["q"] == 3
    assert isinstance(d["wall_ms"], float)
    assert "RESULT PASS" in rep.table()


def test_workers_give_same_totals():
    a = exhaustive_validate(CFG3, 3, code=CODE3, chunk_size=500)
    b = exhaustive_validate(CFG3, 3, code=CODE3, chunk_size=500, workers=2)
    assert a.totals == b.totals


def test_merge_then_validate_at_tau_two():
    rep = exhaustive_validate(merge_buckets(CFG3, 2), 4, tau=2, mode="bucket-classes", code=CODE3)
    assert rep.ok


def test_equiv_examples():
    assert check_equiv_theorem(F3, 3, Subspace.diagonal(F3, 3)).as_tuple() == (True, True, True)
    assert check_equiv_theorem(F3, 3, Subspace.span(F3, [(1, 1, 0)])).as_tuple() == (False, False, False)


def test_equiv_all_lines_f3():
    results = [check_equiv_theorem(F3, 3, V) for V in enumerate_subspaces(F3, 3, 1)]
    assert len(results) == 13 and all(r.agree for r in results)
    # the lines avoiding every coordinate plane are those with all-nonzero direction
    assert sum(r.coordinate_planes for r in results) == 4


def test_necessity_same_point_witness():
    for V in enumerate_subspaces(F3, 3, 1):
        if subspace_condition(V):
            continue
        cfg = build_bucket_config(DOM3, V)
        Q = find_same_point_failure(cfg)
        assert Q is not None and len(set(Q)) == 1 and len(Q) == 4
    assert find_same_point_failure(CFG3) is None


def test_collapsible_holds_on_diagonal_configs():
    assert check_collapsible(CFG3) == []


def test_unknown_mode():
    with pytest.raises(ValueError):
        exhaustive_validate(CFG3, 2, mode="everything")
    with pytest.raises(ValueError):
        exhaustive_validate(CFG3, 2, mode="sample")
