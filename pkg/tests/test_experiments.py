import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings

from expanderhyp import all_pairs_distances
from expanderhyp.experiments.constants import (
    LEDGER,
    alpha_ok,
    alpha_threshold,
    choose_alpha,
    longpath_bound,
)
from expanderhyp.experiments.audits import (
    audit_lemma_balldetour,
    audit_lemma_isoc,
    audit_lemma_segment,
    audit_lemma_skeleton,
    projection_gap,
    run_audit,
)
from expanderhyp.experiments.cylinder import CYLINDER_COLUMNS, run_cylinder_experiment
from expanderhyp.experiments.scaling import SCALING_COLUMNS, family_sweep, measure, run_scaling_experiment
from expanderhyp.generators import FamilySpec, cycle, grid, margulis, path, random_regular, tree
from expanderhyp.hyperbolicity import delta_thin_exact
from expanderhyp.metric import UNREACHABLE, extract_geodesic

import oracles
from test_graph_core import graphs


# --- constants ------------------------------------------------------------------

def test_ledger():
    LEDGER.check()
    assert (LEDGER.K, LEDGER.C_skeleton, LEDGER.K0, LEDGER.K1) == (4, 8, 12, 2)
    assert LEDGER.B == Fraction(1, 80)


@pytest.mark.parametrize("d, h, amin, alpha", [(3, 1.0, 0.12895, 0.13540), (4, 0.5, 0.07543, 0.07920)])
def test_choose_alpha_examples(d, h, amin, alpha):
    assert alpha_threshold(d, h) == pytest.approx(amin, abs=5e-6)
    assert choose_alpha(d, h) == pytest.approx(alpha, abs=5e-6)


def test_choose_alpha_limits_and_errors():
    values = [choose_alpha(3, h) for h in (1.0, 1e-2, 1e-4, 1e-8)]
    assert values == sorted(values, reverse=True) and values[-1] < 1e-8
    assert choose_alpha(3, 1e9) < 1 / 3
    for d, h in [(2, 1.0), (3, 0.0), (3, -1.0)]:
        with pytest.raises(ValueError):
            choose_alpha(d, h)


@pytest.mark.parametrize("d", [3, 4, 8, 20])
@pytest.mark.parametrize("h", [1e-6, 0.01, 0.3, 1.0, 5.0])
def test_chosen_alpha_satisfies_inequality(d, h):
    a = choose_alpha(d, h)
    assert alpha_ok(a, d, h)
    assert (1 + h) ** (1 / 3 - a) < d**a
    # just below the threshold the inequality fails
    t = alpha_threshold(d, h)
    assert not alpha_ok(t * 0.99, d, h)


def test_longpath_examples():
    assert longpath_bound(60, 0, 1) == (pytest.approx(0.75), 1)
    assert longpath_bound(80, 10, 1) == (pytest.approx(1024.0), 1)
    big, n = longpath_bound(80, 10, 1e9)
    assert big == pytest.approx(1.0) and n == 0


# --- cylinder -------------------------------------------------------------------

def test_cylinder_c12():
    rec = run_cylinder_experiment(cycle(12), alpha=0.1, h=0.1)
    assert (rec.p, rec.q, rec.D, rec.p_third, rec.q_third, rec.radius) == (0, 6, 6, 2, 4, 1)
    assert rec.cyl_size == 5 and rec.d_before == 6
    assert rec.d_after == 6  # the other arc 0-11-...-6
    assert not rec.degenerate and not rec.disconnected


def test_cylinder_tree_disconnects():
    rec = run_cylinder_experiment(tree(2, 4), alpha=0.1, h=0.1)
    assert rec.d_after == UNREACHABLE and rec.disconnected
    row = rec.row()
    assert row["d_after"] == "" and row["disconnected"] == 1
    assert list(row) == list(CYLINDER_COLUMNS)


def test_cylinder_truncates_to_multiple_of_three():
    rec = run_cylinder_experiment(path(9), alpha=0.1, h=0.1)
    assert rec.D == 6 and rec.q == 6 and rec.d_before == 6


def test_cylinder_degenerate_flag():
    rec = run_cylinder_experiment(path(4), alpha=0.3, h=0.1)
    assert rec.D == 3 and rec.degenerate


def test_cylinder_margulis_auto():
    g = margulis(10)
    rec = run_cylinder_experiment(g, delta=2)
    assert rec.alpha == pytest.approx(choose_alpha(8, rec.h_used))
    assert rec.growth_all_ok and rec.cyl_bound_ok
    assert rec.predicted_detour is not None
    if not rec.disconnected:
        assert rec.d_after >= rec.d_before


@pytest.mark.parametrize("seed", range(1, 6))
def test_cylinder_distance_never_shrinks(seed):
    g = random_regular(40, 3, seed)
    rec = run_cylinder_experiment(g, alpha=0.2, h=0.05)
    assert rec.disconnected or rec.d_after >= rec.d_before
    assert rec.cyl_size <= rec.cyl_bound


# --- audits ---------------------------------------------------------------------

def _thin(g):
    dm = all_pairs_distances(g)
    return dm, delta_thin_exact(g, dm)[0]


@pytest.mark.parametrize("g", [tree(2, 3), cycle(6), grid(4, 4), cycle(12)], ids=["tree", "C6", "grid4", "C12"])
def test_isoc_examples(g):
    dm, delta = _thin(g)
    rep = audit_lemma_isoc(g, dm, delta, 2)
    assert not rep.failed and rep.cases_checked > 0


def test_isoc_tree_forces_equal_endpoints():
    g = tree(2, 3)
    dm = all_pairs_distances(g)
    rep = audit_lemma_isoc(g, dm, 0, 2)
    assert rep.worst_margin == 2


@given(graphs(max_n=9, connected=True))
@settings(max_examples=30, deadline=None)
def test_isoc_matches_enumeration(g):
    dm, delta = _thin(g)
    for d_used in (0, delta):
        rep = audit_lemma_isoc(g, dm, d_used, 1)
        worst, count = oracles.isoc_worst(g, d_used, 1)
        assert (rep.worst_margin, rep.cases_checked) == (worst, count)


@given(graphs(max_n=10, connected=True))
@settings(max_examples=30, deadline=None)
def test_segment_matches_enumeration(g):
    dm = all_pairs_distances(g)
    # delta 0 makes every separated pair qualify
    rep = audit_lemma_segment(g, dm, 0, 0)
    assert rep.worst_margin == oracles.segment_worst(g, 0, 0)


def test_segment_examples():
    dm, delta = _thin(cycle(8))
    rep = audit_lemma_segment(cycle(8), dm, delta, 2)
    assert rep.cases_checked == 0 and not rep.failed
    t = tree(2, 4)
    rep = audit_lemma_segment(t, all_pairs_distances(t), 0, 2)
    assert rep.cases_checked > 100 and rep.worst_margin == 2


def test_skeleton_geodesic_itself():
    g = grid(3, 5)
    dm = all_pairs_distances(g)
    geo = extract_geodesic(g, dm, 0, 14).vertices
    assert projection_gap(dm, geo, geo) == 1


def test_skeleton_c6_long_way():
    g = cycle(6)
    dm = all_pairs_distances(g)
    geo = extract_geodesic(g, dm, 0, 2).vertices
    gap = projection_gap(dm, geo, (0, 5, 4, 3, 2))
    assert gap <= 8 * 1 + 2
    rep = audit_lemma_skeleton(g, dm, 1, 2, path_samples=4, seed=1)
    assert not rep.failed


def test_skeleton_tree_gap_one():
    # a walk in a tree crosses every geodesic vertex, so each gap is exactly 1
    g = tree(2, 3)
    rep = audit_lemma_skeleton(g, all_pairs_distances(g), 0, 1, path_samples=3, seed=5)
    assert rep.worst_margin == 0 and not rep.failed


def test_skeleton_requires_samples():
    with pytest.raises(ValueError):
        audit_lemma_skeleton(cycle(5), all_pairs_distances(cycle(5)), 1, 2, path_samples=0)


def test_balldetour_tree_blocked():
    g = tree(2, 3)
    rep = audit_lemma_balldetour(g, all_pairs_distances(g), 0, 2)
    assert rep.detail["min_detour"] is None and rep.detail["blocked"] > 0


def test_balldetour_c6_example():
    g = cycle(6)
    dm = all_pairs_distances(g)
    rep = audit_lemma_balldetour(g, dm, 1, 2)
    assert not rep.failed
    assert rep.detail["min_detour"] == 3  # e.g. p=0, q=3, r=1, R=1 forces 0-5-4-3


def test_balldetour_c12():
    dm, delta = _thin(cycle(12))
    assert not audit_lemma_balldetour(cycle(12), dm, delta, 2).failed


def test_balldetour_small_radius_counterexample():
    # R = 1 < delta = 3 leaves a second length-2 route, below 3 * 2**(-1/3)
    g = random_regular(24, 3, 1)
    dm, delta = _thin(g)
    rep = audit_lemma_balldetour(g, dm, delta, 2)
    assert delta == 3 and rep.failed
    p, q, r, R = rep.counterexample
    assert R == 1 and rep.detail["violations_r_at_least_delta"] == 0
    h = oracles.to_nx(g)
    h.remove_nodes_from([v for v in range(g.n) if dm[r, v] < R])
    L = nx.shortest_path_length(h, p, q)
    assert rep.worst_margin == pytest.approx(L - delta * 2 ** ((R - 2) / delta))


def test_run_audit_dispatch():
    g = cycle(7)
    for lemma in ("isoc", "skeleton", "balldetour", "segment"):
        rep = run_audit(g, lemma)
        assert rep.lemma == lemma and rep.delta_used == delta_thin_exact(g, all_pairs_distances(g))[0]
    with pytest.raises(ValueError):
        run_audit(g, "nope")


def test_audit_row_format():
    rep = run_audit(cycle(6), "isoc")
    row = rep.row("c6")
    assert list(row) == ["lemma", "n", "family", "delta", "slack", "cases_checked",
                         "worst_margin", "counterexample"]
    assert row["counterexample"] == "" and row["family"] == "c6"


# --- scaling --------------------------------------------------------------------

def test_scaling_trees_are_zero():
    specs = [FamilySpec("tree", {"b": 2, "depth": k}) for k in (5, 6, 7)]
    recs = run_scaling_experiment(specs, "exact")
    assert [r.n for r in recs] == [63, 127, 255]
    assert all(r.delta_x2 == 0 for r in recs)
    assert recs[2].delta_mode == "sampled"  # 255 > exact cap


def test_scaling_cycles_match_oracle():
    for rec in run_scaling_experiment(family_sweep("cycle", list(range(8, 17)), [0]), "exact"):
        assert rec.delta_x2 == oracles.fourpoint_x2(cycle(rec.n))[0]
        row = rec.row()
        assert float(row["ratio_delta_diam"]) == pytest.approx(rec.delta_x2 / 2 / (rec.n // 2))
        assert float(row["ratio_delta_ln_n"]) == pytest.approx(rec.delta_x2 / 2 / math.log(rec.n))


def test_scaling_error_rows():
    recs = run_scaling_experiment([FamilySpec("random-regular", {"n": 5, "d": 3}, 1),
                                   FamilySpec("cycle", {"n": 5})], "exact")
    assert recs[0].delta_mode == "error" and recs[0].row()["delta_x2"] == ""
    assert recs[1].delta_x2 == 1
    huge = measure(FamilySpec("margulis", {"m": 100}), "sampled", 10)
    assert huge.delta_mode == "error" and "cap" in huge.error
    assert list(recs[0].row()) == list(SCALING_COLUMNS)


def test_scaling_sampled_is_seeded():
    spec = FamilySpec("random-regular", {"n": 200, "d": 3}, 3)
    a, b = measure(spec, "sampled", 50_000), measure(spec, "sampled", 50_000)
    assert a.row() == b.row() and a.delta_mode == "sampled"


def test_family_sweep_keys():
    assert [s.params for s in family_sweep("grid", [3], [0])] == [{"rows": 3, "cols": 3}]
    assert [s.params for s in family_sweep("tree", [2], [0], b=3)] == [{"b": 3, "depth": 2}]
    specs = family_sweep("random-regular", [16, 32], [1, 2], d=3)
    assert [(s.params["n"], s.seed) for s in specs] == [(16, 1), (16, 2), (32, 1), (32, 2)]
