import math

import numpy as np
import pytest

from paritybounds.instances import EdgeListGraph, GraphSpec, encode_maxcut, sample_instance, DistributionSpec
from paritybounds.parity import layout
from paritybounds.sdp import (
    SdpResult,
    c1_sdp_bound,
    lambda_min_sym,
    solve_maxcut_sdp,
    tripartition_a1_upper,
)
from paritybounds.solver import logical_spectrum, min_over_defect_count

import oracles


def test_single_edge_graph():
    res = solve_maxcut_sdp(GraphSpec.complete(2))
    assert res.primal_value == pytest.approx(1.0, abs=1e-6)
    assert res.dual_value == pytest.approx(1.0, abs=1e-6)
    assert res.primal_value <= res.dual_value + 1e-12


def test_five_cycle_known_value():
    # opt_sdp(C5) = 5 (1 + cos(pi/5)) / 2, strictly above cut_max = 4
    c5 = EdgeListGraph.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    known = 5.0 * (1.0 + math.cos(math.pi / 5.0)) / 2.0
    res = solve_maxcut_sdp(c5)
    assert res.primal_value <= res.dual_value
    assert res.primal_value == pytest.approx(known, abs=1e-4)
    assert res.dual_value == pytest.approx(known, abs=1e-4)
    assert oracles.maxcut_bruteforce(5, c5.edges()) == 4
    assert res.dual_value > 4.0


def test_k6_relaxation_is_tight():
    res = solve_maxcut_sdp(GraphSpec.complete(6))
    assert res.primal_value == pytest.approx(9.0, abs=1e-6)
    assert res.dual_value == pytest.approx(9.0, abs=1e-6)
    assert res.dual_value >= 9.0 - 1e-9  # a certified upper bound on cut_max
    assert oracles.maxcut_bruteforce(6, GraphSpec.complete(6).edges()) == 9


def test_dual_point_certified_psd():
    # the returned dual vector must satisfy A - diag(u') >= 0; dense
    # eigenvalues are the independent oracle for the power-iteration path
    for seed in range(6):
        g = GraphSpec.erdos_renyi(12, 0.4, seed=seed)
        if not g.edges():
            continue
        res = solve_maxcut_sdp(g, seed=seed)
        n = g.n
        adj = np.zeros((n, n))
        for i, j in g.edges():
            adj[i - 1, j - 1] = adj[j - 1, i - 1] = 1.0
        eigs = np.linalg.eigvalsh(adj - np.diag(res.dual_vector))
        assert eigs[0] >= -1e-10
        assert res.dual_value == pytest.approx(
            0.5 * len(g.edges()) - 0.25 * res.dual_vector.sum())
        assert res.dual_value >= res.primal_value - 1e-9


def test_lambda_min_matches_dense_solver():
    from paritybounds.sdp import certified_lambda_min

    rng = np.random.default_rng(3)
    for _ in range(5):
        mat = rng.standard_normal((15, 15))
        mat = mat + mat.T
        dense = float(np.linalg.eigvalsh(mat)[0])
        lam, vec = lambda_min_sym(mat, seed=4)
        assert lam == pytest.approx(dense, abs=1e-5)  # escape-detection accuracy
        cert = certified_lambda_min(mat)
        assert cert == pytest.approx(dense, abs=1e-9)
        assert cert <= dense + 1e-12  # never overshoots


def test_relaxation_upper_bounds_cut():
    for seed in range(8):
        g = GraphSpec.erdos_renyi(9, 0.5, seed=seed)
        if not g.edges():
            continue
        res = solve_maxcut_sdp(g, seed=seed)
        cut = oracles.maxcut_bruteforce(9, g.edges())
        assert res.dual_value >= cut - 1e-9
        assert res.primal_value <= res.dual_value + 1e-12


def test_tripartition_values_on_complete_graphs():
    assert tripartition_a1_upper(encode_maxcut(GraphSpec.complete(6))) == -9.0
    assert tripartition_a1_upper(encode_maxcut(GraphSpec.complete(9))) == -18.0
    with pytest.raises(ValueError):
        tripartition_a1_upper(encode_maxcut(GraphSpec.complete(5)))


@pytest.mark.parametrize("n", [6, 8, 10, 12])
def test_tripartition_upper_bounds_a1(n):
    for seed in (1, 2, 3):
        g = GraphSpec.erdos_renyi(n, 0.5, seed=seed)
        if not g.edges():
            continue
        inst = encode_maxcut(g)
        a1 = min_over_defect_count(inst, layout(n), 1)
        assert tripartition_a1_upper(inst) >= a1 - 1e-9


def test_tripartition_on_gaussian_instance():
    inst = sample_instance(DistributionSpec.normal(0, 1), GraphSpec.complete(8), seed=77)
    a1 = min_over_defect_count(inst, layout(8), 1)
    assert tripartition_a1_upper(inst) >= a1 - 1e-12


def test_c1_sdp_k6_matches_exact():
    bound = c1_sdp_bound(GraphSpec.complete(6))
    assert bound.value == pytest.approx(8.0, abs=1e-5)
    assert bound.value <= 8.0 + 1e-12
    assert bound.a1_plus == -9.0
    assert bound.meaningful


def test_c1_sdp_soundness_sample():
    checked = 0
    for seed in range(10):
        g = GraphSpec.erdos_renyi(10, 0.4, seed=seed)
        if len(g.edges()) == 0:
            continue
        bound = c1_sdp_bound(g, seed=seed)
        inst = encode_maxcut(g)
        exact = logical_spectrum(inst).e - min_over_defect_count(inst, layout(10), 1)
        assert bound.value <= exact + 1e-9
        checked += 1
    assert checked >= 8


def test_empty_graph_flagged():
    bound = c1_sdp_bound(GraphSpec.erdos_renyi(8, 0.0))
    assert not bound.meaningful
    assert math.isnan(bound.value)


def test_growth_exponent_drifts_upward():
    # mean certified bound on ER(p=0.4): the local log-log slope between
    # n=40..80 exceeds the slope between n=20..40
    means = {}
    for n in (20, 40, 80):
        vals = []
        for seed in range(6):
            g = GraphSpec.erdos_renyi(n, 0.4, seed=1000 + 17 * n + seed)
            vals.append(c1_sdp_bound(g, seed=seed).value)
        means[n] = sum(vals) / len(vals)
    slope_lo = math.log(means[40] / means[20]) / math.log(2.0)
    slope_hi = math.log(means[80] / means[40]) / math.log(2.0)
    assert slope_hi > slope_lo
