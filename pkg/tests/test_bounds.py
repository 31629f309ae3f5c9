import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paritybounds.bounds import (
    ConstraintAssignment,
    homogeneous_optimum,
    solve_lp,
    verify_assignment,
)
from paritybounds.instances import (
    DistributionSpec,
    GraphSpec,
    IsingInstance,
    encode_maxcut,
    sample_instance,
)
from paritybounds.parity import PhysicalState, layout
from paritybounds.solver import logical_spectrum, restricted_minimum

import oracles


def ferro(n):
    return IsingInstance(n=n, couplings={(i, j): -1.0 for i in range(1, n + 1)
                                         for j in range(i + 1, n + 1)}, dense=True)


def gaussian(n, seed):
    return sample_instance(DistributionSpec.normal(0, 1), GraphSpec.complete(n), seed=seed)


def test_ferromagnet_c_hat():
    for n in (5, 6, 9):
        rep = homogeneous_optimum(ferro(n), layout(n), k_max=2)
        assert rep.c_hat == 2 * n - 4
        assert rep.lower[0] == 2 * n - 4  # binding bound is c_{-1}


def test_antiferromagnet_k6_and_k4():
    rep6 = homogeneous_optimum(encode_maxcut(GraphSpec.complete(6)), layout(6), k_max=1)
    assert rep6.lower[0] == 8.0
    rep4 = homogeneous_optimum(encode_maxcut(GraphSpec.complete(4)), layout(4), k_max=1)
    assert rep4.lower[0] == 4.0


def test_report_fields():
    inst = gaussian(6, 3)
    rep = homogeneous_optimum(inst, layout(6), k_max=2)
    sp = logical_spectrum(inst)
    assert rep.l0 == sp.l0 and rep.e == sp.e and rep.gap == sp.gap
    assert rep.p0 == inst.p0()
    assert rep.trivial == 2 * abs(inst.p0())
    assert rep.upper[0] == pytest.approx(sp.e - inst.p0())
    assert not rep.full_range
    doc = rep.to_dict()
    assert "lower bound" in doc["c_hat_label"]


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_chain_property_random_instances(seed):
    # c_hat <= c_q <= ... <= c_1 <= c_0 <= 2|p0| on the full defect range
    inst = gaussian(6, seed)
    rep = homogeneous_optimum(inst, layout(6), full=True)
    assert rep.full_range
    chain = [rep.c_hat] + list(reversed(rep.upper)) + [rep.trivial]
    for lo, hi in zip(chain, chain[1:]):
        assert lo <= hi + 1e-9
    assert rep.c_hat <= rep.trivial + 1e-9  # quadratic cap


def test_chain_holds_with_truncated_range_too():
    inst = gaussian(8, 11)
    rep = homogeneous_optimum(inst, layout(8), k_max=2)
    assert rep.c_hat <= rep.upper[2] + 1e-12
    assert rep.upper[2] <= rep.upper[1] + 1e-12
    assert rep.upper[1] <= rep.upper[0] + 1e-12
    assert rep.upper[0] <= rep.trivial + 1e-12


def test_verify_tight_assignment_and_perturbation():
    inst = gaussian(5, 21)
    lay = layout(5)
    rep = homogeneous_optimum(inst, lay, full=True)
    good = verify_assignment(inst, lay, ConstraintAssignment.homogeneous(rep.c_hat), full=True)
    assert good.satisfied
    assert good.slack == pytest.approx(0.0, abs=1e-9)
    bad = verify_assignment(
        inst, lay, ConstraintAssignment.homogeneous(rep.c_hat * (1 - 1e-6)), full=True)
    assert not bad.satisfied
    assert bad.worst_omega is not None


def test_verify_truncated_family():
    inst = gaussian(7, 2)
    lay = layout(7)
    rep = homogeneous_optimum(inst, lay, k_max=2)
    verdict = verify_assignment(
        inst, lay, ConstraintAssignment.homogeneous(rep.c_hat), k_max=2)
    assert verdict.satisfied
    assert verdict.family == "k<=2"
    assert verdict.checked == lay.q + lay.q * (lay.q - 1) // 2


def test_certification_of_physical_spectrum():
    # with c = c_hat every non-logical state sits at or above e and the
    # ground space is exactly the logical subspace image
    inst = gaussian(5, 33)
    lay = layout(5)
    rep = homogeneous_optimum(inst, lay, full=True)
    sp = logical_spectrum(inst)
    assign = rep.c_hat
    ground_profiles = set()
    for bits in range(1 << lay.m):
        state = PhysicalState(bits)
        energy = lay.physical_energy(state, inst, assign)
        profile = lay.violated_plaquettes(state)
        assert energy >= sp.l0 - 1e-9
        if energy < sp.l0 + 1e-9:
            ground_profiles.add(profile)
        if profile:
            assert energy >= sp.e - 1e-9
    assert ground_profiles == {frozenset()}


def test_single_constraint_lp():
    inst = gaussian(5, 13)
    lay = layout(5)
    sp = logical_spectrum(inst)
    omega = frozenset({(1, 2)})
    a = restricted_minimum(inst, omega, lay)
    sol = solve_lp(inst, lay, profiles=[omega])
    assert sol.assignment.strength((1, 2)) == pytest.approx(max(0.0, sp.e - a), abs=1e-9)
    for p in lay.plaquettes:
        if p != (1, 2):
            assert sol.assignment.strength(p) == pytest.approx(0.0, abs=1e-12)


def test_k1_family_lp_is_per_plaquette_max():
    inst = gaussian(5, 13)
    lay = layout(5)
    sp = logical_spectrum(inst)
    sol = solve_lp(inst, lay, k_max=1)
    # singleton constraints decouple: c_p = max(0, e - a_p) on each plaquette
    for p in lay.plaquettes:
        expected = max(0.0, sp.e - restricted_minimum(inst, {p}, lay))
        assert sol.assignment.strength(p) == pytest.approx(expected, abs=1e-9)


def test_full_lp_verifies_and_bounds():
    inst = gaussian(5, 44)
    lay = layout(5)
    sol = solve_lp(inst, lay, full=True)
    assert sol.certified
    assert sol.max_violation <= 1e-9
    verdict = verify_assignment(inst, lay, sol.assignment, full=True)
    assert verdict.satisfied
    # duality
    assert sol.objective == pytest.approx(sol.dual_objective, rel=1e-7)
    # homogeneous point is feasible, so the LP can only do better
    rep = homogeneous_optimum(inst, lay, full=True)
    assert sol.objective <= lay.q * rep.c_hat + 1e-9


def test_full_lp_k4_ferromagnet():
    inst = ferro(4)
    lay = layout(4)
    sol = solve_lp(inst, lay, full=True)
    rep = homogeneous_optimum(inst, lay, full=True)
    assert sol.objective <= lay.q * rep.c_hat + 1e-9


def test_lp_capacity_gate():
    from paritybounds.solver import CapacityError
    with pytest.raises(CapacityError):
        solve_lp(gaussian(7, 1), layout(7), full=True)


def test_negative_strength_flagging():
    assert ConstraintAssignment.homogeneous(-1.0).has_negative
    assert not ConstraintAssignment.homogeneous(1.0).has_negative
    assert ConstraintAssignment.from_map({(1, 2): -0.5, (1, 3): 1.0}).has_negative
