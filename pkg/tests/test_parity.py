import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paritybounds.instances import DistributionSpec, GraphSpec, sample_instance
from paritybounds.parity import ParityLayout, PhysicalState, layout

import oracles


@pytest.mark.parametrize("n", range(3, 10))
def test_layout_counts(n):
    lay = ParityLayout(n)
    assert lay.m == n * (n - 1) // 2
    assert lay.q == (n - 1) * (n - 2) // 2
    # each constraint-satisfying subspace keeps 2^(n-1) states
    assert lay.m - lay.q == n - 1


def test_plaquette_members_n5():
    lay = layout(5)
    # bottom row is 3-local
    assert lay.plaquette_members((1, 2)) == ((1, 2), (1, 3), (2, 3))
    assert lay.plaquette_members((2, 3)) == ((2, 3), (2, 4), (3, 4))
    # interior plaquettes are 4-local
    assert lay.plaquette_members((1, 3)) == ((1, 3), (1, 4), (2, 3), (2, 4))
    assert lay.plaquette_members((2, 4)) == ((2, 4), (2, 5), (3, 4), (3, 5))
    with pytest.raises(ValueError):
        lay.plaquette_members((1, 5))


def test_logical_to_physical_examples():
    lay = layout(4)
    assert lay.logical_to_physical((1, 1, 1, 1)).bits == 0
    state = lay.logical_to_physical((1, 1, -1, -1))
    down = {s for s, b in lay.site_index.items() if (state.bits >> b) & 1}
    assert down == {(1, 3), (1, 4), (2, 3), (2, 4)}
    with pytest.raises(ValueError):
        lay.logical_to_physical((1, 1, 1))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_all_logical_images_satisfy_constraints(n):
    lay = layout(n)
    for spins in itertools.product((1, -1), repeat=n):
        assert lay.violated_plaquettes(lay.logical_to_physical(spins)) == frozenset()


def test_defect_mask_examples_n4():
    lay = layout(4)
    def sites_of(mask):
        return {s for s, b in lay.site_index.items() if (mask >> b) & 1}
    assert sites_of(lay.defect_mask((2, 3))) == {(1, 4), (2, 4)}
    assert sites_of(lay.defect_mask((1, 2))) == {(1, 3), (1, 4)}
    with pytest.raises(ValueError):
        lay.defect_mask((3, 3))


@pytest.mark.parametrize("n", range(3, 9))
def test_mask_flips_exactly_one_plaquette(n):
    lay = layout(n)
    base = lay.logical_to_physical((1,) * n)
    for p in lay.plaquettes:
        flipped = base.xor(lay.defect_mask(p))
        assert lay.violated_plaquettes(flipped) == frozenset({p})


def test_fig_style_defect_profiles():
    lay = layout(5)
    img = lay.logical_to_physical((1, -1, 1, -1, 1))
    s = img.xor(lay.defect_mask((2, 3)))
    assert lay.violated_plaquettes(s) == frozenset({(2, 3)})
    lay6 = layout(6)
    img6 = lay6.logical_to_physical((1, 1, -1, 1, -1, 1))
    s6 = img6.xor(lay6.defect_mask((2, 3))).xor(lay6.defect_mask((3, 5)))
    assert lay6.violated_plaquettes(s6) == frozenset({(2, 3), (3, 5)})


@given(st.integers(0, 2**20), st.integers(0, 2**20), st.integers(0, 2**20))
@settings(max_examples=30, deadline=None)
def test_mask_group_structure(state_bits, sel1, sel2):
    # violated(s ^ mask_w) = violated(s) symmetric-difference w
    lay = layout(6)
    s = PhysicalState(state_bits & ((1 << lay.m) - 1))
    w1 = frozenset(p for i, p in enumerate(lay.plaquettes) if (sel1 >> i) & 1)
    w2 = frozenset(p for i, p in enumerate(lay.plaquettes) if (sel2 >> i) & 1)
    v0 = lay.violated_plaquettes(s)
    v1 = lay.violated_plaquettes(s.xor(lay.combined_mask(w1)))
    assert v1 == v0.symmetric_difference(w1)
    v12 = lay.violated_plaquettes(s.xor(lay.combined_mask(w1) ^ lay.combined_mask(w2)))
    assert v12 == v0.symmetric_difference(w1.symmetric_difference(w2))


def test_global_flip_maps_to_same_physical_state():
    lay = layout(5)
    for spins in itertools.product((1, -1), repeat=5):
        flipped = tuple(-s for s in spins)
        assert lay.logical_to_physical(spins) == lay.logical_to_physical(flipped)


@pytest.mark.parametrize("n", [4, 5])
def test_subspace_dimensions(n):
    lay = layout(n)
    counts = {}
    for bits in range(1 << lay.m):
        prof = lay.violated_plaquettes(PhysicalState(bits))
        counts[prof] = counts.get(prof, 0) + 1
    assert len(counts) == 1 << lay.q
    assert set(counts.values()) == {1 << (n - 1)}


def test_physical_energy_matches_logical_on_images():
    lay = layout(4)
    inst = sample_instance(DistributionSpec.normal(0, 1), GraphSpec.complete(4), seed=3)
    for spins in itertools.product((1, -1), repeat=4):
        img = lay.logical_to_physical(spins)
        assert lay.physical_energy(img, inst, 0.7) == pytest.approx(inst.energy(spins))


def test_physical_energy_single_defect_penalty():
    lay = layout(4)
    inst = sample_instance(DistributionSpec.normal(0, 1), GraphSpec.complete(4), seed=3)
    img = lay.logical_to_physical((1, 1, 1, 1))
    state = img.xor(lay.defect_mask((1, 3)))
    c = 2.5
    assert lay.physical_energy(state, inst, c) == pytest.approx(
        lay.field_energy(state, inst) + c)
    # per-plaquette mapping and homogeneous value agree
    per = {p: c for p in lay.plaquettes}
    assert lay.physical_energy(state, inst, per) == pytest.approx(
        lay.physical_energy(state, inst, c))


def test_unconstrained_minimum_is_p0():
    # with zero constraint strength the physical minimum aligns every site
    lay = layout(4)
    inst = sample_instance(DistributionSpec.normal(0, 1), GraphSpec.complete(4), seed=11)
    best = min(lay.physical_energy(PhysicalState(b), inst, 0.0)
               for b in range(1 << lay.m))
    assert best == pytest.approx(inst.p0())


def test_layout_dump_lists_members_and_masks():
    text = layout(4).dump()
    assert "n=4 m=6 q=3" in text
    assert "[1,2] members: (1,2) (1,3) (2,3)" in text
    assert "mask:" in text
