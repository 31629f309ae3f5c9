"""Exact logical spectra and restricted minima by exhaustive enumeration.

Global spin-flip symmetry halves the state space: spin 1 is pinned to +1 and
the remaining n-1 spins are enumerated. Energies for all 2^(n-1)
configurations are produced by a meet-in-the-middle block decomposition
(split the free spins in two halves, add the half energies through one outer
sum plus a single cross-coupling matrix product), which keeps the n ~ 20-24
range fast inside numpy.

For integral couplings every intermediate is an exactly representable float
(all values are small integers), so spectra and restricted minima are exact;
for real couplings eigenvalue ties use a documented relative tolerance.

Restricted minima use the sign-flip reduction: the minimum of the field term
over the defect subspace S_omega equals the logical ground energy of the
instance with J_ij negated on every site in the XOR of omega's defect masks.

Any constant instance offset (MinBisection's u*n) is included in all reported
energies, so spectra match the encoded Hamiltonian; bound-style differences
are unaffected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .parity import ParityLayout

DEFAULT_ENUM_CAP = 24
DEFAULT_BUDGET = 1 << 28  # max (#profiles) * 2^(n-1) work units
TIE_RTOL = 1e-9
# above this many states per spectrum, restricted minima fall back from the
# batched mask x state matrix to one meet-in-the-middle solve per mask
_BATCH_STATE_LIMIT = 1 << 15


class CapacityError(Exception):
    """Requested enumeration exceeds the configured size or budget caps."""


@dataclass(frozen=True)
class SpectrumSummary:
    """Ground and first-excited data of a logical spectrum."""

    n: int
    l0: float
    e: float
    gap: float
    ground_degeneracy: int
    argmin: tuple[int, ...]

    @property
    def degenerate(self) -> bool:
        return self.gap == 0.0


@dataclass
class RestrictedMinima:
    """Explicit per-profile minima plus the size-k aggregates a_k."""

    a_omega: dict
    a_k: dict  # k -> min over |omega| = k


@lru_cache(maxsize=16)
def _half_signs(bits: int) -> np.ndarray:
    """(2^bits, bits) matrix of +-1 rows; bit t of the row index gives column t
    (bit 1 -> spin -1)."""
    idx = np.arange(1 << bits, dtype=np.uint32)
    b = (idx[:, None] >> np.arange(bits, dtype=np.uint32)) & 1
    return 1.0 - 2.0 * b.astype(np.float64)


def _energy_array(w: np.ndarray) -> np.ndarray:
    """Energies of all 2^(n-1) configurations with spin 1 pinned to +1.

    Index bit t (little-endian) carries spin t+2; flat index follows
    s = b_index << h1 | a_index for the two halves.
    """
    n = w.shape[0]
    nb = n - 1
    h1 = nb // 2
    h2 = nb - h1
    ia = np.arange(1, 1 + h1)
    ib = np.arange(1 + h1, n)
    sa = _half_signs(h1)
    sb = _half_signs(h2)

    def half_energy(s, idx):
        if idx.size == 0:
            return np.zeros(s.shape[0])
        e = s @ w[idx, 0]
        wii = w[np.ix_(idx, idx)]
        e += 0.5 * np.einsum("ij,ij->i", s @ wii, s)
        return e

    ea = half_energy(sa, ia)
    eb = half_energy(sb, ib)
    cross = (sb @ w[np.ix_(ib, ia)]) @ sa.T if h1 and h2 else 0.0
    return (eb[:, None] + ea[None, :] + cross).ravel()


def _decode_spins(index: int, n: int) -> tuple[int, ...]:
    spins = [1]
    for t in range(n - 1):
        spins.append(1 if (index >> t) & 1 == 0 else -1)
    return tuple(spins)


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapacityError(f"n={n} exceeds the enumeration cap of {cap}")


def logical_spectrum(inst, cap: int = DEFAULT_ENUM_CAP) -> SpectrumSummary:
    """Exact l0, first excited e, gap and ground degeneracy.

    Degeneracy counts all 2^n logical configurations (a state and its global
    flip both count). A fully degenerate spectrum reports e = l0 and gap 0.
    """
    _check_cap(inst.n, cap)
    arr = _energy_array(inst.weight_matrix())
    i0 = int(arr.argmin())
    l0 = float(arr[i0])
    tol = 0.0 if inst.is_integral() else TIE_RTOL * max(1.0, abs(l0))
    ground = arr <= l0 + tol
    count = int(ground.sum())
    if count < arr.size:
        e = float(np.min(arr, initial=np.inf, where=~ground))
    else:
        e = l0
    off = inst.offset
    return SpectrumSummary(
        n=inst.n,
        l0=l0 + off,
        e=e + off,
        gap=e - l0,
        ground_degeneracy=2 * count,
        argmin=_decode_spins(i0, inst.n),
    )


@lru_cache(maxsize=4)
def _pair_columns(n: int) -> np.ndarray:
    """(2^(n-1), m) matrix of site signs s_i s_j for every configuration."""
    s = np.hstack([np.ones((1 << (n - 1), 1)), _half_signs(n - 1)])
    cols = [s[:, i - 1] * s[:, j - 1]
            for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return np.column_stack(cols)


def _coupling_vector(inst, layout: ParityLayout) -> np.ndarray:
    j = np.zeros(layout.m)
    for e, v in inst.couplings.items():
        j[layout.site_index[e]] = v
    return j


def _sign_matrix_from_mask(mask: int, layout: ParityLayout) -> np.ndarray:
    s = np.ones((layout.n, layout.n))
    for b, (i, j) in enumerate(layout.sites):
        if (mask >> b) & 1:
            s[i - 1, j - 1] = s[j - 1, i - 1] = -1.0
    return s


def _mask_bit_matrix(masks, m: int) -> np.ndarray:
    """(count, m) 0/1 matrix from arbitrary-width Python int masks."""
    nbytes = (m + 7) // 8
    buf = b"".join(int(x).to_bytes(nbytes, "little") for x in masks)
    packed = np.frombuffer(buf, dtype=np.uint8).reshape(len(masks), nbytes)
    return np.unpackbits(packed, axis=1, bitorder="little")[:, :m]


def _minima_for_mask_bits(inst, layout: ParityLayout, bits: np.ndarray) -> np.ndarray:
    """Batched minima for mask rows given as a 0/1 bit matrix (small n path)."""
    t = _pair_columns(layout.n)
    jvec = _coupling_vector(inst, layout)
    states = t.shape[0]
    out = np.empty(bits.shape[0])
    chunk = max(1, (1 << 22) // states)
    for lo in range(0, bits.shape[0], chunk):
        rows = (1.0 - 2.0 * bits[lo:lo + chunk].astype(np.float64)) * jvec
        out[lo:lo + chunk] = (rows @ t.T).min(axis=1)
    return out + inst.offset


def minima_for_masks(inst, layout: ParityLayout, masks) -> np.ndarray:
    """min over configurations of sum J_ij * sign(mask, ij) * s_i s_j, per mask.

    This is the field-term minimum over the defect subspace whose combined
    flip mask is given (instance offset included).
    """
    masks = list(masks)
    if not masks:
        return np.zeros(0)
    n = layout.n
    if (1 << (n - 1)) <= _BATCH_STATE_LIMIT:
        return _minima_for_mask_bits(inst, layout, _mask_bit_matrix(masks, layout.m))
    w = inst.weight_matrix()
    out = np.empty(len(masks))
    for k, mask in enumerate(masks):
        out[k] = _energy_array(w * _sign_matrix_from_mask(mask, layout)).min()
    return out + inst.offset


def restricted_minimum(inst, omega, layout: ParityLayout,
                       cap: int = DEFAULT_ENUM_CAP) -> float:
    """a_omega: minimal field energy over the defect subspace S_omega."""
    omega = frozenset(tuple(p) for p in omega)
    if not omega:
        raise ValueError("empty defect profile: use logical_spectrum instead")
    _check_cap(inst.n, cap)
    if inst.n != layout.n:
        raise ValueError("instance size does not match layout")
    mask = layout.combined_mask(omega)
    return float(minima_for_masks(inst, layout, [mask])[0])


def min_over_defect_count(inst, layout: ParityLayout, k: int,
                          budget: int | None = None,
                          cap: int = DEFAULT_ENUM_CAP) -> float:
    """a_k: minimum of a_omega over all profiles with |omega| = k.

    Profile counts explode combinatorially; k >= 3 therefore requires an
    explicit budget (max profiles * 2^(n-1) work units).
    """
    _check_cap(inst.n, cap)
    q = layout.q
    if not 1 <= k <= q:
        raise ValueError(f"defect count k={k} outside 1..{q}")
    if budget is None:
        if k >= 3:
            raise CapacityError(
                f"a_{k} needs an explicit budget (C({q},{k}) = {comb(q, k)} profiles)")
        budget = DEFAULT_BUDGET
    count = comb(q, k)
    work = count * (1 << (inst.n - 1))
    if work > budget:
        raise CapacityError(
            f"a_{k} requires {count} profiles x 2^{inst.n - 1} states "
            f"({work} work units) > budget {budget}")
    base = layout._defect_masks
    best = np.inf
    combos = itertools.combinations(range(q), k)
    while True:
        block = list(itertools.islice(combos, 4096))
        if not block:
            break
        masks = []
        for combo in block:
            mask = 0
            for b in combo:
                mask ^= base[b]
            masks.append(mask)
        best = min(best, float(minima_for_masks(inst, layout, masks).min()))
    return best


def _combined_mask_bits_all_profiles(layout: ParityLayout) -> np.ndarray:
    """(2^q, m) bit matrix: combined defect mask of every profile index."""
    q = layout.q
    base = _mask_bit_matrix(layout._defect_masks, layout.m)
    out = np.zeros((1 << q, layout.m), dtype=np.uint8)
    for b in range(q):
        lo = 1 << b
        out[lo:2 * lo] = out[:lo] ^ base[b]
    return out


def _popcounts(q: int) -> np.ndarray:
    pc = np.zeros(1 << q, dtype=np.uint8)
    for b in range(q):
        lo = 1 << b
        pc[lo:2 * lo] = pc[:lo] + 1
    return pc


def all_defect_minima(inst, layout: ParityLayout,
                      budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """a_k for every k = 1..q at once, sweeping all 2^q - 1 profiles.

    Returns an array with entry k-1 holding a_k. Feasible up to n = 8
    (2^21 profiles) under the default budget.
    """
    q = layout.q
    work = (1 << q) * (1 << (inst.n - 1))
    if work > budget:
        raise CapacityError(
            f"full defect sweep needs 2^{q} profiles x 2^{inst.n - 1} states "
            f"({work} work units) > budget {budget}")
    mask_bits = _combined_mask_bits_all_profiles(layout)
    pc = _popcounts(q)
    a_k = np.full(q, np.inf)
    chunk = max(1, (1 << 22) // (1 << (inst.n - 1)))
    for lo in range(1, 1 << q, chunk):
        hi = min(lo + chunk, 1 << q)
        mins = _minima_for_mask_bits(inst, layout, mask_bits[lo:hi])
        np.minimum.at(a_k, pc[lo:hi].astype(np.intp) - 1, mins)
    return a_k


def restricted_minima_map(inst, layout: ParityLayout,
                          max_n: int = 6) -> RestrictedMinima:
    """a_omega for every non-empty profile (small n only: 2^q - 1 profiles)."""
    if inst.n > max_n:
        raise CapacityError(f"per-profile sweep capped at n={max_n}")
    q = layout.q
    mask_bits = _combined_mask_bits_all_profiles(layout)
    mins = _minima_for_mask_bits(inst, layout, mask_bits[1:])
    pc = _popcounts(q)
    a_omega = {}
    a_k: dict[int, float] = {}
    for idx in range(1, 1 << q):
        omega = frozenset(layout.plaquettes[b] for b in range(q) if (idx >> b) & 1)
        val = float(mins[idx - 1])
        a_omega[omega] = val
        k = int(pc[idx])
        if val < a_k.get(k, np.inf):
            a_k[k] = val
    return RestrictedMinima(a_omega=a_omega, a_k=a_k)
