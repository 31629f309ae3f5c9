"""Parity layout for n logical spins: sites, plaquettes, defects, energies.

Physical spins sit on the edges (i, j) of K_n (m = n(n-1)/2 sites) and carry
the relative orientation s_(i,j) = s_i * s_j of the logical spins. Plaquettes
are labeled by pairs [i, j] with 1 <= i < j <= n-1 (q = (n-1)(n-2)/2 of them);
plaquette [i, j] constrains the product of its four member sites
(i,j), (i,j+1), (i+1,j), (i+1,j+1) to +1, and the bottom row j = i+1
degenerates to the 3-local triple (i,i+1), (i,i+2), (i+1,i+2).

Bit convention: bit b = 1 means spin -1 at site(b), bit 0 means +1, so XOR
implements spin products. Sites are bit-indexed in lexicographic (i, j) order;
this ordering is fixed so masks are portable across runs.

A violated plaquette contributes its full strength c_ij to the energy and a
satisfied one contributes nothing. (The physical Hamiltonian's -c/2 * product
form differs from this only by the constant shift sum c_ij / 2, and every
bound downstream depends on penalty differences only; the normalization makes
"energy of a constraint-satisfying state equals logical energy" exact.)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

Plaquette = tuple[int, int]
DefectProfile = frozenset  # of Plaquette


@dataclass(frozen=True)
class PhysicalState:
    """m-bit word; bit b = 1 means spin -1 at site(b)."""

    bits: int

    def xor(self, mask: int) -> "PhysicalState":
        return PhysicalState(self.bits ^ mask)


class ParityLayout:
    """Index structures for the parity encoding of n logical spins."""

    def __init__(self, n: int):
        if n < 3:
            raise ValueError("parity layout needs n >= 3")
        self.n = n
        self.sites: list[tuple[int, int]] = [
            (i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
        ]
        self.m = len(self.sites)
        self.site_index: dict[tuple[int, int], int] = {
            s: b for b, s in enumerate(self.sites)
        }
        self.plaquettes: list[Plaquette] = [
            (i, j) for i in range(1, n) for j in range(i + 1, n)
        ]
        self.q = len(self.plaquettes)
        self.plaquette_index: dict[Plaquette, int] = {
            p: k for k, p in enumerate(self.plaquettes)
        }
        self._members: list[tuple[int, ...]] = [
            tuple(self.site_index[s] for s in self.plaquette_members(p))
            for p in self.plaquettes
        ]
        self._member_masks: list[int] = [
            sum(1 << b for b in mem) for mem in self._members
        ]
        self._defect_masks: list[int] = [
            self._rectangle_mask(k, l) for (k, l) in self.plaquettes
        ]

    def plaquette_members(self, plaquette: Plaquette) -> tuple[tuple[int, int], ...]:
        """Member sites of a plaquette: 4-local, or 3-local on the bottom row."""
        i, j = self._check_plaquette(plaquette)
        if j == i + 1:
            return ((i, i + 1), (i, i + 2), (i + 1, i + 2))
        return ((i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1))

    def _check_plaquette(self, plaquette: Plaquette) -> Plaquette:
        i, j = plaquette
        if not (1 <= i < j <= self.n - 1):
            raise ValueError(f"invalid plaquette {plaquette} for n={self.n}")
        return (i, j)

    def _rectangle_mask(self, k: int, l: int) -> int:
        mask = 0
        for (i, j), b in self.site_index.items():
            if i <= k and j > l:
                mask |= 1 << b
        return mask

    def defect_mask(self, plaquette: Plaquette) -> int:
        """Bitmask of sites {(i, j): i <= k, j > l} for plaquette [k, l].

        XOR-applying the mask to any state flips the parity of exactly this
        plaquette (verified exhaustively in the tests).
        """
        self._check_plaquette(plaquette)
        return self._defect_masks[self.plaquette_index[plaquette]]

    def combined_mask(self, omega) -> int:
        """XOR of the defect masks of a set of plaquettes."""
        mask = 0
        for p in omega:
            mask ^= self.defect_mask(tuple(p))
        return mask

    def logical_to_physical(self, spins: Sequence[int]) -> PhysicalState:
        """Map logical spins (+-1) to the physical state s_(i,j) = s_i s_j."""
        if len(spins) != self.n:
            raise ValueError(f"expected {self.n} logical spins, got {len(spins)}")
        bits = 0
        for b, (i, j) in enumerate(self.sites):
            if spins[i - 1] * spins[j - 1] < 0:
                bits |= 1 << b
        return PhysicalState(bits)

    def violated_plaquettes(self, state: PhysicalState) -> DefectProfile:
        """Plaquettes with an odd number of down spins among their members."""
        bits = state.bits
        out = []
        for p, mmask in zip(self.plaquettes, self._member_masks):
            if (bits & mmask).bit_count() & 1:
                out.append(p)
        return frozenset(out)

    def field_energy(self, state: PhysicalState, inst) -> float:
        """sum J_ij s_(i,j) over the instance couplings."""
        bits = state.bits
        total = 0.0
        idx = self.site_index
        for e, v in inst.couplings.items():
            total += -v if (bits >> idx[e]) & 1 else v
        return total

    def physical_energy(self, state: PhysicalState, inst, constraints) -> float:
        """Field energy plus the strengths of all violated plaquettes.

        ``constraints`` may be a single homogeneous strength, a mapping from
        plaquette label to strength, or any object with a ``strength(p)``
        method.
        """
        if inst.n != self.n:
            raise ValueError("instance size does not match layout")
        penalty = 0.0
        violated = self.violated_plaquettes(state)
        if isinstance(constraints, (int, float)):
            penalty = constraints * len(violated)
        elif isinstance(constraints, Mapping):
            penalty = sum(constraints[p] for p in violated)
        else:
            penalty = sum(constraints.strength(p) for p in violated)
        return self.field_energy(state, inst) + penalty

    def dump(self) -> str:
        """Text table of plaquette -> member sites and defect mask bits."""
        lines = [f"parity layout n={self.n} m={self.m} q={self.q}"]
        for p in self.plaquettes:
            members = " ".join(f"({i},{j})" for i, j in self.plaquette_members(p))
            mask = self.defect_mask(p)
            flipped = " ".join(
                f"({i},{j})" for (i, j), b in self.site_index.items() if (mask >> b) & 1
            )
            lines.append(f"[{p[0]},{p[1]}] members: {members} | mask: {flipped}")
        return "\n".join(lines)


@lru_cache(maxsize=8)
def layout(n: int) -> ParityLayout:
    """Cached layout builder (layouts are immutable)."""
    return ParityLayout(n)
