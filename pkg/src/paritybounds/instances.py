"""Logical Ising instances: coupling distributions, random graphs, encoders.

An instance is a collection of couplings J_ij on edges of K_n (absent edges
mean J_ij = 0). MaxCut and MinBisection are provided as encodings into this
form; the MinBisection constant term u*n is carried as an energy offset,
never folded into the couplings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .rng import generator

Edge = tuple[int, int]

AUTO = "auto"


@dataclass(frozen=True)
class DistributionSpec:
    """Coupling distribution: normal(mu, sigma), uniform(a, b) or bimodal(p).

    For normal, ``sigma`` is the standard deviation. Bimodal draws +1 with
    probability p and -1 otherwise.
    """

    kind: str
    mu: float = 0.0
    sigma: float = 1.0
    a: float = -1.0
    b: float = 1.0
    p: float = 0.5

    def __post_init__(self):
        if self.kind not in ("normal", "uniform", "bimodal"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "normal" and self.sigma <= 0:
            raise ValueError("normal distribution requires sigma > 0")
        if self.kind == "uniform" and not self.a < self.b:
            raise ValueError("uniform distribution requires a < b")
        if self.kind == "bimodal" and not 0.0 <= self.p <= 1.0:
            raise ValueError("bimodal distribution requires p in [0, 1]")

    @classmethod
    def normal(cls, mu: float, sigma: float) -> "DistributionSpec":
        return cls(kind="normal", mu=mu, sigma=sigma)

    @classmethod
    def uniform(cls, a: float, b: float) -> "DistributionSpec":
        return cls(kind="uniform", a=a, b=b)

    @classmethod
    def bimodal(cls, p: float) -> "DistributionSpec":
        return cls(kind="bimodal", p=p)

    @classmethod
    def from_ratio(cls, kind: str, ratio: float) -> "DistributionSpec":
        """Unit-variance distribution of the given kind with mean/std = ratio."""
        if kind == "normal":
            return cls.normal(ratio, 1.0)
        if kind == "uniform":
            # a = mu - sqrt(3), b = mu + sqrt(3) has sigma = 1 and mean ratio
            s = math.sqrt(3.0)
            return cls.uniform(ratio - s, ratio + s)
        if kind == "bimodal":
            # solve (2p-1)/(2 sqrt(p(1-p))) = ratio
            x = ratio / math.hypot(1.0, ratio)
            return cls.bimodal((1.0 + x) / 2.0)
        raise ValueError(f"unknown distribution kind {kind!r}")

    def ratio(self) -> float:
        """mu/sigma of the distribution; undefined for bimodal p in {0, 1}."""
        if self.kind == "normal":
            return self.mu / self.sigma
        if self.kind == "uniform":
            return math.sqrt(3.0) * (self.a + self.b) / abs(self.a - self.b)
        if self.p in (0.0, 1.0):
            raise ValueError("bimodal ratio undefined at p in {0, 1} (zero variance)")
        return (2.0 * self.p - 1.0) / (2.0 * math.sqrt(self.p * (1.0 - self.p)))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "normal":
            return rng.normal(self.mu, self.sigma, size)
        if self.kind == "uniform":
            return rng.uniform(self.a, self.b, size)
        return np.where(rng.random(size) < self.p, 1.0, -1.0)

    def label(self) -> str:
        if self.kind == "normal":
            return f"normal({self.mu},{self.sigma})"
        if self.kind == "uniform":
            return f"uniform({self.a},{self.b})"
        return f"bimodal({self.p})"


@dataclass(frozen=True)
class GraphSpec:
    """Complete graph K_n or an Erdos-Renyi realization G(n, p_edge, seed)."""

    kind: str
    n: int
    p_edge: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("complete", "erdos_renyi"):
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("graph needs n >= 1")
        if not 0.0 <= self.p_edge <= 1.0:
            raise ValueError("p_edge must lie in [0, 1]")

    @classmethod
    def complete(cls, n: int) -> "GraphSpec":
        return cls(kind="complete", n=n)

    @classmethod
    def erdos_renyi(cls, n: int, p_edge: float, seed: int = 0) -> "GraphSpec":
        return cls(kind="erdos_renyi", n=n, p_edge=p_edge, seed=seed)

    def edges(self) -> list[Edge]:
        """Edge list, deterministic for a given spec (lexicographic order)."""
        pairs = [(i, j) for i in range(1, self.n + 1) for j in range(i + 1, self.n + 1)]
        if self.kind == "complete":
            return pairs
        rng = generator(self.seed)
        u = rng.random(len(pairs))
        return [e for e, x in zip(pairs, u) if x < self.p_edge]

    def d_max(self) -> int:
        """Maximum vertex degree of the realized graph."""
        deg = [0] * (self.n + 1)
        for i, j in self.edges():
            deg[i] += 1
            deg[j] += 1
        return max(deg)


@dataclass(frozen=True)
class EdgeListGraph:
    """Explicit simple graph given by its edge list (i < j, 1-based)."""

    n: int
    edge_list: tuple

    kind = "explicit"
    p_edge = None
    seed = None

    def __post_init__(self):
        for (i, j) in self.edge_list:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"edge ({i},{j}) violates 1 <= i < j <= n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "EdgeListGraph":
        return cls(n=n, edge_list=tuple(sorted((int(i), int(j)) for i, j in edges)))

    def edges(self) -> list[Edge]:
        return list(self.edge_list)

    def d_max(self) -> int:
        deg = [0] * (self.n + 1)
        for i, j in self.edge_list:
            deg[i] += 1
            deg[j] += 1
        return max(deg)


@dataclass(frozen=True)
class IsingInstance:
    """n logical spins with couplings J_ij on edges (i, j), 1 <= i < j <= n.

    ``offset`` is a constant energy shift (used by the MinBisection encoding);
    it is reported alongside spectra but not part of any coupling.
    """

    n: int
    couplings: dict[Edge, float]
    dense: bool = False
    offset: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("instance needs n >= 1")
        for (i, j) in self.couplings:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"edge ({i},{j}) violates 1 <= i < j <= n={self.n}")

    def weight_matrix(self) -> np.ndarray:
        """Symmetric n x n matrix with W[i-1, j-1] = J_ij and zero diagonal."""
        w = np.zeros((self.n, self.n))
        for (i, j), v in self.couplings.items():
            w[i - 1, j - 1] = v
            w[j - 1, i - 1] = v
        return w

    def p0(self) -> float:
        """-sum |J_ij|: the unconstrained minimum of the local-field term."""
        return -sum(abs(v) for v in self.couplings.values())

    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in self.couplings.values())

    def scaled(self, k: float) -> "IsingInstance":
        return IsingInstance(
            n=self.n,
            couplings={e: k * v for e, v in self.couplings.items()},
            dense=self.dense,
            offset=k * self.offset,
            metadata=dict(self.metadata),
        )

    def energy(self, spins) -> float:
        """Logical energy sum J_ij s_i s_j (offset included) for spins in {-1, +1}."""
        s = list(spins)
        if len(s) != self.n:
            raise ValueError("spin configuration has wrong length")
        return self.offset + sum(v * s[i - 1] * s[j - 1] for (i, j), v in self.couplings.items())


def sample_instance(dist: DistributionSpec, graph: GraphSpec, seed: int) -> IsingInstance:
    """Draw one J_ij per edge of the realized graph; reproducible from seed."""
    edges = graph.edges()
    values = dist.sample(generator(seed), len(edges))
    return IsingInstance(
        n=graph.n,
        couplings={e: float(v) for e, v in zip(edges, values)},
        dense=graph.kind == "complete",
        metadata={"distribution": dist.label(), "seed": seed, "graph": graph.kind,
                  "p_edge": graph.p_edge},
    )


def encode_maxcut(graph: GraphSpec) -> IsingInstance:
    """Antiferromagnetic encoding J_ij = 1 on each edge.

    The maximum cut is recovered from the ground energy l0 as
    cut_max = (-l0 + |E|) / 2.
    """
    edges = graph.edges()
    if not edges:
        raise ValueError("maxcut encoding needs a non-empty graph")
    return IsingInstance(
        n=graph.n,
        couplings={e: 1.0 for e in edges},
        dense=graph.kind == "complete",
        metadata={"problem": "maxcut", "graph": graph.kind, "p_edge": graph.p_edge,
                  "graph_seed": graph.seed, "n_edges": len(edges)},
    )


def cut_from_ground_energy(l0: float, n_edges: int) -> float:
    return (-l0 + n_edges) / 2.0


def minbisection_penalty_threshold(graph: GraphSpec) -> float:
    return min(4 * graph.d_max(), graph.n) / 4.0


def encode_minbisection(graph: GraphSpec, u: float | str = AUTO) -> IsingInstance:
    """Ferromagnetic bisection encoding with magnetization penalty u (sum s)^2.

    The penalty expands to pairwise couplings J'_ij = -[(i,j) in E] + 2u on
    every pair of K_n plus a constant u*n, which is returned as the instance
    offset. AUTO sets u one unit above the sufficient threshold
    min(4 d_max, n)/4.
    """
    n = graph.n
    if n % 2 != 0:
        raise ValueError("bisection undefined for odd n")
    threshold = minbisection_penalty_threshold(graph)
    if u == AUTO:
        u = threshold + 1.0
    else:
        u = float(u)
        if u <= threshold:
            raise ValueError(
                f"penalty u={u} must exceed min(4*d_max, n)/4 = {threshold}")
    edge_set = set(graph.edges())
    couplings = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            couplings[(i, j)] = (-1.0 if (i, j) in edge_set else 0.0) + 2.0 * u
    return IsingInstance(
        n=n,
        couplings=couplings,
        dense=True,
        offset=u * n,
        metadata={"problem": "minbisection", "u": u, "graph": graph.kind,
                  "p_edge": graph.p_edge, "graph_seed": graph.seed,
                  "n_edges": len(edge_set)},
    )


def instance_to_dict(inst: IsingInstance) -> dict:
    return {
        "n": inst.n,
        "edges": [[i, j, v] for (i, j), v in sorted(inst.couplings.items())],
        "offset": inst.offset,
        "dense": inst.dense,
        "metadata": inst.metadata,
    }


def instance_from_dict(doc: dict) -> IsingInstance:
    return IsingInstance(
        n=int(doc["n"]),
        couplings={(int(i), int(j)): float(v) for i, j, v in doc.get("edges", [])},
        dense=bool(doc.get("dense", False)),
        offset=float(doc.get("offset", 0.0)),
        metadata=dict(doc.get("metadata", {})),
    )


def save_instance(inst: IsingInstance, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh, indent=1)
        fh.write("\n")


def load_instance(path) -> IsingInstance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))
