"""Energy-level graphs: which level pairs of a qudit can be driven, and how well."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import networkx as nx


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class EnergyLevelGraph:
    dim: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.dim < 2:
            raise GraphError(f"dimension must be >= 2, got {self.dim}")
        seen = {}
        for e in self.edges:
            i, j, f = int(e[0]), int(e[1]), float(e[2])
            if i == j:
                raise GraphError(f"self-loop on level {i}")
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise GraphError(f"edge ({i}, {j}) out of range for dimension {self.dim}")
            if not 0 < f <= 1:
                raise GraphError(f"edge ({i}, {j}) fidelity {f} not in (0, 1]")
            seen[(min(i, j), max(i, j))] = f
        object.__setattr__(self, "edges", tuple((i, j, f) for (i, j), f in sorted(seen.items())))

    @classmethod
    def path(cls, dim: int, fidelity: float = 1.0) -> "EnergyLevelGraph":
        return cls(dim, tuple((i, i + 1, fidelity) for i in range(dim - 1)))

    @classmethod
    def star(cls, dim: int, center: int = 0, fidelity: float = 1.0) -> "EnergyLevelGraph":
        return cls(dim, tuple((center, j, fidelity) for j in range(dim) if j != center))

    @classmethod
    def complete(cls, dim: int, fidelity: float = 1.0) -> "EnergyLevelGraph":
        return cls(dim, tuple((i, j, fidelity) for i in range(dim) for j in range(i + 1, dim)))

    @cached_property
    def nx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.dim))
        for i, j, f in self.edges:
            # -log f is additive along a path; minimizing it maximizes the fidelity product
            g.add_edge(i, j, fidelity=f, cost=-math.log(f))
        return g

    @cached_property
    def _fid(self) -> dict[tuple[int, int], float]:
        return {(i, j): f for i, j, f in self.edges}

    def is_connected(self) -> bool:
        return nx.is_connected(self.nx)

    def check_connected(self) -> None:
        if not self.is_connected():
            raise GraphError(f"energy-level graph of dimension {self.dim} is disconnected")

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._fid

    def fidelity(self, i: int, j: int) -> float:
        return self._fid[(min(i, j), max(i, j))]

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self._fid)

    def best_path(self, i: int, j: int) -> list[int]:
        for lv in (i, j):
            if not 0 <= lv < self.dim:
                raise GraphError(f"level {lv} out of range for dimension {self.dim}")
        try:
            return nx.dijkstra_path(self.nx, i, j, weight="cost")
        except nx.NetworkXNoPath:
            raise GraphError(f"no path between levels {i} and {j}") from None

    def tree_edges(self) -> list[tuple[int, int]]:
        """Spanning tree favouring high-fidelity edges, sorted."""
        self.check_connected()
        tree = nx.minimum_spanning_tree(self.nx, weight="cost", algorithm="kruskal")
        return sorted((min(a, b), max(a, b)) for a, b in tree.edges)

    def restricted(self, dim: int) -> "EnergyLevelGraph":
        """Subgraph on levels ``0..dim-1`` (a qudit using fewer levels than the hardware)."""
        if dim == self.dim:
            return self
        if dim > self.dim:
            raise GraphError(f"cannot restrict a {self.dim}-level graph to {dim} levels")
        return EnergyLevelGraph(dim, tuple(e for e in self.edges if e[0] < dim and e[1] < dim))

    def to_list(self) -> list[list]:
        return [[i, j, f] for i, j, f in self.edges]

    @classmethod
    def from_list(cls, dim: int, edges: Iterable) -> "EnergyLevelGraph":
        return cls(int(dim), tuple((e[0], e[1], e[2]) for e in edges))
