from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .instance import SunflowerInstance
from .unionfind import DisjointSets


def simultaneously_acyclic(instance: SunflowerInstance, edge_ids: Iterable[str]) -> bool:
    """True iff the edge set restricted to every graph is a forest."""
    ids = list(edge_ids)
    for i in range(1, instance.k + 1):
        dsu = DisjointSets()
        for eid in ids:
            e = instance.edges[eid]
            if (e.part == 0 or e.part == i) and not dsu.union(e.u, e.v):
                return False
    return True


@dataclass(frozen=True)
class SimForest:
    """An edge subset of a sunflower instance, viewed per graph."""

    instance: SunflowerInstance
    edges: frozenset[str]

    def __post_init__(self):
        unknown = [eid for eid in self.edges if eid not in self.instance.edges]
        if unknown:
            raise KeyError(f"unknown edge ids: {', '.join(sorted(unknown))}")

    def restricted(self, i: int) -> frozenset[str]:
        return frozenset(eid for eid in self.edges if self.instance.edges[eid].part in (0, i))

    def weight(self, i: int) -> Fraction:
        return sum((self.instance.edges[eid].weight for eid in self.restricted(i)), Fraction(0))

    @cached_property
    def weights(self) -> dict[int, Fraction]:
        return {i: self.weight(i) for i in range(1, self.instance.k + 1)}

    def components(self, i: int) -> frozenset[frozenset[str]]:
        dsu = DisjointSets(self.instance.graph_vertices(i))
        for eid in self.restricted(i):
            e = self.instance.edges[eid]
            dsu.union(e.u, e.v)
        return dsu.groups()

    @property
    def acyclic(self) -> bool:
        return simultaneously_acyclic(self.instance, self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __len__(self):
        return len(self.edges)
