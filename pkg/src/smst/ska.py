"""Kruskal's algorithm, simultaneous Kruskal (SKA) and stage-wise backtracking.

The simultaneous variant runs one Kruskal instance per graph over a shared
*universal order*: a core edge is presented to every instance, an exclusive
edge to its own graph only.  It is accepted if every instance accepts, skipped
if every instance refuses, and the run fails otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Iterable, Sequence

from .forest import SimForest
from .instance import Edge, Graph, SunflowerInstance, id_key
from .unionfind import DisjointSets


class OrderError(ValueError):
    pass


class StageUnreachable(ValueError):
    pass


def _edge_key(e: Edge):
    return (e.weight, id_key(e.id))


def check_order(edges: dict[str, Edge], order: Sequence[str]) -> None:
    """Raise OrderError unless ``order`` is a non-decreasing permutation of ``edges``."""
    if len(order) != len(edges) or set(order) != set(edges):
        missing = set(edges) - set(order)
        extra = set(order) - set(edges)
        detail = []
        if missing:
            detail.append("missing " + ", ".join(sorted(missing, key=id_key)))
        if extra:
            detail.append("unknown " + ", ".join(sorted(extra, key=id_key)))
        if not detail:
            detail.append("repeated ids")
        raise OrderError("order is not a permutation of the edge set: " + "; ".join(detail))
    for a, b in zip(order, order[1:]):
        if edges[a].weight > edges[b].weight:
            raise OrderError(f"order not non-decreasing: {a} (w={edges[a].weight}) before {b} (w={edges[b].weight})")


def preferring_order(source: SunflowerInstance | Graph | Iterable[Edge], preferred: Iterable[str] = ()) -> tuple[str, ...]:
    """Non-decreasing order placing ``preferred`` edges first within each weight.

    Ties inside each half are broken by edge id.
    """
    if isinstance(source, SunflowerInstance):
        edges = list(source.edges.values())
    elif isinstance(source, Graph):
        edges = list(source.edges)
    else:
        edges = list(source)
    pref = frozenset(preferred)
    edges.sort(key=lambda e: (e.weight, e.id not in pref, id_key(e.id)))
    return tuple(e.id for e in edges)


def kruskal_single(graph: Graph, order: Sequence[str] | None = None) -> frozenset[str]:
    """Minimum spanning forest of ``graph`` built along ``order``."""
    emap = graph.edge_map()
    if order is None:
        order = preferring_order(graph)
    else:
        check_order(emap, list(order))
    dsu = DisjointSets(graph.vertices)
    return frozenset(eid for eid in order if dsu.union(emap[eid].u, emap[eid].v))


@dataclass(frozen=True)
class SkaOutcome:
    forest: SimForest | None
    failed_edge: str | None = None
    failed_weight: Fraction | None = None

    @property
    def ok(self) -> bool:
        return self.forest is not None


def _graph_dsus(instance: SunflowerInstance) -> dict[int, DisjointSets]:
    return {i: DisjointSets(instance.graph_vertices(i)) for i in range(1, instance.k + 1)}


def ska_run(instance: SunflowerInstance, order: Sequence[str]) -> SkaOutcome:
    order = list(order)
    check_order(dict(instance.edges), order)
    dsus = _graph_dsus(instance)
    chosen = set()
    for eid in order:
        e = instance.edges[eid]
        graphs = instance.graphs_of(e)
        votes = {not dsus[i].connected(e.u, e.v) for i in graphs}
        if len(votes) > 1:
            return SkaOutcome(None, eid, e.weight)
        if votes.pop():
            for i in graphs:
                dsus[i].union(e.u, e.v)
            chosen.add(eid)
    return SkaOutcome(SimForest(instance, frozenset(chosen)))


# -- stage-wise backtracking ----------------------------------------------------


class _UndoSets:
    """Union by rank without path compression, so unions can be rolled back."""

    def __init__(self, dsu: DisjointSets | None = None):
        self.parent: dict = {}
        self.rank: dict = {}
        self.log: list = []
        if dsu is not None:
            for x in dsu.parent:
                self.parent[x] = dsu.find(x)
                self.rank[x] = dsu.rank[x]

    def find(self, x):
        parent = self.parent
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank.get(rx, 0) < self.rank.get(ry, 0):
            rx, ry = ry, rx
        bumped = self.rank.get(rx, 0) == self.rank.get(ry, 0)
        self.parent[ry] = rx
        self.parent.setdefault(rx, rx)
        if bumped:
            self.rank[rx] = self.rank.get(rx, 0) + 1
        self.log.append((ry, rx, bumped))
        return True

    def undo(self) -> None:
        ry, rx, bumped = self.log.pop()
        self.parent[ry] = ry
        if bumped:
            self.rank[rx] -= 1


_ACCEPT, _REJECT, _MIXED = "accept", "reject", "mixed"


def _verdict(instance: SunflowerInstance, sets: dict[int, _UndoSets], e: Edge) -> str:
    votes = {sets[i].find(e.u) != sets[i].find(e.v) for i in instance.graphs_of(e)}
    if len(votes) > 1:
        return _MIXED
    return _ACCEPT if votes.pop() else _REJECT


def _search_stage(instance: SunflowerInstance, sets: dict[int, _UndoSets], stage: list[Edge]) -> list[str] | None:
    """Find a failure-free ordering of one stage.

    Returns the accepted edges in acceptance order and leaves their unions
    applied to ``sets``, or returns None with ``sets`` untouched.  States are
    identified by the accepted set alone: a refused edge stays refused as the
    forests only grow, so it may be presented at any later point.
    """
    seen: set[frozenset] = set()
    path: list[str] = []

    def dfs() -> bool:
        key = frozenset(path)
        if key in seen:
            return False
        seen.add(key)
        accepting = []
        mixed = False
        for e in stage:
            if e.id in key:
                continue
            v = _verdict(instance, sets, e)
            if v is _ACCEPT:
                accepting.append(e)
            elif v is _MIXED:
                mixed = True
        if not accepting:
            return not mixed
        for e in accepting:
            graphs = instance.graphs_of(e)
            for i in graphs:
                sets[i].union(e.u, e.v)
            path.append(e.id)
            if dfs():
                return True
            path.pop()
            for i in graphs:
                sets[i].undo()
        return False

    return list(path) if dfs() else None


def _stages(instance: SunflowerInstance) -> list[tuple[Fraction, list[Edge]]]:
    edges = sorted(instance.edges.values(), key=_edge_key)
    return [(w, list(group)) for w, group in groupby(edges, key=lambda e: e.weight)]


def _run_stages(instance: SunflowerInstance, upto: Fraction | None = None):
    """Yield ``(weight, accepted ids or None, sets)`` stage by stage."""
    sets = {i: _UndoSets(DisjointSets(instance.graph_vertices(i))) for i in range(1, instance.k + 1)}
    for w, stage in _stages(instance):
        if upto is not None and w > upto:
            return
        accepted = _search_stage(instance, sets, stage)
        yield w, accepted, sets
        if accepted is None:
            return


def backtrack_order(instance: SunflowerInstance) -> tuple[str, ...] | None:
    """A universal order on which :func:`ska_run` succeeds, or None.

    Stages are committed as soon as one ordering of them succeeds; a stage with
    no successful ordering means the instance is infeasible.
    """
    order: list[str] = []
    stage_ids = {w: [e.id for e in stage] for w, stage in _stages(instance)}
    for w, accepted, _ in _run_stages(instance):
        if accepted is None:
            return None
        taken = set(accepted)
        order += accepted + sorted((eid for eid in stage_ids[w] if eid not in taken), key=id_key)
    return tuple(order)


def backtrack_search(instance: SunflowerInstance) -> tuple[SimForest | None, Fraction | None]:
    """The solution found by :func:`backtrack_solve`, or None with the weight of the stage that failed."""
    chosen: set[str] = set()
    for w, accepted, _ in _run_stages(instance):
        if accepted is None:
            return None, w
        chosen.update(accepted)
    return SimForest(instance, frozenset(chosen)), None


def backtrack_solve(instance: SunflowerInstance) -> SimForest | None:
    """Solve any-``k`` SMST by per-stage search over SKA orderings.

    Exponential only in the largest number of edges sharing a weight.
    """
    return backtrack_search(instance)[0]


def stage_partition(instance: SunflowerInstance, weight) -> dict[int, frozenset[frozenset[str]]]:
    """Per-graph vertex partitions once every stage of weight <= ``weight`` is done.

    These do not depend on which successful ordering is used.
    """
    weight = Fraction(weight)
    sets = None
    for _, accepted, sets in _run_stages(instance, upto=weight):
        if accepted is None:
            raise StageUnreachable(f"no ordering completes the stages up to weight {weight}")
    out = {}
    for i in range(1, instance.k + 1):
        groups: dict = {}
        for v in instance.graph_vertices(i):
            root = sets[i].find(v) if sets else v
            groups.setdefault(root, set()).add(v)
        out[i] = frozenset(frozenset(g) for g in groups.values())
    return out


def required_weight1_count(instance: SunflowerInstance, i: int) -> int:
    """Number of weight-1 edges in every MST of ``G_i`` of a {0,1}-instance."""
    edges = instance.graph_edges(i)
    if any(e.weight not in (0, 1) for e in edges):
        raise ValueError("required_weight1_count needs weights in {0, 1}")
    dsu = DisjointSets(instance.graph_vertices(i))
    for e in edges:
        if e.weight == 0:
            dsu.union(e.u, e.v)
    light = dsu.count
    for e in edges:
        if e.weight == 1:
            dsu.union(e.u, e.v)
    return light - dsu.count
