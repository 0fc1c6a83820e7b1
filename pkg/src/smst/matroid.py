"""Graphic matroids of contracted graphs and unweighted matroid intersection."""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Callable, Hashable, Iterable

from .instance import Graph, id_key
from .unionfind import DisjointSets

BRUTE_FORCE_GUARD = 20


class MatroidError(ValueError):
    pass


def _sort_key(x):
    return id_key(x) if isinstance(x, str) else (x,)


class Matroid:
    """Independence-oracle matroid.  Subclasses provide ``ground`` and ``is_independent``."""

    ground: frozenset

    def is_independent(self, subset: Iterable[Hashable]) -> bool:
        raise NotImplementedError

    def exchanges(self, current: frozenset, y) -> frozenset | None:
        """Elements ``x`` of ``current`` with ``current - x + y`` independent.

        Returns None when ``current + y`` is itself independent.  The default
        asks the oracle once per element; subclasses may do better.
        """
        if self.is_independent(current | {y}):
            return None
        return frozenset(x for x in current if self.is_independent((current - {x}) | {y}))


class OracleMatroid(Matroid):
    def __init__(self, ground: Iterable[Hashable], independent: Callable[[frozenset], bool]):
        self.ground = frozenset(ground)
        self._independent = independent

    def is_independent(self, subset):
        s = frozenset(subset)
        if not s <= self.ground:
            raise MatroidError(f"elements outside the ground set: {sorted(s - self.ground, key=_sort_key)}")
        return self._independent(s)


class ContractionMatroid(Matroid):
    """Graphic matroid of ``host`` with the acyclic edge set ``contracted`` shrunk.

    The ground set is the remaining edges.  Parallels and loops that appear in
    the contracted multigraph are kept; a loop is never independent.
    """

    def __init__(self, host: Graph, contracted: Iterable[str] = ()):
        self.host = host
        self.contracted = frozenset(contracted)
        emap = host.edge_map()
        unknown = self.contracted - set(emap)
        if unknown:
            raise MatroidError(f"contracted edges not in host: {sorted(unknown, key=id_key)}")
        dsu = DisjointSets(host.vertices)
        for eid in sorted(self.contracted, key=id_key):
            e = emap[eid]
            if not dsu.union(e.u, e.v):
                raise MatroidError(f"contracted set has a cycle (closed by {eid})")
        roots = sorted({dsu.find(v) for v in host.vertices}, key=_sort_key)
        index = {r: n for n, r in enumerate(roots)}
        self.node_count = len(roots)
        self.ends: dict[str, tuple[int, int]] = {
            e.id: (index[dsu.find(e.u)], index[dsu.find(e.v)]) for e in host.edges if e.id not in self.contracted
        }
        self.ground = frozenset(self.ends)
        h = DisjointSets(range(self.node_count))
        for a, b in self.ends.values():
            h.union(a, b)
        self.rank = self.node_count - h.count

    def is_loop(self, element: str) -> bool:
        a, b = self.ends[element]
        return a == b

    def is_independent(self, subset) -> bool:
        dsu = DisjointSets()
        for x in subset:
            if x not in self.ends:
                raise MatroidError(f"element {x!r} outside the ground set")
            a, b = self.ends[x]
            if not dsu.union(a, b):
                return False
        return True

    def exchanges(self, current, y):
        if y not in self.ends:
            raise MatroidError(f"element {y!r} outside the ground set")
        a, b = self.ends[y]
        if a == b:
            return frozenset()
        adj: dict[int, list[tuple[int, str]]] = {}
        for x in current:
            p, q = self.ends[x]
            adj.setdefault(p, []).append((q, x))
            adj.setdefault(q, []).append((p, x))
        # tree path from a to b in the forest ``current``
        back: dict[int, tuple[int, str] | None] = {a: None}
        queue = deque([a])
        while queue and b not in back:
            node = queue.popleft()
            for nxt, x in adj.get(node, ()):
                if nxt not in back:
                    back[nxt] = (node, x)
                    queue.append(nxt)
        if b not in back:
            return None
        cycle = set()
        node = b
        while back[node] is not None:
            node, x = back[node]
            cycle.add(x)
        return frozenset(cycle)


def make_contraction_matroid(graph: Graph, contracted: Iterable[str] = ()) -> ContractionMatroid:
    return ContractionMatroid(graph, contracted)


def is_independent(matroid: Matroid, subset: Iterable[Hashable]) -> bool:
    return matroid.is_independent(subset)


def matroid_intersection(m1: Matroid, m2: Matroid) -> frozenset:
    """Maximum-cardinality set independent in both matroids.

    Shortest augmenting paths in the exchange graph; candidates are scanned in
    sorted order so the result is deterministic.
    """
    if m1.ground != m2.ground:
        raise MatroidError("matroids must share a ground set")
    order = sorted(m1.ground, key=_sort_key)
    current: frozenset = frozenset()
    while True:
        outside = [y for y in order if y not in current]
        # exchange data for every outside element, per matroid
        ex1 = {y: m1.exchanges(current, y) for y in outside}
        ex2 = {y: m2.exchanges(current, y) for y in outside}
        sources = [y for y in outside if ex1[y] is None]
        sinks = {y for y in outside if ex2[y] is None}
        if not sources or not sinks:
            return current
        # outside y -> inside x when current - x + y is independent in m2;
        # inside x -> outside y when current - x + y is independent in m1
        to_inside: dict = {}
        for y in outside:
            if ex2[y] is not None:
                for x in ex2[y]:
                    to_inside.setdefault(y, []).append(x)
        to_outside: dict = {}
        for y in outside:
            if ex1[y] is not None:
                for x in ex1[y]:
                    to_outside.setdefault(x, []).append(y)
        for lst in to_inside.values():
            lst.sort(key=_sort_key)
        for lst in to_outside.values():
            lst.sort(key=_sort_key)
        back = {y: None for y in sources}
        queue = deque(sources)
        end = None
        while queue:
            node = queue.popleft()
            if node not in current and node in sinks:
                end = node
                break
            nexts = to_inside.get(node, ()) if node not in current else to_outside.get(node, ())
            for nxt in nexts:
                if nxt not in back:
                    back[nxt] = node
                    queue.append(nxt)
        if end is None:
            return current
        path = []
        node = end
        while node is not None:
            path.append(node)
            node = back[node]
        current = current.symmetric_difference(path)


def brute_force_common_independent(m1: Matroid, m2: Matroid, guard: int = BRUTE_FORCE_GUARD) -> frozenset:
    """Largest common independent set by exhaustive search; lexicographically first on ties."""
    if m1.ground != m2.ground:
        raise MatroidError("matroids must share a ground set")
    if len(m1.ground) > guard:
        raise MatroidError(f"ground set of {len(m1.ground)} exceeds brute-force guard {guard}")
    order = sorted(m1.ground, key=_sort_key)
    for size in range(len(order), -1, -1):
        for subset in combinations(order, size):
            if m1.is_independent(subset) and m2.is_independent(subset):
                return frozenset(subset)
    return frozenset()
