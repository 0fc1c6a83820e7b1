"""Brute-force ground truth for small instances, solution checking and generation.

Nothing here reuses the solvers under test; the MST enumeration has its own
acyclicity bookkeeping and never calls Kruskal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .instance import CORE, Edge, Graph, SunflowerInstance, graph_view, id_key, parse_weight
from .ska import kruskal_single
from .unionfind import DisjointSets

MST_EDGE_GUARD = 16
SUBSET_EDGE_GUARD = 10


class GuardExceeded(ValueError):
    pass


def verify_solution(instance: SunflowerInstance, edge_ids: Iterable[str]) -> list[str]:
    """List every way ``edge_ids`` fails to be a solution; empty means valid."""
    chosen = frozenset(edge_ids)
    unknown = [eid for eid in chosen if eid not in instance.edges]
    if unknown:
        raise KeyError(f"unknown edge ids: {', '.join(sorted(unknown, key=id_key))}")
    problems = []
    for i in range(1, instance.k + 1):
        view = graph_view(instance, i)
        dsu = DisjointSets(view.vertices)
        weight = Fraction(0)
        cyclic = False
        for e in view.edges:
            if e.id in chosen:
                weight += e.weight
                if not dsu.union(e.u, e.v):
                    cyclic = True
        if cyclic:
            problems.append(f"cycle in G_{i}")
        full = DisjointSets(view.vertices)
        for e in view.edges:
            full.union(e.u, e.v)
        spanning = dsu.count == full.count
        if not cyclic and not spanning:
            problems.append(f"G_{i} not spanning ({dsu.count} components, graph has {full.count})")
        emap = view.edge_map()
        best = sum((emap[eid].weight for eid in kruskal_single(view)), Fraction(0))
        if weight != best and not cyclic and spanning:
            problems.append(f"G_{i} weight {weight} is not the minimum {best}")
    return problems


def _spanning_rank(vertices: Iterable[str], edges: Sequence[Edge]) -> int:
    comp = {v: v for v in vertices}

    def root(x):
        while comp[x] != x:
            x = comp[x]
        return x

    rank = 0
    for e in edges:
        a, b = root(e.u), root(e.v)
        if a != b:
            comp[a] = b
            rank += 1
    return rank


def enumerate_msts(graph: Graph, guard: int = MST_EDGE_GUARD) -> list[frozenset[str]]:
    """Every minimum spanning forest of ``graph``, sorted by edge-id sequence."""
    edges = sorted(graph.edges, key=lambda e: id_key(e.id))
    if len(edges) > guard:
        raise GuardExceeded(f"graph has {len(edges)} edges, oracle guard is {guard}")
    target = _spanning_rank(graph.vertices, edges)
    n = len(edges)
    suffix_min = [None] * (n + 1)
    for idx in range(n - 1, -1, -1):
        w = edges[idx].weight
        suffix_min[idx] = w if suffix_min[idx + 1] is None else min(w, suffix_min[idx + 1])
    best: list = [None]
    found: list[frozenset[str]] = []
    label = {v: v for v in graph.vertices}

    def relabel(old, new):
        for v, l in label.items():
            if l == old:
                label[v] = new

    def walk(idx: int, chosen: list[str], weight: Fraction):
        need = target - len(chosen)
        if need == 0:
            if best[0] is None or weight < best[0]:
                best[0] = weight
                found.clear()
            if weight == best[0]:
                found.append(frozenset(chosen))
            return
        if n - idx < need:
            return
        if best[0] is not None and weight + need * suffix_min[idx] > best[0]:
            return
        e = edges[idx]
        a, b = label[e.u], label[e.v]
        if a != b:
            saved = dict(label)
            relabel(a, b)
            chosen.append(e.id)
            walk(idx + 1, chosen, weight + e.weight)
            chosen.pop()
            label.update(saved)
        walk(idx + 1, chosen, weight)

    walk(0, [], Fraction(0))
    return sorted(found, key=lambda s: sorted(s, key=id_key))


def _lex(s: Iterable[str]):
    return [id_key(x) for x in sorted(s, key=id_key)]


@dataclass
class OracleResult:
    solution: frozenset[str] | None
    solutions: list[frozenset[str]] | None = None

    @property
    def feasible(self) -> bool:
        return self.solution is not None


def brute_force_smst(instance: SunflowerInstance, all_solutions: bool = False, guard: int = MST_EDGE_GUARD) -> OracleResult:
    """Solve by enumerating each graph's MSTs and joining them on the core.

    The selected solution is the lexicographically smallest by sorted edge ids.
    Per graph the exclusive parts are disjoint, so that minimum decomposes into
    per-graph minima for a fixed core part.
    """
    per_graph: list[dict[frozenset, list[frozenset]]] = []
    for i in range(1, instance.k + 1):
        view = graph_view(instance, i)
        by_core: dict[frozenset, list[frozenset]] = {}
        for t in enumerate_msts(view, guard):
            core = frozenset(eid for eid in t if instance.edges[eid].part == CORE)
            by_core.setdefault(core, []).append(t - core)
        per_graph.append(by_core)
    common = set(per_graph[0])
    for by_core in per_graph[1:]:
        common &= set(by_core)
    if not common:
        return OracleResult(None, [] if all_solutions else None)
    candidates = []
    for core in common:
        parts = [min(g[core], key=_lex) for g in per_graph]
        candidates.append(core.union(*parts))
    best = min(candidates, key=_lex)
    everything = None
    if all_solutions:
        everything = sorted(
            {core.union(*combo) for core in common for combo in product(*(g[core] for g in per_graph))},
            key=_lex,
        )
    return OracleResult(best, everything)


def brute_force_smst_subsets(instance: SunflowerInstance, guard: int = SUBSET_EDGE_GUARD) -> list[frozenset[str]]:
    """All solutions by raw subset enumeration of the union; a cross-check for tiny inputs."""
    ids = sorted(instance.edges, key=id_key)
    if len(ids) > guard:
        raise GuardExceeded(f"instance has {len(ids)} edges, subset guard is {guard}")
    views = [graph_view(instance, i) for i in range(1, instance.k + 1)]
    targets = []
    for view in views:
        rank = _spanning_rank(view.vertices, view.edges)
        best = None
        ids_i = [e.id for e in view.edges]
        emap = view.edge_map()
        for sub in combinations(ids_i, rank):
            if _spanning_rank(view.vertices, [emap[x] for x in sub]) == rank:
                w = sum((emap[x].weight for x in sub), Fraction(0))
                best = w if best is None else min(best, w)
        targets.append((rank, best if best is not None else Fraction(0)))
    out = []
    for r in range(len(ids) + 1):
        for sub in combinations(ids, r):
            s = frozenset(sub)
            good = True
            for view, (rank, best) in zip(views, targets):
                part = [e for e in view.edges if e.id in s]
                if len(part) != rank or _spanning_rank(view.vertices, part) != rank:
                    good = False
                    break
                if sum((e.weight for e in part), Fraction(0)) != best:
                    good = False
                    break
            if good:
                out.append(s)
    return sorted(out, key=_lex)


# -- random instances -------------------------------------------------------------


@dataclass
class GenParams:
    """Parameters of :func:`gen_random_sunflower`.

    ``exclusive`` is one count per graph (an int is broadcast).  When
    ``edges`` is set, exactly that many edges are drawn from all admissible
    vertex pairs (capped by their number); otherwise each pair is an edge
    with probability ``p``.
    """

    k: int = 2
    core: int = 3
    exclusive: Sequence[int] | int = 3
    p: float = 0.5
    edges: int | None = None
    palette: Sequence[Fraction] = field(default_factory=lambda: [Fraction(1)])
    seed: int = 0

    def exclusive_counts(self) -> list[int]:
        if isinstance(self.exclusive, int):
            return [self.exclusive] * self.k
        return list(self.exclusive)

    def check(self) -> None:
        if self.k < 1:
            raise ValueError("k must be positive")
        counts = self.exclusive_counts()
        if len(counts) != self.k:
            raise ValueError(f"need {self.k} exclusive counts, got {len(counts)}")
        if self.core < 0 or any(c < 0 for c in counts):
            raise ValueError("vertex counts must be non-negative")
        if not self.palette:
            raise ValueError("weight palette must be non-empty")
        if any(Fraction(w) < 0 for w in self.palette):
            raise ValueError("weights must be non-negative")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.edges is not None and self.edges < 0:
            raise ValueError("edge count must be non-negative")


def parse_gen_config(text: str) -> GenParams:
    """Read ``key = value`` lines (``k``, ``core``, ``exclusive``, ``p``, ``edges``, ``palette``, ``seed``)."""
    params = GenParams()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep:
            raise ValueError(f"expected key = value, got {line!r}")
        if key in ("k", "core", "seed"):
            setattr(params, key, int(value))
        elif key == "edges":
            params.edges = int(value)
        elif key == "p":
            params.p = float(value)
        elif key == "exclusive":
            counts = [int(x) for x in value.replace(",", " ").split()]
            params.exclusive = counts[0] if len(counts) == 1 else counts
        elif key == "palette":
            params.palette = [parse_weight(x) for x in value.replace(",", " ").split()]
        else:
            raise ValueError(f"unknown parameter {key!r}")
    return params


def gen_random_sunflower(params: GenParams) -> SunflowerInstance:
    params.check()
    rng = random.Random(params.seed)
    palette = [Fraction(w) for w in params.palette]
    core = [f"c{j}" for j in range(params.core)]
    vertices = {v: CORE for v in core}
    pairs: list[tuple[str, str, int]] = [(a, b, CORE) for a, b in combinations(core, 2)]
    for i, count in enumerate(params.exclusive_counts(), 1):
        own = [f"g{i}v{j}" for j in range(count)]
        vertices.update((v, i) for v in own)
        pool = core + own
        pairs += [(a, b, i) for a, b in combinations(pool, 2) if vertices[a] != CORE or vertices[b] != CORE]
    if params.edges is not None:
        picked = [pairs[j] for j in sorted(rng.sample(range(len(pairs)), min(params.edges, len(pairs))))]
    else:
        picked = [pr for pr in pairs if rng.random() < params.p]
    edges = [Edge(f"e{n}", a, b, rng.choice(palette), part) for n, (a, b, part) in enumerate(picked)]
    return SunflowerInstance.build(params.k, vertices, edges)
