"""3D matching as three-graph SMST.

The core is a star: centre ``c`` and one weight-1 ray ``c - t[u,v,w]`` per
triple.  Graph ``G_1`` (``G_2``, ``G_3``) adds a vertex per element of ``U``
(``V``, ``W``) joined by weight-0 edges to the triples containing it.  Perfect
matchings correspond exactly to the rays chosen by SMST solutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .instance import CORE, Edge, SunflowerInstance
from .oracle import verify_solution

Triple = tuple[str, str, str]


class ThreeDMError(ValueError):
    pass


@dataclass(frozen=True)
class ThreeDMInstance:
    U: tuple[str, ...]
    V: tuple[str, ...]
    W: tuple[str, ...]
    triples: tuple[Triple, ...]

    def __post_init__(self):
        sets = [set(self.U), set(self.V), set(self.W)]
        if any(len(s) != len(seq) for s, seq in zip(sets, (self.U, self.V, self.W))):
            raise ThreeDMError("repeated element")
        if not len(self.U) == len(self.V) == len(self.W):
            raise ThreeDMError(f"|U|, |V|, |W| differ: {len(self.U)}, {len(self.V)}, {len(self.W)}")
        if sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2]:
            raise ThreeDMError("U, V and W must be disjoint")
        for t in self.triples:
            if len(t) != 3 or t[0] not in sets[0] or t[1] not in sets[1] or t[2] not in sets[2]:
                raise ThreeDMError(f"triple {t} does not pick one element each of U, V, W")
        if len(set(self.triples)) != len(self.triples):
            raise ThreeDMError("repeated triple")

    def is_perfect_matching(self, matching: Iterable[Triple]) -> bool:
        m = list(matching)
        if any(t not in self.triples for t in m) or len(m) != len(self.U):
            return False
        covered = [x for t in m for x in t]
        return len(set(covered)) == len(covered) == 3 * len(self.U)


def perfect_matchings(problem: ThreeDMInstance) -> list[tuple[Triple, ...]]:
    """Every perfect matching, by exhaustive search over triple subsets."""
    return [m for m in combinations(problem.triples, len(problem.U)) if problem.is_perfect_matching(m)]


def parse_3dm(text: str) -> ThreeDMInstance:
    parts: dict[str, list[str]] = {"u": [], "v": [], "w": []}
    triples = []
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if not header:
            if tok != ["3dm"]:
                raise ThreeDMError(f"line {lineno}: expected header '3dm'")
            header = True
        elif tok[0] in parts and len(tok) == 2:
            parts[tok[0]].append(tok[1])
        elif tok[0] == "t" and len(tok) == 4:
            triples.append((tok[1], tok[2], tok[3]))
        else:
            raise ThreeDMError(f"line {lineno}: cannot parse {line!r}")
    if not header:
        raise ThreeDMError("empty 3dm file")
    return ThreeDMInstance(tuple(parts["u"]), tuple(parts["v"]), tuple(parts["w"]), tuple(triples))


def serialize_3dm(problem: ThreeDMInstance) -> str:
    out = ["3dm"]
    for tag, elems in (("u", problem.U), ("v", problem.V), ("w", problem.W)):
        out += [f"{tag} {x}" for x in elems]
    out += [f"t {u} {v} {w}" for u, v, w in problem.triples]
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class Correspondence:
    """How the generated instance encodes the matching problem."""

    problem: ThreeDMInstance
    center: str
    triple_vertex: dict[Triple, str]
    element_vertex: dict[str, str]
    ray: dict[Triple, str]


@dataclass(frozen=True)
class ThreeDMReduction:
    instance: SunflowerInstance | None
    correspondence: Correspondence | None
    trivially_infeasible: bool = False
    reason: str = ""


def _triple_name(t: Triple) -> str:
    return "t[" + ",".join(t) + "]"


def reduce_3dm(problem: ThreeDMInstance) -> ThreeDMReduction:
    uncovered = [x for x in (*problem.U, *problem.V, *problem.W) if not any(x in t for t in problem.triples)]
    if uncovered:
        return ThreeDMReduction(None, None, True, f"elements in no triple: {', '.join(uncovered)}")
    center = "c"
    vertices = {center: CORE}
    triple_vertex, element_vertex, ray = {}, {}, {}
    edges = []
    for t in problem.triples:
        vt = _triple_name(t)
        triple_vertex[t] = vt
        vertices[vt] = CORE
        ray[t] = "ray" + vt[1:]
        edges.append(Edge(ray[t], center, vt, Fraction(1), CORE))
    for graph, elems in enumerate((problem.U, problem.V, problem.W), 1):
        for x in elems:
            vx = f"x[{x}]"
            element_vertex[x] = vx
            vertices[vx] = graph
            for t in problem.triples:
                if t[graph - 1] == x:
                    edges.append(Edge(f"{x}~{triple_vertex[t]}", triple_vertex[t], vx, Fraction(0), graph))
    instance = SunflowerInstance.build(3, vertices, edges)
    return ThreeDMReduction(instance, Correspondence(problem, center, triple_vertex, element_vertex, ray))


def extract_matching(corr: Correspondence, instance: SunflowerInstance, solution: Iterable[str]) -> list[Triple]:
    """Triples whose rays the solution takes; raises if the solution is invalid."""
    chosen = frozenset(solution)
    problems = verify_solution(instance, chosen)
    if problems:
        raise ThreeDMError("not a solution: " + "; ".join(problems))
    matching = [t for t in corr.problem.triples if corr.ray[t] in chosen]
    if not corr.problem.is_perfect_matching(matching):
        raise ThreeDMError("solution does not encode a perfect matching")
    return matching


def matching_to_solution(corr: Correspondence, instance: SunflowerInstance, matching: Sequence[Triple]) -> frozenset[str]:
    """All weight-0 edges plus the rays of ``matching``."""
    if not corr.problem.is_perfect_matching(matching):
        raise ThreeDMError("not a perfect matching")
    light = {e.id for e in instance.edges.values() if e.weight == 0}
    return frozenset(light | {corr.ray[t] for t in matching})


def all_triple_sets(size: int, max_triples: int) -> Iterable[ThreeDMInstance]:
    """Every 3DM instance over ``U={u1..}, V={v1..}, W={w1..}`` of the given size with at most ``max_triples`` triples."""
    U = tuple(f"u{j}" for j in range(1, size + 1))
    V = tuple(f"v{j}" for j in range(1, size + 1))
    W = tuple(f"w{j}" for j in range(1, size + 1))
    every = [(u, v, w) for u in U for v in V for w in W]
    for r in range(max_triples + 1):
        for triples in combinations(every, r):
            yield ThreeDMInstance(U, V, W, triples)


__all__ = [
    "Correspondence", "ThreeDMError", "ThreeDMInstance", "ThreeDMReduction", "all_triple_sets", "extract_matching",
    "matching_to_solution", "parse_3dm", "perfect_matchings", "reduce_3dm", "serialize_3dm",
]
