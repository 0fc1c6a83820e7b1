"""Polynomial solvers: SST for any k and the full SMST pipeline for two graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby

from .forest import SimForest, simultaneously_acyclic
from .instance import CORE, Edge, SunflowerInstance, format_weight, graph_view, id_key, restrict_by_weight, sorted_ids
from .matroid import make_contraction_matroid, matroid_intersection
from .reduce import REDUCERS, STEPS, _Fresh, build_01_subproblem, lift_solution
from .unionfind import DisjointSets


class PreconditionError(ValueError):
    pass


class PipelineError(RuntimeError):
    """An internal invariant of the pipeline broke; indicates a bug."""


def solve_sst(instance: SunflowerInstance) -> SimForest:
    """Single-weight instance: a core spanning forest, extended per graph."""
    if len(instance.weights()) > 1:
        raise PreconditionError("solve_sst needs a single weight value")
    by_id = sorted(instance.edges.values(), key=lambda e: id_key(e.id))
    core = DisjointSets(instance.core_vertices())
    chosen = [e.id for e in by_id if e.part == CORE and core.union(e.u, e.v)]
    for i in range(1, instance.k + 1):
        dsu = core.copy()
        chosen += [e.id for e in by_id if e.part == i and dsu.union(e.u, e.v)]
    return SimForest(instance, frozenset(chosen))


def _check_cap01(instance: SunflowerInstance, acyclic: bool) -> None:
    if instance.k != 2:
        raise PreconditionError(f"needs k = 2, got k = {instance.k}")
    for e in instance.edges.values():
        if e.weight not in (0, 1):
            raise PreconditionError(f"edge {e.id} has weight {e.weight}, expected 0 or 1")
        if e.weight == 1 and e.part != CORE:
            raise PreconditionError(f"weight-1 edge {e.id} is not a core edge")
    if acyclic and not simultaneously_acyclic(instance, (e.id for e in instance.edges.values() if e.weight == 0)):
        raise PreconditionError("weight-0 edges are not simultaneously acyclic")


def _cap01_acyclic(instance: SunflowerInstance) -> tuple[SimForest | None, frozenset]:
    light = frozenset(e.id for e in instance.edges.values() if e.weight == 0)
    views = [graph_view(instance, i) for i in (1, 2)]
    m1, m2 = (make_contraction_matroid(v, light & set(v.edge_map())) for v in views)
    common = matroid_intersection(m1, m2)
    chosen = light | common
    for view in views:
        full = DisjointSets(view.vertices)
        for e in view.edges:
            full.union(e.u, e.v)
        size = sum(1 for e in view.edges if e.id in chosen)
        if size != len(view.vertices) - full.count:
            return None, common
    return SimForest(instance, chosen), common


def solve_cap01_acyclic(instance: SunflowerInstance) -> SimForest | None:
    """{0,1}-instance with all weight-1 edges in the core and a simultaneously acyclic weight-0 part.

    Contract the weight-0 edges in each graph, intersect the two graphic
    matroids on the core weight-1 edges, and accept iff the result spans both graphs.
    """
    _check_cap01(instance, acyclic=True)
    return _cap01_acyclic(instance)[0]


def solve_cap01(instance: SunflowerInstance) -> SimForest | None:
    """As :func:`solve_cap01_acyclic`, first thinning the weight-0 edges to an SST solution."""
    _check_cap01(instance, acyclic=False)
    original = instance
    light = [e.id for e in instance.edges.values() if e.weight == 0]
    if not simultaneously_acyclic(instance, light):
        keep = solve_sst(restrict_by_weight(instance, 0)).edges
        instance = instance.without_edges(eid for eid in light if eid not in keep)
    forest = _cap01_acyclic(instance)[0]
    return None if forest is None else SimForest(original, forest.edges)


# -- two-graph pipeline --------------------------------------------------------


@dataclass
class StageLog:
    weight: Fraction
    mode: str  # sst | skip | greedy | matroid | infeasible
    edges: int
    accepted: int = 0
    sizes: dict[str, int] = field(default_factory=dict)
    intersection: int | None = None


@dataclass
class SolveReport:
    instance: SunflowerInstance
    forest: SimForest | None
    failed_weight: Fraction | None = None
    stages: list[StageLog] = field(default_factory=list)
    solver: str = "pipeline"

    @property
    def feasible(self) -> bool:
        return self.forest is not None

    @property
    def weights(self) -> dict[int, Fraction]:
        return dict(self.forest.weights) if self.forest is not None else {}

    def to_keyvalue(self) -> str:
        lines = [f"feasible={'true' if self.feasible else 'false'}", f"solver={self.solver}"]
        if self.forest is not None:
            lines += [f"weight.g{i}={format_weight(w)}" for i, w in sorted(self.weights.items())]
            lines.append("edges=" + ",".join(sorted_ids(self.forest.edges)))
        lines.append("stage.failed=" + (format_weight(self.failed_weight) if self.failed_weight is not None else "none"))
        return "\n".join(lines) + "\n"

    def to_text(self, stages: bool = True) -> str:
        out = []
        if self.feasible:
            out.append(f"solution found by {self.solver}: {len(self.forest)} edges")
            out += [f"  weight of G_{i}: {format_weight(w)}" for i, w in sorted(self.weights.items())]
        elif self.failed_weight is not None:
            out.append(f"infeasible at weight {format_weight(self.failed_weight)}")
        else:
            out.append("infeasible")
        for s in self.stages if stages else ():
            extra = ""
            if s.sizes:
                extra = " sizes " + " ".join(f"{k}={v}" for k, v in s.sizes.items())
            if s.intersection is not None:
                extra += f" |X|={s.intersection}"
            out.append(f"  stage w={format_weight(s.weight)}: {s.mode}, {s.edges} edges, {s.accepted} taken{extra}")
        return "\n".join(out) + "\n"


class _PartialForest:
    """Union-find view of the partial solution, per graph and on the core."""

    def __init__(self, instance: SunflowerInstance):
        self.instance = instance
        self.core = DisjointSets(instance.core_vertices())
        self.trees = {i: DisjointSets(instance.graph_vertices(i)) for i in range(1, instance.k + 1)}
        self.everything = {i: DisjointSets(instance.graph_vertices(i)) for i in range(1, instance.k + 1)}
        self.chosen: set[str] = set()

    def is_loop(self, e: Edge) -> bool:
        return all(self.trees[i].connected(e.u, e.v) for i in self.instance.graphs_of(e))

    def add(self, e: Edge) -> None:
        for i in self.instance.graphs_of(e):
            if not self.trees[i].union(e.u, e.v):
                raise PipelineError(f"edge {e.id} closes a cycle in G_{i}")
        if e.part == CORE:
            self.core.union(e.u, e.v)
        self.chosen.add(e.id)

    def see(self, stage: list[Edge]) -> None:
        for e in stage:
            for i in self.instance.graphs_of(e):
                self.everything[i].union(e.u, e.v)

    def check_spanning(self, weight: Fraction) -> None:
        for i, tree in self.trees.items():
            if tree.count != self.everything[i].count:
                raise PipelineError(f"after weight {weight}, G_{i} has {tree.count} partial components, expected {self.everything[i].count}")


def _local_stage(instance: SunflowerInstance, forest: _PartialForest, stage: list[Edge]) -> SunflowerInstance:
    """A small {0,1}-instance equivalent to the next stage over the partial forest.

    Keeps only the stage edges (weight 1) and their endpoints.  The partial
    forest is replaced by weight-0 stars with the same per-graph connectivity
    among those endpoints: core stars for vertices joined by core forest
    edges, and one exclusive hub per graph component that joins several of
    those core groups or exclusive vertices.  The stars are simultaneously
    acyclic.
    """
    touched = sorted_ids({x for e in stage for x in (e.u, e.v)})
    vertices = {v: instance.vertices[v] for v in touched}
    edges = {e.id: e.reweighted(1) for e in stage}
    vid = _Fresh(vertices)
    eid = _Fresh(edges)
    zero = Fraction(0)
    core_groups: dict = {}
    for v in touched:
        if vertices[v] == CORE:
            core_groups.setdefault(forest.core.find(v), []).append(v)
    unit_of = {}
    for members in core_groups.values():
        head = members[0]
        for v in members:
            unit_of[v] = head
            if v != head:
                e = Edge(eid("tie"), head, v, zero, CORE)
                edges[e.id] = e
    for i in range(1, instance.k + 1):
        comps: dict = {}
        for v in touched:
            part = vertices[v]
            if part != CORE and part != i:
                continue
            head = unit_of.get(v, v)
            comps.setdefault(forest.trees[i].find(head), {})[head] = None
        for heads in comps.values():
            if len(heads) < 2:
                continue
            hub = vid(f"hub{i}")
            vertices[hub] = i
            for head in heads:
                e = Edge(eid(f"spoke{i}"), hub, head, zero, i)
                edges[e.id] = e
    return SunflowerInstance(instance.k, vertices, edges)


def _solve_01(instance01: SunflowerInstance, log: StageLog) -> frozenset[str] | None:
    """Shift, equalize, gadget, intersect, lift."""
    log.sizes["01"] = instance01.size()
    reduced, traces = instance01, []
    for step in STEPS:
        reduced, trace = REDUCERS[step](reduced)
        traces.append(trace)
        log.sizes[step] = reduced.size()
    forest, common = _cap01_acyclic(reduced)
    log.intersection = len(common)
    if forest is None:
        return None
    return lift_solution(traces, forest.edges)


def solve_smst_k2(instance: SunflowerInstance, compact: bool = True) -> SolveReport:
    """Exact two-graph SMST.

    The lightest weight class is solved as an SST.  Every heavier class is a
    {0,1}-subproblem over the partial solution, pushed through shift,
    equalize and pair-gadget into matroid intersection and lifted back.  A
    stage without core candidates is extended greedily per graph.  With
    ``compact=False`` each subproblem is built literally over the whole
    partial solution instead of the local equivalent.
    """
    if instance.k != 2:
        raise PreconditionError(f"the pipeline solves k = 2, got k = {instance.k}")
    report = SolveReport(instance, None)
    forest = _PartialForest(instance)
    ordered = sorted(instance.edges.values(), key=lambda e: (e.weight, id_key(e.id)))
    for n, (w, group) in enumerate(groupby(ordered, key=lambda e: e.weight)):
        stage = list(group)
        forest.see(stage)
        log = StageLog(w, "sst", len(stage))
        report.stages.append(log)
        if n == 0:
            sub = instance.with_edges(stage)
            taken = solve_sst(sub).edges
        else:
            live = [e for e in stage if not forest.is_loop(e)]
            if not live:
                log.mode = "skip"
                taken = frozenset()
            elif not any(e.part == CORE for e in live):
                log.mode = "greedy"
                picked = []
                for e in sorted(live, key=lambda e: id_key(e.id)):
                    if not forest.trees[e.part].connected(e.u, e.v):
                        forest.add(e)
                        picked.append(e.id)
                taken = frozenset(picked)
            else:
                log.mode = "matroid"
                if compact:
                    lifted = _solve_01(_local_stage(instance, forest, live), log)
                else:
                    sub, decompose = build_01_subproblem(instance, forest.chosen, w)
                    lifted = _solve_01(sub, log)
                    if lifted is not None:
                        lifted = lift_solution(decompose, lifted)
                if lifted is None:
                    log.mode = "infeasible"
                    report.failed_weight = w
                    return report
                stage_ids = {e.id for e in stage}
                taken = frozenset(x for x in lifted if x in stage_ids)
        for eid in sorted_ids(taken - forest.chosen):
            forest.add(instance.edges[eid])
        log.accepted = len(taken)
        forest.check_spanning(w)
    report.forest = SimForest(instance, frozenset(forest.chosen))
    return report
