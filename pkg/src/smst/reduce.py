"""Reductions from weighted two-graph SMST down to the intersection-heavy {0,1} case.

Each step returns the reduced instance and a :class:`ReductionTrace` that maps
a solution of the reduced instance back to one of its input:

* ``decompose``   one weight stage on top of a frozen partial solution, as a
                  {0,1}-instance (ids are kept, lifting is the identity);
* ``shift``       subdivide weight-1 edges between the core and an exclusive part;
* ``equalize``    pad one graph with weight-1 pendant edges so both graphs need
                  the same number of weight-1 edges;
* ``pair-gadget`` replace every pair of exclusive weight-1 edges (one per
                  graph) by a core weight-1 edge plus four weight-0 edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .instance import CORE, Edge, SunflowerInstance, format_weight, id_key, parse_weight, restrict_by_weight, sorted_ids
from .oracle import verify_solution
from .ska import required_weight1_count

STEPS = ("shift", "equalize", "gadget")


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionTrace:
    kind: str
    drop: frozenset[str] = frozenset()
    rename: Mapping[str, str] = field(default_factory=dict)
    gadgets: Mapping[str, tuple[str, str]] = field(default_factory=dict)
    deleted: frozenset[str] = frozenset()
    new_vertices: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    frozen: frozenset[str] = frozenset()
    weight: Fraction | None = None

    @property
    def empty(self) -> bool:
        return not (self.drop or self.rename or self.gadgets or self.deleted or self.new_vertices)

    def origin(self, new_id: str) -> tuple[str, ...]:
        """Original edge ids that a new edge or vertex id stands for."""
        if new_id in self.gadgets:
            return self.gadgets[new_id]
        if new_id in self.rename:
            return (self.rename[new_id],)
        return self.new_vertices.get(new_id, ())


def _require_01(instance: SunflowerInstance) -> None:
    odd = [e.id for e in instance.edges.values() if e.weight not in (0, 1)]
    if odd:
        raise ReductionError(f"weights outside {{0, 1}} on edges {', '.join(sorted_ids(odd)[:5])}")


def _require_k2(instance: SunflowerInstance) -> None:
    if instance.k != 2:
        raise ReductionError(f"this reduction is defined for k = 2, got k = {instance.k}")


class _Fresh:
    """Deterministic fresh ids, avoiding everything already taken."""

    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)

    def __call__(self, base: str) -> str:
        name = base
        while name in self.taken:
            name += "'"
        self.taken.add(name)
        return name


def build_01_subproblem(instance: SunflowerInstance, partial: Iterable[str], weight) -> tuple[SunflowerInstance, ReductionTrace]:
    """The next weight stage over a frozen partial solution, as a {0,1}-instance.

    ``partial`` must solve the instance restricted to weights below ``weight``;
    its edges get weight 0, the edges of weight ``weight`` get weight 1, and
    everything else is dropped.
    """
    weight = Fraction(weight)
    partial = frozenset(partial)
    weights = instance.weights()
    if weight not in weights:
        raise ReductionError(f"weight {weight} does not occur in the instance")
    lighter = [w for w in weights if w < weight]
    if lighter:
        below = restrict_by_weight(instance, lighter[-1])
        stray = partial - set(below.edges)
        if stray:
            raise ReductionError(f"partial solution has edges not lighter than {weight}: {', '.join(sorted_ids(stray))}")
        problems = verify_solution(below, partial)
        if problems:
            raise ReductionError("not a partial solution: " + "; ".join(problems))
    elif partial:
        raise ReductionError("the lightest stage has no partial solution below it")
    edges = [instance.edges[eid].reweighted(0) for eid in partial]
    edges += [e.reweighted(1) for e in instance.edges.values() if e.weight == weight]
    return instance.with_edges(edges), ReductionTrace("decompose", frozen=partial, weight=weight)


def _boundary_heavy(instance: SunflowerInstance) -> list[Edge]:
    out = []
    for e in instance.edges.values():
        if e.weight == 1 and e.part != CORE:
            cores = (instance.vertices[e.u] == CORE) + (instance.vertices[e.v] == CORE)
            if cores == 1:
                out.append(e)
    return sorted(out, key=lambda e: id_key(e.id))


def shift_boundary_edges(instance: SunflowerInstance) -> tuple[SunflowerInstance, ReductionTrace]:
    """Subdivide weight-1 edges that run from the core into an exclusive part.

    ``xy`` (``x`` core) becomes ``xz`` of weight 0 and ``zy`` of weight 1 with a
    fresh vertex ``z`` in the exclusive part.
    """
    _require_01(instance)
    boundary = _boundary_heavy(instance)
    if not boundary:
        return instance, ReductionTrace("shift")
    vertex_id = _Fresh(instance.vertices)
    edge_id = _Fresh(instance.edges)
    vertices = dict(instance.vertices)
    edges = {eid: e for eid, e in instance.edges.items()}
    drop, rename, new_vertices = set(), {}, {}
    for e in boundary:
        x, y = (e.u, e.v) if instance.vertices[e.u] == CORE else (e.v, e.u)
        z = vertex_id(f"{e.id}.z")
        vertices[z] = e.part
        light = Edge(edge_id(f"{e.id}.0"), x, z, Fraction(0), e.part)
        heavy = Edge(edge_id(f"{e.id}.1"), z, y, Fraction(1), e.part)
        del edges[e.id]
        edges[light.id] = light
        edges[heavy.id] = heavy
        drop.add(light.id)
        rename[heavy.id] = e.id
        new_vertices[z] = (e.id,)
    out = SunflowerInstance(instance.k, vertices, edges)
    return out, ReductionTrace("shift", drop=frozenset(drop), rename=rename, new_vertices=new_vertices)


def equalize_weight1_counts(instance: SunflowerInstance) -> tuple[SunflowerInstance, ReductionTrace]:
    """Pad the graph needing fewer weight-1 edges with weight-1 pendant leaves.

    Leaves hang off the lowest-id exclusive vertex of that graph; if it has no
    exclusive vertex, off a fresh isolated one.
    """
    _require_01(instance)
    _require_k2(instance)
    need = {i: required_weight1_count(instance, i) for i in (1, 2)}
    if need[1] == need[2]:
        return instance, ReductionTrace("equalize")
    small = 1 if need[1] < need[2] else 2
    missing = abs(need[1] - need[2])
    vertex_id = _Fresh(instance.vertices)
    edge_id = _Fresh(instance.edges)
    vertices = dict(instance.vertices)
    edges = dict(instance.edges)
    new_vertices = {}
    own = sorted_ids(v for v, p in instance.vertices.items() if p == small)
    if own:
        anchor = own[0]
    else:
        anchor = vertex_id(f"pad{small}")
        vertices[anchor] = small
        new_vertices[anchor] = ()
    drop = set()
    for n in range(missing):
        leaf = vertex_id(f"pad{small}.{n}")
        vertices[leaf] = small
        new_vertices[leaf] = ()
        e = Edge(edge_id(f"pad{small}.{n}"), anchor, leaf, Fraction(1), small)
        edges[e.id] = e
        drop.add(e.id)
    out = SunflowerInstance(instance.k, vertices, edges)
    return out, ReductionTrace("equalize", drop=frozenset(drop), new_vertices=new_vertices)


def pair_gadget_reduce(instance: SunflowerInstance) -> tuple[SunflowerInstance, ReductionTrace]:
    """Move all weight-1 edges into the core using one gadget per exclusive pair.

    For ``e`` exclusive to G1 and ``f`` exclusive to G2 (both weight 1) two core
    vertices ``x1, x2`` are added with weight-0 edges ``e1-x1, e2-x2`` in G1,
    ``f1-x1, f2-x2`` in G2 and the core weight-1 edge ``x1-x2``; afterwards the
    exclusive weight-1 edges are deleted.  Requires shifted and equalized input.
    """
    _require_k2(instance)
    _require_01(instance)
    boundary = _boundary_heavy(instance)
    if boundary:
        raise ReductionError(f"boundary weight-1 edges present (e.g. {boundary[0].id}); shift first")
    need = (required_weight1_count(instance, 1), required_weight1_count(instance, 2))
    if need[0] != need[1]:
        raise ReductionError(f"weight-1 counts differ ({need[0]} vs {need[1]}); equalize first")
    heavy = {i: sorted((e for e in instance.edges.values() if e.weight == 1 and e.part == i), key=lambda e: id_key(e.id)) for i in (1, 2)}
    if not heavy[1] and not heavy[2]:
        return instance, ReductionTrace("pair-gadget")
    vertex_id = _Fresh(instance.vertices)
    edge_id = _Fresh(instance.edges)
    vertices = dict(instance.vertices)
    deleted = frozenset(e.id for i in (1, 2) for e in heavy[i])
    edges = {eid: e for eid, e in instance.edges.items() if eid not in deleted}
    drop, gadgets, new_vertices = set(), {}, {}
    zero = Fraction(0)
    for e in heavy[1]:
        for f in heavy[2]:
            tag = f"{e.id}|{f.id}"
            x1, x2 = vertex_id(tag + ".1"), vertex_id(tag + ".2")
            vertices[x1] = vertices[x2] = CORE
            new_vertices[x1] = new_vertices[x2] = (e.id, f.id)
            spokes = [
                Edge(edge_id(tag + ".e1"), e.u, x1, zero, 1),
                Edge(edge_id(tag + ".e2"), e.v, x2, zero, 1),
                Edge(edge_id(tag + ".f1"), f.u, x1, zero, 2),
                Edge(edge_id(tag + ".f2"), f.v, x2, zero, 2),
            ]
            bar = Edge(edge_id(tag), x1, x2, Fraction(1), CORE)
            for s in spokes:
                edges[s.id] = s
                drop.add(s.id)
            edges[bar.id] = bar
            gadgets[bar.id] = (e.id, f.id)
    out = SunflowerInstance(instance.k, vertices, edges)
    trace = ReductionTrace("pair-gadget", drop=frozenset(drop), gadgets=gadgets, deleted=deleted, new_vertices=new_vertices)
    return out, trace


REDUCERS = {"shift": shift_boundary_edges, "equalize": equalize_weight1_counts, "gadget": pair_gadget_reduce}


def reduce_chain(instance: SunflowerInstance, steps: Sequence[str] = STEPS) -> tuple[SunflowerInstance, list[ReductionTrace]]:
    traces = []
    for step in steps:
        if step not in REDUCERS:
            raise ReductionError(f"unknown step {step!r}; choose from {', '.join(STEPS)}")
        instance, trace = REDUCERS[step](instance)
        traces.append(trace)
    return instance, traces


def lift_solution(
    traces: ReductionTrace | Sequence[ReductionTrace],
    solution: Iterable[str],
    reduced: SunflowerInstance | None = None,
) -> frozenset[str]:
    """Map a solution of the reduced instance back through ``traces`` (applied last to first).

    When ``reduced`` is given the solution is checked against it first.
    """
    if isinstance(traces, ReductionTrace):
        traces = [traces]
    current = frozenset(solution)
    if reduced is not None:
        problems = verify_solution(reduced, current)
        if problems:
            raise ReductionError("not a solution of the reduced instance: " + "; ".join(problems))
    for trace in reversed(list(traces)):
        out: set[str] = set()
        for eid in current:
            if eid in trace.drop:
                continue
            if eid in trace.gadgets:
                for orig in trace.gadgets[eid]:
                    if orig in out:
                        raise ReductionError(f"internal inconsistency: {orig} chosen through two gadgets")
                    out.add(orig)
            elif eid in trace.deleted:
                raise ReductionError(f"solution uses {eid}, which the reduction deleted")
            else:
                out.add(trace.rename.get(eid, eid))
        current = frozenset(out)
    return current


# -- text form ---------------------------------------------------------------------


def serialize_traces(traces: ReductionTrace | Sequence[ReductionTrace]) -> str:
    if isinstance(traces, ReductionTrace):
        traces = [traces]
    out = ["trace 1"]
    for t in traces:
        out.append(f"step {t.kind}")
        if t.weight is not None:
            out.append(f"weight {format_weight(t.weight)}")
        out += [f"frozen {eid}" for eid in sorted_ids(t.frozen)]
        out += [f"drop {eid}" for eid in sorted_ids(t.drop)]
        out += [f"rename {new} {t.rename[new]}" for new in sorted_ids(t.rename)]
        out += [f"gadget {g} {' '.join(t.gadgets[g])}" for g in sorted_ids(t.gadgets)]
        out += [f"deleted {eid}" for eid in sorted_ids(t.deleted)]
        out += [" ".join(["vertex", v, *t.new_vertices[v]]) for v in sorted_ids(t.new_vertices)]
    return "\n".join(out) + "\n"


def parse_traces(text: str) -> list[ReductionTrace]:
    traces: list[dict] = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if not seen_header:
            if tok != ["trace", "1"]:
                raise ReductionError(f"line {lineno}: expected header 'trace 1'")
            seen_header = True
            continue
        kind, args = tok[0], tok[1:]
        if kind == "step":
            if len(args) != 1 or args[0] not in ("decompose", "shift", "equalize", "pair-gadget"):
                raise ReductionError(f"line {lineno}: bad step")
            traces.append(dict(kind=args[0], drop=set(), rename={}, gadgets={}, deleted=set(), new_vertices={}, frozen=set(), weight=None))
            continue
        if not traces:
            raise ReductionError(f"line {lineno}: record before any 'step'")
        cur = traces[-1]
        arity = {"drop": 1, "deleted": 1, "frozen": 1, "weight": 1, "rename": 2, "gadget": 3}
        if kind in arity and len(args) != arity[kind]:
            raise ReductionError(f"line {lineno}: '{kind}' takes {arity[kind]} argument(s)")
        if kind in ("drop", "deleted", "frozen"):
            cur[kind].add(args[0])
        elif kind == "weight":
            cur["weight"] = parse_weight(args[0])
        elif kind == "rename":
            cur["rename"][args[0]] = args[1]
        elif kind == "gadget":
            cur["gadgets"][args[0]] = (args[1], args[2])
        elif kind == "vertex" and args:
            cur["new_vertices"][args[0]] = tuple(args[1:])
        else:
            raise ReductionError(f"line {lineno}: unknown record {kind!r}")
    if not seen_header:
        raise ReductionError("empty trace")
    return [
        ReductionTrace(
            t["kind"], frozenset(t["drop"]), t["rename"], t["gadgets"], frozenset(t["deleted"]),
            t["new_vertices"], frozenset(t["frozen"]), t["weight"],
        )
        for t in traces
    ]
