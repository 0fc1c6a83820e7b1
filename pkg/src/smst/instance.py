"""Sunflower instances: data model, validation, restriction and the text format.

A sunflower instance holds ``k`` edge-weighted graphs that pairwise intersect
in one common induced *core* graph.  Every vertex and edge carries a ``part``:
``0`` for the core, ``i`` (1-based) for the exclusive part of graph ``G_i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

CORE = 0

_NATURAL = re.compile(r"(\d+)")


def id_key(ident: str):
    """Natural sort key for ids, so that ``e2`` sorts before ``e10``."""
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in _NATURAL.split(ident) if p)


def sorted_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=id_key)


class InstanceFormatError(ValueError):
    """Malformed instance text.  ``lineno`` is 1-based, or None."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


class InvalidInstanceError(ValueError):
    """Instance data that violates the sunflower invariants."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("invalid sunflower instance: " + "; ".join(report.violations))


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    weight: Fraction
    part: int = CORE

    @property
    def is_core(self) -> bool:
        return self.part == CORE

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u

    def reweighted(self, weight) -> "Edge":
        return Edge(self.id, self.u, self.v, Fraction(weight), self.part)


@dataclass(frozen=True)
class Graph:
    """A single weighted (multi)graph, e.g. one member ``G_i`` of a family."""

    vertices: frozenset[str]
    edges: tuple[Edge, ...]

    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}


@dataclass(frozen=True, eq=False)
class SunflowerInstance:
    """``k`` graphs sharing one induced core.

    ``vertices`` maps vertex id to part, ``edges`` maps edge id to Edge.  The
    constructor does not validate; use :func:`validate_sunflower` or
    :meth:`checked`.
    """

    k: int
    vertices: Mapping[str, int]
    edges: Mapping[str, Edge]
    _graph_edges: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @classmethod
    def build(cls, k: int, vertices: Mapping[str, int], edges: Iterable[Edge]) -> "SunflowerInstance":
        emap: dict[str, Edge] = {}
        for e in edges:
            if e.id in emap:
                raise InvalidInstanceError(ValidationReport([f"duplicate id: edge {e.id}"]))
            emap[e.id] = e
        return cls(k, dict(vertices), emap).checked()

    def checked(self) -> "SunflowerInstance":
        report = validate_sunflower(self)
        if not report.ok:
            raise InvalidInstanceError(report)
        return self

    def __eq__(self, other):
        if not isinstance(other, SunflowerInstance):
            return NotImplemented
        return self.k == other.k and dict(self.vertices) == dict(other.vertices) and dict(self.edges) == dict(other.edges)

    __hash__ = None  # type: ignore[assignment]

    def graphs_of(self, e: Edge) -> range | tuple[int]:
        """Indices of the graphs containing edge ``e``."""
        return range(1, self.k + 1) if e.part == CORE else (e.part,)

    def graph_vertices(self, i: int) -> frozenset[str]:
        return frozenset(v for v, p in self.vertices.items() if p == CORE or p == i)

    def graph_edges(self, i: int) -> list[Edge]:
        if i not in self._graph_edges:
            self._graph_edges[i] = [e for e in self.edges.values() if e.part == CORE or e.part == i]
        return self._graph_edges[i]

    def core_vertices(self) -> frozenset[str]:
        return frozenset(v for v, p in self.vertices.items() if p == CORE)

    def weights(self) -> list[Fraction]:
        """Distinct edge weights in increasing order."""
        return sorted({e.weight for e in self.edges.values()})

    def size(self) -> int:
        """Vertex count plus edge count."""
        return len(self.vertices) + len(self.edges)

    def with_edges(self, edges: Iterable[Edge], vertices: Mapping[str, int] | None = None) -> "SunflowerInstance":
        return SunflowerInstance(self.k, dict(self.vertices if vertices is None else vertices), {e.id: e for e in edges})

    def without_edges(self, ids: Iterable[str]) -> "SunflowerInstance":
        drop = set(ids)
        return self.with_edges(e for e in self.edges.values() if e.id not in drop)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges.values())


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _part_name(p: int) -> str:
    return "core" if p == CORE else f"g{p}"


def validate_sunflower(instance: SunflowerInstance) -> ValidationReport:
    """Collect every violated sunflower invariant.  Never raises."""
    report = ValidationReport()
    bad = report.violations
    k = instance.k
    if not isinstance(k, int) or k < 1:
        bad.append(f"k must be a positive integer, got {k!r}")
        k = 0
    for v, p in instance.vertices.items():
        if not isinstance(p, int) or p < 0 or p > k:
            bad.append(f"vertex {v}: part {p!r} out of range for k={k}")
    for eid, e in instance.edges.items():
        if eid != e.id:
            bad.append(f"edge {eid}: key does not match edge id {e.id}")
        if e.u == e.v:
            bad.append(f"self-loop: edge {e.id} at {e.u}")
        if e.weight < 0:
            bad.append(f"negative weight: edge {e.id} has weight {e.weight}")
        missing = [x for x in (e.u, e.v) if x not in instance.vertices]
        if missing:
            bad.append(f"edge {e.id}: unknown endpoint {', '.join(missing)}")
            continue
        if not isinstance(e.part, int) or e.part < 0 or e.part > k:
            bad.append(f"edge {e.id}: part {e.part!r} out of range for k={k}")
            continue
        pu, pv = instance.vertices[e.u], instance.vertices[e.v]
        if e.part == CORE:
            if pu != CORE or pv != CORE:
                bad.append(f"core edge {e.id} has a non-core endpoint ({e.u}:{_part_name(pu)}, {e.v}:{_part_name(pv)})")
        else:
            if pu not in (CORE, e.part) or pv not in (CORE, e.part):
                if pu != CORE and pv != CORE and pu != pv:
                    bad.append(f"lateral edge {e.id} joins {e.u}:{_part_name(pu)} and {e.v}:{_part_name(pv)}")
                else:
                    bad.append(f"edge {e.id} of {_part_name(e.part)} has an endpoint outside that graph")
            elif pu == CORE and pv == CORE:
                bad.append(f"induced core violated: edge {e.id} joins core vertices {e.u}, {e.v} but is {_part_name(e.part)}")
    if k >= 1 and instance.vertices and not instance.core_vertices():
        report.notes.append("empty core: the graphs share no vertices")
    return report


def restrict_by_weight(instance: SunflowerInstance, bound) -> SunflowerInstance:
    """Keep only edges of weight at most ``bound``."""
    bound = Fraction(bound)
    return instance.with_edges(e for e in instance.edges.values() if e.weight <= bound)


def graph_view(instance: SunflowerInstance, i: int) -> Graph:
    if not 1 <= i <= instance.k:
        raise IndexError(f"graph index {i} out of range 1..{instance.k}")
    return Graph(instance.graph_vertices(i), tuple(instance.graph_edges(i)))


# -- text format ---------------------------------------------------------------

MAGIC = "smst"
VERSION = "1"


def parse_weight(token: str) -> Fraction:
    try:
        w = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad weight {token!r}") from None
    if w < 0:
        raise ValueError(f"negative weight {token}")
    return w


def format_weight(w: Fraction) -> str:
    """Exact decimal when the denominator allows it, ``p/q`` otherwise."""
    w = Fraction(w)
    if w.denominator == 1:
        return str(w.numerator)
    d, twos, fives = w.denominator, 0, 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{w.numerator}/{w.denominator}"
    places = max(twos, fives)
    scaled = w.numerator * 10**places // w.denominator
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _parse_part(token: str, lineno: int) -> int:
    if token == "core":
        return CORE
    m = re.fullmatch(r"g([1-9]\d*)", token)
    if not m:
        raise InstanceFormatError(f"bad membership {token!r} (expected 'core' or g<i>)", lineno)
    return int(m.group(1))


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_instance(text: str) -> SunflowerInstance:
    lines = _content_lines(text)
    first = next(lines, None)
    if first is None or first[1] != [MAGIC, VERSION]:
        raise InstanceFormatError(f"expected header '{MAGIC} {VERSION}'", first[0] if first else 1)
    k = None
    vertices: dict[str, int] = {}
    edges: dict[str, Edge] = {}
    for lineno, tok in lines:
        kind = tok[0]
        if kind == "k":
            if len(tok) != 2 or not tok[1].isdigit() or int(tok[1]) < 1:
                raise InstanceFormatError("expected 'k <positive int>'", lineno)
            if k is not None:
                raise InstanceFormatError("k given twice", lineno)
            k = int(tok[1])
        elif kind == "v":
            if len(tok) != 3:
                raise InstanceFormatError("expected 'v <id> <membership>'", lineno)
            if tok[1] in vertices:
                raise InstanceFormatError(f"duplicate id: vertex {tok[1]}", lineno)
            vertices[tok[1]] = _parse_part(tok[2], lineno)
        elif kind == "e":
            if len(tok) != 6:
                raise InstanceFormatError("expected 'e <id> <u> <v> <weight> <membership>'", lineno)
            _, eid, u, v, wtok, ptok = tok
            if eid in edges:
                raise InstanceFormatError(f"duplicate id: edge {eid}", lineno)
            try:
                w = parse_weight(wtok)
            except ValueError as exc:
                raise InstanceFormatError(str(exc), lineno) from None
            edges[eid] = Edge(eid, u, v, w, _parse_part(ptok, lineno))
        else:
            raise InstanceFormatError(f"unknown record {kind!r}", lineno)
    if k is None:
        raise InstanceFormatError("missing 'k' line")
    return SunflowerInstance(k, vertices, edges).checked()


def serialize_instance(instance: SunflowerInstance) -> str:
    out = [f"{MAGIC} {VERSION}", f"k {instance.k}"]
    for v in sorted_ids(instance.vertices):
        out.append(f"v {v} {_part_name(instance.vertices[v])}")
    for eid in sorted_ids(instance.edges):
        e = instance.edges[eid]
        out.append(f"e {e.id} {e.u} {e.v} {format_weight(e.weight)} {_part_name(e.part)}")
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> frozenset[str]:
    lines = _content_lines(text)
    first = next(lines, None)
    if first is None or first[1] != ["sol"]:
        raise InstanceFormatError("expected header 'sol'", first[0] if first else 1)
    chosen: set[str] = set()
    for lineno, tok in lines:
        if len(tok) != 2 or tok[0] != "e":
            raise InstanceFormatError("expected 'e <id>'", lineno)
        chosen.add(tok[1])
    return frozenset(chosen)


def serialize_solution(edge_ids: Iterable[str]) -> str:
    return "\n".join(["sol", *(f"e {eid}" for eid in sorted_ids(edge_ids))]) + "\n"
