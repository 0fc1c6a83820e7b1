"""Benchmark plumbing: planted feasible instances and a solver race."""

from __future__ import annotations

import random
import time
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .forest import SimForest
from .instance import CORE, Edge, SunflowerInstance
from .oracle import GenParams, GuardExceeded, brute_force_smst, gen_random_sunflower
from .ska import backtrack_solve
from .solve2 import solve_smst_k2


def gen_planted_sunflower(params: GenParams, tie: float = 0.2) -> SunflowerInstance:
    """A random instance that is feasible by construction.

    A random spanning tree is drawn on the core and extended into each
    exclusive part; tree edges take palette weights.  Every other sampled edge
    weighs the maximum on its tree path (probability ``tie``) or a heavier
    palette value, so the tree is minimum in every graph and ties remain.
    """
    params.check()
    rng = random.Random(params.seed)
    palette = sorted(Fraction(w) for w in params.palette)
    core = [f"c{j}" for j in range(params.core)]
    vertices = {v: CORE for v in core}
    parent: dict[str, tuple[str, Fraction] | None] = {}
    depth: dict[str, int] = {}
    tree_edges: list[tuple[str, str, Fraction, int]] = []

    def attach(v, pool, part):
        if not pool:
            parent[v], depth[v] = None, 0
            return
        u = rng.choice(pool)
        w = rng.choice(palette)
        parent[v], depth[v] = (u, w), depth[u] + 1
        tree_edges.append((u, v, w, part))

    for n, v in enumerate(core):
        attach(v, core[:n], CORE)
    counts = params.exclusive_counts()
    own_of = {}
    for i, count in enumerate(counts, 1):
        own = [f"g{i}v{j}" for j in range(count)]
        own_of[i] = own
        for n, v in enumerate(own):
            vertices[v] = i
            attach(v, core + own[:n], i)

    def path_max(a, b) -> Fraction | None:
        best = None
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            link = parent[a]
            if link is None:
                return None  # different trees
            a, w = link
            best = w if best is None else max(best, w)
        return best

    in_tree = {frozenset((u, v)) for u, v, _, _ in tree_edges}
    pairs = [(a, b, CORE) for a, b in combinations(core, 2)]
    for i, own in own_of.items():
        pairs += [(a, b, i) for a, b in combinations(core + own, 2) if vertices[a] != CORE or vertices[b] != CORE]
    pairs = [p for p in pairs if frozenset(p[:2]) not in in_tree]
    budget = len(pairs) if params.edges is None else max(0, min(params.edges - len(tree_edges), len(pairs)))
    picked = [pairs[j] for j in sorted(rng.sample(range(len(pairs)), budget))]
    edges = [Edge(f"e{n}", u, v, w, part) for n, (u, v, w, part) in enumerate(tree_edges)]
    for a, b, part in picked:
        top = path_max(a, b)
        if top is None:
            top = rng.choice(palette)
        heavier = palette[bisect_right(palette, top):]
        w = top if rng.random() < tie or not heavier else rng.choice(heavier)
        edges.append(Edge(f"e{len(edges)}", a, b, w, part))
    return SunflowerInstance.build(params.k, vertices, edges)


SOLVERS = ("pipeline", "backtrack", "oracle")


def run_solver(name: str, instance: SunflowerInstance):
    """``(feasible, per-graph weights)``; raises GuardExceeded for oversized oracle input."""
    if name == "pipeline":
        forest = solve_smst_k2(instance).forest
    elif name == "backtrack":
        forest = backtrack_solve(instance)
    elif name == "oracle":
        res = brute_force_smst(instance)
        if not res.feasible:
            return False, {}
        forest = SimForest(instance, res.solution)
    else:
        raise ValueError(f"unknown solver {name!r}")
    if forest is None:
        return False, {}
    return True, dict(forest.weights)


@dataclass
class BenchRow:
    solver: str
    runs: int = 0
    feasible: int = 0
    skipped: int = 0
    total: float = 0.0
    worst: float = 0.0


@dataclass
class BenchResult:
    rows: dict[str, BenchRow] = field(default_factory=dict)
    disagreements: list[int] = field(default_factory=list)
    edges: int = 0

    def table(self) -> str:
        head = f"{'solver':<10} {'runs':>5} {'feasible':>8} {'skipped':>7} {'total s':>9} {'mean ms':>9} {'max ms':>9}"
        out = [head, "-" * len(head)]
        for r in self.rows.values():
            mean = 1000 * r.total / r.runs if r.runs else 0.0
            out.append(f"{r.solver:<10} {r.runs:>5} {r.feasible:>8} {r.skipped:>7} {r.total:>9.3f} {mean:>9.2f} {1000 * r.worst:>9.2f}")
        out.append(f"edges total: {self.edges}; disagreements: {len(self.disagreements)}")
        if self.disagreements:
            out.append("  seeds: " + " ".join(map(str, self.disagreements)))
        return "\n".join(out) + "\n"


def _bench_one(job):
    params, planted, tie, solvers = job
    instance = gen_planted_sunflower(params, tie) if planted else gen_random_sunflower(params)
    out = {}
    for name in solvers:
        if name == "pipeline" and instance.k != 2:
            continue
        start = time.perf_counter()
        try:
            answer = run_solver(name, instance)
        except GuardExceeded:
            out[name] = None
            continue
        out[name] = (time.perf_counter() - start, answer)
    return params.seed, len(instance.edges), out


def race(base: GenParams, count: int, solvers=SOLVERS, planted: bool = False, tie: float = 0.2, jobs: int = 1) -> BenchResult:
    """Run every solver on ``count`` instances with seeds ``base.seed, base.seed + 1, ...``."""
    work = []
    for n in range(count):
        p = GenParams(**{**base.__dict__, "seed": base.seed + n})
        work.append((p, planted, tie, tuple(solvers)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bench_one, work))
    else:
        results = [_bench_one(w) for w in work]
    bench = BenchResult({s: BenchRow(s) for s in solvers})
    for seed, edges, out in results:
        bench.edges += edges
        answers = set()
        for name, got in out.items():
            row = bench.rows[name]
            if got is None:
                row.skipped += 1
                continue
            elapsed, (feasible, weights) = got
            row.runs += 1
            row.feasible += feasible
            row.total += elapsed
            row.worst = max(row.worst, elapsed)
            answers.add((feasible, tuple(sorted(weights.items()))))
        if len(answers) > 1:
            bench.disagreements.append(seed)
    return bench
