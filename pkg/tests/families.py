"""Seeded random instance families shared by the property suites."""

import random
from fractions import Fraction

from smst.instance import Edge, Graph
from smst.matroid import ContractionMatroid
from smst.oracle import GenParams, gen_random_sunflower
from smst.unionfind import DisjointSets


def k2_instance(seed):
    """k = 2, at most 8 vertices per graph, at most 3 distinct weights."""
    rng = random.Random(seed)
    core = rng.randint(3, 5)
    exclusive = [rng.randint(1, 8 - core) for _ in range(2)]
    palette = [Fraction(w) for w in rng.sample([1, 2, 3], rng.randint(2, 3))]
    params = GenParams(k=2, core=core, exclusive=exclusive, edges=rng.randint(10, 16), palette=palette, seed=seed)
    return gen_random_sunflower(params)


def k3_instance(seed):
    """k = 3, at most 7 vertices per graph, at most 2 distinct weights."""
    rng = random.Random(seed)
    core = rng.randint(2, 4)
    exclusive = [rng.randint(1, 7 - core) for _ in range(3)]
    palette = [Fraction(w) for w in rng.sample([1, 2, 3], 2)]
    params = GenParams(k=3, core=core, exclusive=exclusive, edges=rng.randint(10, 18), palette=palette, seed=seed)
    return gen_random_sunflower(params)


def instance01(seed, max_edges=12):
    """k = 2 with weights in {0, 1}."""
    rng = random.Random(seed)
    core = rng.randint(1, 4)
    exclusive = [rng.randint(0, 4), rng.randint(0, 4)]
    params = GenParams(k=2, core=core, exclusive=exclusive, edges=rng.randint(3, max_edges),
                       palette=[Fraction(0), Fraction(1)], seed=seed)
    return gen_random_sunflower(params)


def graphic_pair(seed, max_ground=10):
    """Two contraction matroids over a shared ground set ``e0..``.

    Each host draws its own endpoints for the ground edges (parallels and
    loops allowed) plus a few extra edges, a random acyclic subset of which
    is contracted.
    """
    rng = random.Random(seed)
    m = rng.randint(0, max_ground)
    out = []
    for _ in range(2):
        n = rng.randint(1, 6)
        names = [f"n{j}" for j in range(n)]
        edges = [Edge(f"e{j}", rng.choice(names), rng.choice(names), Fraction(1)) for j in range(m)]
        extra = [Edge(f"f{j}", *rng.sample(names, 2), Fraction(0)) for j in range(rng.randint(0, 3))] if n > 1 else []
        dsu = DisjointSets(names)
        contracted = [e.id for e in extra if rng.random() < 0.7 and dsu.union(e.u, e.v)]
        host = Graph(frozenset(names), tuple(edges + [e for e in extra if e.id in contracted]))
        out.append(ContractionMatroid(host, contracted))
    return out[0], out[1]
