import random
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from families import graphic_pair
from smst.fixtures import fix2
from smst.instance import Edge, Graph, graph_view
from smst.matroid import (
    ContractionMatroid,
    Matroid,
    MatroidError,
    OracleMatroid,
    brute_force_common_independent,
    is_independent,
    make_contraction_matroid,
    matroid_intersection,
)
from smst.unionfind import DisjointSets


def graph(pairs, weight=1):
    names = {x for p in pairs for x in p}
    return Graph(frozenset(names), tuple(Edge(a + b, a, b, Fraction(weight)) for a, b in pairs))


def fix2_matroids():
    inst = fix2()
    out = []
    for i in (1, 2):
        view = graph_view(inst, i)
        light = [e.id for e in view.edges if e.weight == 0]
        out.append(make_contraction_matroid(view, light))
    return out


def atlas_hosts(max_edges=7):
    for g in nx.graph_atlas_g():
        if g.number_of_edges() <= max_edges:
            yield Graph(frozenset(f"n{v}" for v in g.nodes),
                        tuple(Edge(f"e{j}", f"n{u}", f"n{v}", Fraction(1)) for j, (u, v) in enumerate(sorted(g.edges))))


def acyclic_in(host, ids):
    emap = host.edge_map()
    dsu = DisjointSets(host.vertices)
    return all(dsu.union(emap[x].u, emap[x].v) for x in ids)


def test_plain_graphic_matroid():
    g = graph(["ab", "bc", "ca", "cd"])
    m = make_contraction_matroid(g)
    assert m.ground == {"ab", "bc", "ca", "cd"} and m.rank == 3
    assert m.is_independent({"ab", "bc", "cd"}) and not m.is_independent({"ab", "bc", "ca"})


def test_contracted_triangle():
    m = make_contraction_matroid(graph(["xy", "yz", "xz"]), {"xy"})
    assert m.node_count == 2 and m.ground == {"yz", "xz"}
    assert m.is_independent({"yz"}) and m.is_independent({"xz"})
    assert not m.is_independent({"yz", "xz"})
    assert m.rank == 1


def test_fix2_matroid():
    m1, m2 = fix2_matroids()
    assert m1.ground == {"a1a2", "b1b2", "c1c2"}
    assert not m1.is_independent({"a1a2", "c1c2"})
    assert not m1.is_independent(m1.ground)
    assert m2.ground == {"a1a2", "b1b2"}


def test_independence_basics():
    m = make_contraction_matroid(graph(["xy", "yz", "xz"]), {"xy", "yz"})
    assert is_independent(m, ())
    assert m.is_loop("xz") and not m.is_independent({"xz"})
    with pytest.raises(MatroidError):
        m.is_independent({"zz"})
    with pytest.raises(MatroidError, match="cycle"):
        make_contraction_matroid(graph(["xy", "yz", "xz"]), {"xy", "yz", "xz"})
    with pytest.raises(MatroidError):
        make_contraction_matroid(graph(["xy"]), {"qq"})


def test_intersection_examples():
    m = make_contraction_matroid(graph(["ab", "bc", "ca", "cd", "de"]))
    assert len(matroid_intersection(m, m)) == m.rank
    free = OracleMatroid({1, 2}, lambda s: True)
    apart = OracleMatroid({1, 2}, lambda s: len(s) < 2)
    assert len(matroid_intersection(apart, free)) == 1
    inst = fix2()
    a = make_contraction_matroid(graph_view(inst, 1), [e.id for e in graph_view(inst, 1).edges if e.weight == 0])
    # G2 lacks the exclusive edge c1c2; give it c1c2 on two fresh vertices (a coloop) so the
    # ground sets match, which is what padding plus the pair gadget amount to here
    b_host = graph_view(inst, 2)
    b_host = Graph(b_host.vertices | {"c1", "c2"}, b_host.edges + (inst.edges["c1c2"],))
    b = make_contraction_matroid(b_host, [e.id for e in b_host.edges if e.weight == 0])
    got = matroid_intersection(a, b)
    assert got == {"b1b2", "c1c2"}
    size2 = [set(s) for s in combinations(sorted(a.ground), 2) if a.is_independent(s) and b.is_independent(s)]
    assert size2 == [{"b1b2", "c1c2"}]
    assert brute_force_common_independent(a, b) == got


def test_intersection_errors():
    with pytest.raises(MatroidError):
        matroid_intersection(OracleMatroid({1}, lambda s: True), OracleMatroid({2}, lambda s: True))
    with pytest.raises(MatroidError):
        brute_force_common_independent(OracleMatroid(range(21), lambda s: True), OracleMatroid(range(21), lambda s: True))


def test_brute_force_examples():
    empty = OracleMatroid((), lambda s: True)
    assert brute_force_common_independent(empty, empty) == frozenset()
    free = OracleMatroid({1, 2, 3}, lambda s: True)
    assert brute_force_common_independent(free, free) == {1, 2, 3}


def test_intersection_on_random_pairs():
    for seed in range(300):
        m1, m2 = graphic_pair(seed)
        got = matroid_intersection(m1, m2)
        assert m1.is_independent(got) and m2.is_independent(got)
        assert len(got) == len(brute_force_common_independent(m1, m2))


def test_generic_oracle_matroids():
    """Partition and uniform matroids through the default exchange routine."""
    rng = random.Random(3)
    for _ in range(200):
        ground = list(range(rng.randint(0, 9)))
        blocks = {x: rng.randrange(3) for x in ground}
        caps = [rng.randint(0, 2) for _ in range(3)]
        k = rng.randint(0, len(ground))
        part = OracleMatroid(ground, lambda s: all(sum(blocks[x] == b for x in s) <= caps[b] for b in range(3)))
        uni = OracleMatroid(ground, lambda s: len(s) <= k)
        got = matroid_intersection(part, uni)
        assert part.is_independent(got) and uni.is_independent(got)
        assert len(got) == len(brute_force_common_independent(part, uni))


def test_contraction_exchanges_match_default():
    for seed in range(200):
        m, _ = graphic_pair(seed, max_ground=8)
        ground = sorted(m.ground)
        rng = random.Random(seed)
        current = frozenset(x for x in ground if rng.random() < 0.5)
        while not m.is_independent(current):
            current = current - {min(current)}
        for y in ground:
            if y not in current:
                assert m.exchanges(current, y) == Matroid.exchanges(m, current, y)


def test_independence_matches_host_acyclicity():
    count = 0
    for host in atlas_hosts(6):
        ids = sorted(host.edge_map())
        for r in range(len(ids) + 1):
            for contracted in combinations(ids, r):
                if not acyclic_in(host, contracted):
                    continue
                m = ContractionMatroid(host, contracted)
                ground = sorted(m.ground)
                best = 0
                maximal_sizes = set()
                for s in range(len(ground) + 1):
                    for sub in combinations(ground, s):
                        ind = m.is_independent(sub)
                        assert ind == acyclic_in(host, contracted + sub)
                        if ind and all(not m.is_independent(sub + (x,)) for x in ground if x not in sub):
                            maximal_sizes.add(s)
                        best = max(best, s if ind else 0)
                assert maximal_sizes == {m.rank} and best == m.rank
                count += 1
    assert count > 1000
