import random
from fractions import Fraction
from itertools import groupby, permutations, product
from math import factorial, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from families import k2_instance, k3_instance
from smst.fixtures import fix1, fix1_minus_xz, fix2, fix3
from smst.instance import CORE, Edge, Graph, SunflowerInstance, graph_view, id_key, restrict_by_weight
from smst.oracle import GenParams, brute_force_smst, enumerate_msts, gen_random_sunflower, verify_solution
from smst.ska import (
    OrderError,
    StageUnreachable,
    backtrack_order,
    backtrack_search,
    backtrack_solve,
    kruskal_single,
    preferring_order,
    required_weight1_count,
    ska_run,
    stage_partition,
)

F1 = Fraction(1)


def triangle(wxz=1, wzy=1, wxy=2):
    edges = (Edge("xz", "x", "z", Fraction(wxz)), Edge("zy", "z", "y", Fraction(wzy)), Edge("xy", "x", "y", Fraction(wxy)))
    return Graph(frozenset("xyz"), edges)


def test_kruskal_examples():
    g = triangle()
    assert kruskal_single(g) == {"xz", "zy"}
    assert kruskal_single(g, ["zy", "xz", "xy"]) == {"xz", "zy"}
    assert kruskal_single(graph_view(fix3(), 2), ["xy", "yz", "zx"]) == {"xy", "yz"}
    assert kruskal_single(Graph(frozenset("ab"), ())) == frozenset()


def test_kruskal_rejects_bad_orders():
    g = triangle()
    with pytest.raises(OrderError, match="non-decreasing"):
        kruskal_single(g, ["xy", "xz", "zy"])
    with pytest.raises(OrderError, match="permutation"):
        kruskal_single(g, ["xz", "zy"])
    with pytest.raises(OrderError, match="permutation"):
        kruskal_single(g, ["xz", "zy", "xy", "xy"])


def test_preferring_order_examples():
    inst = fix1()
    assert preferring_order(inst) == ("wy", "xw", "xz", "zy", "xy")
    assert preferring_order(inst, {"xz", "zy", "xw", "wy"}) == ("wy", "xw", "xz", "zy", "xy")
    assert preferring_order(fix3(), {"xy"})[0] == "xy"
    assert preferring_order(fix3(), {"zx"}) == ("zx", "xy", "yz")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_preferring_order_shape(seed):
    inst = k2_instance(seed)
    rng = random.Random(seed)
    pref = {eid for eid in inst.edges if rng.random() < 0.4}
    order = preferring_order(inst, pref)
    assert sorted(order) == sorted(inst.edges)
    weights = [inst.edges[e].weight for e in order]
    assert weights == sorted(weights)
    for _, grp in groupby(order, key=lambda e: inst.edges[e].weight):
        flags = [e in pref for e in grp]
        assert flags == sorted(flags, reverse=True)


def test_ska_fix1_every_order():
    inst = fix1()
    light = ["xz", "zy", "xw", "wy"]
    for perm in permutations(light):
        out = ska_run(inst, [*perm, "xy"])
        assert out.ok and out.forest.edges == set(light)


def test_ska_fix1_minus_xz_fails_for_every_order():
    inst = fix1_minus_xz()
    for perm in permutations(["zy", "xw", "wy"]):
        out = ska_run(inst, [*perm, "xy"])
        assert not out.ok
        assert out.failed_edge == "xy" and out.failed_weight == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_ska_single_graph_is_kruskal(seed):
    inst = gen_random_sunflower(GenParams(k=1, core=3, exclusive=4, edges=12, palette=[1, 2, 3], seed=seed))
    order = preferring_order(inst)
    out = ska_run(inst, order)
    assert out.ok and out.forest.edges == kruskal_single(graph_view(inst, 1), order)


def test_stage_partition_examples():
    parts = stage_partition(fix1(), 1)
    assert parts[1] == {frozenset("xzy")} and parts[2] == {frozenset("xwy")}
    assert stage_partition(fix1(), Fraction(3, 2)) == parts
    p2 = stage_partition(fix2(), 0)
    assert p2[1] == {frozenset(s) for s in (("a1", "c1"), ("a2", "c2"), ("b1", "d1"), ("b2", "d2"))}
    assert p2[2] == {frozenset(s) for s in (("a1", "p1", "b1"), ("a2", "p2", "b2"))}
    assert stage_partition(fix1_minus_xz(), 1)[1] == {frozenset("x"), frozenset("zy")}
    with pytest.raises(StageUnreachable):
        stage_partition(fix1_minus_xz(), 2)


def test_backtrack_examples():
    assert backtrack_solve(fix1()).edges == {"xz", "zy", "xw", "wy"}
    sol = backtrack_solve(fix2())
    light = {e.id for e in fix2().edges.values() if e.weight == 0}
    assert sol.edges == light | {"b1b2", "c1c2"}
    assert backtrack_solve(fix1_minus_xz()) is None
    assert backtrack_search(fix1_minus_xz()) == (None, Fraction(2))


def test_backtrack_order_replays():
    for make in (fix1, fix2, fix3):
        inst = make()
        order = backtrack_order(inst)
        out = ska_run(inst, order)
        assert out.ok and out.forest.edges == backtrack_solve(inst).edges
    assert backtrack_order(fix1_minus_xz()) is None


def test_required_weight1_count():
    inst = fix2()
    assert required_weight1_count(inst, 1) == 2
    assert required_weight1_count(inst, 2) == 1
    for t in enumerate_msts(graph_view(inst, 1)):
        assert sum(inst.edges[e].weight for e in t) == 2
    for t in enumerate_msts(graph_view(inst, 2)):
        assert sum(inst.edges[e].weight for e in t) == 1
    zero = SunflowerInstance.build(1, {"a": CORE, "b": CORE}, [Edge("ab", "a", "b", Fraction(0)), Edge("ab2", "a", "b", F1)])
    assert required_weight1_count(zero, 1) == 0
    star = SunflowerInstance.build(1, {"c": CORE, **{f"l{j}": CORE for j in range(4)}}, [Edge(f"s{j}", "c", f"l{j}", F1) for j in range(4)])
    assert required_weight1_count(star, 1) == 4
    with pytest.raises(ValueError):
        required_weight1_count(fix1(), 1)


def _stages(inst):
    edges = sorted(inst.edges.values(), key=lambda e: (e.weight, id_key(e.id)))
    return [(w, [e.id for e in grp]) for w, grp in groupby(edges, key=lambda e: e.weight)]


def _small(seed):
    rng = random.Random(seed)
    return gen_random_sunflower(GenParams(k=rng.choice([2, 3]), core=rng.randint(2, 4), exclusive=rng.randint(1, 3),
                                          edges=rng.randint(5, 10), palette=[1, 2, 3], seed=seed))


def test_stage_components_and_acceptance_are_order_independent():
    checked = 0
    for seed in range(400):
        inst = _small(seed)
        stages = _stages(inst)
        if any(len(ids) > 6 for _, ids in stages) or prod(factorial(len(ids)) for _, ids in stages) > 720:
            continue
        checked += 1
        for s, (w, _) in enumerate(stages):
            sub = restrict_by_weight(inst, w)
            partitions = set()
            accepted_by_last = {}
            for combo in product(*(permutations(ids) for _, ids in stages[: s + 1])):
                out = ska_run(sub, [e for perm in combo for e in perm])
                if not out.ok:
                    continue
                partitions.add(tuple(out.forest.components(i) for i in range(1, inst.k + 1)))
                last = frozenset(e for e in out.forest.edges if inst.edges[e].weight == w)
                assert accepted_by_last.setdefault(combo[-1], last) == last
            assert len(partitions) <= 1
            if partitions:
                assert partitions.pop() == tuple(stage_partition(inst, w)[i] for i in range(1, inst.k + 1))
    assert checked >= 100


def test_backtrack_matches_oracle():
    for seed in range(150):
        inst = k3_instance(seed) if seed % 2 else k2_instance(seed)
        found = backtrack_solve(inst)
        assert (found is not None) == brute_force_smst(inst).feasible
        if found is not None:
            assert verify_solution(inst, found.edges) == []


def test_kruskal_weight_matches_enumeration():
    rng = random.Random(5)
    for seed in range(200):
        inst = gen_random_sunflower(GenParams(k=1, core=rng.randint(2, 6), exclusive=0, edges=rng.randint(0, 8), palette=[1, 2, 3], seed=seed))
        view = graph_view(inst, 1)
        msts = enumerate_msts(view)
        forest = kruskal_single(view)
        assert forest in msts
        assert sum(inst.edges[e].weight for e in forest) == sum(inst.edges[e].weight for e in msts[0])
