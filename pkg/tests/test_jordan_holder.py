import itertools

import pytest

from jacstab import (
    CombSheaf,
    JHClass,
    Polarization,
    build_quasistable,
    enumerate_classes,
    glue,
    gr,
    is_stable,
    is_W_quasistable,
    jh_equivalent,
    jh_filtration,
    two_component,
)
from jacstab.errors import ChiMismatch, InvalidParts, NotSemistable
from jacstab.jordan_holder import order_parts
from jacstab.samples import random_polarization

from conftest import part_systems, small_graphs

G2 = two_component(2)
POL11 = Polarization(1, {"u": 1, "v": 1})


def test_stable_class_is_its_own_graded():
    i = CombSheaf(two_component(3), {"u": 1, "v": 0})
    pol = Polarization(1, {"u": 1, "v": -1})
    assert is_stable(i, pol)
    f = jh_filtration(i, pol)
    assert len(f) == 1 and f.pieces == (i,)


def test_tight_class_splits():
    i = CombSheaf(G2, {"u": 0, "v": 2})
    assert i.euler_char() == 2
    f = jh_filtration(i, POL11)
    assert [s.quotient_support for s in f.steps] == [frozenset({"u"}), frozenset({"v"})]
    assert [p.multidegree for p in f.pieces] == [{"u": 0}, {"v": 0}]
    assert all(p.euler_char() == 1 for p in f.pieces)
    split = gr(i, POL11).direct_sum()
    assert split.nonfree == set(G2.edges) and split.multidegree == {"u": 0, "v": 0}
    assert jh_equivalent(i, split, POL11)
    assert jh_equivalent(i, CombSheaf(G2, {"u": 2, "v": 0}), POL11)
    assert not jh_equivalent(i, CombSheaf(G2, {"u": 1, "v": 1}), POL11)


def test_errors():
    with pytest.raises(NotSemistable):
        jh_filtration(CombSheaf(G2, {"u": 3, "v": -1}), POL11)
    with pytest.raises(ChiMismatch):
        jh_equivalent(CombSheaf(G2, [0, 2]), CombSheaf(G2, [0, 1]), POL11)
    with pytest.raises(ValueError):
        jh_filtration(CombSheaf(G2, [0, 2]), POL11, choice="middle")
    u = CombSheaf(G2, {"u": 0}, ambient={"u"})
    with pytest.raises(InvalidParts, match="cover"):
        build_quasistable([u], "u", POL11)
    with pytest.raises(InvalidParts):
        build_quasistable([u, CombSheaf(G2, {"v": 1}, ambient={"v"})], "u", POL11)


def _semistable_classes(g, pol):
    return enumerate_classes(g, pol, pol.target, "semistable").classes


def _polarizations(g, rng, count=4):
    out = [Polarization(1, dict.fromkeys(g.vertices, 0)), Polarization(1, dict.fromkeys(g.vertices, 1))]
    for _ in range(count):
        out.append(random_polarization(rng, g, rng.randint(-1, 2), max_rank=3))
    return out


@pytest.mark.parametrize("name", ["G2(1)", "G2(2)", "G2(3)", "P3", "C3", "C1", "loopy", "K4"])
def test_graded_is_independent_of_choice(name, rng):
    g = small_graphs()[name]
    for pol in _polarizations(g, rng):
        for i in _semistable_classes(g, pol):
            first = jh_filtration(i, pol, "first")
            last = jh_filtration(i, pol, "last")
            assert JHClass(first.pieces) == JHClass(last.pieces)
            supports = [s.quotient_support for s in first.steps]
            assert frozenset().union(*supports) == frozenset(g.vertices)
            assert sum(len(s) for s in supports) == g.n
            assert sum(p.euler_char() for p in first.pieces) == i.euler_char()
            for p in first.pieces:
                assert is_stable(p, pol)
            split = gr(i, pol).direct_sum()
            assert split.euler_char() == i.euler_char()
            assert gr(split, pol) == gr(i, pol)


@pytest.mark.parametrize("name", ["G2(2)", "G2(3)", "P3", "C3"])
def test_round_trip_every_part_system(name):
    g = small_graphs()[name]
    seen = 0
    for weights in itertools.product(range(-1, 2), repeat=g.n):
        for rank in (1, 2):
            pol = Polarization(rank, dict(zip(g.vertices, weights))) if sum(weights) % rank == 0 else None
            if pol is None:
                continue
            for parts in part_systems(g, pol):
                target = JHClass(parts)
                for w in g.vertices:
                    built = build_quasistable(parts, w, pol)
                    assert gr(built, pol) == target
                    assert is_W_quasistable(built, pol, w)
                    if len(parts) == 1:
                        continue
                    ordered = order_parts(parts, w)
                    split = glue(ordered, keep_free=False)
                    assert gr(split, pol) == target
                    assert not is_W_quasistable(split, pol, w)
                    # w's piece glued first instead of last
                    wrong = [ordered[-1], *ordered[:-1]]
                    try:
                        other = glue(wrong)
                    except InvalidParts:
                        continue
                    assert gr(other, pol) == target
                    assert not is_W_quasistable(other, pol, w)
                seen += 1
    assert seen > 0


def test_constructor_examples():
    u = CombSheaf(G2, {"u": 0}, ambient={"u"})
    v = CombSheaf(G2, {"v": 0}, ambient={"v"})
    built = build_quasistable([u, v], "v", POL11)
    assert built.nonfree == {G2.edges[1]} and built.multidegree == {"u": 0, "v": 1}
    assert built.euler_char() == 2
    assert is_W_quasistable(built, POL11, "v") and gr(built, POL11) == JHClass([u, v])

    from jacstab import path_graph

    p3 = path_graph(3)
    pol = Polarization(1, {"v1": 1, "v2": 1, "v3": 1})
    parts = [CombSheaf(p3, {x: 0}, ambient={x}) for x in p3.vertices]
    built = build_quasistable(parts, "v1", pol)
    assert is_W_quasistable(built, pol, "v1") and gr(built, pol) == JHClass(parts)
    assert built.is_invertible


def test_tight_path_filtration():
    from jacstab import path_graph

    p3 = path_graph(3)
    pol = Polarization(1, {"v1": 1, "v2": 1, "v3": 1})
    i = CombSheaf(p3, [1, 0, 1])
    f = jh_filtration(i, pol)
    assert [s.quotient_support for s in f.steps] == [frozenset({"v2"}), frozenset({"v1"}), frozenset({"v3"})]
    assert all(p.euler_char() == 1 and p.multidegree == {v: 0 for v in p.ambient} for p in f.pieces)
