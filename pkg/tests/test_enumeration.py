import itertools

import pytest

from jacstab import (
    CombSheaf,
    Polarization,
    class_id,
    count_jh_classes,
    cycle_graph,
    enumerate_classes,
    genus1_polarization,
    genus1_stratification,
    gr,
    is_quasistable,
    is_semistable,
    is_stable,
    is_W_quasistable,
    path_graph,
    spanning_tree_count,
    two_component,
)
from jacstab.errors import BudgetExceeded, ChiMismatch, InvalidGraph, JacstabError
from jacstab.samples import random_graph, random_polarization

from conftest import brute_spanning_trees, small_graphs, subsets


def brute_classes(g, pol, pred, window=range(-6, 8), w=None):
    """Classes found by scanning a wide box of degrees, checked with the predicate functions."""
    chi = pol.target
    found = set()
    for s in subsets(g.edges):
        base = sum(1 - x for x in g.genera) - (len(g.edges) - len(s))
        for head in itertools.product(window, repeat=g.n - 1):
            i = CombSheaf(g, [*head, chi - base - sum(head)], s)
            ok = {
                "semistable": lambda: is_semistable(i, pol).verdict,
                "stable": lambda: is_stable(i, pol).verdict,
                "quasistable": lambda: is_quasistable(i, pol).verdict,
                "W-quasistable": lambda: is_W_quasistable(i, pol, w).verdict,
            }[pred]()
            if ok:
                found.add(i)
    return found


@pytest.mark.parametrize("name", ["G2(1)", "G2(2)", "G2(3)", "P3", "C3", "loopy"])
def test_enumeration_is_complete(name, rng):
    g = small_graphs()[name]
    for _ in range(3):
        pol = random_polarization(rng, g, rng.randint(-2, 2))
        w = rng.choice(g.vertices)
        for pred in ("semistable", "stable", "quasistable", "W-quasistable"):
            got = enumerate_classes(g, pol, pol.target, pred, w=w).classes
            assert len(got) == len(set(got))
            assert set(got) == brute_classes(g, pol, pred, w=w)


def test_counts_by_stratum_and_lengths():
    g = two_component(2)
    res = enumerate_classes(g, Polarization(1, {"u": 0, "v": 0}), 0, "semistable")
    assert sum(res.counts_by_stratum.values()) == len(res)
    assert res.counts_by_stratum[0] == len(res.invertible) == 3


def test_jh_count_golden():
    g = two_component(3)
    pol = Polarization(1, {"u": 0, "v": 0})
    assert count_jh_classes(g, pol, 0) == 6
    assert count_jh_classes(g, pol, 0, invertible_only=True) == 3
    res = enumerate_classes(g, pol, 0, "semistable")
    stable = enumerate_classes(g, pol, 0, "stable")
    split = [c for c in res.jh_classes if len(c) > 1]
    assert len(stable) == 5 and len(split) == 1


def test_tight_path_witness():
    p3 = path_graph(3)
    pol = Polarization(1, {"v1": 1, "v2": 1, "v3": 1})
    simple = enumerate_classes(p3, pol, 3, "simple-semistable").classes
    quasi = set(enumerate_classes(p3, pol, 3, "quasistable").classes)
    witnesses = [c for c in simple if c not in quasi]
    assert CombSheaf(p3, [1, 0, 1]) in witnesses
    for c in witnesses:
        assert not any(is_W_quasistable(c, pol, w) for w in p3.vertices)


@pytest.mark.parametrize("name", ["G2(2)", "G2(3)", "P3", "C3", "loopy"])
def test_every_jh_class_has_w_quasistable_member(name, rng):
    g = small_graphs()[name]
    for _ in range(3):
        pol = random_polarization(rng, g, rng.randint(-1, 2))
        semi = enumerate_classes(g, pol, pol.target, "semistable")
        for w in g.vertices:
            wq = enumerate_classes(g, pol, pol.target, "W-quasistable", w=w)
            assert {gr(c, pol) for c in wq.classes} == semi.jh_classes


@pytest.mark.parametrize("name", sorted(small_graphs()))
def test_spanning_trees_against_brute_force(name):
    g = small_graphs()[name]
    assert spanning_tree_count(g) == brute_spanning_trees(g)


def test_spanning_trees_random(rng):
    for _ in range(30):
        g = random_graph(rng, 5, 7)
        assert spanning_tree_count(g) == brute_spanning_trees(g)


@pytest.mark.parametrize("name", ["G2(2)", "G2(3)", "P3", "C3", "loopy", "K4"])
def test_sigma_quasistable_one_per_twist_class(name, rng):
    g = small_graphs()[name]
    g = g.with_markings({"p": g.vertices[-1]})
    for chi in range(-2, 3):
        pol = random_polarization(rng, g, chi)
        res = enumerate_classes(g, pol, chi, "sigma-quasistable", mark="p", invertible_only=True)
        ids = [class_id(c) for c in res.classes]
        assert len(ids) == len(set(ids)) == spanning_tree_count(g)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_genus1_strata(n):
    c = cycle_graph(n).with_markings({"p": "v1"})
    pol = genus1_polarization(c, "p")
    assert pol.target == -1
    rep = genus1_stratification(c, pol, "p")
    assert (rep.invertible, rep.singular, rep.deeper) == (n, n, 0)
    assert rep.matches_curve
    with pytest.raises(InvalidGraph):
        g = path_graph(2).with_markings({"p": "v1"})
        genus1_stratification(g, genus1_polarization(g, "p"), "p")


def test_input_errors(monkeypatch):
    g = two_component(2)
    pol = Polarization(1, {"u": 0, "v": 0})
    with pytest.raises(ChiMismatch):
        enumerate_classes(g, pol, 1, "semistable")
    with pytest.raises(JacstabError):
        enumerate_classes(g, pol, 0, "wobbly")
    with pytest.raises(JacstabError):
        enumerate_classes(g, pol, 0, "W-quasistable")
    monkeypatch.setenv("JACSTAB_MAX_SUBSETS", "8")
    with pytest.raises(BudgetExceeded):
        enumerate_classes(g, pol, 0, "semistable")
    assert len(enumerate_classes(g, pol, 0, "semistable", invertible_only=True)) == 3


def test_parallel_matches_serial():
    g = small_graphs()["K4"]
    pol = Polarization(1, dict.fromkeys(g.vertices, 0))
    a = enumerate_classes(g, pol, 0, "semistable")
    b = enumerate_classes(g, pol, 0, "semistable", jobs=2)
    assert a.classes == b.classes


def test_cycle_generic_jh_count_is_spanning_trees():
    c3 = cycle_graph(3)
    for chi in (1, 2):
        pol = Polarization(3, dict.fromkeys(c3.vertices, chi))
        semi = enumerate_classes(c3, pol, chi, "semistable")
        assert semi.classes == enumerate_classes(c3, pol, chi, "stable").classes
        assert count_jh_classes(c3, pol, chi, invertible_only=True) == spanning_tree_count(c3) == 3
