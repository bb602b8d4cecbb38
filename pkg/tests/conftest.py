"""Shared fixtures and brute-force oracles.

The oracles below never touch the bitmask tables of the package; they work
from vertex sets and the edge list directly.
"""

import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest

from jacstab import DualGraph, cycle_graph, irreducible, path_graph, two_component

DATA = Path(__file__).parent / "data"


def subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, k))


def proper_subcurves(g, ambient=None):
    amb = frozenset(g.vertices if ambient is None else ambient)
    return [y for y in subsets(sorted(amb, key=g.position)) if y and y != amb]


def brute_chi(sheaf, y):
    """Euler characteristic of the quotient on y, from the edge list."""
    g = sheaf.graph
    y = frozenset(y)
    total = sum(sheaf.degree(v) + 1 - g.genus(v) for v in y)
    for e in g.edges:
        if e.u in y and e.v in y and e not in sheaf.nonfree:
            total -= 1
    return total


def brute_beta(sheaf, pol, y):
    return brute_chi(sheaf, y) - sum(Fraction(pol.weights[v], pol.rank) for v in y)


def brute_min_cut(g):
    best = None
    for y in proper_subcurves(g):
        c = sum(1 for e in g.edges if (e.u in y) != (e.v in y))
        best = c if best is None else min(best, c)
    return best


def brute_spanning_trees(g):
    """Count (n-1)-edge subsets that connect every vertex."""
    edges = [e for e in g.edges if not e.is_loop]
    n = g.n
    count = 0
    for combo in itertools.combinations(edges, n - 1):
        parent = {v: v for v in g.vertices}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for e in combo:
            a, b = find(e.u), find(e.v)
            if a == b:
                ok = False
                break
            parent[a] = b
        count += ok
    return count


def laplacian_image_contains(g, diff):
    """Whether the integer vector ``diff`` lies in the image of the Laplacian."""
    if sum(diff) != 0:
        return False
    n = g.n
    if n == 1:
        return all(x == 0 for x in diff)
    lap = g.laplacian()
    m = [[Fraction(lap[a][b]) for b in range(1, n)] + [Fraction(diff[a])] for a in range(1, n)]
    k = n - 1
    for col in range(k):
        piv = next(r for r in range(col, k) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for r in range(k):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return all((m[r][k] / m[r][r]).denominator == 1 for r in range(k))


def small_graphs():
    """Named fixture graphs with at most five vertices."""
    return {
        "G2(1)": two_component(1),
        "G2(2)": two_component(2),
        "G2(3)": two_component(3),
        "P3": path_graph(3),
        "C3": cycle_graph(3),
        "C1": cycle_graph(1),
        "loopy": DualGraph([("a", 1), ("b", 0), ("c", 0)], [("a", "b"), ("b", "c"), ("c", "a"), ("b", "b")]),
        "K4": DualGraph([(x, 0) for x in "abcd"], list(itertools.combinations("abcd", 2))),
        "P5": path_graph(5),
        "irr2": irreducible(2),
    }


@pytest.fixture
def rng():
    return random.Random(20261016)


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[head], *part]
        for k in range(len(part)):
            yield [*part[:k], [head, *part[k]], *part[k + 1 :]]


def stable_pieces(g, pol, support, window=range(-4, 6)):
    """Stable classes on ``support`` whose Euler characteristic matches the slopes there."""
    from jacstab import CombSheaf, is_stable

    support = sorted(support, key=g.position)
    total = sum(pol.weights[v] for v in support)
    if total % pol.rank:
        return []
    chi = total // pol.rank
    inner = g.internal_edges(support)
    out = []
    for s in subsets(inner):
        base = sum(1 - g.genus(v) for v in support) - (len(inner) - len(s))
        for head in itertools.product(window, repeat=len(support) - 1):
            last = chi - base - sum(head)
            piece = CombSheaf(g, [*head, last], s, ambient=support)
            assert piece.euler_char() == chi
            if is_stable(piece, pol):
                out.append(piece)
    return out


def part_systems(g, pol):
    """Every way to split the curve into stable pieces of relative beta zero."""
    for blocks in set_partitions(g.vertices):
        choices = [stable_pieces(g, pol, b) for b in blocks]
        yield from itertools.product(*choices)


# -- acceptance reporting -------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or rep.failed:
        prev = _CRITERIA.get(number, (title, True))[1]
        _CRITERIA[number] = (title, prev and not rep.failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
