"""Exhaustive enumeration of classes by stability predicate, and counting oracles.

Degrees are bounded through single components: a semistable class has
``0 <= beta({v}) <= (free nodes at v)`` for every component ``v`` of a
reducible curve, because ``beta({v}) + beta(X - v)`` equals the number of
free nodes between ``v`` and the rest.  The last degree is fixed by the
Euler characteristic.  Everything inside the box is then checked exactly.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .curve import DualGraph, Edge, Vertex
from .errors import BudgetExceeded, ChiMismatch, InvalidGraph, InvariantBreach, JacstabError
from .jordan_holder import JHClass, gr
from .sheaf import CombSheaf
from .stability import (
    Polarization,
    is_p_quasistable,
    is_quasistable,
    is_semistable,
    is_stable,
    is_W_quasistable,
    weight_table,
)

PREDICATES = (
    "semistable",
    "stable",
    "quasistable",
    "W-quasistable",
    "sigma-quasistable",
    "simple-semistable",
)

DEFAULT_MAX_SUBSETS = 1 << 16


def _budget() -> int:
    raw = os.environ.get("JACSTAB_MAX_SUBSETS")
    return int(raw) if raw else DEFAULT_MAX_SUBSETS


@dataclass
class EnumerationResult:
    predicate: str
    polarization: Polarization
    chi: int
    classes: list[CombSheaf] = field(default_factory=list)

    @property
    def counts_by_stratum(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.classes:
            out[len(c.nonfree_idx)] = out.get(len(c.nonfree_idx), 0) + 1
        return dict(sorted(out.items()))

    @property
    def invertible(self) -> list[CombSheaf]:
        return [c for c in self.classes if c.is_invertible]

    @cached_property
    def jh_classes(self) -> set[JHClass]:
        return {gr(c, self.polarization) for c in self.classes}

    @property
    def jh_class_count(self) -> int:
        return len(self.jh_classes)

    def __len__(self):
        return len(self.classes)


def _holds(pred: str, rb: list[int], full: int, wbit: int, simple: bool, n: int) -> bool:
    sub = (full - 1) & full
    masks = []
    while sub:
        masks.append(sub)
        sub = (sub - 1) & full
    if any(rb[m] < 0 for m in masks):
        return False
    if pred == "semistable":
        return True
    if pred == "simple-semistable":
        return simple
    if pred == "stable":
        return all(rb[m] > 0 for m in masks)
    if pred in ("W-quasistable", "sigma-quasistable"):
        return all(rb[m] > 0 for m in masks if m & wbit)
    if pred == "quasistable":
        return any(all(rb[m] > 0 for m in masks if m >> v & 1) for v in range(n))
    raise JacstabError(f"unknown predicate {pred!r}")


def _scan_nonfree(job):
    graph, r, e, chi, pred, wbit, s = job
    n = graph.n
    full = graph.full_mask
    size = 1 << n
    gen = graph.genera
    free = [k for k in range(len(graph.edges)) if k not in s]
    const = [0] * size
    for m in range(1, size):
        low = m & -m
        const[m] = const[m ^ low] + 1 - gen[low.bit_length() - 1]
    for k in free:
        a, b = graph.edge_ends(k)
        both = (1 << a) | (1 << b)
        for m in range(size):
            if m & both == both:
                const[m] -= 1
    simple = graph._is_connected(full, free)
    if n == 1:
        ranges = []
    else:
        ranges = []
        for v in range(n - 1):
            links = sum(1 for k in free if (graph.edge_ends(k)[0] == v) != (graph.edge_ends(k)[1] == v))
            lo = math.ceil(Fraction(e[1 << v], r) - const[1 << v])
            hi = math.floor(Fraction(e[1 << v], r) - const[1 << v] + links)
            ranges.append(range(lo, hi + 1))
    hits = []
    base = [r * const[m] - e[m] for m in range(size)]
    for head in itertools.product(*ranges):
        last = chi - const[full] - sum(head)
        d = (*head, last)
        dsum = [0] * size
        for m in range(1, size):
            low = m & -m
            dsum[m] = dsum[m ^ low] + d[low.bit_length() - 1]
        rb = [r * dsum[m] + base[m] for m in range(size)]
        if _holds(pred, rb, full, wbit, simple, n):
            hits.append(d)
    return s, hits


def _verify(c: CombSheaf, pol: Polarization, pred: str, w, mark) -> bool:
    if pred == "semistable":
        return is_semistable(c, pol).verdict
    if pred == "stable":
        return is_stable(c, pol).verdict
    if pred == "quasistable":
        return is_quasistable(c, pol).verdict
    if pred == "W-quasistable":
        return is_W_quasistable(c, pol, w).verdict
    if pred == "sigma-quasistable":
        return is_p_quasistable(c, pol, mark).verdict
    return is_semistable(c, pol).verdict and c.is_simple()


def enumerate_classes(
    graph: DualGraph,
    pol: Polarization,
    chi: int,
    predicate: str,
    w: Vertex | None = None,
    mark: str | None = None,
    invertible_only: bool = False,
    max_nonfree: int | None = None,
    jobs: int = 1,
    verify: bool = True,
) -> EnumerationResult:
    """All classes ``(S, d)`` on ``graph`` with Euler characteristic ``chi`` satisfying ``predicate``.

    ``w`` is required for ``W-quasistable`` and ``mark`` for
    ``sigma-quasistable``.  ``S`` ranges over every subset of nodes (or only
    the empty one with ``invertible_only``, or those of size at most
    ``max_nonfree``).  The number of node subsets times the number of
    subcurves is capped by ``JACSTAB_MAX_SUBSETS``.
    """
    if predicate not in PREDICATES:
        raise JacstabError(f"unknown predicate {predicate!r}; choose from {', '.join(PREDICATES)}")
    if pol.target != chi:
        raise ChiMismatch(f"polarization target {pol.target} differs from chi = {chi}")
    wbit = 0
    if predicate == "W-quasistable":
        if w is None:
            raise JacstabError("W-quasistable enumeration needs a component w")
        wbit = 1 << graph.position(w)
    if predicate == "sigma-quasistable":
        if mark is None:
            raise JacstabError("sigma-quasistable enumeration needs a marking")
        wbit = 1 << graph.position(graph.mark_vertex(mark))
    nedges = len(graph.edges)
    limit = 0 if invertible_only else nedges if max_nonfree is None else max_nonfree
    subsets = [s for k in range(limit + 1) for s in itertools.combinations(range(nedges), k)]
    budget = _budget()
    if len(subsets) * (1 << graph.n) > budget:
        raise BudgetExceeded(
            f"{len(subsets)} node subsets x {1 << graph.n} subcurves exceeds budget {budget} "
            "(raise JACSTAB_MAX_SUBSETS)"
        )
    e = weight_table(graph, pol)
    work = [(graph, pol.rank, e, chi, predicate, wbit, frozenset(s)) for s in subsets]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(_scan_nonfree, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        found = [_scan_nonfree(job) for job in work]

    classes = []
    for s, hits in found:
        edges = [graph.edges[k] for k in s]
        for d in hits:
            c = CombSheaf(graph, d, edges)
            if c.euler_char() != chi:
                raise InvariantBreach(f"enumerated class {c!r} has the wrong Euler characteristic")
            if verify and not _verify(c, pol, predicate, w, mark):
                raise InvariantBreach(f"enumerated class {c!r} fails {predicate}")
            classes.append(c)
    classes.sort(key=lambda c: (tuple(sorted(c.nonfree_idx)), c.degree_vector))
    return EnumerationResult(predicate, pol, chi, classes)


def count_jh_classes(graph: DualGraph, pol: Polarization, chi: int, **kw) -> int:
    """Number of Jordan-Hoelder classes among semistable classes."""
    return enumerate_classes(graph, pol, chi, "semistable", **kw).jh_class_count


def spanning_tree_count(graph: DualGraph) -> int:
    """Matrix-tree theorem: determinant of the Laplacian with one row and column removed."""
    import sympy

    if graph.n == 1:
        return 1
    lap = graph.laplacian()
    return int(sympy.Matrix([row[1:] for row in lap[1:]]).det(method="bareiss"))


# -- genus one ----------------------------------------------------------------


def _is_genus1_cycle(graph: DualGraph) -> bool:
    if any(graph.genera) or graph.arithmetic_genus != 1:
        return False
    if graph.n == 1:
        return len(graph.edges) == 1
    return all(graph.link_degree(v, graph.vertices) == 2 for v in graph.vertices) and not any(
        e.is_loop for e in graph.edges
    )


def genus1_polarization(graph: DualGraph, mark: str, line_degrees: Mapping[Vertex, int] | None = None) -> Polarization:
    """Polarization ``M^* (x) O(p)`` for a line bundle ``M`` of the given multidegree.

    The slopes are the degrees of ``M`` with one unit removed at the marked
    component; ``line_degrees`` defaults to degree zero everywhere.
    """
    m = dict.fromkeys(graph.vertices, 0) if line_degrees is None else dict(line_degrees)
    m[graph.mark_vertex(mark)] -= 1
    return Polarization(1, m)


@dataclass
class Genus1Report:
    n: int
    invertible: int
    by_edge: dict[Edge, int]
    deeper: int

    @property
    def singular(self) -> int:
        return sum(self.by_edge.values())

    @property
    def matches_curve(self) -> bool:
        """Strata look like the curve itself: ``n`` open cells and one point per node."""
        return (
            self.invertible == self.n
            and all(c == 1 for c in self.by_edge.values())
            and self.deeper == 0
        )


def genus1_stratification(graph: DualGraph, pol: Polarization, mark: str) -> Genus1Report:
    if not _is_genus1_cycle(graph):
        raise InvalidGraph("genus-1 stratification needs a cycle of rational components")
    res = enumerate_classes(graph, pol, pol.target, "sigma-quasistable", mark=mark)
    by_edge = {e: 0 for e in graph.edges}
    invertible = deeper = 0
    for c in res.classes:
        if c.is_invertible:
            invertible += 1
        elif len(c.nonfree_idx) == 1:
            (k,) = c.nonfree_idx
            by_edge[graph.edges[k]] += 1
        else:
            deeper += 1
    return Genus1Report(graph.n, invertible, by_edge, deeper)
