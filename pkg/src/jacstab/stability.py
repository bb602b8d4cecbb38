"""Polarizations and the stability predicates built on the beta function.

All comparisons are exact.  Internally we work with ``r * beta``, which is
an integer for every subcurve, and only convert to ``Fraction`` when values
are reported.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .curve import DualGraph, Vertex
from .errors import ChiMismatch, Infeasible, InvalidPolarization, InvalidSheaf, InvalidSubcurve
from .sheaf import CombSheaf

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Polarization:
    """Rank ``r`` and integer weights ``e_v``; slopes are ``e_v / r``.

    The weights play the role of minus the degrees of a vector bundle of
    rank ``r`` on each component, so only the slopes matter for stability.
    """

    rank: int
    weights: Mapping[Vertex, int]

    def __post_init__(self):
        if int(self.rank) != self.rank or self.rank <= 0:
            raise InvalidPolarization(f"rank must be a positive integer, got {self.rank!r}")
        w = dict(self.weights)
        for v, e in w.items():
            if int(e) != e:
                raise InvalidPolarization(f"weight {e!r} at {v!r} is not an integer")
        if sum(w.values()) % self.rank:
            raise InvalidPolarization(
                f"total weight {sum(w.values())} is not divisible by rank {self.rank}"
            )
        object.__setattr__(self, "rank", int(self.rank))
        object.__setattr__(self, "weights", {v: int(e) for v, e in w.items()})

    @classmethod
    def from_slopes(cls, slopes: Mapping[Vertex, Fraction | int]) -> "Polarization":
        """Smallest-rank polarization with the given slopes (rank = lcm of denominators)."""
        q = {v: Fraction(x) for v, x in slopes.items()}
        r = math.lcm(*(x.denominator for x in q.values())) if q else 1
        return cls(r, {v: int(x * r) for v, x in q.items()})

    @property
    def slopes(self) -> dict:
        return {v: Fraction(e, self.rank) for v, e in self.weights.items()}

    @property
    def target(self) -> int:
        return sum(self.weights.values()) // self.rank

    def slope_sum(self, vertices) -> Fraction:
        return Fraction(sum(self.weights[v] for v in vertices), self.rank)

    def __eq__(self, other):
        if not isinstance(other, Polarization):
            return NotImplemented
        return self.slopes == other.slopes

    def __hash__(self):
        return hash(tuple(sorted((str(v), x) for v, x in self.slopes.items())))

    def __repr__(self):
        return f"Polarization(rank={self.rank}, weights={self.weights!r})"


@dataclass
class StabilityReport:
    """Verdict of one predicate plus the subcurves that decided it.

    ``minimum`` is the subcurve of least beta among those the predicate
    inspects (lexicographically smallest on ties); ``violations`` lists every
    inspected subcurve breaking the predicate's inequality, sorted by beta.
    """

    predicate: str
    verdict: bool
    minimum: tuple[frozenset, Fraction] | None = None
    violations: list[tuple[frozenset, Fraction]] = field(default_factory=list)
    components: tuple = ()

    def __bool__(self):
        return self.verdict


# -- tables ---------------------------------------------------------------


def weight_table(graph: DualGraph, pol: Polarization) -> list[int]:
    """``e_Y`` for every vertex mask ``Y``."""
    missing = [v for v in graph.vertices if v not in pol.weights]
    if missing:
        raise InvalidPolarization(f"polarization has no weight for {missing!r}")
    size = 1 << graph.n
    table = [0] * size
    w = [pol.weights[v] for v in graph.vertices]
    for m in range(1, size):
        low = m & -m
        table[m] = table[m ^ low] + w[low.bit_length() - 1]
    return table


def rbeta_table(i: CombSheaf, pol: Polarization) -> list[int]:
    """``r * beta(Y)`` for every mask ``Y`` inside the support.

    Raises ``ChiMismatch`` unless the sheaf's Euler characteristic equals the
    sum of the slopes over its support.
    """
    e = weight_table(i.graph, pol)
    r = pol.rank
    re = i._re_table
    a = i.ambient_mask
    if re[a] * r != e[a]:
        raise ChiMismatch(
            f"chi(I) = {re[a]} but the polarization slopes sum to {Fraction(e[a], r)} on the support"
        )
    return [r * re[m] - e[m] for m in range(len(e))]


def beta(i: CombSheaf, pol: Polarization, y) -> Fraction:
    m = i._check_sub(y)
    return Fraction(rbeta_table(i, pol)[m], pol.rank)


def _scan(i, pol, rb, masks, strict):
    """Minimum and violations of ``rb`` over ``masks``."""
    g = i.graph
    best = None
    bad = []
    for m in masks:
        v = rb[m]
        if best is None or (v, g.mask_key(m)) < (rb[best], g.mask_key(best)):
            best = m
        if v < 0 or strict and v == 0:
            bad.append(m)
    bad.sort(key=lambda m: (rb[m], g.mask_key(m)))
    to_pair = lambda m: (g.subcurve(m), Fraction(rb[m], pol.rank))  # noqa: E731
    return (to_pair(best) if best is not None else None), [to_pair(m) for m in bad]


def _free_connected_cuts(i: CombSheaf):
    # beta adds over free components, so connected Y suffice; for a simple
    # sheaf the complement may be taken connected as well
    g = i.graph
    both = i.is_simple()
    for m in g.proper_masks(i.ambient_mask):
        if not g._is_connected(m, i.free_idx):
            continue
        if both and not g._is_connected(i.ambient_mask & ~m, i.free_idx):
            continue
        yield m


def is_semistable(i: CombSheaf, pol: Polarization, prune: bool = False) -> StabilityReport:
    """beta >= 0 on every nonempty proper subcurve.

    With ``prune=True`` only subcurves connected through free nodes are
    inspected (with connected complement too when the sheaf is simple); the
    verdict is the same, the reported minimum may differ.
    """
    rb = rbeta_table(i, pol)
    masks = _free_connected_cuts(i) if prune else i.graph.proper_masks(i.ambient_mask)
    low, bad = _scan(i, pol, rb, masks, strict=False)
    return StabilityReport("semistable", not bad, low, bad)


def is_stable(i: CombSheaf, pol: Polarization) -> StabilityReport:
    rb = rbeta_table(i, pol)
    low, bad = _scan(i, pol, rb, i.graph.proper_masks(i.ambient_mask), strict=True)
    return StabilityReport("stable", not bad, low, bad)


def _w_report(i, pol, rb, w, name) -> StabilityReport:
    g = i.graph
    bit = 1 << g.position(w)
    if not i.ambient_mask & bit:
        raise InvalidSubcurve(f"component {w!r} is not in the support")
    low, bad = _scan(i, pol, rb, g.proper_masks(i.ambient_mask), strict=False)
    if bad:
        return StabilityReport(name, False, low, bad)
    containing = (m for m in g.proper_masks(i.ambient_mask) if m & bit)
    low, bad = _scan(i, pol, rb, containing, strict=True)
    return StabilityReport(name, not bad, low, bad)


def is_W_quasistable(i: CombSheaf, pol: Polarization, w: Vertex) -> StabilityReport:
    """Semistable, and beta > 0 on every proper subcurve containing ``w``."""
    return _w_report(i, pol, rbeta_table(i, pol), w, f"W-quasistable({w})")


def is_quasistable(i: CombSheaf, pol: Polarization) -> StabilityReport:
    rb = rbeta_table(i, pol)
    g = i.graph
    semi = is_semistable(i, pol)
    if not semi:
        return StabilityReport("quasistable", False, semi.minimum, semi.violations)
    good = tuple(
        v for v in g.sorted_members(i.ambient_mask) if _w_report(i, pol, rb, v, "").verdict
    )
    return StabilityReport("quasistable", bool(good), semi.minimum, [], good)


def is_p_quasistable(i: CombSheaf, pol: Polarization, mark: str) -> StabilityReport:
    """Quasistability at the component carrying the marked smooth point."""
    w = i.graph.mark_vertex(mark)
    return _w_report(i, pol, rbeta_table(i, pol), w, f"p-quasistable({mark})")


def check_all(i: CombSheaf, pol: Polarization, w: Vertex | None = None) -> dict[str, StabilityReport]:
    """Every predicate at once; ``w`` defaults to the first support vertex."""
    if w is None:
        w = i.graph.sorted_members(i.ambient_mask)[0]
    out = {
        "semistable": is_semistable(i, pol),
        "stable": is_stable(i, pol),
        "W-quasistable": is_W_quasistable(i, pol, w),
        "quasistable": is_quasistable(i, pol),
    }
    for mark in sorted(i.graph.markings):
        out[f"p-quasistable({mark})"] = is_p_quasistable(i, pol, mark)
    return out


# -- Seshadri weights -------------------------------------------------------


def seshadri_convert(a: Mapping[Vertex, Fraction | int | str], chi: int) -> Polarization:
    """Polarization whose semistability is Seshadri's ``a``-semistability at ``chi``.

    ``a`` assigns each component a positive rational weight, the weights
    summing to one.  The slopes are ``a_v * chi``.
    """
    weights = {v: Fraction(x) for v, x in a.items()}
    if not weights:
        raise InvalidPolarization("no Seshadri weights given")
    bad = [v for v, x in weights.items() if x <= 0]
    if bad:
        raise InvalidPolarization(f"Seshadri weights must be positive, not at {bad!r}")
    if sum(weights.values()) != 1:
        raise InvalidPolarization(f"Seshadri weights sum to {sum(weights.values())}, not 1")
    return Polarization.from_slopes({v: x * chi for v, x in weights.items()})


# -- polarization search ----------------------------------------------------


def _orientation_slopes(i: CombSheaf, w: Vertex) -> dict:
    """Integral slopes from a free spanning tree oriented towards ``w``.

    Every free node is charged to one endpoint: tree edges to the endpoint
    nearer ``w``, the rest to their first endpoint.  With
    ``q_v = d_v + 1 - g_v - (charges at v)`` the value ``beta(Y)`` counts the
    free linking nodes of ``Y`` charged inside ``Y``, which is positive for
    every proper ``Y`` containing ``w``.
    """
    g = i.graph
    root = g.position(w)
    charge = dict.fromkeys(g.mask_key(i.ambient_mask), 0)
    seen = {root}
    frontier = [root]
    tree = set()
    while frontier:
        nxt = []
        for x in frontier:
            for n in i.free_idx:
                a, b = g.edge_ends(n)
                y = b if a == x else a if b == x else None
                if y is not None and y not in seen:
                    seen.add(y)
                    tree.add(n)
                    charge[x] += 1
                    nxt.append(y)
        frontier = nxt
    for n in i.free_idx:
        if n not in tree:
            charge[g.edge_ends(n)[0]] += 1
    d = i.degree_vector
    return {
        g.vertices[p]: Fraction(d[p] + 1 - g.genera[p] - charge[p]) for p in charge
    }


def _lp_slopes(i: CombSheaf, w: Vertex) -> dict | None:
    from scipy.optimize import linprog

    g = i.graph
    members = g.mask_key(i.ambient_mask)
    wbit = 1 << g.position(w)
    chi = i.euler_char()
    re = i._re_table
    masks = list(g.proper_masks(i.ambient_mask))
    biggest = max([abs(re[m]) for m in masks] + [abs(chi)])
    eps = Fraction(1, 2 * len(members) * (biggest + 1))
    rows = [[1.0 if m >> p & 1 else 0.0 for p in members] for m in masks]
    rhs = [float(re[m] - (eps if m & wbit else 0)) for m in masks]
    res = linprog(
        c=[0.0] * len(members),
        A_ub=rows or None,
        b_ub=rhs or None,
        A_eq=[[1.0] * len(members)],
        b_eq=[float(chi)],
        bounds=[(None, None)] * len(members),
        method="highs",
    )
    if res.status != 0:
        return None
    q = [Fraction(x).limit_denominator(10**6) for x in res.x]
    q[-1] = chi - sum(q[:-1])
    return {g.vertices[p]: x for p, x in zip(members, q)}


def find_polarization(i: CombSheaf, w: Vertex, method: str = "lp") -> Polarization:
    """A polarization making the simple sheaf ``i`` quasistable at component ``w``.

    ``method="lp"`` solves the finite system of subcurve inequalities (strict
    ones tightened by a positive margin) and rounds the solution to exact
    rationals; ``method="orientation"`` uses the integral spanning-tree
    construction.  Either way the result is re-verified exactly, and the LP
    falls back to the orientation construction if rounding spoils it.
    """
    g = i.graph
    if not i.ambient_mask >> g.position(w) & 1:
        raise InvalidSubcurve(f"component {w!r} is not in the support")
    if not i.is_simple():
        raise InvalidSheaf("find_polarization requires a simple sheaf")
    if method not in ("lp", "orientation"):
        raise ValueError(f"unknown method {method!r}")
    candidates = []
    if method == "lp":
        candidates.append(("lp", _lp_slopes(i, w)))
    candidates.append(("orientation", _orientation_slopes(i, w)))
    for name, slopes in candidates:
        if slopes is None:
            log.warning("LP found no polarization for %r; trying spanning-tree charges", i)
            continue
        full = dict.fromkeys(g.vertices, Fraction(0))
        full.update(slopes)
        pol = Polarization.from_slopes(full)
        if is_W_quasistable(i, pol, w).verdict:
            return pol
        log.warning("%s candidate failed exact verification for %r", name, i)
    raise Infeasible(f"no polarization makes {i!r} quasistable at {w!r}")
