"""Twists along subcurves and the semistable / sigma-quasistable reductions.

For invertible classes on a curve with regular total space, replacing a
family by the kernel onto the special fibre's restriction to ``Z`` changes
the special multidegree by the Laplacian image of the indicator of ``Z``:
chip-firing in reverse.  Reductions here run only in that invertible regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .curve import DualGraph
from .errors import InvalidSheaf, InvalidSubcurve, NotSemistable, ReductionCapExceeded, InvariantBreach
from .sheaf import CombSheaf
from .stability import Polarization, rbeta_table


@dataclass(frozen=True)
class TwistStep:
    fired: frozenset
    beta_min: Fraction
    phase: str = "semistable"


@dataclass
class TwistTrace:
    start: CombSheaf
    steps: list[TwistStep] = field(default_factory=list)
    final: CombSheaf | None = None

    @property
    def iterations(self) -> int:
        return len(self.steps)

    def replay(self) -> CombSheaf:
        cur = self.start
        for s in self.steps:
            cur = twist(cur, s.fired)
        return cur


def _require_invertible(i: CombSheaf):
    if not i.is_invertible or i.ambient_mask != i.graph.full_mask:
        raise InvalidSheaf("reduction works on invertible classes on the whole curve")


def twist_vector(graph: DualGraph, degrees, mask: int) -> list[int]:
    """Degree vector after twisting by the subcurve ``mask`` (no validation)."""
    d = list(degrees)
    for a, b in (graph.edge_ends(n) for n in range(len(graph.edges))):
        if a == b:
            continue
        ina, inb = mask >> a & 1, mask >> b & 1
        if ina and not inb:
            d[a] += 1
            d[b] -= 1
        elif inb and not ina:
            d[b] += 1
            d[a] -= 1
    return d


def twist(i: CombSheaf, z) -> CombSheaf:
    """Twist an invertible class along the nonempty proper subcurve ``z``.

    Every vertex of ``z`` gains one degree per node leading out of ``z``,
    every vertex outside loses one per node leading into ``z``.
    """
    _require_invertible(i)
    g = i.graph
    m = g.mask(z)
    if not m or m == g.full_mask:
        raise InvalidSubcurve("twist needs a nonempty proper subcurve")
    return i.with_degrees(twist_vector(g, i.degree_vector, m))


def default_cap(i: CombSheaf, pol: Polarization) -> int:
    rb = rbeta_table(i, pol)
    return 10 * (1 + sum(abs(rb[m]) for m in i.graph.proper_masks()))


def _max_minimizer(g: DualGraph, rb: list[int]) -> tuple[int, int]:
    masks = [0, *g.proper_masks(), g.full_mask]
    values = [0 if m in (0, g.full_mask) else rb[m] for m in masks]
    low = min(values)
    union = 0
    for m, v in zip(masks, values):
        if v == low:
            union |= m
    got = 0 if union in (0, g.full_mask) else rb[union]
    if got != low:
        raise InvariantBreach("union of beta minimizers is not a minimizer")
    return low, union


def semistable_reduce(i: CombSheaf, pol: Polarization, cap: int | None = None) -> TwistTrace:
    """Twist until semistable, always along the largest subcurve of least beta."""
    _require_invertible(i)
    g = i.graph
    cap = default_cap(i, pol) if cap is None else cap
    trace = TwistTrace(i)
    cur = i
    prev = None
    while True:
        rb = rbeta_table(cur, pol)
        low, z = _max_minimizer(g, rb)
        if low >= 0:
            break
        measure = (low, -bin(z).count("1"))
        if prev is not None and not measure > prev:
            raise InvariantBreach(f"reduction measure did not increase: {prev} -> {measure}")
        prev = measure
        if len(trace.steps) >= cap:
            raise ReductionCapExceeded(f"semistable reduction exceeded {cap} twists")
        trace.steps.append(TwistStep(g.subcurve(z), Fraction(low, pol.rank)))
        cur = cur.with_degrees(twist_vector(g, cur.degree_vector, z))
    trace.final = cur
    return trace


def _min_zero_containing(g: DualGraph, rb: list[int], bit: int) -> int:
    z = g.full_mask
    for m in g.proper_masks():
        if m & bit and rb[m] == 0:
            z &= m
    if z != g.full_mask and rb[z] != 0:
        raise InvariantBreach("intersection of tight subcurves through the mark is not tight")
    return z


def sigma_reduce(i: CombSheaf, pol: Polarization, mark: str, cap: int | None = None) -> TwistTrace:
    """Twist a semistable class until it is quasistable at the marked point."""
    _require_invertible(i)
    g = i.graph
    bit = 1 << g.position(g.mark_vertex(mark))
    rb = rbeta_table(i, pol)
    if any(rb[m] < 0 for m in g.proper_masks()):
        raise NotSemistable("sigma_reduce needs a semistable start; run semistable_reduce first")
    cap = default_cap(i, pol) if cap is None else cap
    trace = TwistTrace(i)
    cur = i
    prev = 0
    while True:
        z = _min_zero_containing(g, rb, bit)
        if z == g.full_mask:
            break
        if prev and not (z & prev == prev and z != prev):
            raise InvariantBreach("tight subcurves through the mark did not strictly grow")
        prev = z
        if len(trace.steps) >= cap:
            raise ReductionCapExceeded(f"sigma reduction exceeded {cap} twists")
        trace.steps.append(TwistStep(g.subcurve(z), Fraction(0), "sigma"))
        cur = cur.with_degrees(twist_vector(g, cur.degree_vector, z))
        rb = rbeta_table(cur, pol)
        if any(rb[m] < 0 for m in g.proper_masks()):
            raise InvariantBreach("sigma reduction left the semistable locus")
    trace.final = cur
    return trace


def reduce(i: CombSheaf, pol: Polarization, mark: str | None = None, cap: int | None = None) -> TwistTrace:
    """Semistable reduction, then sigma reduction when ``mark`` is given."""
    first = semistable_reduce(i, pol, cap)
    if mark is None:
        return first
    second = sigma_reduce(first.final, pol, mark, cap)
    return TwistTrace(i, first.steps + second.steps, second.final)


# -- twist classes ------------------------------------------------------------


def _adjugate_positive_shift(lap: list[list[int]], root: int) -> list[list[int]]:
    """Integer adjugate of the reduced Laplacian (rows/cols of ``root`` removed)."""
    import sympy

    keep = [k for k in range(len(lap)) if k != root]
    red = sympy.Matrix([[lap[a][b] for b in keep] for a in keep])
    adj = red.adjugate()
    return [[int(adj[a, b]) for b in range(len(keep))] for a in range(len(keep))]


def reduced_divisor(graph: DualGraph, degrees, root: int = 0) -> tuple[int, ...]:
    """The ``root``-reduced representative of a degree vector modulo the Laplacian lattice.

    First a lattice vector (the adjugate of the reduced Laplacian applied to
    a constant) makes every non-root degree non-negative; then Dhar's
    burning algorithm repeatedly fires the unburnt set until everything
    burns.  The result is unique in its class.
    """
    n = graph.n
    d = list(degrees)
    if n == 1:
        return tuple(d)
    keep = [k for k in range(n) if k != root]
    worst = max((-d[k] for k in keep), default=0)
    if worst > 0:
        adj = _adjugate_positive_shift(graph.laplacian(), root)
        # reduced Laplacian times adj(.) c = det * c on the non-root vertices
        f = [sum(adj[a][b] * worst for b in range(len(keep))) for a in range(len(keep))]
        lap = graph.laplacian()
        for x in range(n):
            d[x] += sum(lap[x][keep[a]] * f[a] for a in range(len(keep)))
    ends = [graph.edge_ends(k) for k in range(len(graph.edges))]
    while True:
        burnt = 1 << root
        changed = True
        while changed:
            changed = False
            for v in keep:
                if burnt >> v & 1:
                    continue
                fire = sum(1 for a, b in ends if a != b and (a == v and burnt >> b & 1 or b == v and burnt >> a & 1))
                if fire > d[v]:
                    burnt |= 1 << v
                    changed = True
        unburnt = graph.full_mask & ~burnt
        if not unburnt:
            return tuple(d)
        # send chips out of the unburnt set
        d = twist_vector(graph, d, graph.full_mask & ~unburnt)


def class_id(i: CombSheaf) -> tuple[int, ...]:
    """Canonical token of the twist class of an invertible class."""
    _require_invertible(i)
    return reduced_divisor(i.graph, i.degree_vector)
