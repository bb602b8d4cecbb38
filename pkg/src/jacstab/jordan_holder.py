"""Jordan-Hoelder filtrations, associated graded classes and their inverse.

A filtration repeatedly peels off a stable quotient of relative beta zero
and continues with the kernel on the remaining subcurve.  ``build_quasistable``
goes the other way: it glues stable pieces into a sheaf that is quasistable
at a chosen component and has exactly those pieces as graded class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .curve import Vertex
from .errors import ChiMismatch, InvalidParts, NotSemistable
from .sheaf import CombSheaf
from .stability import Polarization, is_stable, rbeta_table


@dataclass(frozen=True)
class JHStep:
    ambient: frozenset
    sheaf: CombSheaf
    quotient_support: frozenset
    piece: CombSheaf


@dataclass(frozen=True)
class JHFiltration:
    steps: tuple[JHStep, ...]

    @property
    def pieces(self) -> tuple[CombSheaf, ...]:
        return tuple(s.piece for s in self.steps)

    def __len__(self):
        return len(self.steps)


class JHClass:
    """Sorted multiset of graded pieces; compares by numerical data."""

    def __init__(self, pieces: Iterable[CombSheaf]):
        self.pieces = tuple(sorted(pieces, key=CombSheaf.key))

    def key(self):
        return tuple(p.key() for p in self.pieces)

    def __eq__(self, other):
        if not isinstance(other, JHClass):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __len__(self):
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def __repr__(self):
        return f"JHClass({list(self.pieces)!r})"

    def direct_sum(self) -> CombSheaf:
        """The split sheaf with these pieces: every node between pieces is non-free."""
        first = self.pieces[0]
        g = first.graph
        amb = 0
        degrees = [0] * g.n
        nonfree = set()
        for p in self.pieces:
            amb |= p.ambient_mask
            for pos in g.mask_key(p.ambient_mask):
                degrees[pos] = p.degree_vector[pos]
            nonfree |= p.nonfree_idx
        for n in range(len(g.edges)):
            a, b = g.edge_ends(n)
            if a != b and amb >> a & 1 and amb >> b & 1:
                if not any(p.ambient_mask >> a & 1 and p.ambient_mask >> b & 1 for p in self.pieces):
                    nonfree.add(n)
        return CombSheaf(g, [degrees[p] for p in g.mask_key(amb)], [g.edges[n] for n in nonfree], amb)


def _minimal_zero_masks(i: CombSheaf, rb: list[int]) -> list[int]:
    g = i.graph
    amb = i.ambient_mask
    zero = [m for m in g.proper_masks(amb) if rb[m] == 0] + [amb]
    return [m for m in zero if not any(z != m and z & m == z for z in zero)]


def jh_filtration(i: CombSheaf, pol: Polarization, choice: str = "first") -> JHFiltration:
    """Jordan-Hoelder filtration of a semistable class.

    At each stage the quotient support is an inclusion-minimal subcurve of
    relative beta zero; ``choice`` picks the lexicographically first
    (default) or last such subcurve.
    """
    if choice not in ("first", "last"):
        raise ValueError(f"unknown choice {choice!r}")
    rb = rbeta_table(i, pol)
    g = i.graph
    if any(rb[m] < 0 for m in g.proper_masks(i.ambient_mask)):
        raise NotSemistable(f"{i!r} is not semistable")
    steps = []
    cur = i
    while True:
        rb = rbeta_table(cur, pol)
        minimal = _minimal_zero_masks(cur, rb)
        pick = (min if choice == "first" else max)(minimal, key=g.mask_key)
        piece = cur.restrict(pick)
        steps.append(JHStep(cur.ambient, cur, g.subcurve(pick), piece))
        if pick == cur.ambient_mask:
            break
        cur = cur.kernel_to(pick)
    return JHFiltration(tuple(steps))


def gr(i: CombSheaf, pol: Polarization) -> JHClass:
    return JHClass(jh_filtration(i, pol).pieces)


def jh_equivalent(i: CombSheaf, j: CombSheaf, pol: Polarization) -> bool:
    if i.euler_char() != j.euler_char():
        raise ChiMismatch(f"chi differs: {i.euler_char()} vs {j.euler_char()}")
    return gr(i, pol) == gr(j, pol)


def order_parts(parts: Sequence[CombSheaf], w: Vertex) -> list[CombSheaf]:
    """Order pieces so ``w``'s piece is last and each piece meets the union of later ones.

    Working backwards from ``w``'s piece, the next piece chosen is the
    lexicographically smallest one adjacent to what has been placed.
    """
    if not parts:
        raise InvalidParts("no parts given")
    g = parts[0].graph
    wbit = 1 << g.position(w)
    last = [p for p in parts if p.ambient_mask & wbit]
    if not last:
        raise InvalidParts(f"{w!r} lies in no part")
    placed = [last[0]]
    union = last[0].ambient_mask
    rest = [p for p in parts if p is not last[0]]
    while rest:
        touching = [
            p for p in rest
            if any(
                (union >> a & 1 and p.ambient_mask >> b & 1) or (union >> b & 1 and p.ambient_mask >> a & 1)
                for a, b in (g.edge_ends(n) for n in range(len(g.edges)))
            )
        ]
        if not touching:
            raise InvalidParts("parts cannot be glued: no node joins the remaining parts")
        nxt = min(touching, key=lambda p: g.mask_key(p.ambient_mask))
        placed.append(nxt)
        union |= nxt.ambient_mask
        rest.remove(nxt)
    return placed[::-1]


def glue(ordered: Sequence[CombSheaf], keep_free: bool = True) -> CombSheaf:
    """Iterated extension of ``ordered[0]`` by ``ordered[1]`` by ... .

    Builds the sheaf with filtration ``Z_k = Y_k u ... u Y_q`` whose graded
    pieces are the given parts, glued from the last part backwards.  At each
    gluing step the smallest node between the new quotient and the sub-object
    stays free (its sub-object endpoint gains one degree); every other node
    between parts is non-free.  ``keep_free=False`` leaves all of them
    non-free, which gives the split sheaf.
    """
    g = ordered[0].graph
    degrees = [0] * g.n
    nonfree = set()
    amb = 0
    for p in ordered:
        if p.ambient_mask & amb:
            raise InvalidParts("parts overlap")
        amb |= p.ambient_mask
        for pos in g.mask_key(p.ambient_mask):
            degrees[pos] = p.degree_vector[pos]
        nonfree |= p.nonfree_idx
    deeper = 0
    for p in reversed(ordered):
        links = []
        for n in range(len(g.edges)):
            a, b = g.edge_ends(n)
            if deeper >> a & 1 and p.ambient_mask >> b & 1:
                links.append((n, a))
            elif deeper >> b & 1 and p.ambient_mask >> a & 1:
                links.append((n, b))
        if deeper and not links:
            raise InvalidParts("a gluing step has no connecting node")
        for idx, (n, sub_end) in enumerate(links):
            if idx == 0 and keep_free:
                degrees[sub_end] += 1
            else:
                nonfree.add(n)
        deeper |= p.ambient_mask
    return CombSheaf(g, [degrees[p] for p in g.mask_key(amb)], [g.edges[n] for n in nonfree], amb)


def build_quasistable(parts: Sequence[CombSheaf], w: Vertex, pol: Polarization) -> CombSheaf:
    """A ``w``-quasistable sheaf whose graded class is the given stable pieces.

    The parts must partition the curve, and each must be stable of relative
    beta zero for ``pol``.
    """
    parts = list(parts)
    if not parts:
        raise InvalidParts("no parts given")
    g = parts[0].graph
    cover = 0
    for p in parts:
        if p.graph != g:
            raise InvalidParts("parts live on different graphs")
        if cover & p.ambient_mask:
            raise InvalidParts("parts overlap")
        cover |= p.ambient_mask
        try:
            ok = is_stable(p, pol).verdict
        except ChiMismatch as exc:
            raise InvalidParts(f"part {p!r} does not have relative beta zero: {exc}") from None
        if not ok:
            raise InvalidParts(f"part {p!r} is not stable")
    if cover != g.full_mask:
        raise InvalidParts("parts do not cover the curve")
    return glue(order_parts(parts, w))
