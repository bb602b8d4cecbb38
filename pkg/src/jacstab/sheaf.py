"""Numerical classes of torsion-free rank-1 sheaves on nodal curves.

On a nodal curve such a sheaf is the pushforward of a line bundle from the
partial normalization at the set ``S`` of nodes where it fails to be
locally free.  The class is therefore the pair ``(S, d)`` together with its
support, and every Euler characteristic in the theory is a closed formula
in that data.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .curve import DualGraph, Edge, Vertex
from .errors import InvalidGraph, InvalidSheaf, InvalidSubcurve


def _edge_indices(graph: DualGraph, edges: Iterable) -> frozenset[int]:
    out = set()
    for e in edges:
        if isinstance(e, Edge):
            out.add(graph.edge_index(e))
            continue
        e = tuple(e)
        if len(e) == 3:
            out.add(graph.edge_index(graph.edge(*e)))
        elif len(e) == 2:
            out.add(graph.edge_index(graph.edge(e[0], e[1], 0)))
        else:
            raise InvalidGraph(f"cannot read edge reference {e!r}")
    return frozenset(out)


class CombSheaf:
    """The class ``(S, d)`` of a rank-1 torsion-free sheaf on a subcurve.

    ``multidegree`` is a mapping from the support's vertices to integers, or
    a sequence aligned with the support in graph order.  ``nonfree`` holds
    edges internal to the support, as ``Edge`` values or ``(u, v[, k])``
    tuples.  Instances are immutable and hash by their numerical data.
    """

    def __init__(
        self,
        graph: DualGraph,
        multidegree: Mapping[Vertex, int] | Sequence[int],
        nonfree: Iterable = (),
        ambient: Iterable[Vertex] | int | None = None,
    ):
        self.graph = graph
        amask = graph.full_mask if ambient is None else graph.mask(ambient)
        if not amask:
            raise InvalidSheaf("sheaf support must be nonempty")
        self.ambient_mask = amask
        members = graph.sorted_members(amask)
        if isinstance(multidegree, Mapping):
            keys = set(multidegree)
            if keys != set(members):
                raise InvalidSheaf(
                    f"multidegree keys {sorted(map(str, keys))} do not match support {list(map(str, members))}"
                )
            values = [multidegree[v] for v in members]
        else:
            values = list(multidegree)
            if len(values) != len(members):
                raise InvalidSheaf(f"multidegree has {len(values)} entries, support has {len(members)}")
        degrees = [0] * graph.n
        for v, dv in zip(members, values):
            if int(dv) != dv:
                raise InvalidSheaf(f"degree {dv!r} at {v!r} is not an integer")
            degrees[graph.position(v)] = int(dv)
        self._degrees = tuple(degrees)

        s = _edge_indices(graph, nonfree)
        for n in s:
            i, j = graph.edge_ends(n)
            if not (amask >> i & 1 and amask >> j & 1):
                raise InvalidSheaf(f"non-free node {graph.edges[n]!r} is not internal to the support")
        self.nonfree_idx = s

    # -- views -------------------------------------------------------------

    @property
    def ambient(self) -> frozenset:
        return self.graph.subcurve(self.ambient_mask)

    @property
    def nonfree(self) -> frozenset[Edge]:
        return frozenset(self.graph.edges[n] for n in self.nonfree_idx)

    @property
    def multidegree(self) -> dict:
        g = self.graph
        return {v: self._degrees[g.position(v)] for v in g.sorted_members(self.ambient_mask)}

    def degree(self, v: Vertex) -> int:
        if not self.ambient_mask >> self.graph.position(v) & 1:
            raise InvalidSubcurve(f"{v!r} is not in the support")
        return self._degrees[self.graph.position(v)]

    @property
    def degree_vector(self) -> tuple[int, ...]:
        """Degrees over the full vertex order (zero off the support)."""
        return self._degrees

    @property
    def is_invertible(self) -> bool:
        return not self.nonfree_idx

    @cached_property
    def free_idx(self) -> tuple[int, ...]:
        a = self.ambient_mask
        out = []
        for n in range(len(self.graph.edges)):
            i, j = self.graph.edge_ends(n)
            if a >> i & 1 and a >> j & 1 and n not in self.nonfree_idx:
                out.append(n)
        return tuple(out)

    def key(self) -> tuple:
        g = self.graph
        return (
            g.mask_key(self.ambient_mask),
            tuple(sorted(self.nonfree_idx)),
            tuple(self._degrees[i] for i in g.mask_key(self.ambient_mask)),
        )

    def __eq__(self, other):
        if not isinstance(other, CombSheaf):
            return NotImplemented
        return self.graph == other.graph and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        nf = sorted((str(e.u), str(e.v), e.k) for e in self.nonfree)
        md = {str(v): d for v, d in self.multidegree.items()}
        return f"CombSheaf(support={sorted(map(str, self.ambient))}, nonfree={nf}, multidegree={md})"

    def with_degrees(self, degrees: Sequence[int]) -> "CombSheaf":
        """Same support and non-free set, new degree vector over the full vertex order."""
        members = self.graph.mask_key(self.ambient_mask)
        return CombSheaf(self.graph, [degrees[i] for i in members], self.nonfree, self.ambient_mask)

    # -- Euler characteristics -----------------------------------------------

    @cached_property
    def _re_table(self) -> list[int]:
        g = self.graph
        size = 1 << g.n
        table = [0] * size
        gen = g.genera
        d = self._degrees
        for m in range(1, size):
            low = m & -m
            i = low.bit_length() - 1
            table[m] = table[m ^ low] + d[i] + 1 - gen[i]
        for n in self.free_idx:
            i, j = g.edge_ends(n)
            both = (1 << i) | (1 << j)
            for m in range(size):
                if m & both == both:
                    table[m] -= 1
        return table

    def _check_sub(self, y) -> int:
        m = self.graph.mask(y)
        if not m:
            raise InvalidSubcurve("subcurve must be nonempty")
        if m & ~self.ambient_mask:
            raise InvalidSubcurve("subcurve is not contained in the support")
        return m

    def euler_char(self) -> int:
        return self._re_table[self.ambient_mask]

    def restricted_euler(self, y) -> int:
        """Euler characteristic of the maximal torsion-free quotient on ``y``."""
        return self._re_table[self._check_sub(y)]

    def restrict(self, y) -> "CombSheaf":
        m = self._check_sub(y)
        g = self.graph
        s = [n for n in self.nonfree_idx if all(m >> x & 1 for x in g.edge_ends(n))]
        members = g.mask_key(m)
        return CombSheaf(g, [self._degrees[i] for i in members], [g.edges[n] for n in s], m)

    def kernel_to(self, y) -> "CombSheaf":
        """Kernel of the quotient onto ``y``, a sheaf on the complementary subcurve.

        Each free node joining a vertex of the complement to ``y`` lowers the
        degree at that vertex by one; non-free nodes do not.
        """
        m = self._check_sub(y)
        z = self.ambient_mask & ~m
        if not z:
            raise InvalidSubcurve("kernel_to needs a proper subcurve")
        g = self.graph
        d = list(self._degrees)
        for n in self.free_idx:
            i, j = g.edge_ends(n)
            if m >> i & 1 and z >> j & 1:
                d[j] -= 1
            elif m >> j & 1 and z >> i & 1:
                d[i] -= 1
        s = [n for n in self.nonfree_idx if all(z >> x & 1 for x in g.edge_ends(n))]
        return CombSheaf(g, [d[i] for i in g.mask_key(z)], [g.edges[n] for n in s], z)

    def _free_between(self, y: int, z: int) -> int:
        count = 0
        for n in self.free_idx:
            i, j = self.graph.edge_ends(n)
            if y >> i & 1 and z >> j & 1 or y >> j & 1 and z >> i & 1:
                count += 1
        return count

    def decomposes_at(self, y) -> bool:
        m = self._check_sub(y)
        if m == self.ambient_mask:
            raise InvalidSubcurve("decomposes_at needs a proper subcurve")
        return self._free_between(m, self.ambient_mask & ~m) == 0

    def is_simple(self) -> bool:
        return self.graph._is_connected(self.ambient_mask, self.free_idx)

    def delta(self, y, z) -> int:
        """Drop in Euler characteristic when gluing the quotients on ``y`` and ``z``."""
        my, mz = self._check_sub(y), self._check_sub(z)
        if my & mz:
            raise InvalidSubcurve("delta needs disjoint subcurves")
        t = self._re_table
        return t[my] + t[mz] - t[my | mz]
