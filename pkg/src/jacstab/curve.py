"""Dual graphs of nodal curves and the lattice of subcurves.

A subcurve is a set of components, i.e. a set of vertex ids.  Internally
every subcurve is also available as an integer bitmask over the graph's
vertex order, which is what the scanning code in the rest of the package
works with.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import InvalidGraph, InvalidSubcurve

Vertex = Hashable


class Edge(NamedTuple):
    """A node of the curve: endpoints in graph order plus a parallel index."""

    u: Vertex
    v: Vertex
    k: int = 0

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


class DualGraph:
    """Connected multigraph with vertex genera and optional marked points.

    Vertices keep their input order; that order fixes every tie-break in
    the package.  Edges are stored canonically: endpoints ordered by vertex
    position, edges sorted by endpoint positions, and parallel copies
    numbered ``k = 0, 1, ...`` in insertion order.

    Only nodal curves are modelled.  A vertex is an irreducible component
    of the given geometric genus, an edge is an ordinary double point and a
    self-loop is a node of a single component.
    """

    def __init__(
        self,
        vertices: Sequence[tuple[Vertex, int]] | Mapping[Vertex, int],
        edges: Iterable[Sequence[Vertex]],
        markings: Mapping[str, Vertex] | None = None,
    ):
        items = list(vertices.items()) if isinstance(vertices, Mapping) else list(vertices)
        if not items:
            raise InvalidGraph("graph has no vertices")
        ids = [v for v, _ in items]
        if len(set(ids)) != len(ids):
            raise InvalidGraph(f"duplicate vertex ids in {ids!r}")
        self._vertices: tuple[Vertex, ...] = tuple(ids)
        self._pos = {v: i for i, v in enumerate(ids)}
        genera = []
        for v, g in items:
            if int(g) != g or g < 0:
                raise InvalidGraph(f"vertex {v!r} has invalid genus {g!r}")
            genera.append(int(g))
        self._genus = tuple(genera)

        raw = []
        for idx, e in enumerate(edges):
            e = tuple(e)
            if len(e) != 2:
                raise InvalidGraph(f"edge {e!r} must have two endpoints")
            a, b = e
            for x in (a, b):
                if x not in self._pos:
                    raise InvalidGraph(f"edge {e!r} references unknown vertex {x!r}")
            i, j = sorted((self._pos[a], self._pos[b]))
            raw.append((i, j, idx))
        raw.sort()
        seen: Counter = Counter()
        canon = []
        ends = []
        for i, j, _ in raw:
            canon.append(Edge(ids[i], ids[j], seen[i, j]))
            ends.append((i, j))
            seen[i, j] += 1
        self._edges: tuple[Edge, ...] = tuple(canon)
        self._ends: tuple[tuple[int, int], ...] = tuple(ends)
        self._edge_index = {e: n for n, e in enumerate(canon)}

        self._markings: dict[str, Vertex] = {}
        for mark, v in (markings or {}).items():
            if v not in self._pos:
                raise InvalidGraph(f"marking {mark!r} lies on unknown vertex {v!r}")
            self._markings[mark] = v

        if not self._is_connected(self.full_mask, range(len(self._edges))):
            raise InvalidGraph("dual graph is disconnected")

    # -- basic data -----------------------------------------------------

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def markings(self) -> dict[str, Vertex]:
        return dict(self._markings)

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def full_mask(self) -> int:
        return (1 << len(self._vertices)) - 1

    def genus(self, v: Vertex) -> int:
        return self._genus[self.position(v)]

    @property
    def genera(self) -> tuple[int, ...]:
        return self._genus

    @property
    def arithmetic_genus(self) -> int:
        return sum(self._genus) + len(self._edges) - self.n + 1

    def position(self, v: Vertex) -> int:
        try:
            return self._pos[v]
        except (KeyError, TypeError):
            raise InvalidSubcurve(f"unknown vertex {v!r}") from None

    def edge(self, u: Vertex, v: Vertex, k: int = 0) -> Edge:
        """Look up an edge by its endpoints (in either order) and parallel index."""
        i, j = sorted((self.position(u), self.position(v)))
        e = Edge(self._vertices[i], self._vertices[j], k)
        if e not in self._edge_index:
            raise InvalidGraph(f"no edge {u!r}-{v!r} with parallel index {k}")
        return e

    def edge_index(self, e: Edge) -> int:
        try:
            return self._edge_index[e]
        except KeyError:
            raise InvalidGraph(f"{e!r} is not an edge of this graph") from None

    def edge_ends(self, idx: int) -> tuple[int, int]:
        return self._ends[idx]

    def mark_vertex(self, mark: str) -> Vertex:
        try:
            return self._markings[mark]
        except KeyError:
            raise InvalidSubcurve(f"unknown marking {mark!r}") from None

    def with_markings(self, markings: Mapping[str, Vertex]) -> "DualGraph":
        merged = {**self._markings, **markings}
        edges = [(e.u, e.v) for e in self._edges]
        return DualGraph(list(zip(self._vertices, self._genus)), edges, merged)

    def __eq__(self, other):
        if not isinstance(other, DualGraph):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._genus == other._genus
            and self._edges == other._edges
            and self._markings == other._markings
        )

    def __hash__(self):
        return hash((self._vertices, self._genus, self._edges))

    def __repr__(self):
        return f"DualGraph(vertices={self.n}, edges={len(self._edges)}, genus={self.arithmetic_genus})"

    # -- subcurves as masks ---------------------------------------------

    def mask(self, y: Iterable[Vertex] | int) -> int:
        """Bitmask of a subcurve given as an iterable of vertex ids."""
        if isinstance(y, int):
            if y < 0 or y & ~self.full_mask:
                raise InvalidSubcurve(f"mask {y} out of range")
            return y
        m = 0
        for v in y:
            m |= 1 << self.position(v)
        return m

    def subcurve(self, mask: int) -> frozenset:
        return frozenset(self._vertices[i] for i in range(self.n) if mask >> i & 1)

    def mask_key(self, mask: int) -> tuple[int, ...]:
        """Lexicographic sort key of a subcurve (sorted vertex positions)."""
        return tuple(i for i in range(self.n) if mask >> i & 1)

    def sorted_members(self, y) -> list[Vertex]:
        m = self.mask(y)
        return [self._vertices[i] for i in range(self.n) if m >> i & 1]

    def proper_masks(self, ambient: int | None = None) -> Iterator[int]:
        """Nonempty proper submasks of ``ambient`` (default: the whole curve)."""
        a = self.full_mask if ambient is None else ambient
        sub = (a - 1) & a
        while sub:
            yield sub
            sub = (sub - 1) & a

    # -- edge bookkeeping ------------------------------------------------

    def _internal_idx(self, m: int) -> list[int]:
        return [n for n, (i, j) in enumerate(self._ends) if m >> i & 1 and m >> j & 1]

    def _linking_idx(self, m: int) -> list[int]:
        return [n for n, (i, j) in enumerate(self._ends) if (m >> i & 1) != (m >> j & 1)]

    def internal_edges(self, y) -> tuple[Edge, ...]:
        """Edges with both endpoints in ``y`` (self-loops included)."""
        return tuple(self._edges[n] for n in self._internal_idx(self.mask(y)))

    def linking_edges(self, y) -> tuple[Edge, ...]:
        """Edges joining ``y`` to its complement.  Never contains loops."""
        return tuple(self._edges[n] for n in self._linking_idx(self.mask(y)))

    def euler_structure(self, y) -> int:
        """Euler characteristic of the structure sheaf of the subcurve ``y``."""
        m = self.mask(y)
        if not m:
            raise InvalidSubcurve("euler_structure of the empty subcurve")
        return sum(1 - self._genus[i] for i in range(self.n) if m >> i & 1) - len(self._internal_idx(m))

    def link_degree(self, v: Vertex, y) -> int:
        """Number of edges between vertex ``v`` and the vertices of ``y`` other than ``v``."""
        i = self.position(v)
        m = self.mask(y) & ~(1 << i)
        count = 0
        for a, b in self._ends:
            if a == i and m >> b & 1 or b == i and m >> a & 1:
                count += 1
        return count

    def loops(self, v: Vertex) -> tuple[Edge, ...]:
        i = self.position(v)
        return tuple(self._edges[n] for n, (a, b) in enumerate(self._ends) if a == b == i)

    def min_cut(self) -> float | int:
        """Smallest number of nodes separating the curve; ``math.inf`` if irreducible."""
        if self.n == 1:
            return math.inf
        return min(len(self._linking_idx(m)) for m in self.proper_masks())

    def _is_connected(self, m: int, edge_ids: Iterable[int]) -> bool:
        """Whether the subgraph on vertex mask ``m`` using ``edge_ids`` is connected."""
        if not m:
            return True
        parent = {i: i for i in range(self.n) if m >> i & 1}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for n in edge_ids:
            i, j = self._ends[n]
            if i in parent and j in parent:
                parent[find(i)] = find(j)
        return len({find(x) for x in parent}) == 1

    def laplacian(self) -> list[list[int]]:
        """Integer graph Laplacian in vertex order; loops contribute nothing."""
        lap = [[0] * self.n for _ in range(self.n)]
        for i, j in self._ends:
            if i == j:
                continue
            lap[i][i] += 1
            lap[j][j] += 1
            lap[i][j] -= 1
            lap[j][i] -= 1
        return lap


# -- fixtures ------------------------------------------------------------


def two_component(delta: int, genera: tuple[int, int] = (0, 0)) -> DualGraph:
    """Two components ``u`` and ``v`` meeting in ``delta`` nodes."""
    return DualGraph([("u", genera[0]), ("v", genera[1])], [("u", "v")] * delta)


def path_graph(n: int) -> DualGraph:
    """Chain of ``n`` rational components ``v1 - v2 - ... - vn``."""
    ids = [f"v{i}" for i in range(1, n + 1)]
    return DualGraph([(v, 0) for v in ids], list(zip(ids, ids[1:])))


def cycle_graph(n: int) -> DualGraph:
    """Cycle of ``n`` rational components; ``n = 1`` is the nodal cubic."""
    ids = [f"v{i}" for i in range(1, n + 1)]
    if n == 1:
        return DualGraph([("v1", 0)], [("v1", "v1")])
    return DualGraph([(v, 0) for v in ids], [(ids[i], ids[(i + 1) % n]) for i in range(n)])


def irreducible(genus: int = 0, loops: int = 0) -> DualGraph:
    return DualGraph([("v", genus)], [("v", "v")] * loops)
