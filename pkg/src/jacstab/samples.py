"""Random instances for property checks and the ``selftest`` command."""

from __future__ import annotations

import random

from .curve import DualGraph
from .sheaf import CombSheaf
from .stability import Polarization


def random_graph(
    rng: random.Random,
    max_vertices: int = 5,
    max_edges: int = 7,
    loops: bool = True,
    max_genus: int = 1,
) -> DualGraph:
    """Connected multigraph: a random spanning tree plus extra random edges."""
    n = rng.randint(1, max_vertices)
    ids = [f"x{k}" for k in range(n)]
    edges = [(ids[k], ids[rng.randrange(k)]) for k in range(1, n)]
    budget = rng.randint(len(edges), max(len(edges), max_edges))
    while len(edges) < budget:
        a, b = rng.choice(ids), rng.choice(ids)
        if a == b and not loops:
            continue
        edges.append((a, b))
    genera = [rng.randint(0, max_genus) for _ in ids]
    return DualGraph(list(zip(ids, genera)), edges)


def random_sheaf(rng: random.Random, graph: DualGraph, spread: int = 3, invertible: bool = False) -> CombSheaf:
    nonfree = [] if invertible else [e for e in graph.edges if rng.random() < 0.3]
    degrees = [rng.randint(-spread, spread) for _ in graph.vertices]
    return CombSheaf(graph, degrees, nonfree)


def random_polarization(rng: random.Random, graph: DualGraph, chi: int, max_rank: int = 3) -> Polarization:
    """Random weights of a random rank whose slopes sum to ``chi``."""
    r = rng.randint(1, max_rank)
    w = {v: rng.randint(-3 * r, 3 * r) for v in graph.vertices}
    last = graph.vertices[-1]
    w[last] += chi * r - sum(w.values())
    return Polarization(r, w)


def polarization_for(rng: random.Random, sheaf: CombSheaf, max_rank: int = 3) -> Polarization:
    return random_polarization(rng, sheaf.graph, sheaf.euler_char(), max_rank)
