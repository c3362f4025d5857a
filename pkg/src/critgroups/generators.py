"""Seeded random instances for the randomized suites and the CLI."""

from __future__ import annotations

import random

from .graphs import HALF_LOOP, LINK, LOOP, Edge, FiniteGroup, SignedMultigraph, VoltageGraph


def random_signed_graph(
    rng: random.Random,
    max_vertices: int = 5,
    max_edges: int = 8,
    kinds=(LINK, LOOP, HALF_LOOP),
    signed: bool = True,
    min_vertices: int = 1,
) -> SignedMultigraph:
    n = rng.randint(min_vertices, max_vertices)
    k = rng.randint(0, max_edges)
    edges = []
    for i in range(k):
        kind = rng.choice(kinds) if n > 1 else rng.choice([x for x in kinds if x is not LINK] or [LOOP])
        if kind is LINK:
            u, v = rng.sample(range(n), 2)
        else:
            u = v = rng.randrange(n)
        sign = rng.choice((1, -1)) if signed else 1
        edges.append(Edge(i, u, v, kind, sign))
    return SignedMultigraph(n, tuple(edges))


def random_connected_graph(
    rng: random.Random,
    max_vertices: int = 5,
    extra_edges: int = 3,
    kinds=(LINK, LOOP, HALF_LOOP),
    signed: bool = True,
    min_vertices: int = 1,
) -> SignedMultigraph:
    """A random spanning tree plus a few random extra edges."""
    n = rng.randint(min_vertices, max_vertices)
    specs = [(rng.randrange(v), v, LINK) for v in range(1, n)]
    for _ in range(rng.randint(0, extra_edges)):
        kind = rng.choice(kinds) if n > 1 else rng.choice([x for x in kinds if x is not LINK] or [LOOP])
        if kind is LINK:
            u, v = rng.sample(range(n), 2)
        else:
            u = v = rng.randrange(n)
        specs.append((u, v, kind))
    edges = [
        Edge(i, u, v, kind, rng.choice((1, -1)) if signed else 1) for i, (u, v, kind) in enumerate(specs)
    ]
    return SignedMultigraph(n, tuple(edges))


def random_voltage_graph(
    rng: random.Random, group: FiniteGroup, max_vertices: int = 4, max_edges: int = 6
) -> VoltageGraph:
    base = random_signed_graph(rng, max_vertices, max_edges, kinds=(LINK, LOOP), signed=False)
    volts = tuple(rng.randrange(group.order) for _ in base.edges)
    return VoltageGraph(base, group, volts)


def random_sign_pair(rng: random.Random, g: SignedMultigraph) -> tuple[SignedMultigraph, SignedMultigraph]:
    """Two independent random sign assignments on the underlying graph of g."""
    s1 = [rng.choice((1, -1)) for _ in g.edges]
    s2 = [rng.choice((1, -1)) for _ in g.edges]
    return g.with_signs(s1), g.with_signs(s2)


def random_permutation(rng: random.Random, n: int) -> list[int]:
    p = list(range(n))
    rng.shuffle(p)
    return p
