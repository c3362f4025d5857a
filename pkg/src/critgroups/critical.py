"""Incidence maps, signed Laplacians and critical groups."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import CapExceeded
from .graphs import HALF_LOOP, LINK, SignedMultigraph, balance_classify
from .linalg import AbelianGroup, IntMatrix, PresentedGroup, integer_kernel, lattice_quotient

DEFAULT_CAP = 22


@dataclass(frozen=True)
class IncidencePair:
    del_: IntMatrix
    delta: IntMatrix


def incidence(g: SignedMultigraph) -> IncidencePair:
    """The maps del and delta as |V| x |E| matrices.

    A link (u, v) goes to u - sign * v in both.  A negative full loop or
    negative half-loop at v goes to 2v under del; delta differs only on
    negative half-loops, which it sends to v.  Positive loops and half-loops
    give zero columns.
    """
    d = [[0] * g.m for _ in range(g.n)]
    t = [[0] * g.m for _ in range(g.n)]
    for e in g.edges:
        j = e.id
        if e.kind is LINK:
            d[e.tail][j] = t[e.tail][j] = 1
            d[e.head][j] = t[e.head][j] = -e.sign
        elif e.sign == -1:
            d[e.tail][j] = 2
            t[e.tail][j] = 1 if e.kind is HALF_LOOP else 2
    return IncidencePair(IntMatrix(d, g.m), IntMatrix(t, g.m))


def laplacian(g: SignedMultigraph) -> IntMatrix:
    inc = incidence(g)
    return inc.del_ @ inc.delta.T


def critical_group(g: SignedMultigraph) -> tuple[AbelianGroup, PresentedGroup]:
    """K(g) = im del / im (del delta^t), with its presentation on Z^V."""
    inc = incidence(g)
    return lattice_quotient(inc.del_, inc.del_ @ inc.delta.T)


def edge_critical_group(g: SignedMultigraph) -> AbelianGroup:
    """The same group presented on edges, Z^E / (im delta^t + ker del)."""
    inc = incidence(g)
    gens = IntMatrix.hstack(inc.delta.T, integer_kernel(inc.del_))
    return lattice_quotient(IntMatrix.identity(g.m), gens)[0]


class ImageCharacter(enum.Enum):
    FULL_SUM_ZERO = "FULL_SUM_ZERO"
    EVEN_SUM = "EVEN_SUM"


def del_image_character(g: SignedMultigraph) -> list[tuple[tuple[int, ...], ImageCharacter]]:
    """Per component: sum-zero lattice when balanced, even-sum lattice otherwise."""
    return [
        (c.vertices, ImageCharacter.FULL_SUM_ZERO if c.balanced else ImageCharacter.EVEN_SUM)
        for c in balance_classify(g)
    ]


def expected_del_image(g: SignedMultigraph) -> IntMatrix:
    """Generators of the lattice predicted by del_image_character.

    A balanced component with switching potential s spans the vectors
    u - s(u) s(v) v; an unbalanced one spans its even-sum vectors.
    """
    cols = []
    for c in balance_classify(g):
        first, rest = c.vertices[0], c.vertices[1:]
        for v in rest:
            col = [0] * g.n
            col[first] = 1
            col[v] = -c.potential[first] * c.potential[v] if c.balanced else 1
            cols.append(col)
        if not c.balanced:
            col = [0] * g.n
            col[first] = 2
            cols.append(col)
    return IntMatrix.from_columns(cols, g.n)


class _SignedUnionFind:
    """Union-find that tracks sign potentials and the cycle type of each piece."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.parity = [1] * n  # sign relative to parent
        self.cycle = [None] * n  # per root: None, "half", "other"

    def find(self, v):
        s = 1
        path = []
        while self.parent[v] != v:
            path.append(v)
            s *= self.parity[v]
            v = self.parent[v]
        root = v
        # path compression with accumulated parity
        acc = s
        for u in path:
            p = self.parity[u]
            self.parent[u] = root
            self.parity[u] = acc
            acc *= p
        return root, s

    def add(self, e) -> bool:
        """Add an edge; False if it creates a second cycle or a balanced cycle."""
        if e.kind is LINK:
            ru, su = self.find(e.tail)
            rv, sv = self.find(e.head)
            if ru != rv:
                if self.cycle[ru] is not None and self.cycle[rv] is not None:
                    return False
                self.parent[rv] = ru
                self.parity[rv] = su * sv * e.sign
                self.cycle[ru] = self.cycle[ru] or self.cycle[rv]
                return True
            if self.cycle[ru] is not None or su * sv * e.sign == 1:
                return False
            self.cycle[ru] = "other"
            return True
        r, _ = self.find(e.tail)
        if e.sign == 1 or self.cycle[r] is not None:
            return False
        self.cycle[r] = "half" if e.kind is HALF_LOOP else "other"
        return True


def matrix_tree_count(g: SignedMultigraph, cap: int = DEFAULT_CAP) -> int:
    """|K(g)| as 2^{-c} times the weighted count of column bases of del.

    Bases are spanning trees on balanced components and spanning sets of
    unicyclic pieces with unbalanced cycles on unbalanced components.  Each
    piece whose cycle is a negative half-loop weighs 2, any other unbalanced
    cycle weighs 4.  This is an enumeration oracle, independent of normal forms.
    """
    if g.m > cap:
        raise CapExceeded(f"{g.m} edges exceeds the enumeration cap {cap}")
    comps = balance_classify(g)
    comp_of = {}
    for i, c in enumerate(comps):
        for v in c.vertices:
            comp_of[v] = i
    unbalanced = [not c.balanced for c in comps]
    rank = sum(len(c.vertices) - (0 if u else 1) for c, u in zip(comps, unbalanced))
    candidates = [e for e in g.edges if e.kind is LINK or e.sign == -1]
    total = 0
    for subset in itertools.combinations(candidates, rank):
        uf = _SignedUnionFind(g.n)
        if not all(uf.add(e) for e in subset):
            continue
        weight = 1
        ok = True
        for v in range(g.n):
            r, _ = uf.find(v)
            if r != v:
                continue
            cyc = uf.cycle[v]
            if unbalanced[comp_of[v]]:
                if cyc is None:
                    ok = False
                    break
                weight *= 2 if cyc == "half" else 4
            elif cyc is not None:
                ok = False
                break
        if ok:
            total += weight
    c = sum(unbalanced)
    assert total % (1 << c) == 0
    return total >> c
