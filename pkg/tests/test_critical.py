import random

import pytest
import sympy

from critgroups.critical import (
    ImageCharacter,
    critical_group,
    del_image_character,
    edge_critical_group,
    expected_del_image,
    incidence,
    laplacian,
    matrix_tree_count,
)
from critgroups.errors import CapExceeded
from critgroups.families import complete_with_half_loops, intro_base, intro_signed
from critgroups.generators import random_connected_graph, random_permutation, random_signed_graph
from critgroups.graphs import HALF_LOOP, LINK, LOOP, Edge, SignedMultigraph, balance_classify, switch
from critgroups.linalg import AbelianGroup, IntMatrix, same_lattice

# ---------------------------------------------------------------------------
# independent oracles


def tree_count_deletion_contraction(n: int, links: list[tuple[int, int]]) -> int:
    """Spanning trees of a connected multigraph on n vertices by deletion-contraction."""
    links = [(u, v) for u, v in links if u != v]
    if n == 1:
        return 1
    if not links:
        return 0
    (u, v), rest = links[0], links[1:]
    deleted = tree_count_deletion_contraction(n, rest) if _connected(n, rest) else 0
    # contract v into u and renumber
    ren = {w: (w if w < v else w - 1) for w in range(n) if w != v}
    ren[v] = ren[u]
    contracted = [(ren[a], ren[b]) for a, b in rest]
    return deleted + tree_count_deletion_contraction(n - 1, contracted)


def _connected(n, links):
    adj = {v: set() for v in range(n)}
    for a, b in links:
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def order_by_determinants(g: SignedMultigraph) -> int:
    """|K| from per-component determinants: half of |det L| if unbalanced, a cofactor if balanced."""
    L = sympy.Matrix(laplacian(g).tolist())
    total = 1
    for c in balance_classify(g):
        vs = list(c.vertices)
        sub = L.extract(vs, vs)
        if c.balanced:
            total *= 1 if len(vs) == 1 else abs(sub[1:, 1:].det())
        else:
            d = abs(sub.det())
            assert d % 2 == 0
            total *= d // 2
    return total


# ---------------------------------------------------------------------------
# frozen examples


def test_incidence_conventions():
    g = SignedMultigraph.build(
        2,
        [(0, 1, LINK, 1), (0, 1, LINK, -1), (0, 0, LOOP, -1), (1, 1, HALF_LOOP, -1), (1, 1, HALF_LOOP, 1), (0, 0, LOOP, 1)],
    )
    inc = incidence(g)
    assert inc.del_ == IntMatrix([[1, 1, 2, 0, 0, 0], [-1, 1, 0, 2, 0, 0]])
    assert inc.delta == IntMatrix([[1, 1, 2, 0, 0, 0], [-1, 1, 0, 1, 0, 0]])


def test_laplacian_examples():
    assert laplacian(intro_signed()) == IntMatrix([[18, 0], [0, 6]])
    assert laplacian(intro_base()) == IntMatrix([[6, -6], [-6, 6]])
    assert laplacian(SignedMultigraph.build(1, [(0, 0, HALF_LOOP, -1)])) == IntMatrix([[2]])


def test_critical_group_examples():
    assert critical_group(intro_base())[0] == AbelianGroup.from_cyclic([6])
    assert critical_group(intro_signed())[0] == AbelianGroup.from_cyclic([2, 3, 9])
    tree = SignedMultigraph.build(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    assert critical_group(tree)[0].is_trivial
    # a single vertex, isolated or with positive loops only
    assert critical_group(SignedMultigraph.build(1, [(0, 0, LOOP, 1)]))[0].is_trivial


def test_del_image_character_examples():
    path = SignedMultigraph.build(3, [(0, 1), (1, 2)])
    assert del_image_character(path) == [((0, 1, 2), ImageCharacter.FULL_SUM_ZERO)]
    assert del_image_character(intro_signed())[0][1] is ImageCharacter.EVEN_SUM
    for n in range(3, 7):
        neg = complete_with_half_loops(n, 0, -1)
        assert del_image_character(neg)[0][1] is ImageCharacter.EVEN_SUM


def test_del_image_matches_prediction():
    rng = random.Random(21)
    for _ in range(150):
        g = random_signed_graph(rng, 5, 8)
        d = incidence(g).del_
        e = expected_del_image(g)
        pad = IntMatrix.zeros(g.n, 1)
        assert same_lattice(IntMatrix.hstack(d, pad), IntMatrix.hstack(e, pad))


def test_matrix_tree_examples():
    assert matrix_tree_count(SignedMultigraph.build(1, [(0, 0, HALF_LOOP, -1)])) == 1
    assert matrix_tree_count(SignedMultigraph.build(1, [(0, 0, LOOP, -1)])) == 2
    assert matrix_tree_count(intro_signed()) == 54
    assert matrix_tree_count(intro_base()) == 6
    assert abs(sympy.Matrix(laplacian(intro_signed()).tolist()).det()) == 108


def test_matrix_tree_cap():
    g = SignedMultigraph.build(2, [(0, 1)] * 5)
    with pytest.raises(CapExceeded):
        matrix_tree_count(g, cap=4)
    assert matrix_tree_count(g, cap=5) == 5


# ---------------------------------------------------------------------------
# randomized oracles


def test_unsigned_order_is_tree_count():
    rng = random.Random(22)
    for _ in range(60):
        g = random_connected_graph(rng, 6, 5, kinds=(LINK, LOOP), signed=False)
        links = [(e.tail, e.head) for e in g.edges if e.kind is LINK]
        expected = tree_count_deletion_contraction(g.n, links)
        assert critical_group(g)[0].order == expected
        assert matrix_tree_count(g) == expected


def test_signed_order_by_determinants():
    rng = random.Random(23)
    for _ in range(150):
        g = random_signed_graph(rng, 5, 8)
        assert critical_group(g)[0].order == order_by_determinants(g)


def test_matrix_tree_count_equals_order():
    rng = random.Random(24)
    for _ in range(200):
        g = random_signed_graph(rng, 5, 8)
        assert matrix_tree_count(g) == critical_group(g)[0].order


def test_edge_presentation_agrees():
    rng = random.Random(25)
    for _ in range(100):
        g = random_signed_graph(rng, 5, 8)
        assert edge_critical_group(g) == critical_group(g)[0]


def test_invariances():
    rng = random.Random(26)
    for _ in range(40):
        g = random_signed_graph(rng, 5, 8)
        k = critical_group(g)[0]
        assert critical_group(g.reversed())[0] == k
        assert critical_group(g.relabeled(random_permutation(rng, g.n)))[0] == k
        S = [v for v in range(g.n) if rng.random() < 0.5]
        assert critical_group(switch(g, S))[0] == k


def test_disjoint_union_is_direct_sum():
    rng = random.Random(27)
    for _ in range(40):
        a = random_signed_graph(rng, 4, 6)
        b = random_signed_graph(rng, 4, 6)
        edges = list(a.edges) + [
            Edge(a.m + e.id, a.n + e.tail, a.n + e.head, e.kind, e.sign) for e in b.edges
        ]
        union = SignedMultigraph(a.n + b.n, tuple(edges))
        assert critical_group(union)[0] == critical_group(a)[0] + critical_group(b)[0]


def test_laplacian_entry_formula():
    rng = random.Random(28)
    for _ in range(50):
        g = random_signed_graph(rng, 5, 8)
        L = laplacian(g)
        for u in range(g.n):
            for v in range(g.n):
                if u == v:
                    exp = 0
                    for e in g.edges:
                        if e.kind is LINK and u in (e.tail, e.head):
                            exp += 1
                        elif e.tail == u and e.sign == -1:
                            exp += 4 if e.kind is LOOP else 2
                else:
                    exp = -sum(
                        e.sign for e in g.edges if e.kind is LINK and {e.tail, e.head} == {u, v}
                    )
                assert L[u, v] == exp
