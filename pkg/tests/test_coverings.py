import random
from collections import Counter

import pytest

from critgroups.coverings import (
    CoverFamily,
    acts_by_automorphisms,
    commuting_square_holds,
    derive_cover,
    extract_voltage,
    family_cover_direct,
    family_cover_formulas,
    hg_closed_form,
    hg_closed_form_for_graph,
    hg_construct,
    hg_coprime_form,
    reduced_realization,
    verify_covering_sequence,
    voltage_critical_group,
)
from critgroups.critical import critical_group, incidence, laplacian
from critgroups.errors import BadParams, DisconnectedError, HypothesisViolated
from critgroups.families import intro_voltage, octahedron_voltage
from critgroups.generators import random_connected_graph, random_voltage_graph
from critgroups.graphs import LINK, LOOP, SignedMultigraph, VoltageGraph, group_cyclic, group_symmetric3
from critgroups.linalg import AbelianGroup, IntMatrix, snf

Z = AbelianGroup.from_cyclic

# columns of the boundary of the intro cover, vertex order 1+, 1-, 2+, 2-
INTRO_COVER_DEL = [
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, -1, -1, -1],
    [0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, -1, -1, -1, 1, 1, 1],
    [-1, -1, -1, 0, 0, 0, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, -1, -1, -1, 0, 0, 0, -1, -1, -1, 0, 0, 0, 0, 0, 0],
]
INTRO_COVER_L = [[12, -6, -3, -3], [-6, 12, -3, -3], [-3, -3, 6, 0], [-3, -3, 0, 6]]


def test_intro_cover():
    cover = derive_cover(intro_voltage())
    assert cover.total.n == 4 and cover.total.m == 18
    assert laplacian(cover.total) == IntMatrix(INTRO_COVER_L)
    got = Counter(incidence(cover.total).del_.columns())
    assert got == Counter(IntMatrix(INTRO_COVER_DEL).columns())
    assert critical_group(cover.total)[0] == Z([3, 3, 36])


def test_octahedron_cover():
    vg = octahedron_voltage()
    cover = derive_cover(vg)
    g = cover.total
    assert g.n == 6 and g.m == 12
    assert all(e.kind is LINK for e in g.edges)
    assert g.degrees() == [4] * 6
    # every pair except antipodal ones is adjacent
    pairs = {frozenset((e.tail, e.head)) for e in g.edges}
    assert len(pairs) == 12
    assert critical_group(g)[0] == Z([2, 8, 24])
    rr = reduced_realization(vg)
    assert snf(rr.lap_bar).diag == (1, 1, 24, 24)
    assert voltage_critical_group(vg) == Z([8, 8, 3])


def test_identity_voltages_give_disjoint_copies():
    rng = random.Random(31)
    for m in (2, 3):
        for _ in range(5):
            base = random_connected_graph(rng, 4, 3, kinds=(LINK, LOOP), signed=False)
            vg = VoltageGraph(base, group_cyclic(m), (0,) * base.m)
            cover = derive_cover(vg)
            assert len(cover.total.components()) == m
            kb = critical_group(base)[0]
            assert critical_group(cover.total)[0] == kb.power(m)


def test_single_edge_identity_realization():
    vg = VoltageGraph(SignedMultigraph.build(2, [(0, 1)]), group_cyclic(2), (0,))
    assert reduced_realization(vg).del_bar == IntMatrix([[1], [-1]])


def test_reduced_realization_is_adjoint_pair():
    rng = random.Random(32)
    for H in (group_cyclic(2), group_cyclic(3), group_symmetric3()):
        for _ in range(5):
            vg = random_voltage_graph(rng, H, 4, 6)
            rr = reduced_realization(vg)
            assert rr.lap_bar == rr.del_bar @ rr.del_bar_star


def test_commuting_square_and_automorphisms():
    rng = random.Random(33)
    for H in (group_cyclic(2), group_cyclic(3), group_cyclic(4), group_symmetric3()):
        for _ in range(8):
            vg = random_voltage_graph(rng, H, 4, 6)
            assert commuting_square_holds(vg)
            cover = derive_cover(vg)
            assert acts_by_automorphisms(cover)
            assert extract_voltage(cover) == vg


def test_voltage_critical_group_examples():
    assert voltage_critical_group(intro_voltage()) == Z([2, 3, 9])
    tree = SignedMultigraph.build(4, [(0, 1), (1, 2), (1, 3)])
    for H in (group_cyclic(3), group_symmetric3()):
        assert voltage_critical_group(VoltageGraph(tree, H, (0, 0, 0))).is_trivial


def test_intro_sequence():
    rep = verify_covering_sequence(intro_voltage(), exactness=True)
    assert rep.passed
    assert rep.order_line() == "324 = 54 × 6"
    assert rep.sylow == {3: True}
    # the 2-part does not split
    assert rep.k_voltage.sylow(2) == Z([2])
    assert rep.k_total.sylow(2) == Z([4])
    assert rep.k_base.sylow(2) == Z([2])
    assert rep.k_total.sylow(2) != rep.k_voltage.sylow(2) + rep.k_base.sylow(2)


def test_octahedron_sequence():
    rep = verify_covering_sequence(octahedron_voltage(), exactness=True)
    assert rep.passed
    assert rep.order_line() == "384 = 192 × 2"
    assert rep.sylow == {2: True}


def test_random_sequences_with_exactness():
    rng = random.Random(34)
    for H in (group_cyclic(2), group_cyclic(3), group_symmetric3()):
        for _ in range(8):
            vg = random_voltage_graph(rng, H, 4, 6)
            rep = verify_covering_sequence(vg, exactness=True)
            assert rep.passed, rep.to_json()


def test_hg_diagonal_and_closed_form():
    rng = random.Random(35)
    for m in (2, 3, 4):
        H = group_cyclic(m)
        for _ in range(5):
            g = random_connected_graph(rng, 4, 3, kinds=(LINK,), signed=False, min_vertices=2)
            vg = hg_construct(g, H)
            lb = reduced_realization(vg).lap_bar
            k = m - 1
            diag = [m * d for d in g.degrees() for _ in range(k)]
            assert lb == IntMatrix.diagonal(diag)
            assert voltage_critical_group(vg) == hg_closed_form_for_graph(g, m)


def test_hg_single_edge_z3():
    g = SignedMultigraph.build(2, [(0, 1)])
    vg = hg_construct(g, group_cyclic(3))
    assert hg_closed_form([1, 1], 3) == Z([3, 3, 3])
    assert voltage_critical_group(vg) == Z([3, 3, 3])
    cover = derive_cover(vg)
    # K_{3,3}: 3^2 * 3^2 spanning trees
    assert cover.total.n == 6 and cover.total.m == 9
    assert critical_group(cover.total)[0].order == 81


def test_hg_coprime_form_agrees():
    for degrees in ([1, 2], [2, 2, 4], [1, 1, 1], [5, 3]):
        for m in (3, 5, 7):
            try:
                cf = hg_coprime_form(degrees, m)
            except HypothesisViolated:
                continue
            assert cf == hg_closed_form(degrees, m)


def test_hg_errors():
    with pytest.raises(BadParams):
        hg_closed_form([1, 2], 1)
    with pytest.raises(BadParams):
        hg_closed_form([0, 2], 3)
    with pytest.raises(DisconnectedError):
        hg_closed_form_for_graph(SignedMultigraph.build(2, []), 3)
    with pytest.raises(HypothesisViolated):
        hg_coprime_form([3], 3)


def test_family_cover_formula_examples():
    assert family_cover_formulas(CoverFamily.PATH, 2, 3) == Z([3, 3, 9])
    assert family_cover_formulas(CoverFamily.PATH, 4, 3) == Z([3] * 4 + [9] * 3 + [2] * 4)


@pytest.mark.parametrize(
    "kind,n,m",
    [
        (CoverFamily.PATH, 2, 3),
        (CoverFamily.PATH, 4, 3),
        (CoverFamily.PATH, 2, 5),
        (CoverFamily.CYCLE, 3, 3),
        (CoverFamily.CYCLE, 5, 3),
        (CoverFamily.COMPLETE, 2, 3),
        (CoverFamily.COMPLETE, 3, 3),
        (CoverFamily.COMPLETE, 4, 2),
    ],
)
def test_family_formulas_match_direct(kind, n, m):
    assert family_cover_formulas(kind, n, m) == family_cover_direct(kind, n, m)


def test_complete_outside_hypotheses():
    with pytest.raises(HypothesisViolated):
        family_cover_formulas(CoverFamily.COMPLETE, 3, 2)
    assert family_cover_direct(CoverFamily.COMPLETE, 3, 2) == Z([2, 8, 24])
    with pytest.raises(HypothesisViolated):
        family_cover_formulas(CoverFamily.PATH, 3, 3)
    with pytest.raises(HypothesisViolated):
        family_cover_formulas(CoverFamily.CYCLE, 4, 3)
