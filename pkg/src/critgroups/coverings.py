"""Derived covers of voltage graphs and the critical group of a voltage graph.

Index conventions: in a cover with group of order m, vertex (v, h) is
``v * m + h`` and edge (e, h) is ``e * m + h``.  The reduced group algebra
ZH / Zc, with c the sum of all group elements, uses the basis of classes of
the non-identity elements, so every vertex or edge of the base owns a block
of m - 1 consecutive coordinates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from sympy import primefactors

from .critical import critical_group, incidence
from .errors import BadParams, DisconnectedError, HypothesisViolated
from .graphs import LINK, LOOP, Edge, FiniteGroup, SignedMultigraph, VoltageGraph, group_cyclic
from .linalg import (
    AbelianGroup,
    GroupHom,
    IntMatrix,
    compose,
    hom_kernel,
    homs_equal,
    is_surjective,
    lattice_quotient,
    scalar_hom,
)


@dataclass(frozen=True, eq=False)
class DerivedCover:
    total: SignedMultigraph
    base: SignedMultigraph
    group: FiniteGroup
    pi_vertex: IntMatrix

    @property
    def fiber_size(self) -> int:
        return self.group.order

    def vertex_label(self, v: int, h: int) -> int:
        return v * self.group.order + h

    def edge_label(self, e: int, h: int) -> int:
        return e * self.group.order + h


def derive_cover(vg: VoltageGraph) -> DerivedCover:
    """Edge e = (u, v) with voltage b lifts to e_h = (u_h, v_{bh}) for each h."""
    H, g = vg.group, vg.base
    m = H.order
    edges = []
    for e in g.edges:
        b = vg.voltage[e.id]
        for h in range(m):
            tail, head = e.tail * m + h, e.head * m + H.mul(b, h)
            kind = LINK if tail != head else LOOP
            edges.append(Edge(e.id * m + h, tail, head, kind, 1))
    total = SignedMultigraph(g.n * m, tuple(edges))
    pi = IntMatrix([[int(w // m == v) for w in range(g.n * m)] for v in range(g.n)], g.n * m)
    return DerivedCover(total, g, H, pi)


def extract_voltage(cover: DerivedCover) -> VoltageGraph:
    """Read voltages back off a cover labeled by fibers."""
    m = cover.group.order
    volts = []
    for e in cover.base.edges:
        lifted = cover.total.edges[e.id * m]
        volts.append(lifted.head - e.head * m)
    return VoltageGraph(cover.base, cover.group, tuple(volts))


def acts_by_automorphisms(cover: DerivedCover) -> bool:
    """Check that relabeling x_{h2} -> x_{h2 h1} carries e_{h2} onto e_{h2 h1}."""
    H, m = cover.group, cover.group.order
    edges = cover.total.edges
    for h1 in range(m):
        def act(w):
            return (w // m) * m + H.mul(w % m, h1)
        for e in edges:
            image = edges[act(e.id)]
            if (act(e.tail), act(e.head)) != (image.tail, image.head):
                return False
    return True


# ---------------------------------------------------------------------------
# Reduced group algebra realization


def _zh(m: int, terms: dict) -> tuple[int, ...]:
    a = [0] * m
    for g, c in terms.items():
        a[g] += c
    return tuple(a)


def _star(H: FiniteGroup, a: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * H.order
    for g, c in enumerate(a):
        out[H.inv(g)] += c
    return tuple(out)


def left_mult_block(H: FiniteGroup, a: tuple[int, ...]) -> list[list[int]]:
    """Matrix of x -> a x on ZH / Zc in the basis of classes of non-identity elements."""
    m = H.order
    k = m - 1
    B = [[0] * k for _ in range(k)]
    for g, c in enumerate(a):
        if not c:
            continue
        for h in range(1, m):
            gh = H.mul(g, h)
            if gh:
                B[gh - 1][h - 1] += c
            else:
                for i in range(k):
                    B[i][h - 1] -= c
    return B


def reduction_matrix(H: FiniteGroup, count: int) -> IntMatrix:
    """The map Z^{count * m} -> (ZH / Zc)^count sending (x, h) to x times the class of h."""
    m, k = H.order, H.order - 1
    rows = [[0] * (count * m) for _ in range(count * k)]
    for x in range(count):
        for h in range(m):
            col = x * m + h
            if h:
                rows[x * k + h - 1][col] = 1
            else:
                for i in range(k):
                    rows[x * k + i][col] = -1
    return IntMatrix(rows, count * m)


@dataclass(frozen=True, eq=False)
class ReducedAlgebraRealization:
    group: FiniteGroup
    del_bar: IntMatrix
    del_bar_star: IntMatrix
    lap_bar: IntMatrix
    entries: dict = field(repr=False)  # (vertex, edge) -> group algebra element


def _boundary_entries(vg: VoltageGraph) -> dict:
    m = vg.group.order
    entries = {}
    for e in vg.base.edges:
        b = vg.voltage[e.id]
        if e.tail == e.head:
            a = [0] * m
            a[0] += 1
            a[b] -= 1  # zero when b is the identity
            entries[(e.tail, e.id)] = tuple(a)
        else:
            entries[(e.tail, e.id)] = _zh(m, {0: 1})
            entries[(e.head, e.id)] = _zh(m, {b: -1})
    return entries


def _block_matrix(H, nblock_rows, nblock_cols, blocks) -> IntMatrix:
    k = H.order - 1
    rows = [[0] * (nblock_cols * k) for _ in range(nblock_rows * k)]
    for (r, c), a in blocks.items():
        B = left_mult_block(H, a)
        for i in range(k):
            row = rows[r * k + i]
            for j in range(k):
                row[c * k + j] += B[i][j]
    return IntMatrix(rows, nblock_cols * k)


def reduced_realization(vg: VoltageGraph) -> ReducedAlgebraRealization:
    """Integer matrices for the boundary map e -> u - v T_{b(e)} over ZH / Zc and its adjoint.

    The adjoint swaps block positions and applies T_h -> T_{h^{-1}} to each
    entry.  Entries act by left multiplication, so the maps commute with the
    right action of the group.
    """
    H, g = vg.group, vg.base
    entries = _boundary_entries(vg)
    del_bar = _block_matrix(H, g.n, g.m, entries)
    star = {(e, v): _star(H, a) for (v, e), a in entries.items()}
    del_bar_star = _block_matrix(H, g.m, g.n, star)
    return ReducedAlgebraRealization(H, del_bar, del_bar_star, del_bar @ del_bar_star, entries)


def commuting_square_holds(vg: VoltageGraph) -> bool:
    """Reduction after the cover's boundary equals the reduced boundary after reduction."""
    cover = derive_cover(vg)
    rr = reduced_realization(vg)
    PV = reduction_matrix(vg.group, vg.base.n)
    PE = reduction_matrix(vg.group, vg.base.m)
    return PV @ incidence(cover.total).del_ == rr.del_bar @ PE


def voltage_critical_group(vg: VoltageGraph) -> AbelianGroup:
    rr = reduced_realization(vg)
    return lattice_quotient(rr.del_bar, rr.lap_bar)[0]


# ---------------------------------------------------------------------------
# Covering sequence verifier


@dataclass
class CoveringReport:
    k_total: AbelianGroup
    k_voltage: AbelianGroup
    k_base: AbelianGroup
    fiber_size: int
    order_identity: bool
    sylow: dict = field(default_factory=dict)  # prime -> bool
    exactness: dict | None = None  # check name -> bool

    @property
    def passed(self) -> bool:
        checks = [self.order_identity, *self.sylow.values()]
        if self.exactness is not None:
            checks += list(self.exactness.values())
        return all(checks)

    def order_line(self) -> str:
        return f"{self.k_total.order} = {self.k_voltage.order} × {self.k_base.order}"

    def to_json(self) -> dict:
        return {
            "K_total": self.k_total.to_json(),
            "K_voltage": self.k_voltage.to_json(),
            "K_base": self.k_base.to_json(),
            "order_identity": self.order_identity,
            "sylow_split": {str(p): ok for p, ok in self.sylow.items()},
            "exactness": self.exactness,
            "passed": self.passed,
        }


def verify_covering_sequence(vg: VoltageGraph, exactness: bool = False) -> CoveringReport:
    cover = derive_cover(vg)
    m = vg.group.order
    kt, Pt = critical_group(cover.total)
    kb, Pb = critical_group(vg.base)
    kv = voltage_critical_group(vg)
    order_ok = kt.order == kv.order * kb.order
    sylow = {}
    if kt.is_finite and kt.order > 1:
        for p in primefactors(kt.order):
            if m % p:
                sylow[p] = kt.sylow(p) == kv.sylow(p) + kb.sylow(p)
    report = CoveringReport(kt, kv, kb, m, order_ok, sylow)
    if exactness:
        pi = GroupHom(Pt, Pb, cover.pi_vertex)
        pit = GroupHom(Pb, Pt, cover.pi_vertex.T)
        ker = hom_kernel(pi)
        report.exactness = {
            "pi_surjective": is_surjective(pi),
            "pi_pit_is_multiplication_by_m": homs_equal(compose(pi, pit), scalar_hom(Pb, m)),
            "kernel_order": ker.order == kv.order,
            "kernel_isomorphic": ker == kv,
        }
    return report


# ---------------------------------------------------------------------------
# Replicated voltage graphs with diagonal Laplacian


def hg_construct(g: SignedMultigraph, H: FiniteGroup) -> VoltageGraph:
    """Replicate every edge once per group element h, giving the copy voltage h."""
    m = H.order
    edges, volts = [], []
    for e in g.edges:
        for h in range(m):
            edges.append(Edge(e.id * m + h, e.tail, e.head, e.kind, e.sign))
            volts.append(h)
    return VoltageGraph(SignedMultigraph(g.n, tuple(edges)), H, tuple(volts))


def hg_closed_form(degrees: list[int], m: int) -> AbelianGroup:
    if m < 2:
        raise BadParams("group order must be at least 2")
    if not degrees or any(d < 1 for d in degrees):
        raise BadParams("degrees must be positive")
    s = list(AbelianGroup.from_cyclic(degrees).invariant_factors)
    s = [1] * (len(degrees) - len(s)) + s
    orders = [s[0]] + [m * s[0]] * (m - 2)
    for si in s[1:]:
        orders += [m * si] * (m - 1)
    return AbelianGroup.from_cyclic(orders)


def hg_closed_form_for_graph(g: SignedMultigraph, m: int) -> AbelianGroup:
    if not g.is_connected():
        raise DisconnectedError("closed form needs a connected graph")
    return hg_closed_form(g.degrees(), m)


def hg_coprime_form(degrees: list[int], m: int) -> AbelianGroup:
    """The reshaped closed form valid when m is prime to every degree."""
    if any(math.gcd(d, m) != 1 for d in degrees):
        raise HypothesisViolated("m must be coprime to every degree")
    orders = [m] * ((m - 1) * len(degrees) - 1)
    for d in degrees:
        orders += [d] * (m - 1)
    return AbelianGroup.from_cyclic(orders)


class CoverFamily(enum.Enum):
    PATH = "PATH"
    CYCLE = "CYCLE"
    COMPLETE = "COMPLETE"


def family_base(kind: CoverFamily, n: int) -> SignedMultigraph:
    kind = CoverFamily(kind)
    if kind is CoverFamily.PATH:
        if n < 1:
            raise BadParams("path needs n >= 1")
        return SignedMultigraph.build(n, [(i, i + 1) for i in range(n - 1)])
    if kind is CoverFamily.CYCLE:
        if n < 3:
            raise BadParams("cycle needs n >= 3")
        return SignedMultigraph.build(n, [(i, (i + 1) % n) for i in range(n)])
    if n < 1:
        raise BadParams("complete graph needs n >= 1")
    return SignedMultigraph.build(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def family_cover_formulas(kind: CoverFamily, n: int, m: int) -> AbelianGroup:
    """Closed form for K of the cover of the replicated path, cycle or complete graph."""
    kind = CoverFamily(kind)
    if kind is CoverFamily.PATH:
        if n < 2 or n % 2:
            raise HypothesisViolated(f"PATH needs an even vertex count, got {n}")
        if m < 3 or m % 2 == 0:
            raise HypothesisViolated(f"PATH needs an odd m >= 3, got {m}")
        return AbelianGroup.from_cyclic(
            [m] * ((m - 2) * n) + [m * m] * (n - 1) + [2] * ((m - 1) * (n - 2))
        )
    if kind is CoverFamily.CYCLE:
        if n < 3 or n % 4 == 0:
            raise HypothesisViolated(f"CYCLE needs n >= 3 with n not divisible by 4, got {n}")
        if m < 3 or m % 2 == 0:
            raise HypothesisViolated(f"CYCLE needs an odd m >= 3, got {m}")
        return AbelianGroup.from_cyclic(
            [m] * ((m - 2) * n) + [m * m * n] + [m * m] * (n - 2) + [2] * ((m - 1) * n)
        )
    if n < 2 or m < 2:
        raise HypothesisViolated("COMPLETE needs n >= 2 and m >= 2")
    if math.gcd(n - 1, m) != 1:
        raise HypothesisViolated(f"COMPLETE needs gcd(n - 1, m) = 1, got gcd({n - 1}, {m}) = {math.gcd(n - 1, m)}")
    return AbelianGroup.from_cyclic(
        [m] * ((m - 2) * n) + [m * m] + [m * m * n] * (n - 2) + [n - 1] * ((m - 1) * n)
    )


def family_cover_direct(kind: CoverFamily, n: int, m: int) -> AbelianGroup:
    """K of the same cover computed from the graph."""
    vg = hg_construct(family_base(kind, n), group_cyclic(m))
    return critical_group(derive_cover(vg).total)[0]
