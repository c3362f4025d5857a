"""Double covers of signed graphs and the three-case complex verifier.

Vertex v of the base lifts to v+ = 2v and v- = 2v + 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from sympy import primefactors

from .critical import critical_group, incidence, laplacian
from .errors import DisconnectedBase, UnderlyingMismatch
from .graphs import HALF_LOOP, LINK, LOOP, Edge, SignedMultigraph, is_balanced, product_signs
from .linalg import (
    GroupHom,
    IntMatrix,
    complex_homology,
    integer_kernel,
    is_injective,
    is_surjective,
    same_lattice,
)


class Case(enum.Enum):
    CASE1 = "CASE1"  # connected and unbalanced
    CASE2 = "CASE2"  # connected and balanced
    CASE3 = "CASE3"  # disconnected


@dataclass(frozen=True)
class DoubleCoverSpec:
    g1: SignedMultigraph
    g2: SignedMultigraph

    def __post_init__(self):
        if not self.g1.same_underlying(self.g2):
            raise UnderlyingMismatch("the two signed graphs must share vertices, edge ids, endpoints and kinds")


@dataclass(frozen=True, eq=False)
class DoubleCoverResult:
    total: SignedMultigraph
    pi1_vertex: IntMatrix
    pi2_vertex: IntMatrix
    iota: tuple[int, ...]
    lifts: tuple[tuple[int, ...], ...]  # base edge id -> total edge ids
    case: Case | None

    @property
    def pi1t_vertex(self) -> IntMatrix:
        return self.pi1_vertex.T

    @property
    def pi2t_vertex(self) -> IntMatrix:
        return self.pi2_vertex.T


def projection_matrices(n: int) -> tuple[IntMatrix, IntMatrix]:
    """pi1 : v+, v- -> v and pi2 : v+ -> v, v- -> -v, as n x 2n matrices."""
    p1 = [[0] * (2 * n) for _ in range(n)]
    p2 = [[0] * (2 * n) for _ in range(n)]
    for v in range(n):
        p1[v][2 * v] = p1[v][2 * v + 1] = 1
        p2[v][2 * v], p2[v][2 * v + 1] = 1, -1
    return IntMatrix(p1, 2 * n), IntMatrix(p2, 2 * n)


def build_double(g1: SignedMultigraph, g2: SignedMultigraph) -> tuple[SignedMultigraph, tuple]:
    edges, lifts = [], []

    def add(tail, head, kind, sign):
        edges.append(Edge(len(edges), tail, head, kind, sign))
        return edges[-1].id

    for a, b in zip(g1.edges, g2.edges):
        u, v, s = a.tail, a.head, a.sign
        agree = a.sign == b.sign
        if a.kind is HALF_LOOP:
            if agree:
                ids = (add(2 * v, 2 * v, HALF_LOOP, s), add(2 * v + 1, 2 * v + 1, HALF_LOOP, s))
            else:
                ids = (add(2 * v, 2 * v + 1, LINK, s),)
        elif agree:
            ids = (add(2 * u, 2 * v, a.kind, s), add(2 * u + 1, 2 * v + 1, a.kind, s))
        else:
            kind = LINK if a.kind is LOOP else a.kind
            ids = (add(2 * u, 2 * v + 1, kind, s), add(2 * u + 1, 2 * v, kind, s))
        lifts.append(ids)
    return SignedMultigraph(2 * g1.n, tuple(edges)), tuple(lifts)


def double(spec: DoubleCoverSpec) -> DoubleCoverResult:
    total, lifts = build_double(spec.g1, spec.g2)
    p1, p2 = projection_matrices(spec.g1.n)
    iota = tuple(w ^ 1 for w in range(total.n))
    case = _case_of(total) if spec.g1.is_connected() else None
    return DoubleCoverResult(total, p1, p2, iota, lifts, case)


def _case_of(total: SignedMultigraph) -> Case:
    if not total.is_connected():
        return Case.CASE3
    return Case.CASE2 if is_balanced(total) else Case.CASE1


def classify(result: DoubleCoverResult, spec: DoubleCoverSpec | None = None) -> Case:
    """Case of a double cover over a connected base.

    With the spec supplied, the answer is cross-checked against the product
    sign graph: the cover is disconnected exactly when that graph is balanced.
    """
    if result.case is None:
        raise DisconnectedBase("classification needs a connected base")
    if spec is not None:
        disconnected = is_balanced(product_signs(spec.g1, spec.g2))
        if disconnected != (result.case is Case.CASE3):
            raise AssertionError("case disagrees with the product sign graph")
    return result.case


def iota_commutes_with_laplacian(result: DoubleCoverResult) -> bool:
    L = laplacian(result.total)
    n = L.nrows
    ip = result.iota
    return all(L[ip[i], ip[j]] == L[i, j] for i in range(n) for j in range(n))


def sym_skew_bases(n: int) -> tuple[IntMatrix, IntMatrix]:
    """Generators of the iota-symmetric and iota-skew vectors in Z^{2n}."""
    sym = [[0] * n for _ in range(2 * n)]
    skew = [[0] * n for _ in range(2 * n)]
    for v in range(n):
        sym[2 * v][v] = sym[2 * v + 1][v] = 1
        skew[2 * v][v], skew[2 * v + 1][v] = 1, -1
    return IntMatrix(sym, n), IntMatrix(skew, n)


@dataclass
class ComponentCheck:
    vertices: tuple[int, ...]
    case: Case
    k1_order: int
    k2_order: int
    total_order: int
    order_identity: bool


@dataclass
class DoubleReport:
    components: list[ComponentCheck]
    k1: object
    k2: object
    k_total: object
    order_identity: bool
    sylow: dict = field(default_factory=dict)
    matrix_identities: dict = field(default_factory=dict)
    exactness: dict | None = None
    homology: object = None
    literal_homology: object = None
    swapped_components: list = field(default_factory=list)

    @property
    def cases(self) -> list[Case]:
        return [c.case for c in self.components]

    @property
    def passed(self) -> bool:
        checks = [self.order_identity, *self.sylow.values(), *self.matrix_identities.values()]
        if self.exactness is not None:
            checks += list(self.exactness.values())
        return all(checks)

    def to_json(self) -> dict:
        return {
            "cases": [c.value for c in self.cases],
            "K1": self.k1.to_json(),
            "K2": self.k2.to_json(),
            "K_total": self.k_total.to_json(),
            "order_identity": self.order_identity,
            "sylow_split": {str(p): ok for p, ok in self.sylow.items()},
            "matrix_identities": self.matrix_identities,
            "exactness": self.exactness,
            "homology": None if self.homology is None else self.homology.to_json(),
            "swapped_components": [list(v) for v in self.swapped_components],
            "passed": self.passed,
        }


def _restrict(spec: DoubleCoverSpec, verts) -> DoubleCoverSpec:
    a, _ = spec.g1.induced(verts)
    b, _ = spec.g2.induced(verts)
    return DoubleCoverSpec(a, b)


@dataclass(frozen=True)
class CanonicalRoles:
    spec: DoubleCoverSpec
    swapped: tuple[bool, ...]


def canonical_roles(spec: DoubleCoverSpec, comps: list[ComponentCheck] | None = None) -> CanonicalRoles:
    """Swap the two sign assignments on each Case 2 component whose first graph is unbalanced.

    In Case 2 exactly one of the two graphs is balanced, and the short exact
    sequence is stated with the balanced one first.  The swapped double cover
    is a switching of the original, so its critical group is unchanged.
    """
    if comps is None:
        comps = [
            ComponentCheck(tuple(v), double(_restrict(spec, v)).case, 0, 0, 0, True)
            for v in spec.g1.components()
        ]
    comp_of = {}
    swapped = []
    for i, c in enumerate(comps):
        sw = c.case is Case.CASE2 and not is_balanced(_restrict(spec, c.vertices).g1)
        swapped.append(sw)
        for v in c.vertices:
            comp_of[v] = i
    s1, s2 = [], []
    for a, b in zip(spec.g1.edges, spec.g2.edges):
        if swapped[comp_of[a.tail]]:
            a, b = b, a
        s1.append(a.sign)
        s2.append(b.sign)
    return CanonicalRoles(
        DoubleCoverSpec(spec.g1.with_signs(s1), spec.g2.with_signs(s2)), tuple(swapped)
    )


def verify_double_complex(spec: DoubleCoverSpec, exactness: bool = False) -> DoubleReport:
    """Check the complex 0 -> K(g1) -> K(total) -> K(g2) -> 0 given by pi1^t and pi2.

    Orders, odd Sylow splitting and the matrix identities are checked on the
    spec as given.  The exactness checks use canonical_roles, and the
    homology of the literal complex is kept in ``literal_homology``.
    """
    res = double(spec)
    k1, P1 = critical_group(spec.g1)
    k2, P2 = critical_group(spec.g2)
    kt, Pt = critical_group(res.total)

    comps = []
    n_case1 = 0
    for verts in spec.g1.components():
        sub = _restrict(spec, verts)
        r = double(sub)
        a, b, t = (critical_group(x)[0].order for x in (sub.g1, sub.g2, r.total))
        factor = 2 if r.case is Case.CASE1 else 1
        n_case1 += r.case is Case.CASE1
        comps.append(ComponentCheck(tuple(verts), r.case, a, b, t, t == factor * a * b))
    order_ok = kt.order == (2**n_case1) * k1.order * k2.order and all(c.order_identity for c in comps)

    sylow = {}
    if kt.order > 1:
        for p in primefactors(kt.order):
            if p != 2:
                sylow[p] = kt.sylow(p) == k1.sylow(p) + k2.sylow(p)

    n = spec.g1.n
    p1, p2 = res.pi1_vertex, res.pi2_vertex
    L1, L2, Lt = laplacian(spec.g1), laplacian(spec.g2), laplacian(res.total)
    d1, d2, dt = (incidence(x).del_ for x in (spec.g1, spec.g2, res.total))
    sym, skew = sym_skew_bases(n)
    two = 2 * IntMatrix.identity(n)
    ids = {
        "pi1_pi1t_is_2": p1 @ p1.T == two,
        "pi2_pi2t_is_2": p2 @ p2.T == two,
        "iota_commutes_with_L": iota_commutes_with_laplacian(res),
        "pi1t_intertwines_L": p1.T @ L1 == Lt @ p1.T,
        "pi2t_intertwines_L": p2.T @ L2 == Lt @ p2.T,
        "ker_pi1_is_skew": same_lattice(integer_kernel(p1), skew),
        "ker_pi2_is_sym": same_lattice(integer_kernel(p2), sym),
        "pi1_del_image": same_lattice(p1 @ dt, d1),
        "pi2_del_image": same_lattice(p2 @ dt, d2),
        "pi1_L_image": same_lattice(p1 @ Lt, L1),
        "pi2_L_image": same_lattice(p2 @ Lt, L2),
    }
    report = DoubleReport(comps, k1, k2, kt, order_ok, sylow, ids)
    if exactness:
        f = GroupHom(P1, Pt, p1.T)
        g = GroupHom(Pt, P2, p2)
        report.literal_homology = complex_homology(f, g)
        canon = canonical_roles(spec, comps)
        report.swapped_components = [c.vertices for c, sw in zip(comps, canon.swapped) if sw]
        if report.swapped_components:
            k1, P1 = critical_group(canon.spec.g1)
            k2, P2 = critical_group(canon.spec.g2)
            _, Pt = critical_group(double(canon.spec).total)
            f = GroupHom(P1, Pt, p1.T)
            g = GroupHom(Pt, P2, p2)
            hom = complex_homology(f, g)
        else:
            hom = report.literal_homology
        report.homology = hom
        report.exactness = {
            "pi1t_injective": is_injective(f),
            "pi2_surjective": is_surjective(g),
            "homology_matches_case": hom.order == 2**n_case1
            and all(d == 2 for d in hom.invariant_factors),
        }
    return report
