"""Signed multigraphs with links, full loops and half-loops; finite groups; voltage graphs.

JSON schema shared with the CLI::

    {"vertices": n,
     "edges": [{"id": 0, "tail": 0, "head": 1, "kind": "LINK", "sign": 1}, ...],
     "group": {"order": m, "table": [[...], ...]},      # optional
     "voltage": {"0": h, ...}}                           # optional

``kind`` is one of LINK, LOOP, HALF_LOOP and ``sign`` is +1 or -1.  A group
without a table is cyclic of the given order.  Group elements are indices
with the identity at 0.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import GraphError, NotAGroupError, SchemaError

ASSOCIATIVITY_CHECK_LIMIT = 64


class EdgeKind(enum.Enum):
    LINK = "LINK"
    LOOP = "LOOP"
    HALF_LOOP = "HALF_LOOP"


LINK, LOOP, HALF_LOOP = EdgeKind.LINK, EdgeKind.LOOP, EdgeKind.HALF_LOOP


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    kind: EdgeKind
    sign: int = 1

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.tail, self.head


def edge_problems(n: int, edges: Sequence[Edge]) -> list[str]:
    """All violated invariants, as human-readable strings."""
    problems = []
    if n < 0:
        problems.append(f"negative vertex count {n}")
    seen = set()
    for pos, e in enumerate(edges):
        if e.id in seen:
            problems.append(f"duplicate edge id {e.id}")
        seen.add(e.id)
        if e.id != pos:
            problems.append(f"edge at position {pos} has id {e.id}; ids must be dense and ordered")
        if not isinstance(e.kind, EdgeKind):
            problems.append(f"edge {e.id}: unknown kind {e.kind!r}")
            continue
        if e.sign not in (1, -1):
            problems.append(f"edge {e.id}: sign {e.sign} is not +1 or -1")
        for v in (e.tail, e.head):
            if not 0 <= v < n:
                problems.append(f"edge {e.id}: vertex {v} out of range")
        if e.kind is LINK and e.tail == e.head:
            problems.append(f"edge {e.id}: LINK with equal endpoints")
        if e.kind is not LINK and e.tail != e.head:
            problems.append(f"edge {e.id}: {e.kind.value} with distinct endpoints")
    return problems


@dataclass(frozen=True)
class SignedMultigraph:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        problems = edge_problems(self.n, self.edges)
        if problems:
            raise GraphError("; ".join(problems))

    @classmethod
    def build(cls, n: int, specs: Iterable[tuple]) -> SignedMultigraph:
        """Graph from (tail, head[, kind[, sign]]) tuples; ids follow list order.

        The kind defaults to LINK, or LOOP when tail == head.
        """
        edges = []
        for i, s in enumerate(specs):
            tail, head = s[0], s[1]
            kind = s[2] if len(s) > 2 else (LOOP if tail == head else LINK)
            sign = s[3] if len(s) > 3 else 1
            edges.append(Edge(i, tail, head, EdgeKind(kind), sign))
        return cls(n, tuple(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def with_edges(self, edges: Iterable[Edge]) -> SignedMultigraph:
        return SignedMultigraph(self.n, tuple(edges))

    def is_unsigned(self) -> bool:
        return all(e.sign == 1 and e.kind is not HALF_LOOP for e in self.edges)

    def reversed(self) -> SignedMultigraph:
        return self.with_edges(Edge(e.id, e.head, e.tail, e.kind, e.sign) for e in self.edges)

    def relabeled(self, perm: Sequence[int]) -> SignedMultigraph:
        """Vertex v becomes perm[v]."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling is not a permutation")
        return self.with_edges(
            Edge(e.id, perm[e.tail], perm[e.head], e.kind, e.sign) for e in self.edges
        )

    def with_signs(self, signs: Sequence[int]) -> SignedMultigraph:
        return self.with_edges(
            Edge(e.id, e.tail, e.head, e.kind, s) for e, s in zip(self.edges, signs, strict=True)
        )

    def same_underlying(self, other: SignedMultigraph) -> bool:
        return self.n == other.n and len(self.edges) == len(other.edges) and all(
            (a.id, a.tail, a.head, a.kind) == (b.id, b.tail, b.head, b.kind)
            for a, b in zip(self.edges, other.edges)
        )

    def edge_multiset(self) -> list[tuple]:
        """Sorted (min end, max end, kind, sign) keys; equal lists mean equal graphs up to edge order and orientation."""
        return sorted(
            (min(e.tail, e.head), max(e.tail, e.head), e.kind.value, e.sign) for e in self.edges
        )

    def components(self) -> list[list[int]]:
        """Vertex sets of connected components, each sorted, ordered by smallest vertex."""
        adj = [[] for _ in range(self.n)]
        for e in self.edges:
            if e.kind is LINK:
                adj[e.tail].append(e.head)
                adj[e.head].append(e.tail)
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [s], [s]
            while stack:
                for w in adj[stack.pop()]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def induced(self, vertices: Sequence[int]) -> tuple[SignedMultigraph, list[int]]:
        """Subgraph on a union of components, renumbered; also returns the kept edge ids."""
        index = {v: i for i, v in enumerate(vertices)}
        kept = [e for e in self.edges if e.tail in index]
        if any(e.head not in index for e in kept):
            raise GraphError("vertex set is not a union of components")
        sub = SignedMultigraph(
            len(vertices),
            tuple(
                Edge(i, index[e.tail], index[e.head], e.kind, e.sign) for i, e in enumerate(kept)
            ),
        )
        return sub, [e.id for e in kept]

    def degrees(self) -> list[int]:
        """Degrees with full loops counting 2 and half-loops counting 1."""
        d = [0] * self.n
        for e in self.edges:
            if e.kind is LINK:
                d[e.tail] += 1
                d[e.head] += 1
            elif e.kind is LOOP:
                d[e.tail] += 2
            else:
                d[e.tail] += 1
        return d

    def to_json(self) -> dict:
        return {
            "vertices": self.n,
            "edges": [
                {"id": e.id, "tail": e.tail, "head": e.head, "kind": e.kind.value, "sign": e.sign}
                for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> SignedMultigraph:
        try:
            n = int(data["vertices"])
            edges = []
            for raw in data.get("edges", []):
                kind = EdgeKind(str(raw["kind"]).upper())
                edges.append(
                    Edge(int(raw["id"]), int(raw["tail"]), int(raw["head"]), kind, int(raw.get("sign", 1)))
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed graph: {exc}") from exc
        edges.sort(key=lambda e: e.id)
        return cls(n, tuple(edges))


def validate(n: int, edges: Sequence[Edge]) -> None:
    """Raise GraphError listing every violated invariant; return None when valid."""
    problems = edge_problems(n, edges)
    if problems:
        raise GraphError("; ".join(problems))


def switch(g: SignedMultigraph, S: Iterable[int]) -> SignedMultigraph:
    """Flip the sign of every link with exactly one endpoint in S."""
    S = set(S)
    return g.with_edges(
        Edge(e.id, e.tail, e.head, e.kind, -e.sign)
        if e.kind is LINK and ((e.tail in S) != (e.head in S))
        else e
        for e in g.edges
    )


def product_signs(g1: SignedMultigraph, g2: SignedMultigraph) -> SignedMultigraph:
    """Same underlying graph with sign(e) = sign1(e) * sign2(e)."""
    return g1.with_signs([a.sign * b.sign for a, b in zip(g1.edges, g2.edges)])


@dataclass(frozen=True)
class ComponentBalance:
    vertices: tuple[int, ...]
    balanced: bool
    potential: dict | None = None  # vertex -> +1/-1, switching the component to all-positive
    witness: tuple[int, ...] | None = None  # edge ids of an unbalanced cycle


def balance_classify(g: SignedMultigraph) -> list[ComponentBalance]:
    adj = [[] for _ in range(g.n)]
    intrinsic = {}
    for e in g.edges:
        if e.kind is LINK:
            adj[e.tail].append(e)
            adj[e.head].append(e)
        elif e.sign == -1:
            intrinsic.setdefault(e.tail, e.id)
    out = []
    for comp in g.components():
        root = comp[0]
        pot = {root: 1}
        parent = {root: None}  # vertex -> (edge, previous vertex)
        depth = {root: 0}
        queue = deque([root])
        closing = None
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                w = e.head if e.tail == u else e.tail
                if w not in pot:
                    pot[w] = pot[u] * e.sign
                    parent[w] = (e, u)
                    depth[w] = depth[u] + 1
                    queue.append(w)
                elif closing is None and pot[u] * pot[w] * e.sign == -1:
                    closing = e
        loop = next((intrinsic[v] for v in comp if v in intrinsic), None)
        if loop is not None:
            out.append(ComponentBalance(tuple(comp), False, witness=(loop,)))
        elif closing is not None:
            a, b = closing.tail, closing.head
            path = []
            while a != b:
                if depth[a] >= depth[b]:
                    e, a = parent[a]
                else:
                    e, b = parent[b]
                path.append(e.id)
            out.append(ComponentBalance(tuple(comp), False, witness=tuple(path + [closing.id])))
        else:
            out.append(ComponentBalance(tuple(comp), True, potential=dict(sorted(pot.items()))))
    return out


def is_balanced(g: SignedMultigraph) -> bool:
    return all(c.balanced for c in balance_classify(g))


def switching_set(potential: Mapping[int, int]) -> list[int]:
    return [v for v, s in potential.items() if s == -1]


# ---------------------------------------------------------------------------
# Finite groups


@dataclass(frozen=True)
class FiniteGroup:
    """Finite group given by its Cayley table; element 0 is the identity."""

    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...] = field(default=(), compare=False)
    checked: bool = field(default=True, compare=False)
    name: str = field(default="", compare=False)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def is_abelian(self) -> bool:
        m = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(m) for b in range(a))

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(r) for r in self.table]}


def group_from_table(table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    t = tuple(tuple(int(x) for x in r) for r in table)
    m = len(t)
    if m == 0:
        raise NotAGroupError("empty table")
    if any(len(r) != m for r in t):
        raise NotAGroupError("table is not square")
    for r in t:
        if sorted(r) != list(range(m)):
            raise NotAGroupError("a row is not a permutation of the elements")
    for c in range(m):
        if sorted(t[r][c] for r in range(m)) != list(range(m)):
            raise NotAGroupError("a column is not a permutation of the elements")
    for g in range(m):
        if t[0][g] != g or t[g][0] != g:
            raise NotAGroupError("element 0 is not the identity")
    inverse = []
    for g in range(m):
        h = t[g].index(0)
        if t[h][g] != 0:
            raise NotAGroupError(f"element {g} has no two-sided inverse")
        inverse.append(h)
    checked = m <= ASSOCIATIVITY_CHECK_LIMIT
    if checked:
        for a, b, c in itertools.product(range(m), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise NotAGroupError(f"associativity fails at ({a}, {b}, {c})")
    return FiniteGroup(t, tuple(inverse), checked, name)


def group_cyclic(m: int) -> FiniteGroup:
    if m < 1:
        raise NotAGroupError("order must be positive")
    return group_from_table([[(a + b) % m for b in range(m)] for a in range(m)], f"Z{m}")


def group_symmetric3() -> FiniteGroup:
    """S3 with elements listed as permutations of {0,1,2}; product (ab)(x) = a(b(x))."""
    perms = [p for p in itertools.permutations(range(3))]
    perms.sort(key=lambda p: p != (0, 1, 2))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[x]] for x in range(3))] for b in perms] for a in perms]
    return group_from_table(table, "S3")


def group_from_json(data: Mapping) -> FiniteGroup:
    if "table" in data and data["table"] is not None:
        g = group_from_table(data["table"])
        if "order" in data and int(data["order"]) != g.order:
            raise NotAGroupError("order does not match table size")
        return g
    return group_cyclic(int(data["order"]))


@dataclass(frozen=True)
class VoltageGraph:
    """Unsigned base multigraph (links and full loops) with voltages in a finite group."""

    base: SignedMultigraph
    group: FiniteGroup
    voltage: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "voltage", tuple(self.voltage))
        problems = []
        for e in self.base.edges:
            if e.kind is HALF_LOOP:
                problems.append(f"edge {e.id}: half-loops are not allowed in a voltage graph")
            if e.sign != 1:
                problems.append(f"edge {e.id}: voltage graph edges must be positive")
        if len(self.voltage) != self.base.m:
            problems.append("every edge needs exactly one voltage")
        for i, h in enumerate(self.voltage):
            if not 0 <= h < self.group.order:
                problems.append(f"edge {i}: voltage {h} is not a group element")
        if problems:
            raise GraphError("; ".join(problems))

    def to_json(self) -> dict:
        d = self.base.to_json()
        d["group"] = self.group.to_json()
        d["voltage"] = {str(i): h for i, h in enumerate(self.voltage)}
        return d

    @classmethod
    def from_json(cls, data: Mapping) -> VoltageGraph:
        base = SignedMultigraph.from_json(data)
        if "group" not in data or "voltage" not in data:
            raise SchemaError("voltage graph needs 'group' and 'voltage' blocks")
        group = group_from_json(data["group"])
        try:
            raw = {int(k): int(v) for k, v in data["voltage"].items()}
        except (AttributeError, ValueError) as exc:
            raise SchemaError(f"malformed voltage block: {exc}") from exc
        missing = [e.id for e in base.edges if e.id not in raw]
        if missing:
            raise GraphError(f"edges without voltage: {missing}")
        return cls(base, group, tuple(raw[e.id] for e in base.edges))
