"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 input could not be
parsed, 3 input parsed but violates an invariant.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field

from .coverings import derive_cover, verify_covering_sequence, voltage_critical_group
from .critical import DEFAULT_CAP, critical_group, matrix_tree_count
from .doubles import DoubleCoverSpec, classify, double, verify_double_complex
from .errors import CritGroupError, SchemaError
from .families import FamilyKind, verify_family
from .generators import random_signed_graph
from .graphs import SignedMultigraph, VoltageGraph
from .linalg import AbelianGroup, IntMatrix, snf

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3


class ParseError(Exception):
    pass


@dataclass
class Result:
    name: str
    computed: object
    expected: object = None
    passed: bool | None = None
    detail: str = ""

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if isinstance(x, AbelianGroup) else x

        return {
            "name": self.name,
            "computed": enc(self.computed),
            "expected": enc(self.expected),
            "pass": self.passed,
        }

    def line(self) -> str:
        comp = self.computed.describe() if isinstance(self.computed, AbelianGroup) else self.computed
        text = f"{self.name}: {comp}"
        if self.expected is not None:
            exp = self.expected.describe() if isinstance(self.expected, AbelianGroup) else self.expected
            text += f"  (expected {exp})"
        if self.passed is not None:
            text += "  PASS" if self.passed else "  FAIL"
        if self.detail:
            text += f"  [{self.detail}]"
        return text


@dataclass
class Report:
    command: str
    inputs_digest: str
    results: list[Result] = field(default_factory=list)
    timing: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed is not False for r in self.results)

    def add(self, *args, **kwargs) -> Result:
        r = Result(*args, **kwargs)
        self.results.append(r)
        return r

    def to_json(self) -> dict:
        # timing is left out so that output is reproducible
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": [r.to_json() for r in self.results],
            "passed": self.passed,
        }

    def render(self) -> str:
        lines = [f"# {self.command}"]
        lines += [r.line() for r in self.results]
        lines.append(f"status: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _digest(*chunks: bytes) -> str:
    h = hashlib.sha256()
    for c in chunks:
        h.update(c)
    return h.hexdigest()[:16]


def _read_json(path: str) -> tuple[object, bytes]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        return json.loads(raw.decode("utf-8")), raw
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _decode(path: str, loader):
    data, raw = _read_json(path)
    if not isinstance(data, dict) or "vertices" not in data:
        raise ParseError(f"{path}: expected an object with a 'vertices' field")
    try:
        return loader(data), raw
    except CritGroupError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"{path}: malformed graph ({exc!r})") from exc


def _load_graph(path: str) -> tuple[SignedMultigraph, bytes]:
    return _decode(path, SignedMultigraph.from_json)


def _load_voltage_graph(path: str) -> tuple[VoltageGraph, bytes]:
    return _decode(path, VoltageGraph.from_json)


def cmd_critgroup(args) -> Report:
    g, raw = _load_graph(args.file)
    rep = Report(f"critgroup {args.file}", _digest(raw))
    k, _ = critical_group(g)
    rep.add("K", k)
    if k.is_finite:
        rep.add("primary orders", k.primary_orders())
    return rep


def cmd_cover(args) -> Report:
    vg, raw = _load_voltage_graph(args.file)
    rep = Report(f"cover {args.file}", _digest(raw))
    if not (args.verify or args.exactness):
        rep.add("K(total)", critical_group(derive_cover(vg).total)[0])
        rep.add("K(voltage)", voltage_critical_group(vg))
        rep.add("K(base)", critical_group(vg.base)[0])
        return rep
    cr = verify_covering_sequence(vg, exactness=args.exactness)
    rep.add("K(total)", cr.k_total)
    rep.add("K(voltage)", cr.k_voltage)
    rep.add("K(base)", cr.k_base)
    rep.add("order identity", cr.order_line(), passed=cr.order_identity)
    for p, ok in cr.sylow.items():
        rep.add(f"Sylow {p} splits", ok, passed=ok)
    for name, ok in (cr.exactness or {}).items():
        rep.add(name, ok, passed=ok)
    return rep


def cmd_double(args) -> Report:
    g1, raw1 = _load_graph(args.file1)
    g2, raw2 = _load_graph(args.file2)
    spec = DoubleCoverSpec(g1, g2)
    rep = Report(f"double {args.file1} {args.file2}", _digest(raw1, raw2))
    res = double(spec)
    if res.case is not None:
        rep.add("case", classify(res, spec).value)
    if not (args.verify or args.exactness):
        rep.add("K(total)", critical_group(res.total)[0])
        rep.add("K(g1)", critical_group(g1)[0])
        rep.add("K(g2)", critical_group(g2)[0])
        return rep
    dr = verify_double_complex(spec, exactness=args.exactness)
    if res.case is None:
        rep.add("cases", [c.value for c in dr.cases])
    rep.add("K(total)", dr.k_total)
    rep.add("K(g1)", dr.k1)
    rep.add("K(g2)", dr.k2)
    factor = 2 ** sum(c.value == "CASE1" for c in dr.cases)
    line = f"{dr.k_total.order} = {factor} × {dr.k1.order} × {dr.k2.order}" if factor > 1 else (
        f"{dr.k_total.order} = {dr.k1.order} × {dr.k2.order}"
    )
    rep.add("order identity", line, passed=dr.order_identity)
    for p, ok in dr.sylow.items():
        rep.add(f"Sylow {p} splits", ok, passed=ok)
    for name, ok in dr.matrix_identities.items():
        rep.add(name, ok, passed=ok)
    if dr.exactness is not None:
        if dr.swapped_components:
            rep.add("roles swapped on components", [list(v) for v in dr.swapped_components])
        rep.add("middle homology", dr.homology)
        for name, ok in dr.exactness.items():
            rep.add(name, ok, passed=ok)
    return rep


def cmd_families(args) -> Report:
    kind = FamilyKind(args.kind.upper())
    if args.grid:
        grid = None
    else:
        params = {k: v for k, v in (("n", args.n), ("k", args.k), ("m", args.m), ("p", args.p)) if v is not None}
        grid = [params]
    desc = f"families {kind.value}" + (" --grid" if args.grid else f" {grid[0]}")
    rep = Report(desc, _digest(desc.encode()))
    fr = verify_family(kind, grid)
    for row in fr.rows:
        rep.add(row.name, row.computed, row.expected, row.passed, row.note)
    return rep


def cmd_snf(args) -> Report:
    data, raw = _read_json(args.file)
    try:
        rows = data["matrix"] if isinstance(data, dict) else data
        M = IntMatrix(rows, len(rows[0]) if rows else 0)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{args.file}: not a dense integer matrix ({exc})") from exc
    rep = Report(f"snf {args.file}", _digest(raw))
    s = snf(M)
    rep.add("diag", list(s.diag))
    rep.add("rank", s.rank)
    rep.add("cokernel", AbelianGroup.from_cyclic(s.diag + (0,) * (M.nrows - len(s.diag))))
    return rep


def cmd_oracle(args) -> Report:
    if args.file:
        g, raw = _load_graph(args.file)
        graphs = [(args.file, g)]
        rep = Report(f"oracle {args.file}", _digest(raw))
    else:
        rng = random.Random(args.seed)
        graphs = [(f"random #{i}", random_signed_graph(rng, 5, 8)) for i in range(args.random)]
        desc = f"oracle --random {args.random} --seed {args.seed}"
        rep = Report(desc, _digest(desc.encode()))
    for name, g in graphs:
        count = matrix_tree_count(g, cap=args.cap)
        order = critical_group(g)[0].order
        rep.add(name, f"bases {count}, |K| {order}", passed=count == order)
    return rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="edge cap for base enumeration")

    p = argparse.ArgumentParser(prog="critgroups", description="Critical groups of signed and voltage graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("critgroup", parents=[common], help="critical group of a signed graph")
    s.add_argument("file")
    s.set_defaults(func=cmd_critgroup)

    s = sub.add_parser("cover", parents=[common], help="derived cover of a voltage graph")
    s.add_argument("file")
    s.add_argument("--verify", action="store_true", help="check orders and Sylow splitting")
    s.add_argument("--exactness", action="store_true", help="also check the induced maps")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("double", parents=[common], help="double cover of one signed graph by another")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--exactness", action="store_true")
    s.set_defaults(func=cmd_double)

    s = sub.add_parser("families", parents=[common], help="named families against closed forms")
    s.add_argument("kind", choices=[k.value for k in FamilyKind] + [k.value.lower() for k in FamilyKind])
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--grid", action="store_true", help="run the default parameter grid")
    s.set_defaults(func=cmd_families)

    s = sub.add_parser("snf", parents=[common], help="Smith normal form of a JSON matrix")
    s.add_argument("file")
    s.set_defaults(func=cmd_snf)

    s = sub.add_parser("oracle", parents=[common], help="base enumeration count against |K|")
    s.add_argument("file", nargs="?")
    s.add_argument("--random", type=int, default=20, help="number of random graphs when no file is given")
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        rep = args.func(args)
    except (ParseError, SchemaError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CritGroupError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    rep.timing = time.perf_counter() - start
    if args.json:
        print(json.dumps(rep.to_json(), indent=2, ensure_ascii=False))
    else:
        print(rep.render())
        print(f"time: {rep.timing:.3f}s", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_CHECK


def run() -> None:
    sys.exit(main())
