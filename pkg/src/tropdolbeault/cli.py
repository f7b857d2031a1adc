"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 measure of nonzero total mass,
4 region not strictly simple, 5 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from .dimension import dim_json
from .graph import GraphError, extract_region, load_graph, parse_region_spec, positive_genus_vertices, betti, s_dimension
from .pairing import Cover, mv_audit, pd_check, subset_hodge, three_of_four
from .potential import NonzeroMassError, ddc, green_solve, parse_measure, parse_node
from .sequences import ConsistencyError, hodge_table, pd_verdict, sequence_audit

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MASS = 3
EXIT_NOT_SIMPLE = 4
EXIT_CONSISTENCY = 5


class NotStrictlySimple(Exception):
    pass


# ---------------------------------------------------------------------------
# reports: one ordered mapping, rendered as text or JSON
# ---------------------------------------------------------------------------


def _text_value(v) -> str:
    if isinstance(v, dict) and set(v) == {"value", "provenance"}:
        return f"{v['value']}({v['provenance']})"
    if isinstance(v, list):
        return ",".join(map(str, v))
    return str(v)


def render_text(report: Dict) -> str:
    lines = []
    for key, value in report.items():
        if key == "sequences":
            for a in value:
                lines.append(f"sequence={a['sequence']} exact={a['exact']} dims=({','.join(map(str, a['dims']))})")
        else:
            lines.append(f"{key}={_text_value(value)}")
    return "\n".join(lines) + "\n"


def render_json(report: Dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def parse_text_report(text: str) -> Dict[str, str]:
    """Inverse of :func:`render_text` down to strings (used to compare the two formats)."""
    out: Dict[str, str] = {}
    for line in text.splitlines():
        key, _, value = line.partition("=")
        if key == "sequence":
            ident, _, rest = value.partition(" ")
            out[f"sequence.{ident}"] = rest
        else:
            out[key] = value
    return out


def flatten_json_report(report: Dict) -> Dict[str, str]:
    out = {}
    for key, value in report.items():
        if key == "sequences":
            for a in value:
                out[f"sequence.{a['sequence']}"] = f"exact={a['exact']} dims=({','.join(map(str, a['dims']))})"
        else:
            out[key] = _text_value(value)
    return out


def _table(report: Dict, table, prefix: str = "") -> None:
    for (p, q), data in zip(((0, 0), (0, 1), (1, 0), (1, 1)), table.to_json().values()):
        report[f"{prefix}h[{p}][{q}]"] = data


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _region(g, spec):
    seed, cuts = parse_region_spec(spec)
    return extract_region(g, seed, cuts)


def cmd_hodge(args) -> Dict:
    g, m = load_graph(args.input)
    report: Dict = {"residue": m.value, "betti": betti(g), "S_X": dim_json(s_dimension(g, m)),
                    "G(X)": positive_genus_vertices(g)}
    _table(report, hodge_table(g, m))
    report["PD"] = pd_verdict(g, m).value
    return report


def cmd_pd(args) -> Dict:
    g, m = load_graph(args.input)
    report: Dict = {"residue": m.value}
    if args.region:
        r = _region(g, args.region[0])
        res = pd_check(r, m)
        report["scope"] = f"region seed={r.seed} k={r.boundary_count}"
    else:
        res = pd_check(g, m)
        report["scope"] = "global"
        report["PD"] = pd_verdict(g, m).value
    report["pairing"] = res.verdict
    report["rank"] = f"{res.rank}/{res.size}"
    report["reason"] = res.reason
    return report


def cmd_green(args) -> Dict:
    g, _ = load_graph(args.input)
    text = args.measure if args.measure is not None else " ".join(args.tokens)
    mu = parse_measure(text, g)
    base = parse_node(args.basepoint, g) if args.basepoint else None
    f = green_solve(g, mu, base)
    if ddc(f) != mu:  # pragma: no cover - green_solve checks this as well
        raise ConsistencyError("ddc round trip failed")
    return {str(n): str(v) for n, v in f.values.items()}


def cmd_subset(args) -> Dict:
    g, m = load_graph(args.input)
    spec = args.region[0] if args.region else " ".join(args.tokens)
    r = _region(g, spec)
    if not r.strictly_simple:
        raise NotStrictlySimple(f"region at {r.seed} is not strictly simple")
    res = subset_hodge(r, g, m)
    report: Dict = {"k": res.k, "scope": "closed-form" if res.closed_form_applies else "residue-corrected"}
    _table(report, res.full, "full.")
    _table(report, res.compact, "compact.")
    return report


def cmd_mv(args) -> Dict:
    g, m = load_graph(args.input)
    if not args.region or len(args.region) != 2:
        raise GraphError("mv needs exactly two --region specs (U1 and U2)")
    cover = Cover.of(_region(g, args.region[0]), _region(g, args.region[1]))
    report: Dict = {}
    for p in (0, 1):
        a = mv_audit(cover, p)
        report[f"mv[{p}].dims"] = list(a.dims)
        report[f"mv[{p}].exact"] = "yes" if a.exact else "no"
    for name, sc in cover.members().items():
        report[f"PD({name})"] = pd_check(sc, m).verdict
    t = three_of_four(cover, m, unknown=args.unknown)
    report["three_of_four.predicted"] = t.predicted
    report["three_of_four.confirmed"] = "yes" if t.confirmed else "no"
    if not t.confirmed:
        raise ConsistencyError(t.line())
    return report


def cmd_audit(args) -> Dict:
    g, m = load_graph(args.input)
    audits = sequence_audit(g, m)
    return {"residue": m.value, "S_X": dim_json(s_dimension(g, m)), "sequences": [a.to_json() for a in audits]}


COMMANDS = {"hodge": cmd_hodge, "pd": cmd_pd, "green": cmd_green, "subset": cmd_subset, "mv": cmd_mv, "audit": cmd_audit}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropdolbeault", description="Tropical Dolbeault cohomology of skeleton curves")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input", help="skeleton file")
        sp.add_argument("tokens", nargs="*", help="inline region or measure tokens")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--region", action="append", help="'seed=V cut=EDGE:T ...'")
        sp.add_argument("--measure", help="'NODE:WEIGHT ...'")
        sp.add_argument("--basepoint", help="node where the Green function vanishes")
        if name == "mv":
            sp.add_argument("--unknown", default="U", choices=("U", "U1", "U2", "U12"))
    return ap


def main(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except NonzeroMassError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_MASS
    except NotStrictlySimple as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NOT_SIMPLE
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=stderr)
        return EXIT_CONSISTENCY
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    stdout.write(render_json(report) if args.format == "json" else render_text(report))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
