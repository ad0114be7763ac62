"""Command-line entry point: ``orbitweave <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

from . import models
from .graph import CertificationReport, OrbitGraph, validate_structure
from .knop import ActionError, build_action, certify_action, classify_generators, max_rank_orbit, prop_minimal_check, stabilizer
from .paths import PathCertificationError, certify_paths, schubert_expansion
from .serialize import SchemaError, dumps, export_dot, parse_graph_json, write_graph_json
from .weyl import CartanError, Weight, parse_cartan

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_graph(source: str) -> OrbitGraph:
    if source == "-":
        return parse_graph_json(sys.stdin.buffer.read())
    p = Path(source)
    if p.is_file():
        return parse_graph_json(p.read_bytes())
    if source in models.fixture_names():
        return models.fixture(source)
    raise UsageError(f"no such file or fixture: {source}")


def _int_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _lattice(text: str | None, rank: int) -> list[Weight] | None:
    if text is None:
        return None
    out = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        coeffs = _int_list(chunk)
        if len(coeffs) != rank:
            raise UsageError(f"lattice generator {chunk!r} needs {rank} coordinates")
        out.append(Weight(tuple(coeffs)))
    return out


def _emit(obj: Any, pretty_text: str | None, args: argparse.Namespace) -> None:
    sys.stdout.write(pretty_text if args.pretty and pretty_text is not None else dumps(obj))


def _report_lines(name: str, rep: CertificationReport | None) -> list[str]:
    if rep is None:
        return [f"{name:<10} skipped"]
    lines = [f"{name:<10} {'pass' if rep.passed else 'FAIL'}"]
    lines += [f"  - [{f.rule}] {f.message}" for f in rep.failures]
    lines += [f"  ~ [{w.rule}] {w.message}" for w in rep.warnings]
    return lines


def certify_all(g: OrbitGraph, allow_truncated: bool = False) -> dict[str, CertificationReport | None]:
    structure = validate_structure(g, allow_truncated=allow_truncated)
    out: dict[str, CertificationReport | None] = {"structure": structure, "paths": None, "action": None}
    if not structure.passed:
        return out
    out["paths"] = certify_paths(g)
    try:
        out["action"] = certify_action(build_action(g, strict=not allow_truncated))
    except ActionError as exc:
        rep = CertificationReport()
        rep.fail("construction", str(exc), **exc.witness)
        out["action"] = rep
    return out


def cmd_validate(args: argparse.Namespace) -> int:
    g = _read_graph(args.file)
    reports = certify_all(g, args.allow_truncated)
    passed = all(r is not None and r.passed for r in reports.values())
    obj = {"passed": passed, **{k: (r.to_dict() if r is not None else None) for k, r in reports.items()}}
    text = "\n".join(sum((_report_lines(k, r) for k, r in reports.items()), [])) + "\n"
    _emit(obj, text, args)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_analyze(args: argparse.Namespace) -> int:
    g = _read_graph(args.file)
    if args.vertex not in g.vertex:
        raise UsageError(f"unknown vertex {args.vertex!r}")
    try:
        rep = schubert_expansion(g, args.vertex)
    except PathCertificationError as exc:
        _emit({"error": str(exc), "witness": exc.witness}, f"error: {exc}\n", args)
        return EXIT_FAIL
    obj = rep.to_dict()
    rows = [f"vertex {rep.vertex}", f"multiplicity free: {rep.multiplicity_free}",
            f"V0 connected in codim 1: {rep.v0_connected_in_codim1}", "terms:"]
    rows += [f"  {''.join(f's{i}' for i in t['word']) or 'e'}  x{2 ** t['coeff_log2']}" for t in obj["terms"]]
    _emit(obj, "\n".join(rows) + "\n", args)
    return EXIT_OK


def _write_graph(g: OrbitGraph) -> int:
    sys.stdout.buffer.write(write_graph_json(g))
    return EXIT_OK


def cmd_model(args: argparse.Namespace) -> int:
    datum = parse_cartan(args.type)
    if args.kind == "group":
        if args.parabolic:
            raise UsageError("--parabolic applies to the flag model only")
        return _write_graph(models.group_case(datum))
    subset = _int_list(args.parabolic)
    if any(not 0 <= i < datum.rank for i in subset):
        raise UsageError(f"--parabolic indices must lie in 0..{datum.rank - 1}")
    return _write_graph(models.flag_case(datum, subset))


def cmd_induce(args: argparse.Namespace) -> int:
    datum = parse_cartan(args.type)
    subset = _int_list(args.subset)
    if any(not 0 <= i < datum.rank for i in subset):
        raise UsageError(f"--subset indices must lie in 0..{datum.rank - 1}")
    base = _read_graph(args.base)
    sub = datum.restrict(subset)
    if base.cartan.cartan_matrix != sub.cartan_matrix:
        raise UsageError(f"base graph type {base.cartan.label} does not match the restriction to {subset}")
    return _write_graph(models.parabolic_induction(datum, subset, base))


def cmd_knop(args: argparse.Namespace) -> int:
    g = _read_graph(args.file)
    lattice = _lattice(args.lattice, g.cartan.rank)
    try:
        t = build_action(g)
    except ActionError as exc:
        _emit({"error": str(exc), "witness": exc.witness}, f"error: {exc}\n", args)
        return EXIT_FAIL
    action = certify_action(t)
    if not action.passed:
        _emit({"action": action.to_dict()}, "\n".join(_report_lines("action", action)) + "\n", args)
        return EXIT_FAIL
    orbit_ok, orbit = True, None
    try:
        orbit = sorted(max_rank_orbit(t, g, args.top))
    except ActionError as exc:
        orbit_ok = False
        orbit = exc.witness
    st = stabilizer(t, g, args.top)
    pm = prop_minimal_check(t, g, st)
    cl = classify_generators(st, lattice)
    obj = {
        "stabilizer": st.to_dict(),
        "max_rank_orbit": orbit,
        "max_rank_orbit_ok": orbit_ok,
        "prop_minimal": pm.to_dict(),
        "generators": cl.to_dict(),
    }
    ok = orbit_ok and st.certification.passed and pm.passed and cl.ok

    def words(ws):
        return ", ".join("".join(f"s{i}" for i in w) or "e" for w in ws)

    d = st.to_dict()
    rows = [
        f"top: {st.top}",
        f"stabilizer ({len(st.stabilizer)}): {words(d['stabilizer'])}",
        f"delta: {d['delta']}",
        f"W_X ({len(st.w_x)}): {words(d['w_x'])}",
        f"minimal representatives ({len(st.minimal)}): {words(d['minimal_representatives'])}",
        f"max-rank orbit: {orbit}",
        f"coset description of W(Y): {'pass' if pm.passed else 'FAIL'}",
        f"generation by reflections and commuting products: {'pass' if cl.ok else 'FAIL'}",
    ]
    rows += [f"  {''.join(f's{i}' for i in gi.element.word)} [{gi.kind}] {', '.join(gi.tags) or '-'}"
             for gi in cl.generators]
    _emit(obj, "\n".join(rows) + "\n", args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fixtures(args: argparse.Namespace) -> int:
    if args.action == "list":
        names = models.fixture_names()
        _emit(names, "\n".join(names) + "\n", args)
        return EXIT_OK
    if not args.name:
        raise UsageError("fixtures get needs a fixture name")
    try:
        path = models.fixture_path(args.name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    sys.stdout.buffer.write(write_graph_json(parse_graph_json(path.read_bytes())))
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    g = _read_graph(args.file)
    text = export_dot(g)
    if args.output and args.output != "-":
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitweave", description="Weak-order graphs of spherical varieties.")
    parser.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                       help="human-readable output instead of JSON")
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "structural, path and action certification")
    p.add_argument("file", help="graph JSON file, fixture name, or - for stdin")
    p.add_argument("--allow-truncated", action="store_true", help="single-source T edges are warnings")

    p = add("analyze", cmd_analyze, "W(Y), degrees and the Schubert expansion at a vertex")
    p.add_argument("file")
    p.add_argument("--vertex", required=True)

    p = add("model", cmd_model, "emit a built-in model graph")
    p.add_argument("kind", choices=["group", "flag"])
    p.add_argument("--type", required=True, help="Cartan type such as A2 or A1+A1")
    p.add_argument("--parabolic", help="comma-separated simple roots of P (flag model)")

    p = add("induce", cmd_induce, "parabolic induction of a base graph")
    p.add_argument("--type", required=True)
    p.add_argument("--subset", default="", help="comma-separated simple roots of the Levi")
    p.add_argument("--base", required=True, help="base graph file, fixture name, or -")

    p = add("knop", cmd_knop, "W-action, stabilizer and coset description")
    p.add_argument("file")
    p.add_argument("--top", help="top vertex when the graph has several components")
    p.add_argument("--lattice", help='weight lattice generators in the root basis, e.g. "1,1;2,0"')

    p = add("fixtures", cmd_fixtures, "list or print shipped fixtures")
    p.add_argument("action", choices=["list", "get"])
    p.add_argument("name", nargs="?")

    p = add("export-dot", cmd_export_dot, "Graphviz rendering")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SchemaError as exc:
        sys.stderr.write(dumps({"error": exc.detail, "pointer": exc.pointer}))
        return EXIT_USAGE
    except (UsageError, CartanError, KeyError) as exc:
        sys.stderr.write(f"orbitweave: {exc.args[0] if exc.args else exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"orbitweave: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
