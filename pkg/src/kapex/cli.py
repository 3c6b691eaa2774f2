"""Command-line front end.

``apex [solve] --k K FILE`` solves an instance (``-`` reads stdin);
``apex generate`` writes a planted instance; ``apex verify`` checks a proposed
apex set; ``apex stats`` prints grid and zone diagnostics without solving.

Exit codes: 0 feasible (or a valid certificate), 1 infeasible (or an invalid
certificate), 2 resource limit, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from typing import IO

from .constants import Constants
from .generate import WIRINGS, plant
from .graph import CapacityError, DomainError, Graph, ParseError, edge_count_prefilter, load_graph, write_dimacs, write_edge_list
from .hexsearch import find_hex_subdivision, quick_reject
from .pipeline import CONSTANTS, MODES, PipelineConfig, choose_constants, run_pipeline
from .solver import FEASIBLE, INFEASIBLE, RESOURCE_LIMIT, ApexOutcome, verify_solution
from .wellattached import enumerate_disjoint_blocks, find_well_attached
from .zones import ComponentIndex, layout_zones, zone_diagnostics

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_RESOURCE = 2
EXIT_USAGE = 3

SUBCOMMANDS = ("solve", "generate", "verify", "stats")
_EXIT = {FEASIBLE: EXIT_FEASIBLE, INFEASIBLE: EXIT_INFEASIBLE, RESOURCE_LIMIT: EXIT_RESOURCE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2, which is taken by the resource-limit code
    def error(self, message: str) -> None:
        raise UsageError(message)


@dataclass
class CliConfig:
    command: str
    input: str | None
    format: str
    k: int
    mode: str
    constants: str
    node_budget: int | None
    time_budget_ms: float | None
    json: bool
    threads: int
    seed: int | None

    def __post_init__(self) -> None:
        if self.k < 0:
            raise UsageError("--k must be nonnegative")
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        for name in ("node_budget", "time_budget_ms"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            mode=self.mode,
            constants=self.constants,
            node_budget=self.node_budget,
            time_budget_ms=self.time_budget_ms,
            threads=self.threads,
        )


def _common(p: argparse.ArgumentParser, *, constants_default: str = "paper") -> None:
    p.add_argument("--k", type=int, required=True, help="apex budget")
    p.add_argument("--format", choices=("edges", "dimacs"), default="edges")
    p.add_argument("--constants", choices=CONSTANTS, default=constants_default)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apex", description="Exact k-apex solver.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    solve = sub.add_parser("solve", help="decide and certify (default)")
    _common(solve)
    solve.add_argument("input", help="graph file, or - for stdin")
    solve.add_argument("--mode", choices=MODES, default="auto")
    solve.add_argument("--node-budget", type=int)
    solve.add_argument("--time-budget-ms", type=float)

    gen = sub.add_parser("generate", help="write a planted instance")
    _common(gen, constants_default="reduced")
    gen.add_argument("--n", type=int, required=True, help="vertex count")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--wiring", choices=WIRINGS, default="lattice", help="how planted apices attach")
    gen.add_argument("--output", "-o", help="file to write (default stdout)")

    ver = sub.add_parser("verify", help="check a proposed apex set")
    _common(ver)
    ver.add_argument("input")
    ver.add_argument("--apex", default="", help="comma-separated vertex ids")

    st = sub.add_parser("stats", help="grid and zone diagnostics")
    _common(st)
    st.add_argument("input")
    st.add_argument("--mode", choices=MODES, default="auto")
    return parser


def _read_graph(path: str, fmt: str, stdin: IO[str]) -> Graph:
    if path == "-":
        return load_graph(stdin, fmt).graph
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh, fmt).graph


def _emit(out: IO[str], payload: dict, text: str, as_json: bool) -> None:
    out.write(json.dumps(payload, sort_keys=True) + "\n" if as_json else text)


def _format_outcome(outcome: ApexOutcome) -> str:
    s = outcome.stats
    ids = " ".join(map(str, sorted(outcome.apex_set))) or "(none)"
    forced = " ".join(map(str, sorted(outcome.forced_set))) or "(none)"
    lines = [f"status: {outcome.status}"]
    if outcome.feasible:
        lines.append(f"apex set: {ids}")
    lines.append(f"forced: {forced}")
    if outcome.justification:
        lines.append(f"justification: {outcome.justification}")
    lines.append(
        f"iterations {s.iterations}, reductions A/B {s.reductions_a}/{s.reductions_b}, "
        f"solver nodes {s.solver_nodes}, {s.wall_ms:.1f} ms"
    )
    return "\n".join(lines) + "\n"


def cmd_solve(cfg: CliConfig, g: Graph, out: IO[str]) -> int:
    outcome = run_pipeline(g, cfg.k, cfg.pipeline())
    if outcome.feasible and not verify_solution(g, outcome.apex_set, cfg.k):
        raise AssertionError("refusing to print an unverified certificate")
    _emit(out, outcome.to_json(), _format_outcome(outcome), cfg.json)
    return _EXIT[outcome.status]


def cmd_verify(cfg: CliConfig, g: Graph, apex: str, out: IO[str]) -> int:
    try:
        x = sorted({int(t) for t in apex.split(",") if t.strip()})
    except ValueError:
        raise UsageError(f"--apex expects comma-separated integers, got {apex!r}") from None
    valid = verify_solution(g, x, cfg.k)
    text = f"{'valid' if valid else 'invalid'} apex set of size {len(x)} for k={cfg.k}\n"
    _emit(out, {"valid": valid, "apex_set": x, "k": cfg.k}, text, cfg.json)
    return EXIT_FEASIBLE if valid else EXIT_INFEASIBLE


def collect_stats(g: Graph, cfg: CliConfig) -> dict:
    """Grid search and zone diagnostics for one instance, without solving it."""
    report: dict = {"vertices": g.n, "edges": g.m, "k": cfg.k, "prefilter": edge_count_prefilter(g, cfg.k)}
    constants: Constants | None = None
    if cfg.mode != "exact-only":
        constants = choose_constants(g, cfg.k, PipelineConfig(mode=cfg.mode, constants=cfg.constants))
    if constants is None:
        report["constants"] = None
        return report
    r = constants.radius
    report["constants"] = {"mode": constants.mode, "q": constants.q, "radius": r, "zones": constants.zones}
    reject = quick_reject(g, r)
    report["quick_reject"] = reject
    sub = None if reject else find_hex_subdivision(g, r)
    report["grid_found"] = sub is not None
    if sub is None:
        return report
    layout = layout_zones(sub, constants)
    index = ComponentIndex.build(g, layout)
    report["zones"] = zone_diagnostics(g, layout, index)
    blocks = enumerate_disjoint_blocks(layout, cfg.k)
    report["blocks"] = len(blocks)
    report["well_attached"] = sorted(find_well_attached(g, layout, cfg.k, blocks, threads=cfg.threads))
    return report


def _format_stats(report: dict) -> str:
    lines = [f"{report['vertices']} vertices, {report['edges']} edges, k={report['k']}, prefilter {report['prefilter']}"]
    c = report.get("constants")
    if c is None:
        lines.append("no zone phase at this k/mode")
    else:
        lines.append(f"{c['mode']} constants: q={c['q']}, grid radius {c['radius']}, {c['zones']} zones")
        if report.get("quick_reject"):
            lines.append(f"grid search skipped: {report['quick_reject']}")
        lines.append(f"grid found: {report['grid_found']}")
        for z in report.get("zones", []):
            lines.append(
                f"  zone {z['id']} at {tuple(z['center'])}: {z['status']}, flat={z['flat']}, "
                f"chords {z['components']['single-edge']}, components {z['components']['component']}"
            )
        if "blocks" in report:
            lines.append(f"{report['blocks']} disjoint blocks; well-attached: {report['well_attached'] or 'none'}")
    return "\n".join(lines) + "\n"


def cmd_generate(args: argparse.Namespace, out: IO[str]) -> int:
    inst = plant(args.n, args.k, args.seed, args.constants, args.wiring)
    g, apices = inst.graph, sorted(inst.apices)
    handle = open(args.output, "w", encoding="utf-8") if args.output else out
    try:
        if args.format == "dimacs":
            g = Graph((v + 1 for v in g), ((a + 1, b + 1) for a, b in g.edges()))
            handle.write(f"c planted apices {' '.join(str(a + 1) for a in apices)}\n")
            write_dimacs(g, handle)
        else:
            handle.write(f"# planted apices {' '.join(map(str, apices))}\n")
            write_edge_list(g, handle)
    finally:
        if args.output:
            handle.close()
    return EXIT_FEASIBLE


def _config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        command=args.command,
        input=getattr(args, "input", None),
        format=args.format,
        k=args.k,
        mode=getattr(args, "mode", "auto"),
        constants=args.constants,
        node_budget=getattr(args, "node_budget", None),
        time_budget_ms=getattr(args, "time_budget_ms", None),
        json=args.json,
        threads=args.threads,
        seed=getattr(args, "seed", None),
    )


def main(
    argv: Sequence[str] | None = None,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
    stderr: IO[str] | None = None,
) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    if not argv or argv[0] not in SUBCOMMANDS + ("-h", "--help"):
        argv.insert(0, "solve")
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        if args.command == "generate":
            return cmd_generate(args, stdout)
        cfg = _config(args)
        g = _read_graph(cfg.input, cfg.format, stdin)
        if cfg.command == "verify":
            return cmd_verify(cfg, g, args.apex, stdout)
        if cfg.command == "stats":
            report = collect_stats(g, cfg)
            _emit(stdout, report, _format_stats(report), cfg.json)
            return EXIT_FEASIBLE
        return cmd_solve(cfg, g, stdout)
    except SystemExit as exc:  # --help
        return EXIT_FEASIBLE if exc.code in (0, None) else EXIT_USAGE
    except (UsageError, ParseError, CapacityError, DomainError, OSError) as exc:
        stderr.write(f"apex: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
