from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any

from django.core.management.base import BaseCommand, CommandError, CommandParser

from ...digital import OSCILLATING, SETTLE, UNIT, Simulator, parse_waveforms
from ...exceptions import AktonError
from ...layout import can_shrink, layout, render_ascii, render_svg
from ...linearize import linearize
from ...metric import metric_multiple_fork, metric_multiple_join, metric_multiple_link
from ...network import HEAL, KEEP_CUTS, Network, reconstruct
from ...parser import LoadedProgram, load_file, parse
from ...rewrite import Rewriter, RewriteRule
from ...sorts import SortEngine, WellFormedReport
from ...terms import Term, format_path, parse_path, to_json, to_text

_LOG_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}

_CONSTRUCTIONS = {
    "link": (metric_multiple_link, "l"),
    "fork": (metric_multiple_fork, "ls"),
    "join": (metric_multiple_join, "ls"),
}


def _dump(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


class Command(BaseCommand):
    help = "Parse, check, reconstruct, linearize, rewrite, simulate and lay out Akton programs."

    def add_arguments(self, parser: CommandParser) -> None:
        subcommands = parser.add_subparsers(dest="subcommand", required=True)

        def add(name: str, help_text: str, formats: tuple[str, ...]) -> CommandParser:
            sub = subcommands.add_parser(name, help=help_text)
            sub.add_argument("--format", choices=formats, default=formats[0])
            sub.add_argument("--out", help="Write the result to this file instead of stdout.")
            return sub

        sub = add("parse", "Parse .akt files and print their program term.", ("text", "json"))
        sub.add_argument("files", nargs="+")

        sub = add("check", "Report sort, interfaces, violations and cut bindings.", ("text", "json"))
        sub.add_argument("files", nargs="+")

        sub = add("graph", "Reconstruct the nodal network of a program.", ("text", "json", "dot"))
        sub.add_argument("file")
        cuts = sub.add_mutually_exclusive_group()
        cuts.add_argument("--heal", dest="mode", action="store_const", const=HEAL, default=HEAL)
        cuts.add_argument("--keep-cuts", dest="mode", action="store_const", const=KEEP_CUTS)

        sub = add("linearize", "Turn a network JSON file into a program term.", ("text", "json"))
        sub.add_argument("file", help="Network JSON, or - for stdin.")

        sub = add("rewrite", "Apply one replacement rule at a subterm path.", ("text", "json"))
        sub.add_argument("file")
        sub.add_argument("--rule", help="family[:fwd|bwd][#variant], e.g. associativity:bwd#2")
        sub.add_argument("--path", default="", help="Dot path from the root, e.g. 0.1")
        sub.add_argument("--operand", help="Explicit inserted term for link and expansion rules.")
        sub.add_argument(
            "--list", action="store_true", help="List every applicable rule and path instead."
        )

        sub = add("simulate", "Run a digital program over input waveforms.", ("text", "json"))
        sub.add_argument("file")
        sub.add_argument("--inputs", default="", help='Waveforms, e.g. "A=011,B=1".')
        sub.add_argument("--steps", type=int, help="Maximum number of steps.")
        sub.add_argument("--timing", choices=(UNIT, SETTLE))
        sub.add_argument("--trace", help="Write the per-edge trace as CSV to this file.")
        sub.add_argument(
            "--truth-table", action="store_true", help="Tabulate every binary input assignment."
        )

        sub = add("layout", "Place a metric program on the square grid.", ("ascii", "svg", "json"))
        sub.add_argument("file", nargs="?")
        sub.add_argument("--construction", choices=sorted(_CONSTRUCTIONS))
        sub.add_argument("--kind", help="s, l or r for link; ls or sr for fork and join.")
        sub.add_argument("--depth", type=int, default=0)

    def handle(self, *args: Any, **options: Any) -> None:
        logging.getLogger("aktonc").setLevel(_LOG_LEVELS.get(options["verbosity"], logging.DEBUG))
        self._failed = False
        handler = getattr(self, f"handle_{options['subcommand']}")
        try:
            output = handler(options)
        except AktonError as error:
            raise CommandError(error.describe(), returncode=1) from error
        except (OSError, ValueError) as error:
            raise CommandError(str(error), returncode=2) from error
        self._emit(output, options.get("out"))
        if self._failed:
            raise CommandError("the program is not well-formed", returncode=1)

    def _emit(self, output: str, out: str | None) -> None:
        if not output.endswith("\n"):
            output += "\n"
        if out:
            try:
                Path(out).write_text(output, encoding="utf-8")
            except OSError as error:
                raise CommandError(str(error), returncode=2) from error
            return
        self.stdout.write(output, ending="")

    def _per_file(self, options: dict[str, Any], render: Any) -> str:
        files = options["files"]
        results = [(path, render(load_file(path))) for path in files]
        if options["format"] == "json":
            if len(results) == 1:
                return _dump(results[0][1])
            return _dump([{"file": path, **payload} for path, payload in results])
        if len(results) == 1:
            return results[0][1]
        return "\n".join(f"== {path} ==\n{text}" for path, text in results)

    def handle_parse(self, options: dict[str, Any]) -> str:
        as_json = options["format"] == "json"

        def render(loaded: LoadedProgram) -> Any:
            if as_json:
                return {
                    "definitions": [
                        {"name": name, "body": to_text(body)} for name, body in loaded.definitions
                    ],
                    "term": to_text(loaded.term),
                    "ast": to_json(loaded.term),
                }
            lines = [f"{name} := {to_text(body)} ;" for name, body in loaded.definitions]
            return "\n".join([*lines, to_text(loaded.term)]) + "\n"

        return self._per_file(options, render)

    def handle_check(self, options: dict[str, Any]) -> str:
        as_json = options["format"] == "json"

        def render(loaded: LoadedProgram) -> Any:
            report = SortEngine(loaded.registry).check(loaded.term)
            if not report.ok:
                self._failed = True
            return report.as_dict() if as_json else self._check_text(report)

        return self._per_file(options, render)

    def _check_text(self, report: WellFormedReport) -> str:
        lines = [
            f"sort: {report.sort or '-'}",
            f"in: {report.as_dict()['in']}",
            f"out: {report.as_dict()['out']}",
        ]
        if report.cuts is not None:
            lines.append(f"cuts: {len(report.cuts)}")
            lines += [
                f"  {pair.tail} -> {pair.head} ({pair.family}, {pair.twist})"
                for pair in report.cuts
            ]
        for violation in report.violations:
            where = format_path(violation.path) or "root"
            lines.append(f"violation {violation.code} at {where}: {violation.message}")
        lines.append("ok" if report.ok else "not well-formed")
        return "\n".join(lines) + "\n"

    def handle_graph(self, options: dict[str, Any]) -> str:
        loaded = load_file(options["file"])
        network = reconstruct(loaded.term, options["mode"], SortEngine(loaded.registry))
        if options["format"] == "json":
            return _dump(network.to_json())
        if options["format"] == "dot":
            return network.to_dot()
        counts = network.counts()
        lines = [
            f"nodes: {len(network)}",
            "edges: " + " ".join(f"{kind}={count}" for kind, count in counts.items()),
        ]
        for node in network.nodes():
            label = network.label(node)
            lines.append(f"  {node} {network.atom(node)}{'.' + label if label else ''}")
        lines += [f"  {edge} {edge.kind}" for edge in network.edges()]
        return "\n".join(lines) + "\n"

    def handle_linearize(self, options: dict[str, Any]) -> str:
        if options["file"] == "-":
            payload = json.load(sys.stdin)
        else:
            payload = json.loads(Path(options["file"]).read_text(encoding="utf-8"))
        term = linearize(Network.from_json(payload))
        if options["format"] == "json":
            return _dump({"term": to_text(term), "ast": to_json(term)})
        return to_text(term) + "\n"

    def handle_rewrite(self, options: dict[str, Any]) -> str:
        loaded = load_file(options["file"])
        rewriter = Rewriter(SortEngine(loaded.registry))
        as_json = options["format"] == "json"
        if options["list"]:
            pairs = [(str(rule), format_path(path)) for rule, path in rewriter.applicable(loaded.term)]
            if as_json:
                return _dump([{"rule": rule, "path": path} for rule, path in pairs])
            return "".join(f"{rule} at '{path}'\n" for rule, path in pairs)
        if not options["rule"]:
            raise ValueError("--rule is required unless --list is given")
        rule = RewriteRule.parse(options["rule"])
        operand: Term | None = None
        if options["operand"]:
            operand = parse(options["operand"], loaded.registry)
        result = rewriter.apply(rule, loaded.term, parse_path(options["path"]), operand)
        if as_json:
            return _dump({"rule": str(rule), "path": options["path"], "term": to_text(result)})
        return to_text(result) + "\n"

    def handle_simulate(self, options: dict[str, Any]) -> str:
        loaded = load_file(options["file"])
        simulator = Simulator(
            loaded.term, registry=loaded.registry, timing=options["timing"],
            engine=SortEngine(loaded.registry),
        )
        as_json = options["format"] == "json"
        if options["truth_table"]:
            rows = simulator.truth_table(options["steps"])
            if as_json:
                return _dump([{"inputs": inputs, "outputs": outputs} for inputs, outputs in rows])
            return "".join(
                " ".join(f"{k}={v}" for k, v in inputs.items())
                + " -> "
                + " ".join(f"{k}={v}" for k, v in outputs.items())
                + "\n"
                for inputs, outputs in rows
            )

        trace = simulator.run(parse_waveforms(options["inputs"]), options["steps"])
        if options["trace"]:
            Path(options["trace"]).write_text(trace.to_csv(), encoding="utf-8")
        if as_json:
            return _dump(trace.as_dict())
        period = f" (period {trace.period})" if trace.classification == OSCILLATING else ""
        lines = [
            f"timing: {trace.timing}",
            f"classification: {trace.classification}{period}",
            f"steps: {trace.steps}",
        ]
        lines += [f"{name}={value}" for name, value in trace.final_outputs().items()]
        return "\n".join(lines) + "\n"

    def handle_layout(self, options: dict[str, Any]) -> str:
        if options["construction"]:
            build, default_kind = _CONSTRUCTIONS[options["construction"]]
            term = build(options["depth"], options["kind"] or default_kind)
        elif options["file"]:
            loaded = load_file(options["file"])
            term = loaded.registry.expand(loaded.term)
        else:
            raise ValueError("give a program file or --construction")
        grid = layout(term)
        if options["format"] == "svg":
            return render_svg(grid)
        if options["format"] == "json":
            return _dump({"term": to_text(term), **grid.as_dict(), "can_shrink": can_shrink(grid)})
        return render_ascii(grid)
