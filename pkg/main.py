#!/usr/bin/env python3
"""
PADEL Workbench - command-line front end
Validate models, apply actions, explore history universes, check formulas
and run the axiom catalogue
"""

import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from colorama import init, Fore, Style

from src.axiom_suite import SchemaId, check_catalog, formula_pool
from src.config import OUTPUT_FORMATS, PadelConfig
from src.error_handler import EXIT_FAILURE, EXIT_OK, ErrorHandler, PadelError
from src.graphs import write_dot_files
from src.histories import HistoryUniverse, follow_path, generate_universe
from src.model_checker import EvalContext, satisfies, valid_in_universe
from src.mutations import Mutation, mutated
from src.parser import ModelFile, parse_action, parse_formula, parse_model, serialize
from src.reports import (
    AxiomRunRecord, ExploreRecord, SchemaReportRecord, StateRecord, StepRecord,
    UniverseStats, ValidationRecord, VerdictRecord, history_record,
)
from src.state_model import render_forest
from src.syntax import Formula, render_formula
from src.transitions import enabled_actions, fire

init(autoreset=True)


class PadelWorkbench:
    """Runs one subcommand against a model file"""

    def __init__(self, config: PadelConfig, handler: Optional[ErrorHandler] = None, out=None):
        """
        Args:
            config: Depth, budget and output settings
            handler: Error handler for warnings (stderr)
            out: Stream for results (stdout by default)
        """
        self.config = config
        self.handler = handler or ErrorHandler(verbose=config.verbose)
        self.out = out or sys.stdout

    # ---------- output helpers ----------

    @property
    def json_mode(self) -> bool:
        return self.config.output_format == "json"

    def _print(self, text: str = ""):
        print(text, file=self.out)

    def _banner(self, title: str):
        self._print(f"{Fore.CYAN}{'=' * 70}")
        self._print(f"{Fore.CYAN}{title}")
        self._print(f"{Fore.CYAN}{'=' * 70}")

    def _emit(self, record):
        self._print(record.model_dump_json(indent=2))

    def _forest(self, state, indent: str = "  "):
        for line in render_forest(state):
            self._print(f"{indent}{line}")

    # ---------- loading ----------

    def load(self, path: str) -> ModelFile:
        text = Path(path).read_text()
        return parse_model(text)

    def universe(self, model: ModelFile) -> HistoryUniverse:
        universe = generate_universe(model, self.config.depth, self.config.budget, self.config.depth_cap)
        for diagnostic in universe.diagnostics:
            self.handler.warn(diagnostic)
        return universe

    def _formula(self, model: ModelFile, text: str) -> Formula:
        named = model.formulas
        if text.strip() in named:
            return named[text.strip()]
        return parse_formula(text, model.agents)

    # ---------- subcommands ----------

    def validate(self, path: str) -> int:
        model = self.load(path)
        if self.json_mode:
            self._emit(ValidationRecord(
                model=path,
                agents=list(model.agents),
                states=[StateRecord.of(name, state) for name, state in model.initial_states],
                formulas={name: render_formula(f) for name, f in model.named_formulas},
            ))
            return EXIT_OK

        self._banner(f"MODEL {path}")
        self._print(f"Agents: {', '.join(model.agents)}")
        for name, state in model.initial_states:
            self._print(f"\n{Fore.YELLOW}init {name}")
            self._forest(state)
        for name, formula in model.named_formulas:
            self._print(f"\nformula {name} = {render_formula(formula)}")
        self._print(f"\n{Fore.GREEN}✓ {len(model.initial_states)} initial state(s) valid")
        return EXIT_OK

    def step(self, path: str, action_text: str, history_path: Optional[str] = None) -> int:
        model = self.load(path)
        start = history_path or model.state_names[0]
        before = follow_path(model, start).last
        label = parse_action(action_text, model.agents)
        result = fire(before, label)
        diagnostic = result.diagnostic(label)
        if diagnostic is not None:
            diagnostic.location = start
            self.handler.warn(diagnostic)

        if self.json_mode:
            self._emit(StepRecord(
                action=label.text,
                before=StateRecord.of(start, before),
                after=StateRecord.of(f"{start} {label.text}", result.state),
                ambiguous=result.ambiguous,
                alternatives=[serialize(s) for s in result.alternatives] if result.ambiguous else [],
            ))
            return EXIT_OK

        self._banner(f"STEP {label.text}")
        self._print(f"{Fore.YELLOW}Before ({start}):")
        self._forest(before)
        self._print(f"{Fore.YELLOW}After:")
        self._forest(result.state)
        self._print(f"\n{Fore.GREEN}✓ {serialize(result.state)}")
        return EXIT_OK

    def explore(self, path: str, dot_dir: Optional[str] = None) -> int:
        model = self.load(path)
        universe = self.universe(model)
        written = write_dot_files(universe, dot_dir) if dot_dir else []
        stats = UniverseStats.of(universe)

        if self.json_mode:
            histories = [history_record(universe, i, [l.text for l in enabled_actions(h.last)])
                         for i, h in enumerate(universe.histories)]
            self._emit(ExploreRecord(model=path, stats=stats, histories=histories,
                                     diagnostics=[d.message for d in universe.diagnostics],
                                     dot_files=written))
            return EXIT_OK

        self._banner(f"UNIVERSE {path} (depth {universe.depth})")
        for index, history in enumerate(universe.histories):
            actions = " ".join(label.text for label in history.actions) or "-"
            self._print(f"{Fore.YELLOW}{universe.path_of(index):<16}{Style.RESET_ALL} {actions}")
            self._print(f"{'':<16} {serialize(history.last)}")
        self._print()
        per_length = ", ".join(f"{size}: {count}" for size, count in stats.per_length.items())
        self._print(f"Histories: {stats.histories} ({per_length})")
        self._print(f"Reachable states: {stats.reachable_states}, transitions: {stats.transitions}")
        if written:
            self._print(f"{Fore.GREEN}✓ Wrote {len(written)} DOT file(s) to {dot_dir}")
        return EXIT_OK

    def check(self, path: str, formula_text: str, history_path: Optional[str] = None) -> int:
        model = self.load(path)
        universe = self.universe(model)
        formula = self._formula(model, formula_text)
        ctx = EvalContext(universe, strict=self.config.strict_depth)

        started = time.perf_counter()
        if history_path:
            verdict = satisfies(ctx, history_path, formula)
            counterexample, checked = None, 1
        else:
            result = valid_in_universe(ctx, formula)
            verdict, checked = result.valid, result.checked
            counterexample = universe.path_of(result.counterexample) if result.counterexample is not None else None
        seconds = time.perf_counter() - started

        record = VerdictRecord(formula=render_formula(ctx.core(formula)), history=history_path,
                               verdict=verdict, counterexample=counterexample, checked=checked,
                               seconds=round(seconds, 6), stats=UniverseStats.of(universe))
        if self.json_mode:
            self._emit(record)
        else:
            where = f"at {history_path}" if history_path else f"over {len(universe)} histories"
            if verdict:
                self._print(f"{Fore.GREEN}✓ true {where}: {render_formula(formula)}")
            else:
                self._print(f"{Fore.RED}✗ false {where}: {render_formula(formula)}")
                if counterexample:
                    self._print(f"{Fore.RED}  Counterexample: {counterexample}")
        return EXIT_OK if verdict else EXIT_FAILURE

    def axioms(self, path: str, schemas: Optional[List[SchemaId]] = None,
               mutations: Sequence[Mutation] = (), strict: bool = True) -> int:
        model = self.load(path)
        started = time.perf_counter()
        with mutated(*mutations):
            universe = self.universe(model)
            reports = check_catalog(universe, schemas, strict)
        seconds = time.perf_counter() - started
        passed = all(report.passed for report in reports)

        if self.json_mode:
            self._emit(AxiomRunRecord(
                model=path,
                mutations=[m.value for m in mutations],
                strict_depth=strict,
                stats=UniverseStats.of(universe),
                pool_size=len(formula_pool(model.agents)),
                reports=[SchemaReportRecord.of(report) for report in reports],
                passed=passed,
                seconds=round(seconds, 3),
            ))
            return EXIT_OK if passed else EXIT_FAILURE

        title = f"AXIOMS {path} (depth {universe.depth})"
        if mutations:
            title += f" mutations: {', '.join(m.value for m in mutations)}"
        if not strict:
            title += " lenient depth"
        self._banner(title)
        self._print(f"{'Schema':<22}{'Instances':>10}{'Evaluations':>13}  Verdict")
        for report in reports:
            row = f"{report.schema.value:<22}{report.instances_checked:>10}{report.evaluations:>13}  "
            if report.passed:
                self._print(f"{row}{Fore.GREEN}PASS")
                continue
            self._print(f"{row}{Fore.RED}FAIL ({report.failure_count})")
            first = report.failures[0]
            bindings = ", ".join(f"{k}={v}" for k, v in first.bindings.items())
            self._print(f"{Fore.RED}    {bindings}" + (f" at {first.history}" if first.history else ""))
            if first.detail:
                self._print(f"{Fore.RED}    {first.detail}")

        failed = sum(1 for report in reports if not report.passed)
        self._print()
        if passed:
            self._print(f"{Fore.GREEN}✓ All {len(reports)} schemas passed ({seconds:.1f}s)")
        else:
            self._print(f"{Fore.RED}✗ {failed} of {len(reports)} schemas failed ({seconds:.1f}s)")
        return EXIT_OK if passed else EXIT_FAILURE


def build_parser():
    import argparse

    parser = argparse.ArgumentParser(prog="padel", description="PADEL model workbench")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model", help="Model file")
    common.add_argument("--depth", type=int, help="Maximum history size")
    common.add_argument("--budget", type=int, help="Maximum number of histories")
    common.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, help="Output format")
    common.add_argument("--verbose", action="store_true", default=None, help="Print error details")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("validate", parents=[common], help="Parse and validate a model")

    step = commands.add_parser("step", parents=[common], help="Apply one action")
    step.add_argument("--action", required=True, help="Action label, e.g. '(enter@A, accept@C, E)'")
    step.add_argument("--history", help="Start from the last state of this history path")

    explore = commands.add_parser("explore", parents=[common], help="Generate the history universe")
    explore.add_argument("--dot", metavar="DIR", help="Write DOT graphs to this directory")

    check = commands.add_parser("check", parents=[common], help="Evaluate a formula")
    check.add_argument("--formula", required=True, help="Formula text or a named formula from the model")
    check.add_argument("--history", help="History path; validity over the universe when omitted")
    check.add_argument("--strict-depth", action="store_true", default=None,
                       help="Raise instead of treating boxes at the depth boundary as true")

    axioms = commands.add_parser("axioms", parents=[common], help="Run the axiom catalogue")
    axioms.add_argument("--schemas", help="Comma-separated schema ids (default: all)")
    axioms.add_argument("--mutation", action="append", default=[],
                        choices=[m.value for m in Mutation], help="Rule mutation (repeatable)")
    axioms.add_argument("--strict-depth", action=argparse.BooleanOptionalAction, default=None,
                        help="Depth boundary handling for the catalogue (default: strict)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return int(exit_request.code or 0)

    handler = ErrorHandler(verbose=bool(args.verbose))
    try:
        config = PadelConfig.from_env().with_overrides(
            depth=args.depth,
            budget=args.budget,
            strict_depth=getattr(args, "strict_depth", None),
            output_format=args.output_format,
            verbose=args.verbose,
        )
        bench = PadelWorkbench(config, handler)
        if args.command == "validate":
            return bench.validate(args.model)
        if args.command == "step":
            return bench.step(args.model, args.action, args.history)
        if args.command == "explore":
            return bench.explore(args.model, args.dot)
        if args.command == "check":
            return bench.check(args.model, args.formula, args.history)
        schemas = SchemaId.parse_list(args.schemas) if args.schemas else None
        mutations = [Mutation(value) for value in args.mutation]
        return bench.axioms(args.model, schemas, mutations, strict=args.strict_depth is not False)
    except KeyboardInterrupt:
        print(f"\n{Fore.YELLOW}Interrupted by user", file=sys.stderr)
        return EXIT_FAILURE
    except (PadelError, OSError) as error:
        return handler.handle_error(error)


if __name__ == "__main__":
    sys.exit(main())
