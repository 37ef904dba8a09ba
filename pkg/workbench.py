#!/usr/bin/env python3
"""
workbench.py - Command-line surface of the garland calculus workbench

Subcommands:
    selftest                      quick pass over the core identities
    check <identity>              randomized identity check with shrinking
    eval <file> --op OP [<file2>] apply one operation to element files
    bv verify                     Gerstenhaber relations from the BV axioms
    signs search                  Jacobi sign-convention search
    export-dot <file>             Graphviz rendering of an element's shapes

Exit codes: 0 expectations met, 10 divergence reported, 2 usage or input
error, 1 unexpected failure.
"""

import os
import sys
import argparse
import logging

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src.bvengine import (IDENTITIES as BV_IDENTITIES, RelationSet, check_membership,
                          identity_target, parity_assignments, verify_prop51)
from src.calculus import CONSTRUCTION_SIGNS, AlgebraParams, GarlandAlgebra
from src.dot_export import export_dot
from src.element_text import parse_element, print_element, print_generator
from src.errors import GarlandError
from src.identity_lab import FAMILIES, IDENTITIES, Bounds, check
from src.reports import RunReport
from src.signsearch import search
from src.utils import default_seed, load_config, read_text, setup_logging, write_text

EXIT_OK = 0
EXIT_PANIC = 1
EXIT_USAGE = 2
EXIT_DIVERGES = 10

OPERATIONS = ("product", "bracket", "lift", "proj", "delta")
BINARY_OPERATIONS = ("product", "bracket")
PRESETS = {"chas-sullivan": {"n": 1}}
SELFTEST_IDENTITIES = ("comm", "unit-law", "jacobi-mod2", "prop42", "prop43", "delta-sq")
SELFTEST_TRIALS = 25


class GarlandWorkbench:
    def __init__(self, config):
        self.config = config
        self.params = AlgebraParams.from_config(config)
        self.bounds = Bounds.from_config(config)
        self.show_progress = bool(config.get("show_progress", True))

    def _report(self, command):
        report = RunReport(command)
        report.add_params(self.params)
        return report

    def _max_workers(self):
        if self.config.get("use_multiprocessing"):
            return int(self.config.get("max_workers", 1))
        return None

    def load_element(self, path):
        logging.debug(f"Reading element from {path}")
        return parse_element(read_text(path), GarlandAlgebra(self.params))

    def selftest(self, seed):
        report = self._report("selftest")
        report.add("seed", seed)
        failures = 0
        for name in SELFTEST_IDENTITIES:
            result = check(name, SELFTEST_TRIALS, seed, self.params, self.bounds,
                           show_progress=self.show_progress, shrink=False)
            report.add(f"check.{name}", f"{result.verdict} ({result.passes}/{result.trials})")
            failures += result.diverges

        # Antisymmetry of the derived bracket needs no relations at all.
        empty = RelationSet((), 4, 2)
        target = identity_target("antisymmetry")
        members = sum(check_membership(target, empty, a).member for a in parity_assignments())
        report.add("bv.antisymmetry", f"{members}/16 without relations")
        failures += members != 16

        report.add("verdict", "PASS" if failures == 0 else "FAIL")
        return (EXIT_OK if failures == 0 else EXIT_DIVERGES), report

    def check(self, identity, trials, seed, family=None):
        result = check(identity, trials, seed, self.params, self.bounds, family,
                       show_progress=self.show_progress)
        report = RunReport(f"check {identity}")
        report.add_params(result.params)
        report.add("seed", seed)
        report.add("family", result.family)
        report.add("trials", result.trials)
        report.add("expectation", result.expectation)
        report.add("passes", result.passes)
        report.add("failures", result.failures)
        report.add("m_component_brackets", result.m_component_brackets)
        if result.m_component_brackets:
            report.add("note", "brackets with an M-component factor were evaluated as 0")
        if result.failing_trials:
            report.add("failing_trials", " ".join(str(t) for t in result.failing_trials[:20]))
        if result.counterexample is not None:
            report.add("counterexample.trial", result.counterexample.trial)
            report.add("counterexample.generators", result.counterexample.describe())
            report.add("counterexample.diff", result.counterexample.diff)
        if result.minimized is not None:
            report.add("minimized.generators", result.minimized.describe())
            report.add("minimized.diff", result.minimized.diff)
        report.add("verdict", result.verdict)
        return (EXIT_DIVERGES if result.diverges else EXIT_OK), report

    def evaluate(self, operation, path, second_path=None):
        alg = GarlandAlgebra(self.params)
        first = parse_element(read_text(path), alg)
        if operation in BINARY_OPERATIONS:
            if second_path is None:
                raise GarlandError(f"operation '{operation}' needs two element files")
            second = parse_element(read_text(second_path), alg)
            result = getattr(alg, operation)(first, second)
        else:
            result = getattr(alg, operation)(first)

        report = self._report(f"eval {operation}")
        report.add("input", print_element(first))
        if operation in BINARY_OPERATIONS:
            report.add("input2", print_element(second))
        report.add("terms", len(result))
        report.add("result", print_element(result))
        return EXIT_OK, report

    def bv_verify(self, word_bound, max_depth, include_bv=True, include_nilpotency=True):
        result = verify_prop51(word_bound, max_depth, include_bv, include_nilpotency,
                               max_workers=self._max_workers(),
                               show_progress=self.show_progress)
        report = RunReport("bv verify")
        report.add("word_bound", word_bound)
        report.add("max_depth", max_depth)
        report.add("include_bv", str(include_bv).lower())
        report.add("include_nilpotency", str(include_nilpotency).lower())
        for support, families in result.relation_counts.items():
            counts = ", ".join(f"{family}={count}" for family, count in sorted(families.items()))
            report.add(f"relations.{support}", counts or "none")
        for verdict in result.verdicts:
            key = f"{verdict.identity}[{verdict.assignment_text()}]"
            if verdict.verdict.member:
                certificate = " ; ".join(f"{value}*{label}"
                                         for label, value in verdict.verdict.certificate)
                report.add(key, f"member, certificate ({len(verdict.verdict.certificate)}) "
                                f"{certificate or 'empty'}")
            else:
                report.add(key, f"non-member, residual {verdict.verdict.residual}")
        report.add("members", f"{result.members}/{len(result.verdicts)}")
        report.add("verdict", "ALL-MEMBERS" if result.all_members else "RESIDUALS-REPORTED")
        return (EXIT_OK if result.all_members else EXIT_DIVERGES), report

    def signs_search(self, degree_bound, trials, seed, selectors=None):
        result = search(degree_bound, trials, seed, self.params, self.bounds, selectors,
                        int(self.config.get("report_limit", 20)), self.show_progress)
        report = RunReport("signs search")
        report.add_params(result.params)
        report.add("seed", seed)
        report.add("degree_bound", degree_bound)
        report.add("trials", trials)
        report.add("selectors", ",".join(selectors or sorted(CONSTRUCTION_SIGNS)))
        report.add("rules", result.total_rules)
        report.add("survivors", result.survivors)
        report.add("eliminated", result.eliminated)
        if result.untested:
            report.add("status", "untested")
        for index, rule in enumerate(result.listed_survivors):
            report.add(f"survivor.{index}", rule.encoding())
        for index, (rule, trial, residual) in enumerate(result.listed_eliminated):
            report.add(f"eliminated.{index}",
                       f"{rule.encoding()} @ trial {trial}: {print_element(residual)}")
        return EXIT_OK, report

    def export_dot(self, path):
        element = self.load_element(path)
        return EXIT_OK, "".join(export_dot(term.shape) for term in element.terms)


def build_parser():
    parser = argparse.ArgumentParser(description="Garland calculus workbench")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="config.yaml", help="Configuration file path")
    common.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level")
    common.add_argument("--log-file", help="Log file path")
    common.add_argument("--silent", action="store_true", help="Suppress progress bars")
    common.add_argument("--output", help="Write the report to this file")
    common.add_argument("--seed", type=int, help="Random seed (default: $GARLAND_SEED or config)")
    common.add_argument("--trials", type=int, help="Number of random trials")
    common.add_argument("--ring", choices=["z2", "z"], help="Coefficient ring")
    common.add_argument("--n", type=int, help="Dimension n of P")
    common.add_argument("--m", type=int, help="Dimension m of M")
    common.add_argument("--boundary", action="store_true", default=None,
                        help="Assume P is a boundary")
    common.add_argument("--no-boundary", dest="boundary", action="store_false", default=None,
                        help="Assume P is not a boundary")
    common.add_argument("--sign-rule", choices=sorted(CONSTRUCTION_SIGNS),
                        help="Construction sign rule")
    common.add_argument("--preset", choices=sorted(PRESETS), help="Parameter preset")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("selftest", parents=[common], help="Run quick self checks")

    check_parser = commands.add_parser("check", parents=[common], help="Check an identity")
    check_parser.add_argument("identity", choices=sorted(IDENTITIES))
    check_parser.add_argument("--family", choices=FAMILIES, help="Input family")

    eval_parser = commands.add_parser("eval", parents=[common], help="Evaluate an operation")
    eval_parser.add_argument("file")
    eval_parser.add_argument("file2", nargs="?")
    eval_parser.add_argument("--op", required=True, choices=OPERATIONS)

    bv_parser = commands.add_parser("bv", help="Abstract BV prover")
    bv_commands = bv_parser.add_subparsers(dest="bv_command", required=True)
    verify_parser = bv_commands.add_parser("verify", parents=[common],
                                           help="Verify the Gerstenhaber relations")
    verify_parser.add_argument("--bound", type=int, help="Maximum atoms per word")
    verify_parser.add_argument("--depth", type=int, help="Maximum Δ nesting depth")
    verify_parser.add_argument("--drop-bv", action="store_true",
                               help="Drop the seven-term relation instances")
    verify_parser.add_argument("--drop-nilpotency", action="store_true",
                               help="Drop the Δ² = 0 relations")

    signs_parser = commands.add_parser("signs", help="Sign convention search")
    signs_commands = signs_parser.add_subparsers(dest="signs_command", required=True)
    search_parser = signs_commands.add_parser("search", parents=[common],
                                              help="Search Jacobi sign rules")
    search_parser.add_argument("--degree", type=int, help="Exponent degree bound")
    search_parser.add_argument("--selector", action="append",
                               choices=sorted(CONSTRUCTION_SIGNS),
                               help="Construction sign selector (repeatable)")

    dot_parser = commands.add_parser("export-dot", parents=[common],
                                     help="Render element shapes as DOT")
    dot_parser.add_argument("file")
    return parser


def apply_overrides(config, args):
    """Preset first, then explicit flags."""
    if args.preset:
        config.update(PRESETS[args.preset])
    for flag, key in (("n", "n"), ("m", "m"), ("ring", "ring"), ("sign_rule", "sign_rule"),
                      ("boundary", "p_is_boundary"), ("trials", "trials")):
        value = getattr(args, flag, None)
        if value is not None:
            config[key] = value
    if args.silent:
        config["show_progress"] = False
    return config


def _given(value, fallback):
    """An explicit flag value, zero included, else the config fallback."""
    return int(fallback if value is None else value)


def run(argv):
    """Run one command. Returns (exit code, output text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else EXIT_USAGE), ""

    setup_logging(args.log_file, getattr(logging, args.log_level.upper()))

    try:
        config = apply_overrides(load_config(args.config), args)
        seed = args.seed if args.seed is not None else default_seed(config)
        trials = int(config.get("trials", 200))
        workbench = GarlandWorkbench(config)

        if args.command == "selftest":
            code, report = workbench.selftest(seed)
        elif args.command == "check":
            code, report = workbench.check(args.identity, trials, seed,
                                           args.family or config.get("family"))
        elif args.command == "eval":
            code, report = workbench.evaluate(args.op, args.file, args.file2)
        elif args.command == "bv":
            code, report = workbench.bv_verify(
                _given(args.bound, config.get("bv_word_bound", 4)),
                _given(args.depth, config.get("bv_max_delta_depth", 2)),
                include_bv=not args.drop_bv,
                include_nilpotency=not args.drop_nilpotency)
        elif args.command == "signs":
            code, report = workbench.signs_search(
                _given(args.degree, config.get("sign_degree_bound", 2)),
                trials, seed, args.selector)
        else:
            code, report = workbench.export_dot(args.file)

        text = report if isinstance(report, str) else report.render()
        if args.output:
            write_text(args.output, text)
            logging.info(f"Output saved: {args.output}")
        return code, text

    except (GarlandError, OSError) as e:
        logging.error(f"{e}")
        return EXIT_USAGE, ""


def main():
    try:
        code, text = run(sys.argv[1:])
    except KeyboardInterrupt:
        logging.info("Interrupted by user")
        print("Interrupted")
        sys.exit(EXIT_PANIC)
    except Exception as e:
        logging.error(f"Unexpected error: {e}")
        sys.exit(EXIT_PANIC)
    if text:
        sys.stdout.write(text)
    sys.exit(code)


if __name__ == "__main__":
    main()
