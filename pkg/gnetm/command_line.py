# Copyright 2024 The gnetm-toolkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Handlers for CLI commands and some utility functions.

Exit codes: 0 success, 1 usage or domain error, 2 an even number without a
Goldbach witness was found, 3 resource guard exceeded or internal error.
"""

import argparse
import dataclasses
import importlib.metadata
import logging
import sys

from gnetm import bench, congruence, estimator, matrices, partitions, primes, schemas
from gnetm.error import DomainError, PreconditionError, ResourceError, UsageError
from gnetm.machine import MachineConfig, cross_check, get_controller, run
from gnetm.publishers.csv_publisher import CsvPublisher
from gnetm.publishers.json_publisher import JsonPublisher
from gnetm.utils.config import load_config, parse_guard_overrides, resolve_threads
from gnetm.utils.logging import setup_logging
from gnetm.utils.sentry import init_sentry_from_env, report_falsification
from gnetm.watchers.stats_watcher import StatsWatcher
from gnetm.watchers.trace_watcher import TraceWatcher


LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FALSIFIED = 2
EXIT_INTERNAL = 3

PHI_SCAN_HEADER = ("ne", "phi")
TABLE1_HEADER = (
    "ne",
    "r_theta_0.2",
    "r_theta_0.5",
    "r_theta_0.99",
    "phi_computed",
    "phi_paper",
    "agree",
)
BENCH_HEADER = ("task", "n", "elapsed_ms", "throughput")
AUDIT_FIELDS = tuple(schemas.DELETION_AUDIT_SCHEMA["properties"])


class ToolkitArgumentParser(argparse.ArgumentParser):
    """Argument parser raising `UsageError` instead of exiting."""

    def error(self, message):
        """Print the usage and raise `UsageError`."""
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclasses.dataclass
class Context:
    """Everything a command handler needs besides its own arguments."""

    guards: object
    threads: int
    output: str | None
    stdout: object

    def fmt(self, default):
        """Output format of the command: the global option or the command default."""
        return self.output or default


def package_version():
    """Return the installed version of the toolkit."""
    try:
        return importlib.metadata.version("gnetm-toolkit")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"


def print_version(stream=None):
    """Write version information."""
    stream = stream if stream is not None else sys.stdout
    stream.write(
        f"gnetm {package_version()} (Python {sys.version_info.major}."
        f"{sys.version_info.minor}.{sys.version_info.micro})\n"
    )


def _int(value):
    try:
        return int(value)
    except ValueError as ex:
        raise argparse.ArgumentTypeError(f"invalid integer: '{value}'") from ex


def _crt_row(value):
    modulus, sep, residue = value.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"congruence '{value}' is not MODULUS:RESIDUE")

    return _int(modulus), _int(residue)


def _falsified(command, evens):
    evens = list(evens)
    LOG.error("%s: no Goldbach witness for %s", command, evens)
    report_falsification(command, evens)
    return EXIT_FALSIFIED


def cmd_primes(args, ctx):
    """Print the primes up to a limit, or only their count."""
    if args.count_only:
        count = primes.count_primes(0, args.limit, ctx.guards, ctx.threads)
        ctx.stdout.write(f"{count}\n")
        return EXIT_OK

    table = primes.sieve(args.limit, ctx.guards, ctx.threads)
    output = ctx.fmt("text")
    if output == "json":
        JsonPublisher(schemas.PRIME_TABLE_SCHEMA, ctx.stdout).publish(
            {"limit": table.limit, "count": table.count, "primes": table.tolist()}
        )
    elif output == "csv":
        CsvPublisher(("prime",), ctx.stdout).publish_all((p,) for p in table.tolist())
    else:
        ctx.stdout.writelines(f"{p}\n" for p in table.tolist())

    return EXIT_OK


def cmd_partitions(args, ctx):
    """List the Goldbach partitions of one even number."""
    result = partitions.goldbach_pairs(args.ne, args.allow_two, ctx.guards)
    output = ctx.fmt("text")
    if output == "json":
        JsonPublisher(schemas.PARTITION_SET_SCHEMA, ctx.stdout).publish(
            {"ne": result.ne, "pairs": [list(pair) for pair in result.pairs], "phi": result.phi}
        )
    elif output == "csv":
        CsvPublisher(("p", "q"), ctx.stdout).publish_all(result.pairs)
    else:
        ctx.stdout.writelines(f"{result.ne} = {p} + {q}\n" for p, q in result.pairs)
        ctx.stdout.write(f"phi={result.phi}\n")

    if result.phi == 0 and result.ne >= 6:
        return _falsified("partitions", [result.ne])

    return EXIT_OK


def cmd_phi_scan(args, ctx):
    """Write one (ne, phi) record per even number of a range."""
    records = partitions.phi_scan(args.lo, args.hi, args.allow_two, ctx.guards, ctx.threads)
    empty = []

    def tracked():
        for ne, count in records:
            if count == 0 and ne >= 6:
                empty.append(ne)
            yield ne, count

    if ctx.fmt("csv") == "json":
        publisher = JsonPublisher(schemas.PHI_RECORD_SCHEMA, ctx.stdout)
        publisher.publish_all({"ne": ne, "phi": count} for ne, count in tracked())
    else:
        CsvPublisher(PHI_SCAN_HEADER, ctx.stdout).publish_all(tracked())

    return _falsified("phi-scan", empty) if empty else EXIT_OK


def cmd_modm(args, ctx):
    """Print a congruence system of an even number."""
    if args.odd_complete:
        system = congruence.build_odd_complete(args.ne, ctx.guards)
    else:
        system = congruence.build_mod_m(args.ne, ctx.guards)

    output = ctx.fmt("text")
    if output == "json":
        JsonPublisher(schemas.CONGRUENCE_SYSTEM_SCHEMA, ctx.stdout).publish(
            {
                "ne": system.ne,
                "kind": system.kind.value,
                "rows": [dataclasses.asdict(row) for row in system.rows],
            }
        )
    elif output == "csv":
        CsvPublisher(("modulus", "residue", "residue_is_prime"), ctx.stdout).publish_all(
            (row.modulus, row.residue, row.residue_is_prime) for row in system.rows
        )
    else:
        ctx.stdout.write(congruence.format_system(system))

    return EXIT_OK


def cmd_crt(args, ctx):
    """Solve a system of congruences with pairwise coprime moduli."""
    solution = congruence.crt_solve(args.rows, ctx.guards)
    modulus = 1
    for row_modulus, _ in args.rows:
        modulus *= row_modulus

    if ctx.fmt("text") == "json":
        JsonPublisher(schemas.CRT_SCHEMA, ctx.stdout).publish(
            {"rows": [list(row) for row in args.rows], "solution": solution, "modulus": modulus}
        )
    else:
        ctx.stdout.write(f"{solution}\n")

    return EXIT_OK


def cmd_table1(args, ctx):
    """Reproduce the reference table of r(θ, ne) and partition counts."""
    rows = estimator.table1(
        args.rows or estimator.TABLE1_ROWS,
        estimator.TABLE1_THETAS,
        args.phi_limit,
        ctx.guards,
        ctx.threads,
    )

    if ctx.fmt("csv") == "json":
        JsonPublisher(schemas.TABLE1_ROW_SCHEMA, ctx.stdout).publish_all(
            {
                "ne": row.ne,
                "r": {str(theta): r for theta, r in zip(estimator.TABLE1_THETAS, row.r_values)},
                "phi_computed": row.phi_computed,
                "phi_paper": row.phi_published,
                "agree": row.agree,
            }
            for row in rows
        )
    else:
        agree = {True: "true", False: "false", None: ""}
        CsvPublisher(TABLE1_HEADER, ctx.stdout).publish_all(
            (row.ne, *row.r_values, row.phi_computed, row.phi_published, agree[row.agree])
            for row in rows
        )

    empty = [row.ne for row in rows if row.phi_computed == 0 and row.ne >= 6]
    return _falsified("table1", empty) if empty else EXIT_OK


def cmd_matrix(args, ctx):
    """Render a sum matrix."""
    matrix = matrices.build_matrix(args.ne, args.kind)
    output = ctx.fmt("text")
    if output == "json":
        JsonPublisher(schemas.MATRIX_SCHEMA, ctx.stdout).publish(
            {
                "ne": matrix.ne,
                "kind": matrix.kind.value,
                "labels": list(matrix.row_labels),
                "cells": matrix.dense(ctx.guards).tolist(),
            }
        )
    elif output == "csv":
        publisher = CsvPublisher(("label", *matrix.col_labels), ctx.stdout)
        for label, cells in zip(matrix.row_labels, matrix.dense(ctx.guards).tolist()):
            publisher.publish((label, *cells))
    else:
        ctx.stdout.write(matrices.render(matrix, ctx.guards))

    return EXIT_OK


def cmd_audit(args, ctx):
    """Write the deletion audit of every even number of a range."""
    audits = matrices.audit_scan(args.lo, args.hi, ctx.guards, ctx.threads)
    if ctx.fmt("json") == "csv":
        CsvPublisher(AUDIT_FIELDS, ctx.stdout).publish_all(
            tuple(audit.to_dict()[field] for field in AUDIT_FIELDS) for audit in audits
        )
    else:
        JsonPublisher(schemas.DELETION_AUDIT_SCHEMA, ctx.stdout).publish_all(
            audit.to_dict() for audit in audits
        )

    failed = [audit.ne for audit in audits if not audit.contradiction]
    return _falsified("audit", failed) if failed else EXIT_OK


def cmd_run_machine(args, ctx):
    """Run the tape machine over a range of even numbers."""
    config = MachineConfig(
        limit_even=args.limit,
        start_even=args.start,
        controller=args.controller,
        recheck_count=args.recheck,
        allow_two=args.allow_two,
    )

    watchers = []
    stats = None
    if args.metrics_file:
        stats = StatsWatcher()
        watchers.append(stats)

    if args.trace:
        watchers.append(TraceWatcher(ctx.stdout))

    controller = get_controller(config.controller, config.allow_two, ctx.guards)
    report = run(config, controller, watchers, ctx.guards)

    if stats is not None:
        stats.write(args.metrics_file)

    if not args.trace:
        payload = report.to_dict()
        if ctx.fmt("json") == "text":
            ctx.stdout.writelines(f"{key}={value}\n" for key, value in payload.items())
        else:
            JsonPublisher(schemas.RUN_REPORT_SCHEMA, ctx.stdout).publish(payload)

    if args.cross_check and not cross_check(config, ctx.threads, ctx.guards):
        LOG.error(
            "Controller strategies disagree on [%d, %d]", config.start_even, config.limit_even
        )
        return EXIT_INTERNAL

    if report.failures:
        return _falsified("run-machine", report.failures)

    return EXIT_OK


def cmd_selection(args, ctx):
    """Compare the random-selection estimate with a simulation."""
    r = args.r
    if r is None:
        # small even numbers have fewer partners than r(θ, ne)
        partners = partitions.quasi_pairs(args.ne, ctx.guards).r
        r = min(estimator.r_of_theta(args.ne, args.theta), partners)

    result = estimator.simulate_selection(args.ne, r, args.trials, args.seed, ctx.guards)
    payload = {
        "ne": result.ne,
        "theta": args.theta,
        "r": result.r,
        "trials": result.trials,
        "seed": result.seed,
        "predicted": result.predicted,
        "observed": result.observed,
    }
    if result.seed is None:
        del payload["seed"]

    if ctx.fmt("text") == "json":
        JsonPublisher(schemas.SELECTION_SCHEMA, ctx.stdout).publish(payload)
    else:
        ctx.stdout.writelines(f"{key}={value}\n" for key, value in payload.items())

    return EXIT_OK


def cmd_bench(args, ctx):
    """Time the sieve and partition-scan workloads."""
    results = bench.run_bench(args.task, args.sizes, ctx.guards, ctx.threads)
    if ctx.fmt("csv") == "json":
        JsonPublisher(schemas.BENCH_SCHEMA, ctx.stdout).publish_all(
            dataclasses.asdict(result) for result in results
        )
    else:
        CsvPublisher(BENCH_HEADER, ctx.stdout).publish_all(result.as_row() for result in results)

    return EXIT_OK


def build_parser():
    """Build the argument parser with every subcommand."""
    parser = ToolkitArgumentParser(
        prog="gnetm", description="Goldbach partition and tape machine verification toolkit."
    )
    parser.add_argument("--version", help="Show version.", action="store_true")
    parser.add_argument("--config", help="YAML configuration file.")
    parser.add_argument("--output", choices=("csv", "json", "text"), help="Output format.")
    parser.add_argument("--threads", type=_int, help="Worker threads (env GNETM_THREADS).")
    parser.add_argument(
        "--guard",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="Override a resource guard; may be repeated.",
    )
    parser.add_argument("--log-level", help="Root log level, e.g. DEBUG.")
    parser.add_argument("--log-format", choices=("text", "json"), default="text")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    sub = commands.add_parser("primes", help="List primes up to a limit.")
    sub.add_argument("limit", type=_int)
    sub.add_argument("--count-only", action="store_true", help="Print only the count.")
    sub.set_defaults(handler=cmd_primes)

    sub = commands.add_parser("partitions", help="List the Goldbach partitions of an even.")
    sub.add_argument("ne", type=_int)
    sub.add_argument("--allow-two", action="store_true")
    sub.set_defaults(handler=cmd_partitions)

    sub = commands.add_parser("phi-scan", help="Partition counts over a range (CSV).")
    sub.add_argument("lo", type=_int)
    sub.add_argument("hi", type=_int)
    sub.add_argument("--allow-two", action="store_true")
    sub.set_defaults(handler=cmd_phi_scan)

    sub = commands.add_parser("modm", help="Print the prime congruence system of an even.")
    sub.add_argument("ne", type=_int)
    sub.add_argument("--odd-complete", action="store_true", help="Print every odd modulus.")
    sub.set_defaults(handler=cmd_modm)

    sub = commands.add_parser("crt", help="Solve congruences given as MODULUS:RESIDUE.")
    sub.add_argument("rows", type=_crt_row, nargs="+", metavar="M:B")
    sub.set_defaults(handler=cmd_crt)

    sub = commands.add_parser("table1", help="Reproduce the reference r(theta) table.")
    sub.add_argument("--rows", type=_int, nargs="+", help="Even numbers to tabulate.")
    sub.add_argument(
        "--phi-limit",
        type=_int,
        default=estimator.DEFAULT_PHI_LIMIT,
        help="Skip partition counts above this value.",
    )
    sub.set_defaults(handler=cmd_table1)

    sub = commands.add_parser("matrix", help="Render a sum matrix.")
    sub.add_argument("ne", type=_int)
    sub.add_argument(
        "--kind", choices=[kind.value for kind in matrices.MatrixKind], default="full"
    )
    sub.set_defaults(handler=cmd_matrix)

    sub = commands.add_parser("audit", help="Deletion audits over a range (JSON lines).")
    sub.add_argument("lo", type=_int)
    sub.add_argument("hi", type=_int)
    sub.set_defaults(handler=cmd_audit)

    sub = commands.add_parser("run-machine", help="Run the tape machine.")
    sub.add_argument("--start", type=_int, default=6)
    sub.add_argument("--limit", type=_int, required=True)
    sub.add_argument("--controller", choices=("basis1", "basis2", "basis3"), default="basis2")
    sub.add_argument("--recheck", type=_int, default=3, help="Re-reads before halting.")
    sub.add_argument("--allow-two", action="store_true")
    sub.add_argument("--trace", action="store_true", help="Write one line per cell.")
    sub.add_argument("--cross-check", action="store_true", help="Compare all controllers.")
    sub.add_argument("--metrics-file", help="Write Prometheus metrics to this file.")
    sub.set_defaults(handler=cmd_run_machine)

    sub = commands.add_parser("selection", help="Simulate the random-selection estimate.")
    sub.add_argument("ne", type=_int)
    sub.add_argument("--theta", type=float, default=0.5)
    sub.add_argument("--r", type=_int, help="Partners drawn per trial (default r(theta, ne)).")
    sub.add_argument("--trials", type=_int, default=1000)
    sub.add_argument("--seed", type=_int)
    sub.set_defaults(handler=cmd_selection)

    sub = commands.add_parser("bench", help="Time the sieve and phi-scan workloads (CSV).")
    sub.add_argument("--task", choices=tuple(bench.WORKLOADS), action="append")
    sub.add_argument("--sizes", type=_int, nargs="+")
    sub.set_defaults(handler=cmd_bench)

    return parser


def dispatch(argv=None, stdout=None):
    """Parse `argv`, run the selected command and return its exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as ex:
        sys.stderr.write(f"gnetm: error: {ex}\n")
        return EXIT_USAGE
    except SystemExit as ex:
        return ex.code if isinstance(ex.code, int) else EXIT_OK

    if args.version:
        print_version(stdout)
        return EXIT_OK

    if args.command is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write("gnetm: error: a command is required\n")
        return EXIT_USAGE

    try:
        config = load_config(args.config)
        setup_logging(config.logging, args.log_level, args.log_format)
        guards = config.guards.override(**parse_guard_overrides(args.guard))
        threads = resolve_threads(args.threads, config)
    except (UsageError, ValueError) as ex:
        sys.stderr.write(f"gnetm: error: {ex}\n")
        return EXIT_USAGE

    init_sentry_from_env(package_version())
    ctx = Context(guards=guards, threads=threads, output=args.output, stdout=stdout)

    try:
        return args.handler(args, ctx)

    except (UsageError, DomainError, PreconditionError) as ex:
        LOG.error(ex.format(args.command))
        return EXIT_USAGE

    except ResourceError as ex:
        LOG.error(ex.format(args.command))
        return EXIT_INTERNAL

    except Exception as ex:
        LOG.exception("Unexpected error running %s: %s", args.command, ex)
        return EXIT_INTERNAL


def gnetm():
    """Handle the gnetm CLI command."""
    sys.exit(dispatch(sys.argv[1:]))
