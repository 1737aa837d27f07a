# coding=utf-8
from dotenv import load_dotenv
load_dotenv()

import argparse
import sys
from datetime import datetime
from functools import partial

import pytz

import util
from constants import exit_codes, formats
from helper_objects import CommandManager, Record, Report, RunConfig
from ultrakit.documents import read_document
from ultrakit.enums import Status
from ultrakit.exceptions import ConfigError, TheoremMismatch, UltrakitException
from ultrakit.suites import SUITES, suite_cases


command_manager = CommandManager()


class Checker:
    def __init__(self, command_manager, out=None):
        self.cm = command_manager
        self.cm.init(self)
        self.out = out if out is not None else sys.stdout

    def load_inputs(self, config):
        return [(path, read_document(path)) for path in config.inputs]

    def run(self, config):
        report = Report(config.output_format)
        start = datetime.now(pytz.UTC)
        try:
            for record in self.cm(config.command, config):
                report.add(record)
        except TheoremMismatch as e:
            # Never an input problem: the witness replays the disagreement
            report.add(Record(config.command, "theorem", Status.FAIL, {"error": str(e), "witness": e.witness}))
        except UltrakitException as e:
            report.add(Record(config.command, "input", Status.ERROR, {"error": str(e)}))
        self.out.write(report.render())
        self.out.flush()
        util.log(config.command, f"{len(report.records)} records in {util.format_elapsed(start)}")
        return report.exit_status

    # Commands

    @command_manager.command("validate", help="validate space, map, category, groupoid and sheaf documents", fargs=["validate"])
    @command_manager.command("etale", help="étale verdicts for map documents, or the exhaustive cross-check", fargs=["etale"])
    @command_manager.command("convergence", help="ultraconvergence against the topology", fargs=["convergence"])
    @command_manager.command("roundtrip-space", help="topology -> ultraconvergence -> topology", fargs=["roundtrip-space"])
    @command_manager.command("reconstruct", help="sheaves against ultrasheaves on the points", fargs=["reconstruct"])
    @command_manager.command("alexandroff", help="presheaf round trips over small categories", fargs=["alexandroff"])
    @command_manager.command("descent", help="lifting criterion and universality on the test apexes", fargs=["descent"])
    @command_manager.command("coherence", help="ultrafilter and ultraproduct law suites", fargs=["coherence"])
    @command_manager.command("laws", help="pretopos laws for ultrasheaves", fargs=["laws"])
    @command_manager.command("descent-search", help="universal cocones without the lifting property", fargs=["descent-search"])
    @command_manager.command("proper", help="closed maps against downward lifting", fargs=["proper"])
    def run_suite(self, config, suite):
        command = self.cm.get(config.command)
        inputs = self.load_inputs(config)
        cases = suite_cases(suite, inputs, config.bounds, util.derive_rng(config.seed, suite))
        command.print(f"{len(cases)} cases, seed {config.seed}, jobs {config.jobs}")
        check = partial(SUITES[suite].check, bounds=config.bounds)
        outcomes = util.run_jobs(check, cases, config.jobs)
        return [Record.from_outcome(suite, outcome) for batch in outcomes for outcome in batch]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="*", help="input documents (JSON)")
    common.add_argument("--seed", type=int)
    common.add_argument("--max-points", dest="max_points", type=int)
    common.add_argument("--fiber-bound", dest="fiber_bound", type=int)
    common.add_argument("--probe-period", dest="probe_period", type=int)
    common.add_argument("--format", choices=formats, default="text")
    common.add_argument("--jobs", type=int)
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="ultrakit", description="Desk-scale checks for ultracategories and descent.")
    commands = parser.add_subparsers(dest="command", required=True)
    for c in command_manager.commands:
        commands.add_parser(c.name, parents=[common], help=c.help)
    return parser


def main(argv=None, environment=None, out=None):
    args = build_parser().parse_args(argv)
    util.quiet = args.quiet
    try:
        config = RunConfig.from_args(args, environment)
    except ConfigError as e:
        sys.stderr.write(f"ultrakit: {e}\n")
        return exit_codes["error"]
    return Checker(command_manager, out).run(config)


if __name__ == "__main__":
    sys.exit(main())
