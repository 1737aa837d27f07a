import os
from collections import namedtuple

import util
from constants import bounds_variable, defaults, exit_codes
from ultrakit.documents import dump_document
from ultrakit.enums import OutputFormat, Status
from ultrakit.exceptions import ConfigError
from ultrakit.suites import Bounds


class RunConfig:
    __slots__ = (
        "command", "inputs", "seed", "bounds", "output_format", "jobs", "quiet"
    )

    def __init__(self, command, inputs=(), seed=0, bounds=None, output_format=OutputFormat.TEXT, jobs=1, quiet=False):
        self.command = command
        self.inputs = list(inputs)
        self.seed = seed
        self.bounds = bounds if bounds is not None else Bounds()
        self.output_format = output_format
        self.jobs = jobs
        self.quiet = quiet

    @classmethod
    def from_args(cls, args, environment=None):
        """Flags win over ULTRAKIT_BOUNDS, which wins over the defaults."""
        environment = os.getenv(bounds_variable, "") if environment is None else environment
        values = dict(defaults)
        values.update(util.parse_bounds(environment))
        for key in values:
            flag = getattr(args, key, None)
            if flag is not None:
                if flag < (0 if key == "seed" else 1):
                    raise ConfigError(f"--{key.replace('_', '-')} is out of range")
                values[key] = flag
        return cls(
            args.command,
            args.inputs,
            values["seed"],
            Bounds(values["max_points"], values["fiber_bound"], values["probe_period"]),
            OutputFormat(args.format),
            values["jobs"],
            args.quiet,
        )


class Record(namedtuple("Record", ["suite", "instance", "status", "witness"])):
    __slots__ = ()

    @classmethod
    def from_outcome(cls, suite, outcome):
        return cls(suite, outcome.instance, Status.PASS if outcome.passed else Status.FAIL, outcome.witness)

    def to_document(self):
        return {"suite": self.suite, "instance": self.instance, "status": self.status.value, "witness": self.witness}

    def to_json(self):
        return dump_document(self.to_document())

    def to_text(self):
        line = f"{self.status.value.upper():5} {self.suite} {self.instance}"
        if self.status is not Status.PASS and self.witness is not None:
            line += f"\n      {dump_document(self.witness)}"
        return line


class Report:
    def __init__(self, output_format):
        self.output_format = output_format
        self.records = []

    def add(self, record):
        self.records.append(record)

    @property
    def failed(self):
        return [record for record in self.records if record.status is not Status.PASS]

    @property
    def exit_status(self):
        if any(record.status is Status.ERROR for record in self.records):
            return exit_codes["error"]
        return exit_codes["fail"] if self.failed else exit_codes["pass"]

    def render(self):
        if self.output_format is OutputFormat.JSON:
            return "".join(record.to_json() + "\n" for record in self.records)
        lines = [record.to_text() for record in self.records if record.status is not Status.PASS]
        lines.append(f"{len(self.records) - len(self.failed)} passed, {len(self.failed)} failed")
        return "\n".join(lines) + "\n"


class Command:
    def __init__(self, func, name, help="", fargs=None, fkwargs=None):
        self.name = name.lower()
        self.func = func
        self.help = help
        self.fargs = fargs if fargs is not None else []
        self.fkwargs = fkwargs if fkwargs is not None else {}

    def print(self, out):
        util.log(self.name, out)

    def __contains__(self, item):
        return item.lower() == self.name

    def __call__(self, runner, config):
        return self.func(runner, config, *self.fargs, **self.fkwargs)


class CommandManager:
    commands = []
    runner = None

    def init(self, runner):
        self.runner = runner

    def command(self, *args, **kwargs):
        def decorator(func, *fargs, **fkwargs):
            func_args = {}
            if "fargs" not in kwargs:
                func_args.update({"fargs": fargs})
            if "fkwargs" not in kwargs:
                func_args.update({"fkwargs": fkwargs})
            self.commands.append(Command(func, *args, **kwargs, **func_args))
            return func
        return decorator

    def get(self, command):
        for c in self.commands:
            if command in c:
                return c
        return None

    def __call__(self, command, config):
        if self.runner is None:
            raise Exception("CommandManager must be initialized before being used to call commands.")
        c = self.get(command)
        if c is None:
            raise ConfigError(f"unknown command {command!r}")
        return c(self.runner, config)
