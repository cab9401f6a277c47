# This file is part of ts_sfh_torsion.
#
# Developed for the Vera C. Rubin Observatory Telescope and Site Systems.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

__all__ = [
    "EXIT_OK",
    "EXIT_INVALID",
    "EXIT_UNDETERMINED",
    "COMMANDS",
    "SfhTorsionApp",
    "run_sfh_torsion",
]

import argparse
import dataclasses
import json
import logging
import sys
import types

from .config_schema import CONFIG_SCHEMA
from .diagram import (
    DiagramError,
    check_nice,
    diagram_to_dict,
    eh_generator,
    enumerate_generators,
    load_diagram,
    validate_diagram,
)
from .disks import DiskCountError, disk_table, enumerate_disks, split_differential
from .domains import DomainError, check_admissible
from .filtered_complex import ComplexError, from_diagram, from_fixture
from .gluing import GluingError, at_inequality_check, load_gluing_data, verify_filtered_chain_map
from .open_book import PartialOpenBookError, assemble_from_partial_open_book, load_partial_open_book
from .torsion import TorsionError, algebraic_torsion, available_backends, page_table
from .utils.input_files import DefaultingValidator, InputFileError, load_json_file, load_yaml_file

EXIT_OK = 0
"""Exit code: success."""

EXIT_INVALID = 1
"""Exit code: invalid input, failed validation or a failed check."""

EXIT_UNDETERMINED = 2
"""Exit code: the torsion is undetermined up to the cap."""

COMMANDS = ("validate", "generators", "disks", "at", "pages", "glue", "assemble")
"""Commands of ``run_sfh_torsion``."""

# Errors reported as invalid input rather than crashes.
_INPUT_ERRORS = (
    InputFileError,
    DiagramError,
    DomainError,
    DiskCountError,
    ComplexError,
    TorsionError,
    GluingError,
    PartialOpenBookError,
)

_DISK_COLUMNS = ("shape", "name", "2(n_x+n_y)", "|x|-|y|", "jplus")


def _format_table(headers, rows):
    """Left aligned text table with one space between columns."""
    cells = [[str(item) for item in headers]] + [[str(item) for item in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    return "\n".join(
        " ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in cells
    )


def _format_element(element):
    lines = []
    for level, names in enumerate(element):
        lines.append(f"  c_{level} = " + (" + ".join(names) if names else "0"))
    return lines


class SfhTorsionApp:
    """Command line application for algebraic torsion computations.

    Parameters
    ----------
    command : `str`
        One of `COMMANDS`.
    inputs : `list` [`str`]
        Input files: one file, or sub diagram, ambient diagram and map
        for ``glue``.
    config : `types.SimpleNamespace`
        Run configuration matching `CONFIG_SCHEMA`.
    log : `logging.Logger`
        Parent logger.
    stdout : file-like object, optional
        Where reports are written; `sys.stdout` if omitted.
    """

    def __init__(self, command, inputs, config, log, stdout=None):
        if command not in COMMANDS:
            raise ValueError(f"Unknown command {command!r}; must be one of {COMMANDS}.")
        self.command = command
        self.inputs = list(inputs)
        self.config = config
        self.log = log.getChild(type(self).__name__)
        self.stdout = stdout if stdout is not None else sys.stdout

    @classmethod
    def make_config(cls, config_path=None, log=None, **overrides):
        """Read the run configuration and apply command line overrides.

        Parameters
        ----------
        config_path : `str` or `pathlib.Path`, optional
            YAML configuration file; schema defaults if omitted.
        log : `logging.Logger`, optional
            Logger.
        **overrides
            Values replacing those of the file; `None` values are ignored.

        Returns
        -------
        config : `types.SimpleNamespace`
            The configuration, ``page_window`` as ``(r_max, p_max)``.
        """
        if config_path is None:
            data = DefaultingValidator(CONFIG_SCHEMA).validate(dict())
        else:
            data = load_yaml_file(config_path, CONFIG_SCHEMA, log=log)
        data["page_window"] = (data["page_window"]["r_max"], data["page_window"]["p_max"])
        for name, value in overrides.items():
            if value is not None:
                data[name] = value
        if data["cap"] < 0:
            raise InputFileError(f"cap must be nonnegative; got {data['cap']}.")
        if data["backend"] not in available_backends:
            raise InputFileError(f"Unknown backend {data['backend']!r}.")
        return types.SimpleNamespace(**data)

    @classmethod
    def make_from_cmdline(cls, args=None, stdout=None):
        """Make an application from command line arguments.

        Parameters
        ----------
        args : `list` [`str`], optional
            Arguments; `sys.argv` if omitted.
        stdout : file-like object, optional
            Where reports are written.
        """
        parser = argparse.ArgumentParser(
            prog="run_sfh_torsion",
            description="Compute the algebraic torsion of the contact class of a sutured Heegaard diagram.",
        )
        parser.add_argument("command", choices=COMMANDS, help="What to compute.")
        parser.add_argument(
            "inputs",
            nargs="+",
            help="Input file; for glue: sub diagram, ambient diagram and gluing map.",
        )
        parser.add_argument("--config", help="YAML run configuration file.")
        parser.add_argument("--cap", type=int, help="Largest boundary depth tried.")
        parser.add_argument(
            "--exact",
            action="store_true",
            default=None,
            help="Resolve the torsion beyond the cap with the exact backend.",
        )
        parser.add_argument("--backend", choices=sorted(available_backends), help="Backend of the scan.")
        parser.add_argument("--output", choices=("json", "text"), help="Report format.")
        parser.add_argument(
            "--pages",
            nargs=2,
            type=int,
            metavar=("R", "P"),
            help="Largest page and filtration level of the page table.",
        )
        parser.add_argument(
            "--dump-domains",
            action="store_true",
            default=None,
            help="Include disk domains in disk reports.",
        )
        parser.add_argument(
            "--log-level",
            default="warning",
            choices=("debug", "info", "warning", "error"),
            help="Logging level.",
        )
        namespace = parser.parse_args(args)
        expected = 3 if namespace.command == "glue" else 1
        if len(namespace.inputs) != expected:
            parser.error(f"{namespace.command} takes {expected} input file(s); got {len(namespace.inputs)}.")
        logging.basicConfig(
            level=getattr(logging, namespace.log_level.upper()),
            format="%(levelname)s %(name)s: %(message)s",
        )
        log = logging.getLogger("run_sfh_torsion")
        try:
            config = cls.make_config(
                namespace.config,
                log=log,
                cap=namespace.cap,
                exact=namespace.exact,
                backend=namespace.backend,
                output=namespace.output,
                page_window=None if namespace.pages is None else tuple(namespace.pages),
                dump_domains=namespace.dump_domains,
            )
        except InputFileError as e:
            parser.error(str(e))
        return cls(namespace.command, namespace.inputs, config, log=log, stdout=stdout)

    def run(self):
        """Run the command and write its report.

        Returns
        -------
        exit_code : `int`
            `EXIT_OK`, `EXIT_INVALID` or `EXIT_UNDETERMINED`.
        """
        handler = getattr(self, f"do_{self.command}")
        try:
            exit_code, payload, text = handler()
        except _INPUT_ERRORS as e:
            self.log.error("%s failed: %s", self.command, e)
            self.write({"error": str(e)}, f"error: {e}")
            return EXIT_INVALID
        self.write(payload, text)
        return exit_code

    def write(self, payload, text):
        if self.config.output == "text" and self.command != "assemble":
            self.stdout.write(text + "\n")
        else:
            self.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")

    def load_input(self, path):
        """Read a diagram or a complex fixture.

        Returns
        -------
        kind : `str`
            ``"diagram"`` or ``"fixture"``.
        item : `HeegaardDiagram` or `FilteredComplex`
            The diagram, or the fixture complex.
        """
        data = load_json_file(path, dict(), log=self.log)
        if isinstance(data, dict) and "generators" in data:
            return "fixture", from_fixture(data, log=self.log)
        return "diagram", load_diagram(path, log=self.log)

    def complex_of(self, d):
        """Filtered complex of a valid, nice and admissible diagram."""
        report = validate_diagram(d)
        if not report.ok:
            raise DiagramError(f"Diagram is invalid: {report.violations[0].message}")
        split = split_differential(d, log=self.log)
        eh = eh_generator(d) if d.eh is not None else None
        return from_diagram(split, eh, log=self.log)

    def load_complex(self, path):
        kind, item = self.load_input(path)
        return item if kind == "fixture" else self.complex_of(item)

    def do_validate(self):
        d = load_diagram(self.inputs[0], log=self.log)
        report = validate_diagram(d)
        violations = [dataclasses.asdict(violation) for violation in report.violations]
        nice = []
        admissible = None
        if report.ok:
            nice = [dataclasses.asdict(violation) for violation in check_nice(d)]
            admissible = check_admissible(d, log=self.log)
        ok = report.ok and not nice and bool(admissible)
        payload = {"violations": violations, "nice": nice, "admissible": admissible, "ok": ok}
        lines = [f"{item['kind']}: {item['message']}" for item in violations + nice]
        if admissible is not None:
            lines.append(f"admissible: {'yes' if admissible else 'no'}")
        lines.append("ok" if ok else "invalid")
        return (EXIT_OK if ok else EXIT_INVALID), payload, "\n".join(lines)

    def do_generators(self):
        kind, item = self.load_input(self.inputs[0])
        if kind == "fixture":
            rows = [{"name": name, "cycles": cycles} for name, cycles in zip(item.names, item.cycles)]
        else:
            rows = [
                {"name": generator.name, "cycles": generator.cycles}
                for generator in enumerate_generators(item)
            ]
        text = _format_table(("generator", "|x|"), [(row["name"], row["cycles"]) for row in rows])
        return EXIT_OK, {"generators": rows, "count": len(rows)}, text

    def do_disks(self):
        kind, item = self.load_input(self.inputs[0])
        if kind == "fixture":
            rows = []
            for disk in item.disks:
                row = dict(disk)
                source, target = item.index[disk["from"]], item.index[disk["to"]]
                if "shape" in disk and item.cycles[source] is not None and item.cycles[target] is not None:
                    row["2(n_x+n_y)"] = 1 if disk["shape"] == "bigon" else 2
                    row["|x|-|y|"] = item.cycles[source] - item.cycles[target]
                rows.append(row)
        else:
            disks = enumerate_disks(item, log=self.log)
            rows = disk_table(disks)
            if self.config.dump_domains:
                for row, disk in zip(rows, disks):
                    row["domain"] = disk.domain.to_json()
        text = _format_table(
            ("shape", "name", "2(n_x+n_y)", "|x|-|y|", "J+", "from", "to"),
            [
                tuple(row.get(column, "") for column in _DISK_COLUMNS) + (row["from"], row["to"])
                for row in rows
            ],
        )
        return EXIT_OK, {"disks": rows, "count": len(rows)}, text

    def do_at(self):
        fc = self.load_complex(self.inputs[0])
        report = algebraic_torsion(
            fc,
            cap=self.config.cap,
            exact=self.config.exact,
            backend=self.config.backend,
            window=self.config.page_window,
            log=self.log,
        )
        payload = report.to_dict(fc)
        payload["provenance"] = fc.provenance
        lines = []
        if report.banner is not None:
            lines.append(f"WARNING: {report.banner}")
        lines.append(f"AT = {report.display_value()} ({report.status}, backend {report.backend})")
        if report.witness is not None:
            lines.append("witness:")
            lines += _format_element(fc.element_to_json(report.witness))
        if report.page_table is not None:
            lines.append("page dimensions (rows r, columns p):")
            lines.append(self.format_pages(report.page_table))
        exit_code = EXIT_UNDETERMINED if report.status == "undetermined" else EXIT_OK
        return exit_code, payload, "\n".join(lines)

    def format_pages(self, table):
        return _format_table(
            ["r\\p"] + list(range(table.p_max + 1)),
            [[r] + list(row) for r, row in enumerate(table.dimensions)],
        )

    def do_pages(self):
        fc = self.load_complex(self.inputs[0])
        table = page_table(fc, *self.config.page_window)
        return EXIT_OK, table.to_dict(), self.format_pages(table)

    def do_glue(self):
        sub_path, ambient_path, map_path = self.inputs
        sub = load_diagram(sub_path, log=self.log)
        ambient = load_diagram(ambient_path, log=self.log)
        gluing = load_gluing_data(sub, ambient, map_path, log=self.log)
        chain_map = verify_filtered_chain_map(
            gluing, sample_size=self.config.sample_size, seed=self.config.seed, log=self.log
        )
        payload = {"chain_map": chain_map.to_dict(), "inequality": None}
        lines = [f"chain map: {'ok' if chain_map.ok else 'FAILED'}"]
        for name, items in chain_map.to_dict().items():
            if name != "ok":
                lines += [f"  {name}: {item}" for item in items]
        if not chain_map.ok:
            return EXIT_INVALID, payload, "\n".join(lines)
        inequality = at_inequality_check(
            chain_map.sub_complex,
            chain_map.super_complex,
            chain_map.gluing_map,
            cap=self.config.cap,
            exact=self.config.exact,
            backend=self.config.backend,
            log=self.log,
        )
        payload["inequality"] = inequality.to_dict(chain_map.sub_complex, chain_map.super_complex)
        lines.append(
            f"AT(sub) = {inequality.sub.display_value()}, AT(super) = {inequality.ambient.display_value()}: "
            f"{inequality.verdict}"
        )
        if inequality.transported_ok is not None:
            lines.append(f"transported witness bounds EH: {'yes' if inequality.transported_ok else 'no'}")
        exit_code = {
            "holds": EXIT_OK,
            "violated": EXIT_INVALID,
            "inconclusive": EXIT_UNDETERMINED,
        }[inequality.verdict]
        return exit_code, payload, "\n".join(lines)

    def do_assemble(self):
        pob = load_partial_open_book(self.inputs[0], log=self.log)
        d = assemble_from_partial_open_book(pob, log=self.log)
        return EXIT_OK, diagram_to_dict(d), ""


def run_sfh_torsion():
    """Run the application from the command line."""
    app = SfhTorsionApp.make_from_cmdline()
    sys.exit(app.run())
