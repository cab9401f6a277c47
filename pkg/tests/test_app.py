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

import io
import json
import pathlib
import unittest

import pytest
from lsst.ts import sfhtorsion

TEST_DATA_DIR = pathlib.Path(__file__).parents[1].joinpath("tests", "data")
COMPLEX_DIR = TEST_DATA_DIR / "complexes"
CONFIG_DIR = TEST_DATA_DIR / "config"
DIAGRAM_DIR = TEST_DATA_DIR / "diagrams"
MAP_DIR = TEST_DATA_DIR / "maps"


class SfhTorsionAppTestCase(unittest.TestCase):
    def run_app(self, *args):
        """Run the application and return the exit code and output."""
        stdout = io.StringIO()
        app = sfhtorsion.SfhTorsionApp.make_from_cmdline([str(arg) for arg in args], stdout=stdout)
        exit_code = app.run()
        return exit_code, stdout.getvalue()

    def run_json(self, *args):
        exit_code, output = self.run_app(*args, "--output", "json")
        return exit_code, json.loads(output)

    def test_make_config(self):
        config = sfhtorsion.SfhTorsionApp.make_config()
        assert config.cap == 64
        assert not config.exact
        assert config.backend == "iterative"
        assert config.output == "json"
        assert config.page_window == (8, 8)

        config = sfhtorsion.SfhTorsionApp.make_config(CONFIG_DIR / "run.yaml", cap=2, backend=None)
        assert config.cap == 2
        assert config.exact
        assert config.backend == "iterative"
        assert config.output == "text"
        assert config.page_window == (3, 8)
        assert config.sample_size == 8
        assert config.seed == 47

        with pytest.raises(sfhtorsion.InputFileError, match="schema violation"):
            sfhtorsion.SfhTorsionApp.make_config(CONFIG_DIR / "bad_run.yaml")
        with pytest.raises(sfhtorsion.InputFileError, match="nonnegative"):
            sfhtorsion.SfhTorsionApp.make_config(cap=-1)
        with pytest.raises(sfhtorsion.InputFileError, match="backend"):
            sfhtorsion.SfhTorsionApp.make_config(backend="magic")

    def test_bad_command_line(self):
        with pytest.raises(SystemExit):
            self.run_app("at", COMPLEX_DIR / "giroux.json", "--config", CONFIG_DIR / "bad_run.yaml")
        with pytest.raises(SystemExit):
            self.run_app("glue", DIAGRAM_DIR / "overtwisted.json")
        with pytest.raises(SystemExit):
            self.run_app("draw", DIAGRAM_DIR / "overtwisted.json")
        with pytest.raises(ValueError):
            sfhtorsion.SfhTorsionApp("draw", [], sfhtorsion.SfhTorsionApp.make_config(), log=None)

    def test_validate(self):
        exit_code, payload = self.run_json("validate", DIAGRAM_DIR / "overtwisted.json")
        assert exit_code == sfhtorsion.EXIT_OK
        assert payload == {"violations": [], "nice": [], "admissible": True, "ok": True}

        exit_code, payload = self.run_json("validate", DIAGRAM_DIR / "broken.json")
        assert exit_code == sfhtorsion.EXIT_INVALID
        assert {item["kind"] for item in payload["violations"]} >= {"balance", "curve", "incidence", "eh"}
        assert payload["admissible"] is None

        exit_code, output = self.run_app("validate", DIAGRAM_DIR / "torus_two_squares.json")
        assert exit_code == sfhtorsion.EXIT_INVALID
        assert output.splitlines()[-2:] == ["admissible: no", "invalid"]

    def test_generators(self):
        exit_code, payload = self.run_json("generators", DIAGRAM_DIR / "overtwisted.json")
        assert exit_code == sfhtorsion.EXIT_OK
        assert payload == {
            "generators": [{"name": "(x)", "cycles": 1}, {"name": "(y)", "cycles": 1}],
            "count": 2,
        }
        exit_code, payload = self.run_json("generators", COMPLEX_DIR / "giroux.json")
        assert payload["count"] == 14
        assert payload["generators"][0] == {"name": "(1,1,1,1,1)", "cycles": 5}

    def test_disks(self):
        exit_code, payload = self.run_json("disks", DIAGRAM_DIR / "overtwisted.json", "--dump-domains")
        assert exit_code == sfhtorsion.EXIT_OK
        assert payload["count"] == 1
        assert payload["disks"][0]["domain"] == {"L": 1}

        exit_code, output = self.run_app("disks", COMPLEX_DIR / "giroux.json")
        lines = output.splitlines()
        assert lines[0].split() == ["shape", "name", "2(n_x+n_y)", "|x|-|y|", "J+", "from", "to"]
        assert len(lines) == 14
        assert lines[1].split() == ["rectangle", "y1y2z1z2", "2", "-1", "0", "(1,2,2,1,1)", "(1,1,1,1,1)"]

    def test_at(self):
        exit_code, output = self.run_app(
            "at", COMPLEX_DIR / "giroux.json", "--config", CONFIG_DIR / "run.yaml", "--pages", 3, 2
        )
        assert exit_code == sfhtorsion.EXIT_OK
        lines = output.splitlines()
        assert lines[0] == f"WARNING: {sfhtorsion.UNVERIFIED_BANNER}"
        assert lines[1] == "AT = 2 (within_cap, backend iterative)"
        assert lines[2] == "witness:"
        assert lines[5].startswith("  c_2 = ")

        exit_code, payload = self.run_json("at", DIAGRAM_DIR / "overtwisted.json", "--pages", 1, 1)
        assert exit_code == sfhtorsion.EXIT_OK
        assert payload["value"] == 0
        assert payload["provenance"] == "from_diagram"
        assert payload["witness"] == [["(y)"]]
        assert payload["banner"] is None

    def test_at_undetermined(self):
        path = COMPLEX_DIR / "zero_diff.json"
        exit_code, payload = self.run_json("at", path, "--cap", 2, "--pages", 1, 1)
        assert exit_code == sfhtorsion.EXIT_UNDETERMINED
        assert payload["value"] == "undetermined"
        assert payload["display"] == "≥ 3 (undetermined)"

        exit_code, payload = self.run_json("at", path, "--cap", 2, "--exact", "--backend", "exact")
        assert exit_code == sfhtorsion.EXIT_OK
        assert payload["value"] == "infinity"
        assert payload["backend"] == "exact"

    def test_pages(self):
        exit_code, payload = self.run_json("pages", COMPLEX_DIR / "giroux.json", "--pages", 3, 0)
        assert exit_code == sfhtorsion.EXIT_OK
        assert payload == {"r_max": 3, "p_max": 0, "dimensions": [[14], [2], [2], [1]]}

        exit_code, payload = self.run_json("pages", DIAGRAM_DIR / "broken.json")
        assert exit_code == sfhtorsion.EXIT_INVALID
        assert "invalid" in payload["error"]

    def test_glue(self):
        exit_code, payload = self.run_json(
            "glue",
            DIAGRAM_DIR / "overtwisted.json",
            DIAGRAM_DIR / "overtwisted_in_one_point.json",
            MAP_DIR / "overtwisted_in_one_point.json",
            "--cap",
            4,
        )
        assert exit_code == sfhtorsion.EXIT_OK
        assert payload["chain_map"]["ok"]
        assert payload["inequality"]["verdict"] == "holds"
        assert payload["inequality"]["transported_ok"]

        exit_code, output = self.run_app(
            "glue",
            DIAGRAM_DIR / "overtwisted.json",
            DIAGRAM_DIR / "overtwisted_in_one_point.json",
            MAP_DIR / "wrong_xprime.json",
            "--output",
            "text",
        )
        assert exit_code == sfhtorsion.EXIT_INVALID
        assert output.startswith("chain map: FAILED")

    def test_assemble(self):
        path = TEST_DATA_DIR / "open_books" / "annulus_identity.json"
        # assemble always writes the diagram as JSON
        exit_code, output = self.run_app("assemble", path, "--output", "text")
        assert exit_code == sfhtorsion.EXIT_OK
        data = json.loads(output)
        assert data["eh"] == ["eh0"]
        d = sfhtorsion.diagram_from_dict(data)
        assert sfhtorsion.validate_diagram(d).ok

    def test_missing_file(self):
        exit_code, payload = self.run_json("at", DIAGRAM_DIR / "no_such_diagram.json")
        assert exit_code == sfhtorsion.EXIT_INVALID
        assert "cannot read file" in payload["error"]

    def test_deterministic(self):
        args = ("at", COMPLEX_DIR / "giroux.json", "--cap", 3, "--pages", 2, 2)
        assert self.run_json(*args) == self.run_json(*args)
