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

import copy
import json
import pathlib
import unittest

import numpy as np
import pytest
from lsst.ts import sfhtorsion

TEST_DATA_DIR = pathlib.Path(__file__).parents[1].joinpath("tests", "data")
COMPLEX_DIR = TEST_DATA_DIR / "complexes"
DIAGRAM_DIR = TEST_DATA_DIR / "diagrams"


def read_fixture(name):
    with open(COMPLEX_DIR / name, "r") as f:
        return json.load(f)


class FixtureTestCase(unittest.TestCase):
    def test_giroux_fixture(self):
        with self.assertLogs(level="WARNING") as logs:
            fc = sfhtorsion.from_fixture(COMPLEX_DIR / "giroux.json")
        assert any("unverified complex" in message for message in logs.output)
        assert fc.provenance == "fixture"
        assert not fc.verified
        assert fc.num_generators == 14
        assert fc.eh == "(1,1,1,1,1)"
        assert fc.eh_vector == 1
        assert len(fc.matrices) == 2
        assert fc.max_level == 1
        assert len(fc.disks) == 13
        assert fc.cycles == (5, 4, 4, 3, 3, 2, 2, 3, 4, 3, 3, 2, 2, 3)
        assert fc.convolution_failures() == []
        assert fc.is_cycle(fc.eh_vector)

        d0 = fc.vector(["(1,2,2,1,1)", "(2,4,2,1,1)", "(4,4,2,2,1)", "(6,4,3,2,1)", "(9,15,2,2,1)"])
        d0 ^= fc.vector(["(9,13,2,2,2)"])
        assert fc.names_of(fc.apply_matrix(0, d0)) == ["(1,1,1,1,1)", "(5,4,2,2,1)", "(9,12,2,2,2)"]
        assert fc.apply_matrix(2, d0) == 0

    def test_total_differential(self):
        fc = sfhtorsion.from_fixture(COMPLEX_DIR / "giroux.json")
        b0 = fc.vector(
            ["(1,2,2,1,1)", "(2,4,2,1,1)", "(4,4,2,2,1)", "(6,4,3,2,1)", "(9,15,2,2,1)", "(9,13,2,2,2)"]
        )
        b1 = fc.vector(["(6,4,3,2,1)", "(9,15,2,2,1)", "(9,13,2,2,2)", "(9,11,2,3,2)"])
        b2 = fc.vector(["(9,11,2,3,2)"])
        assert fc.apply_total((b0, b1, b2)) == (fc.eh_vector, 0, 0)
        assert fc.apply_total([b2]) == (0,)
        assert fc.element_to_json((b2, 0)) == [["(9,11,2,3,2)"], []]

        primitive = b0 ^ b2
        assert fc.apply_undivided(primitive) == fc.eh_vector

    def test_names_are_canonical(self):
        fc = sfhtorsion.from_fixture(COMPLEX_DIR / "giroux.json")
        assert fc.vector(["( 1, 1, 1, 1, 1 )"]) == fc.eh_vector
        # Repeats cancel.
        assert fc.vector(["(1,1,1,1,1)", "(1,1,1,1,1)"]) == 0
        with pytest.raises(sfhtorsion.ComplexError, match="Unknown generator"):
            fc.vector(["(7,7,7,7,7)"])

    def test_relabel(self):
        fc = sfhtorsion.from_fixture(COMPLEX_DIR / "giroux.json")
        permutation = list(reversed(range(fc.num_generators)))
        relabeled = fc.relabel(permutation)
        assert relabeled.names == tuple(reversed(fc.names))
        assert relabeled.cycles == tuple(reversed(fc.cycles))
        assert relabeled.eh_vector == 1 << 13
        for name in fc.names:
            image = relabeled.names_of(relabeled.apply_matrix(0, relabeled.vector([name])))
            assert sorted(image) == sorted(fc.names_of(fc.apply_matrix(0, fc.vector([name]))))
        with pytest.raises(sfhtorsion.ComplexError):
            fc.relabel([0, 0] + list(range(2, fc.num_generators)))

    def test_relabel_keeps_torsion(self):
        rng = np.random.default_rng(2)
        fixture = sfhtorsion.from_fixture(COMPLEX_DIR / "giroux.json")
        nested = sfhtorsion.load_diagram(DIAGRAM_DIR / "overtwisted_in_one_point.json")
        split = sfhtorsion.split_differential(nested)
        diagram_complex = sfhtorsion.from_diagram(split, sfhtorsion.eh_generator(nested))
        for fc, value in ((fixture, 2), (diagram_complex, 0)):
            table = sfhtorsion.page_table(fc, 2, 1)
            for _ in range(3):
                permutation = [int(i) for i in rng.permutation(fc.num_generators)]
                relabeled = fc.relabel(permutation)
                assert sfhtorsion.algebraic_torsion(relabeled, cap=4, window=None).value == value
                assert sfhtorsion.page_table(relabeled, 2, 1) == table
                for i, target in enumerate(permutation):
                    assert relabeled.cycles[target] == fc.cycles[i]
        assert fixture.cycles[fixture.index[fixture.eh]] == 5

    def test_rank_of_level_zero(self):
        fc = sfhtorsion.from_fixture(COMPLEX_DIR / "giroux.json")
        columns = list(fc.matrix(0))
        images = {sfhtorsion.f2_apply(columns, mask) for mask in range(1 << fc.num_generators)}
        # E^1_0 = 14 - 2 rank = 2
        assert len(images) == 2**6
        assert sfhtorsion.f2_rank(columns) == 6

    def test_zero_differential(self):
        fc = sfhtorsion.from_fixture(COMPLEX_DIR / "zero_diff.json")
        assert fc.names == ("a", "b")
        assert fc.matrices == ((0, 0),)
        assert fc.disks == ()
        assert fc.matrix(3) == (0, 0)

    def test_listed_twice_cancels(self):
        data = read_fixture("zero_diff.json")
        data["disks"] = [{"from": "a", "to": "b", "jplus": 2}] * 2
        with self.assertLogs(level="WARNING") as logs:
            fc = sfhtorsion.from_fixture(data)
        assert any("cancels mod 2" in message for message in logs.output)
        assert fc.matrices == ((0, 0),)

        data["disks"] = [{"from": "a", "to": "b", "jplus": 2}] * 3
        fc = sfhtorsion.from_fixture(data)
        assert fc.matrices == ((0, 0), (0b10, 0))
        assert len(fc.disks) == 1

    def test_fixture_errors(self):
        data = read_fixture("zero_diff.json")

        duplicate = copy.deepcopy(data)
        duplicate["generators"].append({"name": "a"})
        with pytest.raises(sfhtorsion.ComplexError, match="more than once"):
            sfhtorsion.from_fixture(duplicate)

        unknown = copy.deepcopy(data)
        unknown["disks"] = [{"from": "a", "to": "c", "jplus": 0}]
        with pytest.raises(sfhtorsion.ComplexError, match="unknown generator"):
            sfhtorsion.from_fixture(unknown)

        no_eh = copy.deepcopy(data)
        no_eh["eh"] = "c"
        with pytest.raises(sfhtorsion.ComplexError, match="not a listed generator"):
            sfhtorsion.from_fixture(no_eh)

        cycles = copy.deepcopy(data)
        cycles["generators"][0] = {"name": "a", "beta": [2, 1], "cycles": 2}
        with pytest.raises(sfhtorsion.ComplexError, match="does not match"):
            sfhtorsion.from_fixture(cycles)

        not_a_permutation = copy.deepcopy(data)
        not_a_permutation["generators"][0] = {"name": "a", "beta": [1, 1]}
        with pytest.raises(sfhtorsion.ComplexError, match="not a permutation"):
            sfhtorsion.from_fixture(not_a_permutation)

        odd = copy.deepcopy(data)
        odd["disks"] = [{"from": "a", "to": "b", "jplus": 1}]
        with pytest.raises(sfhtorsion.ComplexError, match="Invalid fixture"):
            sfhtorsion.from_fixture(odd)

    def test_inconsistent_jplus(self):
        data = read_fixture("giroux.json")
        assert data["disks"][0]["name"] == "y1y2z1z2"
        data["disks"][0]["jplus"] = 2
        with pytest.raises(sfhtorsion.ComplexError, match="y1y2z1z2"):
            sfhtorsion.from_fixture(data)

    def test_bad_file(self):
        with pytest.raises(sfhtorsion.InputFileError):
            sfhtorsion.from_fixture(COMPLEX_DIR / "no_such_fixture.json")
        with pytest.raises(sfhtorsion.InputFileError, match="schema violation"):
            sfhtorsion.from_fixture(DIAGRAM_DIR / "overtwisted.json")


class FromDiagramTestCase(unittest.TestCase):
    def make_split(self, matrices):
        generators = tuple(sfhtorsion.Generator((name,), (0,)) for name in ("a", "b", "c"))
        return sfhtorsion.SplitDifferential(generators, matrices)

    def test_overtwisted(self):
        d = sfhtorsion.load_diagram(DIAGRAM_DIR / "overtwisted.json")
        fc = sfhtorsion.from_diagram(sfhtorsion.split_differential(d), sfhtorsion.eh_generator(d))
        assert fc.provenance == "from_diagram"
        assert fc.verified
        assert fc.names == ("(x)", "(y)")
        assert fc.eh == "(x)"
        assert fc.cycles == (1, 1)
        assert fc.matrices == ((0, 0b01),)
        assert fc.disks == (
            {"from": "(y)", "to": "(x)", "jplus": 0, "shape": "bigon", "name": "yx"},
        )

    def test_square_not_zero(self):
        # ∂_0 a = b and ∂_1 b = c, so ∂_1 ∂_0 a = c.
        split = self.make_split(((0b010, 0, 0), (0, 0b100, 0)))
        with pytest.raises(sfhtorsion.ComplexError) as excinfo:
            sfhtorsion.from_diagram(split)
        assert excinfo.value.level == 1

    def test_eh_not_a_cycle(self):
        split = self.make_split(((0b010, 0, 0),))
        assert sfhtorsion.from_diagram(split).eh is None
        with pytest.raises(sfhtorsion.ComplexError, match="not a cycle"):
            sfhtorsion.from_diagram(split, split.generators[0])
        fc = sfhtorsion.from_diagram(split, split.generators[1])
        assert fc.eh == "(b)"
