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

import dataclasses
import pathlib
import unittest

import pytest
from lsst.ts import sfhtorsion

TEST_DATA_DIR = pathlib.Path(__file__).parents[1].joinpath("tests", "data")
DIAGRAM_DIR = TEST_DATA_DIR / "diagrams"


class DisksTestCase(unittest.TestCase):
    def test_overtwisted_bigon(self):
        d = sfhtorsion.load_diagram(DIAGRAM_DIR / "overtwisted.json")
        disks = sfhtorsion.enumerate_disks(d)
        assert len(disks) == 1
        disk = disks[0]
        assert disk.source.points == ("y",)
        assert disk.target.points == ("x",)
        assert disk.shape == "bigon"
        assert disk.j_plus == 0
        assert disk.domain == sfhtorsion.Domain.from_regions(["L"])
        assert not disk.multi_region
        assert sfhtorsion.disk_table(disks) == [
            {
                "shape": "bigon",
                "name": "yx",
                "2(n_x+n_y)": 1,
                "|x|-|y|": 0,
                "jplus": 0,
                "from": "(y)",
                "to": "(x)",
                "multi_region": False,
            }
        ]

    def test_split_differential(self):
        d = sfhtorsion.load_diagram(DIAGRAM_DIR / "overtwisted.json")
        split = sfhtorsion.split_differential(d)
        assert split.names == ("(x)", "(y)")
        assert split.matrices == ((0, 0b01),)
        assert split.max_level == 0
        assert split.total() == [0, 0b01]
        assert split.convolution_failures() == []

    def test_free_neighbour_makes_periodic_domain(self):
        d = sfhtorsion.load_diagram(DIAGRAM_DIR / "overtwisted.json")
        d.regions["A"] = dataclasses.replace(d.regions["A"], on_boundary=False)
        assert sfhtorsion.check_nice(d) == []
        assert sfhtorsion.positive_periodic_domain(d).support == frozenset({"A", "L"})
        with pytest.raises(sfhtorsion.DiskCountError, match="admissible"):
            sfhtorsion.enumerate_disks(d)

    def test_cancelling_rectangles(self):
        grid = sfhtorsion.grid_diagram(2, [(0, 0), (1, 1)])
        disks = sfhtorsion.enumerate_disks(grid)
        assert len(disks) == 2
        for disk in disks:
            assert disk.shape == "rectangle"
            assert disk.source.points == ("p0_0", "p1_1")
            assert disk.target.points == ("p0_1", "p1_0")
            assert disk.corner_measure == 2
            assert disk.cycle_difference == 1
            assert disk.j_plus == 2
        split = sfhtorsion.split_differential(grid, disks=disks)
        assert split.matrices == ((0, 0),)

    def test_uncountable_diagrams(self):
        with pytest.raises(sfhtorsion.DiskCountError, match="invalid"):
            sfhtorsion.enumerate_disks(sfhtorsion.load_diagram(DIAGRAM_DIR / "broken.json"))
        with pytest.raises(sfhtorsion.DiskCountError, match="admissible"):
            sfhtorsion.enumerate_disks(sfhtorsion.load_diagram(DIAGRAM_DIR / "torus_two_squares.json"))
        d = sfhtorsion.load_diagram(DIAGRAM_DIR / "overtwisted.json")
        d.regions["L"] = dataclasses.replace(d.regions["L"], chi=0)
        with pytest.raises(sfhtorsion.DiskCountError, match="nice"):
            sfhtorsion.enumerate_disks(d)

    def test_j_plus(self):
        d = sfhtorsion.load_diagram(DIAGRAM_DIR / "overtwisted.json")
        x, y = d.make_generator(["x"]), d.make_generator(["y"])
        bigon = sfhtorsion.Domain.from_regions(["L"])
        assert sfhtorsion.j_plus_index1(d, bigon, y, x) == 0
        assert sfhtorsion.j_plus_general(d, bigon, y, x) == 0
        assert sfhtorsion.j_plus_general(d, sfhtorsion.Domain(), x, x) == 0
        with pytest.raises(sfhtorsion.DiskCountError):
            sfhtorsion.j_plus_index1(d, sfhtorsion.Domain(), x, x)
        with pytest.raises(sfhtorsion.DomainError):
            sfhtorsion.j_plus_general(d, bigon, x, y)
        with pytest.raises(sfhtorsion.DiskCountError):
            sfhtorsion.j_plus_general(d, sfhtorsion.Domain.from_regions(["A"]), y, x)

    def test_j_plus_additive(self):
        grid = sfhtorsion.grid_diagram(3, [(0, 0), (1, 1), (2, 2)])
        disks = sfhtorsion.enumerate_disks(grid)
        by_source = dict()
        for disk in disks:
            by_source.setdefault(disk.source.points, []).append(disk)
        pairs = 0
        for first in disks:
            for second in by_source.get(first.target.points, []):
                total = first.domain + second.domain
                expected = sfhtorsion.j_plus_general(grid, total, first.source, second.target)
                assert first.j_plus + second.j_plus == expected
                pairs += 1
        assert pairs > 0

    def test_flower_bigons(self):
        d = sfhtorsion.flower_diagram(2, eh=["f0"])
        disks = sfhtorsion.enumerate_disks(d)
        assert [(disk.source.points, disk.target.points, disk.domain.to_json()) for disk in disks] == [
            (("f1",), ("f0",), {"U0": 1}),
            (("f1",), ("f2",), {"L0": 1}),
            (("f3",), ("f0",), {"L1": 1}),
            (("f3",), ("f2",), {"U1": 1}),
        ]
        assert all(disk.shape == "bigon" and disk.j_plus == 0 for disk in disks)
        fc = sfhtorsion.from_diagram(sfhtorsion.split_differential(d, disks), sfhtorsion.eh_generator(d))
        assert fc.matrices == ((0, 0b0101, 0, 0b0101),)
        report = sfhtorsion.algebraic_torsion(fc, cap=2, exact=True, window=None)
        assert report.value == "infinity"

        # with one bigon on each side both run from f1 to f0 and cancel
        d = sfhtorsion.flower_diagram(1, eh=["f0"])
        disks = sfhtorsion.enumerate_disks(d)
        assert len(disks) == 2
        fc = sfhtorsion.from_diagram(sfhtorsion.split_differential(d, disks), sfhtorsion.eh_generator(d))
        assert fc.matrices == ((0, 0),)
