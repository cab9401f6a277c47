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

import pytest
from lsst.ts import sfhtorsion

TEST_DATA_DIR = pathlib.Path(__file__).parents[1].joinpath("tests", "data")
OPEN_BOOK_PATH = TEST_DATA_DIR / "open_books" / "annulus_identity.json"


class OpenBookTestCase(unittest.TestCase):
    def setUp(self):
        self.data = json.loads(OPEN_BOOK_PATH.read_text())

    def assemble(self, data):
        return sfhtorsion.assemble_from_partial_open_book(sfhtorsion.load_partial_open_book(data))

    def test_load(self):
        pob = sfhtorsion.load_partial_open_book(OPEN_BOOK_PATH)
        assert pob.handles == 1
        assert pob.arcs == (0,)
        assert pob.s_alpha == (("e'",),)
        assert [region["id"] for region in pob.s_regions] == ["T'", "Bt'", "W"]
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="Invalid partial open book"):
            sfhtorsion.load_partial_open_book(dict(self.data, handles=0))

    def test_annulus_identity(self):
        d = self.assemble(self.data)
        assert sfhtorsion.validate_diagram(d).ok
        assert d.eh == ("eh0",)
        assert d.alpha[0].points == ("eh0", "e'")
        assert d.beta[0].points == ("eh0", "e'")
        assert set(d.regions) == {"T'", "Bt'", "W"}
        assert d.point("eh0").quadrants == ("T'", "W", "Bt'", "W")
        assert d.point("e'").quadrants == ("W", "T'", "W", "Bt'")

        top, bottom, outside = d.region("T'"), d.region("Bt'"), d.region("W")
        assert (top.chi, top.on_boundary) == (1, False)
        assert set(top.corners) == {("e'", "NW"), ("eh0", "NE")}
        assert set(bottom.corners) == {("e'", "SE"), ("eh0", "SW")}
        assert (outside.chi, outside.on_boundary) == (-1, True)
        assert len(outside.corners) == 4

        assert sfhtorsion.check_nice(d) == []
        assert sfhtorsion.check_admissible(d)

    def test_annulus_identity_is_tight(self):
        d = self.assemble(self.data)
        disks = sfhtorsion.enumerate_disks(d)
        assert len(disks) == 2
        assert all(disk.shape == "bigon" and disk.target.points == ("eh0",) for disk in disks)
        fc = sfhtorsion.from_diagram(sfhtorsion.split_differential(d, disks), sfhtorsion.eh_generator(d))
        assert fc.matrices == ((0, 0),)
        report = sfhtorsion.algebraic_torsion(fc, cap=2, exact=True, window=None)
        assert report.value == "infinity"

    def test_identity_monodromy_contact_class(self):
        d = self.assemble(self.data)
        eh = sfhtorsion.eh_generator(d)
        same_class = [g for g in sfhtorsion.enumerate_generators(d) if g.permutation == eh.permutation]
        assert [g.points for g in same_class] == [("e'",), ("eh0",)]
        # the S page copy of the arc meets the image of its pushoff too
        made_of_handles = [g for g in same_class if set(g.points) <= set(d.eh)]
        assert made_of_handles == [eh]

        disks = sfhtorsion.enumerate_disks(d)
        assert [disk.source.points for disk in disks] == [("e'",), ("e'",)]
        assert all(disk.j_plus == 0 for disk in disks)
        fc = sfhtorsion.from_diagram(sfhtorsion.split_differential(d, disks), eh)
        assert sfhtorsion.in_boundary_depth(fc, fc.eh_vector, 0) == (False, None)

    def test_round_trip(self):
        d = self.assemble(self.data)
        again = sfhtorsion.diagram_from_dict(json.loads(json.dumps(sfhtorsion.diagram_to_dict(d))))
        assert sfhtorsion.diagram_to_dict(again) == sfhtorsion.diagram_to_dict(d)

    def test_arc_errors(self):
        data = copy.deepcopy(self.data)
        data["arcs"] = []
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="carries 0 arcs"):
            self.assemble(data)

        data["arcs"] = [{"handle": 0}, {"handle": 0}]
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="carries 2 arcs"):
            self.assemble(data)

        data = copy.deepcopy(self.data)
        data["s_page"]["alpha"].append(["e'"])
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="alpha arcs"):
            self.assemble(data)

    def test_missing_interval(self):
        data = copy.deepcopy(self.data)
        data["s_page"]["regions"][0]["boundary"] = [[["corner", "e'", "NE"]]]
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="exactly two regions"):
            self.assemble(data)

    def test_id_errors(self):
        data = copy.deepcopy(self.data)
        data["s_page"]["points"]["eh0"] = data["s_page"]["points"]["e'"]
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="reserved"):
            self.assemble(data)

        data = copy.deepcopy(self.data)
        data["s_page"]["regions"][0]["id"] = "P0.top"
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="used twice"):
            self.assemble(data)

        data = copy.deepcopy(self.data)
        data["s_page"]["points"]["e'"]["quadrants"]["NE"] = "Q"
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="unknown S page region"):
            self.assemble(data)

    def test_not_embeddable(self):
        data = copy.deepcopy(self.data)
        data["s_page"]["points"]["e'"]["quadrants"]["NE"] = "W"
        with pytest.raises(sfhtorsion.PartialOpenBookError, match="not embeddable"):
            self.assemble(data)
