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
    "PartialOpenBookError",
    "PartialOpenBook",
    "load_partial_open_book",
    "assemble_from_partial_open_book",
]

import collections
import dataclasses
import logging

import jsonschema

from .config_schema import OPEN_BOOK_SCHEMA
from .diagram import QUADRANTS, HeegaardDiagram, IntersectionPoint, Region, validate_diagram
from .utils.input_files import DefaultingValidator, load_json_file

SIDES = ("bottom", "top")
SLOTS = ("L", "M", "R")

# Quadrant in the Heegaard surface of a quadrant of the S page, which
# enters the surface with the opposite orientation and reversed arcs.
S_PAGE_QUADRANT = {"NE": "NW", "NW": "NE", "SW": "SE", "SE": "SW"}

SUTURE = ("suture",)


class PartialOpenBookError(ValueError):
    """A partial open book cannot be assembled into a diagram."""


@dataclasses.dataclass(frozen=True)
class PartialOpenBook:
    """A partial open book ``(S, P, h)`` with P made of 1-handles.

    Each handle is a square whose left and right sides are attached to
    the rest of S and whose bottom and top sides lie in ``A``; each side
    in ``A`` is cut into intervals ``L``, ``M``, ``R`` by the ends of the
    arc and of its pushoff. The image page (S, carrying the arcs and the
    images of the pushoffs under h) is given region by region.

    Attributes
    ----------
    handles : `int`
        Number of handles, in attaching order.
    arcs : `tuple` [`int`]
        Handle of each arc.
    s_points : `dict` [`str`, `dict`]
        Points of the image page: ``alpha``, ``beta`` and ``quadrants``
        in the orientation of S.
    s_alpha : `tuple` [`tuple` [`str`]]
        Points of each arc, bottom end to top end.
    s_beta : `tuple` [`tuple` [`str`]]
        Points of the image of each pushoff, bottom end to top end.
    s_regions : `tuple` [`dict`]
        Regions of the image page: ``id``, ``chi``, ``boundary`` (token
        cycles, counterclockwise in S) and ``basepoints``.
    """

    handles: int
    arcs: tuple
    s_points: dict
    s_alpha: tuple
    s_beta: tuple
    s_regions: tuple

    @classmethod
    def from_dict(cls, data):
        """Build a partial open book from data matching
        `OPEN_BOOK_SCHEMA`.
        """
        page = data["s_page"]
        return cls(
            data["handles"],
            tuple(arc["handle"] for arc in data["arcs"]),
            dict(page["points"]),
            tuple(tuple(arc) for arc in page["alpha"]),
            tuple(tuple(arc) for arc in page["beta"]),
            tuple(page["regions"]),
        )


def load_partial_open_book(source, log=None):
    """Read a partial open book file, or validate already parsed data.

    Raises
    ------
    PartialOpenBookError
        If parsed data does not match the format.
    lsst.ts.sfhtorsion.InputFileError
        If the file cannot be read or does not match the format.
    """
    if isinstance(source, dict):
        try:
            data = DefaultingValidator(OPEN_BOOK_SCHEMA).validate(source)
        except jsonschema.ValidationError as e:
            raise PartialOpenBookError(f"Invalid partial open book: {e.message}") from e
    else:
        data = load_json_file(source, OPEN_BOOK_SCHEMA, log=log)
    return PartialOpenBook.from_dict(data)


def _handle_pieces(arc, handle):
    """Regions of one handle of the P page cut by its arc and pushoff.

    The arc and the pushoff cross once, in the contact point.
    """
    eh = f"eh{arc}"

    def glue(side, slot):
        return ("glue", side, handle, slot)

    return {
        f"P{handle}.top": [[("corner", eh, "NE"), glue("top", "M")]],
        f"P{handle}.left": [[("corner", eh, "NW"), glue("top", "L"), SUTURE, glue("bottom", "L")]],
        f"P{handle}.bottom": [[("corner", eh, "SW"), glue("bottom", "M")]],
        f"P{handle}.right": [[("corner", eh, "SE"), glue("bottom", "R"), SUTURE, glue("top", "R")]],
    }


def _after(cycle, position):
    """Tokens of a cycle starting after ``position``, without it."""
    return cycle[position + 1 :] + cycle[:position]


class _RegionGluer:
    """Glue the pieces of both pages across the intervals of ``A``."""

    def __init__(self, log):
        self.log = log
        self.regions = dict()
        self.owner = dict()
        self.priority = dict()

    def add(self, region_id, chi, cycles, basepoints, priority):
        if region_id in self.regions:
            raise PartialOpenBookError(f"Region id {region_id!r} is used twice.")
        self.regions[region_id] = {
            "chi": chi,
            "cycles": [list(cycle) for cycle in cycles],
            "basepoints": basepoints,
        }
        self.owner[region_id] = region_id
        self.priority[region_id] = priority

    def locate(self, token):
        found = []
        for region_id, region in self.regions.items():
            for c, cycle in enumerate(region["cycles"]):
                for position, item in enumerate(cycle):
                    if item == token:
                        found.append((region_id, c, position))
        return found

    def glue(self, token):
        found = self.locate(token)
        if len(found) != 2:
            raise PartialOpenBookError(
                f"Interval {token[3]} on the {token[1]} of handle {token[2]} "
                f"must bound exactly two regions; found {len(found)}."
            )
        (first, c1, p1), (second, c2, p2) = found
        if first == second:
            region = self.regions[first]
            if c1 == c2:
                cycle = region["cycles"].pop(c1)
                region["cycles"].extend([cycle[p1 + 1 : p2], cycle[p2 + 1 :] + cycle[:p1]])
            else:
                cycle1, cycle2 = region["cycles"][c1], region["cycles"][c2]
                joined = _after(cycle1, p1) + _after(cycle2, p2)
                region["cycles"] = [
                    cycle for c, cycle in enumerate(region["cycles"]) if c not in (c1, c2)
                ] + [joined]
            region["chi"] -= 1
            return
        keep, drop = sorted((first, second), key=lambda region_id: self.priority[region_id])
        positions = {first: (c1, p1), second: (c2, p2)}
        kept, dropped = self.regions[keep], self.regions.pop(drop)
        ck, pk = positions[keep]
        cd, pd = positions[drop]
        joined = _after(kept["cycles"][ck], pk) + _after(dropped["cycles"][cd], pd)
        kept["cycles"] = (
            [cycle for c, cycle in enumerate(kept["cycles"]) if c != ck]
            + [cycle for c, cycle in enumerate(dropped["cycles"]) if c != cd]
            + [joined]
        )
        kept["chi"] += dropped["chi"] - 1
        kept["basepoints"] += dropped["basepoints"]
        for piece, region_id in self.owner.items():
            if region_id == drop:
                self.owner[piece] = keep
        self.log.debug("Glued region %s into %s.", drop, keep)

    def final_regions(self):
        regions = []
        for region_id, region in self.regions.items():
            tokens = [token for cycle in region["cycles"] for token in cycle]
            leftover = [token for token in tokens if token[0] == "glue"]
            if leftover:
                raise PartialOpenBookError(f"Region {region_id!r} keeps unglued intervals {leftover}.")
            regions.append(
                Region(
                    region_id,
                    region["chi"],
                    tuple((token[1], token[2]) for token in tokens if token[0] == "corner"),
                    on_boundary=SUTURE in tokens,
                    basepoints=region["basepoints"],
                )
            )
        return regions


def _check_arcs(pob):
    per_handle = collections.Counter(pob.arcs)
    for handle in range(pob.handles):
        if per_handle[handle] != 1:
            raise PartialOpenBookError(
                f"Handle {handle} carries {per_handle[handle]} arcs; exactly one is needed."
            )
    extra = sorted(handle for handle in per_handle if not 0 <= handle < pob.handles)
    if extra:
        raise PartialOpenBookError(f"Arcs name handles {extra} outside 0..{pob.handles - 1}.")
    for kind, arcs in (("alpha", pob.s_alpha), ("beta", pob.s_beta)):
        if len(arcs) != len(pob.arcs):
            raise PartialOpenBookError(
                f"The S page lists {len(arcs)} {kind} arcs for {len(pob.arcs)} arcs of P."
            )


def assemble_from_partial_open_book(pob, log=None):
    """Build the Heegaard diagram of a partial open book.

    The surface is the P page glued to the S page, the latter with its
    orientation reversed, along ``A``. Alpha curve ``k`` is arc ``k`` on
    the P page followed by arc ``k`` on the S page traversed top to
    bottom; beta curve ``k`` is the pushoff followed by its image under
    h. The contact generator is the tuple of crossing points ``eh<k>`` of
    each arc with its pushoff on the P page.

    Parameters
    ----------
    pob : `PartialOpenBook`
        The partial open book.
    log : `logging.Logger`, optional
        Logger.

    Returns
    -------
    d : `HeegaardDiagram`
        Valid diagram with marked contact generator.

    Raises
    ------
    PartialOpenBookError
        If a handle does not carry exactly one arc, the S page does not
        match the arcs, an interval of ``A`` is missing or used twice, ids
        collide, or the result is not a valid diagram.
    """
    log = log or logging.getLogger(__name__)
    _check_arcs(pob)
    eh = [f"eh{arc}" for arc in range(len(pob.arcs))]
    collisions = sorted(set(eh) & set(pob.s_points))
    if collisions:
        raise PartialOpenBookError(f"S page point ids {collisions} are reserved for contact points.")

    gluer = _RegionGluer(log)
    for priority, region in enumerate(pob.s_regions):
        cycles = [
            [
                ("corner", token[1], S_PAGE_QUADRANT[token[2]]) if token[0] == "corner" else tuple(token)
                for token in reversed(cycle)
            ]
            for cycle in region["boundary"]
        ]
        gluer.add(region["id"], region["chi"], cycles, region.get("basepoints", 0), (0, priority))
    for arc, handle in enumerate(pob.arcs):
        for piece, cycles in _handle_pieces(arc, handle).items():
            gluer.add(piece, 1, cycles, 0, (1, piece))

    for handle in range(pob.handles):
        for side in SIDES:
            for slot in SLOTS:
                gluer.glue(("glue", side, handle, slot))
    regions = gluer.final_regions()

    points = []
    for arc, handle in enumerate(pob.arcs):
        pieces = [f"P{handle}.top", f"P{handle}.left", f"P{handle}.bottom", f"P{handle}.right"]
        points.append(IntersectionPoint(eh[arc], arc, arc, tuple(gluer.owner[piece] for piece in pieces)))
    for point_id, value in pob.s_points.items():
        quadrants = []
        for quadrant in QUADRANTS:
            region_id = value["quadrants"][S_PAGE_QUADRANT[quadrant]]
            if region_id not in gluer.owner:
                raise PartialOpenBookError(f"Point {point_id!r} names unknown S page region {region_id!r}.")
            quadrants.append(gluer.owner[region_id])
        points.append(IntersectionPoint(point_id, value["alpha"], value["beta"], tuple(quadrants)))

    alpha = [[eh[k]] + list(reversed(arc)) for k, arc in enumerate(pob.s_alpha)]
    beta = [[eh[k]] + list(reversed(arc)) for k, arc in enumerate(pob.s_beta)]
    d = HeegaardDiagram(alpha, beta, points, regions, eh=eh)
    report = validate_diagram(d)
    if not report.ok:
        details = "; ".join(violation.message for violation in report.violations)
        raise PartialOpenBookError(f"The monodromy image is not embeddable as stated: {details}")
    log.info("Assembled a diagram with %d curve pairs and %d regions.", d.num_alpha, len(d.regions))
    return d
