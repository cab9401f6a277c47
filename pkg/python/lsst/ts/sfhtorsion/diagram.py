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
    "QUADRANTS",
    "DiagramError",
    "IntersectionPoint",
    "Curve",
    "Region",
    "Generator",
    "HeegaardDiagram",
    "Violation",
    "ValidationReport",
    "permutation_cycles",
    "validate_diagram",
    "enumerate_generators",
    "cycle_count",
    "check_nice",
    "eh_generator",
    "load_diagram",
    "diagram_from_dict",
    "diagram_to_dict",
    "disjoint_union",
]

import collections
import dataclasses

from .config_schema import DIAGRAM_SCHEMA
from .utils.input_files import load_json_file

QUADRANTS = ("NE", "NW", "SW", "SE")
"""Quadrant labels in counterclockwise order, starting right after the
positive alpha ray.
"""

# Kind of the boundary edge leaving / entering a convex corner when the
# region boundary is traversed counterclockwise (region on the left).
OUTGOING_KIND = {"NE": "alpha", "NW": "beta", "SW": "alpha", "SE": "beta"}
INCOMING_KIND = {"NE": "beta", "NW": "alpha", "SW": "beta", "SE": "alpha"}


class DiagramError(ValueError):
    """A diagram, generator or point set is not well formed."""


@dataclasses.dataclass(frozen=True)
class IntersectionPoint:
    """An intersection point of an alpha and a beta curve.

    Attributes
    ----------
    id : `str`
        Point id.
    alpha : `int`
        Index of the alpha curve through the point.
    beta : `int`
        Index of the beta curve through the point.
    quadrants : `tuple` [`str`]
        Region ids of the quadrants, in `QUADRANTS` order.
    """

    id: str
    alpha: int
    beta: int
    quadrants: tuple

    def region(self, quadrant):
        """Region id of the given quadrant."""
        return self.quadrants[QUADRANTS.index(quadrant)]


@dataclasses.dataclass(frozen=True)
class Curve:
    """An oriented attaching curve with its points in traversal order."""

    kind: str
    index: int
    points: tuple

    def successor(self, point_id):
        """Point following ``point_id`` along the curve."""
        i = self.points.index(point_id)
        return self.points[(i + 1) % len(self.points)]

    def predecessor(self, point_id):
        """Point preceding ``point_id`` along the curve."""
        i = self.points.index(point_id)
        return self.points[i - 1]


@dataclasses.dataclass(frozen=True)
class Region:
    """A component of the complement of the curves.

    Attributes
    ----------
    id : `str`
        Region id.
    chi : `int`
        Euler characteristic of the closure of the region.
    corners : `tuple` [`tuple` [`str`, `str`]]
        ``(point id, quadrant)`` pairs in counterclockwise boundary order;
        boundary components follow each other.
    on_boundary : `bool`
        True if the region touches the suture.
    basepoints : `int`
        Number of basepoints in the region.
    """

    id: str
    chi: int
    corners: tuple
    on_boundary: bool = False
    basepoints: int = 0

    @property
    def is_free(self):
        """True if disks may cover this region."""
        return not self.on_boundary and self.basepoints == 0


def permutation_cycles(permutation):
    """Number of cycles of a permutation of ``range(len(permutation))``.

    Raises
    ------
    DiagramError
        If ``permutation`` is not a bijection.
    """
    n = len(permutation)
    if sorted(permutation) != list(range(n)):
        raise DiagramError(f"{list(permutation)} is not a permutation of 0..{n - 1}.")
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = permutation[i]
    return cycles


@dataclasses.dataclass(frozen=True)
class Generator:
    """A generator: one intersection point on every alpha curve, using
    every beta curve once.

    Attributes
    ----------
    points : `tuple` [`str`]
        Point ids ordered by alpha index.
    permutation : `tuple` [`int`]
        Beta index of the point on each alpha curve.
    """

    points: tuple
    permutation: tuple

    @property
    def cycles(self):
        """Number of cycles of the alpha to beta permutation, ``|x|``."""
        return permutation_cycles(self.permutation)

    @property
    def name(self):
        return "(" + ",".join(self.points) + ")"

    def __str__(self):
        return self.name


class HeegaardDiagram:
    """A multi-pointed sutured Heegaard diagram, stored region first.

    The constructor only records the data; use `validate_diagram` to check
    it.

    Parameters
    ----------
    alpha : `list` [`list` [`str`]]
        Point ids of each alpha curve in traversal order.
    beta : `list` [`list` [`str`]]
        Point ids of each beta curve in traversal order.
    points : `list` [`IntersectionPoint`]
        Intersection points.
    regions : `list` [`Region`]
        Regions.
    eh : `list` [`str`], optional
        Point ids of the contact generator.
    """

    def __init__(self, alpha, beta, points, regions, eh=None):
        self.alpha = tuple(Curve("alpha", i, tuple(curve)) for i, curve in enumerate(alpha))
        self.beta = tuple(Curve("beta", i, tuple(curve)) for i, curve in enumerate(beta))
        self.points = {point.id: point for point in points}
        self.regions = {region.id: region for region in regions}
        self.eh = None if eh is None else tuple(eh)

    @property
    def num_alpha(self):
        return len(self.alpha)

    @property
    def num_beta(self):
        return len(self.beta)

    def curves(self, kind):
        """Curves of the given kind, ``"alpha"`` or ``"beta"``."""
        if kind == "alpha":
            return self.alpha
        if kind == "beta":
            return self.beta
        raise DiagramError(f"Unknown curve kind {kind!r}; must be 'alpha' or 'beta'.")

    def point(self, point_id):
        try:
            return self.points[point_id]
        except KeyError:
            raise DiagramError(f"Unknown point {point_id!r}.") from None

    def region(self, region_id):
        try:
            return self.regions[region_id]
        except KeyError:
            raise DiagramError(f"Unknown region {region_id!r}.") from None

    def make_generator(self, point_ids):
        """Build a `Generator` from point ids given in any order.

        Raises
        ------
        DiagramError
            If a point is unknown or the points do not use every alpha and
            beta curve exactly once.
        """
        points = [self.point(point_id) for point_id in point_ids]
        if len(points) != self.num_alpha:
            raise DiagramError(
                f"A generator needs {self.num_alpha} points, one per alpha curve; got {len(points)}."
            )
        points.sort(key=lambda point: point.alpha)
        alphas = [point.alpha for point in points]
        if alphas != list(range(self.num_alpha)):
            raise DiagramError(f"Points {list(point_ids)} do not meet every alpha curve once.")
        permutation = tuple(point.beta for point in points)
        if sorted(permutation) != list(range(self.num_beta)):
            raise DiagramError(f"Points {list(point_ids)} do not meet every beta curve once.")
        return Generator(tuple(point.id for point in points), permutation)


@dataclasses.dataclass(frozen=True)
class Violation:
    """One violated diagram invariant.

    Attributes
    ----------
    kind : `str`
        Category: ``balance``, ``curve``, ``incidence``, ``corners``,
        ``segment``, ``polygon``, ``region`` or ``eh``; `check_nice` uses
        ``nice``.
    subject : `str`
        Id of the offending point, region or curve.
    message : `str`
        Human readable description.
    """

    kind: str
    subject: str
    message: str


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    """Result of `validate_diagram`."""

    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def kinds(self):
        """Set of violation kinds present."""
        return {violation.kind for violation in self.violations}


def _check_curves(d, add):
    if d.num_alpha != d.num_beta:
        add("balance", "diagram", f"{d.num_alpha} alpha curves but {d.num_beta} beta curves.")
    for kind in ("alpha", "beta"):
        listed = collections.Counter()
        for curve in d.curves(kind):
            for point_id in curve.points:
                listed[point_id] += 1
                point = d.points.get(point_id)
                if point is None:
                    add("curve", point_id, f"{kind} curve {curve.index} lists unknown point {point_id!r}.")
                elif getattr(point, kind) != curve.index:
                    add(
                        "curve",
                        point_id,
                        f"{kind} curve {curve.index} lists point {point_id!r}, "
                        f"which names {kind} curve {getattr(point, kind)}.",
                    )
        for point in d.points.values():
            index = getattr(point, kind)
            if index >= len(d.curves(kind)):
                add("curve", point.id, f"Point {point.id!r} names missing {kind} curve {index}.")
            elif listed[point.id] != 1:
                add(
                    "curve",
                    point.id,
                    f"Point {point.id!r} occurs {listed[point.id]} times on its {kind} curve; expected once.",
                )


def _check_incidence(d, add):
    expected = collections.Counter()
    for point in d.points.values():
        for quadrant, region_id in zip(QUADRANTS, point.quadrants):
            if region_id not in d.regions:
                add(
                    "incidence",
                    point.id,
                    f"Point {point.id!r} quadrant {quadrant} names missing region {region_id!r}.",
                )
            expected[(region_id, point.id, quadrant)] += 1
    found = collections.Counter()
    for region in d.regions.values():
        if region.chi > 1:
            add("region", region.id, f"Region {region.id!r} has chi {region.chi} > 1.")
        if region.basepoints < 0:
            add("region", region.id, f"Region {region.id!r} has a negative basepoint count.")
        for point_id, quadrant in region.corners:
            found[(region.id, point_id, quadrant)] += 1
    for key in sorted(set(expected) | set(found)):
        if expected[key] != found[key]:
            region_id, point_id, quadrant = key
            if region_id not in d.regions:
                continue
            add(
                "corners",
                region_id,
                f"Region {region_id!r} lists corner ({point_id}, {quadrant}) {found[key]} times, "
                f"but the quadrant map gives it {expected[key]} times.",
            )


def _check_segments(d, add):
    for curve in d.alpha:
        for point_id in curve.points:
            if point_id not in d.points:
                continue
            next_id = curve.successor(point_id)
            if next_id not in d.points:
                continue
            p, q = d.points[point_id], d.points[next_id]
            if p.region("NE") != q.region("NW") or p.region("SE") != q.region("SW"):
                add(
                    "segment",
                    point_id,
                    f"Alpha segment {point_id!r} -> {next_id!r}: "
                    "regions on its sides differ at the two ends.",
                )
    for curve in d.beta:
        for point_id in curve.points:
            if point_id not in d.points:
                continue
            next_id = curve.successor(point_id)
            if next_id not in d.points:
                continue
            p, q = d.points[point_id], d.points[next_id]
            sides_p = {frozenset(p.quadrants[0:2]), frozenset(p.quadrants[2:4])}
            sides_q = {frozenset(q.quadrants[0:2]), frozenset(q.quadrants[2:4])}
            if not sides_p & sides_q:
                add(
                    "segment",
                    point_id,
                    f"Beta segment {point_id!r} -> {next_id!r}: regions on its sides differ at the two ends.",
                )


def _check_polygons(d, add):
    for region in d.regions.values():
        if region.on_boundary or region.chi != 1 or not region.corners:
            continue
        if any(point_id not in d.points for point_id, _ in region.corners):
            continue
        n = len(region.corners)
        for i, (point_id, quadrant) in enumerate(region.corners):
            next_id, next_quadrant = region.corners[(i + 1) % n]
            kind = OUTGOING_KIND[quadrant]
            if INCOMING_KIND[next_quadrant] != kind:
                add(
                    "polygon",
                    region.id,
                    f"Region {region.id!r}: edge from ({point_id}, {quadrant}) to "
                    f"({next_id}, {next_quadrant}) does not alternate alpha and beta.",
                )
                continue
            point = d.points[point_id]
            curves = d.curves(kind)
            index = getattr(point, kind)
            if index >= len(curves) or point_id not in curves[index].points:
                continue
            curve = curves[index]
            if kind == "alpha":
                expected = curve.successor(point_id) if quadrant == "NE" else curve.predecessor(point_id)
                ok = next_id == expected
            else:
                ok = next_id in (curve.successor(point_id), curve.predecessor(point_id))
            if not ok:
                add(
                    "polygon",
                    region.id,
                    f"Region {region.id!r}: corners ({point_id}, {quadrant}) and "
                    f"({next_id}, {next_quadrant}) are not neighbours on {kind} curve {index}.",
                )


def validate_diagram(d):
    """Check every structural invariant of a diagram.

    Parameters
    ----------
    d : `HeegaardDiagram`
        Diagram to check.

    Returns
    -------
    report : `ValidationReport`
        All violations found; empty if and only if the diagram is well
        formed.
    """
    violations = []

    def add(kind, subject, message):
        violations.append(Violation(kind, subject, message))

    _check_curves(d, add)
    _check_incidence(d, add)
    _check_segments(d, add)
    _check_polygons(d, add)
    if d.eh is not None:
        try:
            d.make_generator(d.eh)
        except DiagramError as e:
            add("eh", "eh", f"Marked EH generator is invalid: {e}")
    return ValidationReport(tuple(violations))


def enumerate_generators(d):
    """Enumerate all generators of a diagram.

    Backtracks over the alpha curves in index order, keeping a mask of the
    beta curves already used.

    Parameters
    ----------
    d : `HeegaardDiagram`
        A valid diagram.

    Returns
    -------
    generators : `list` [`Generator`]
        Sorted by point ids in alpha order.

    Raises
    ------
    DiagramError
        If the diagram is not valid.
    """
    report = validate_diagram(d)
    if not report.ok:
        raise DiagramError(f"Diagram is invalid: {report.violations[0].message}")
    if d.num_alpha == 0:
        return [Generator((), ())]
    candidates = [[d.points[point_id] for point_id in curve.points] for curve in d.alpha]
    generators = []
    chosen = []

    def extend(alpha_index, used):
        if alpha_index == d.num_alpha:
            generators.append(
                Generator(tuple(point.id for point in chosen), tuple(point.beta for point in chosen))
            )
            return
        for point in candidates[alpha_index]:
            if used & (1 << point.beta):
                continue
            chosen.append(point)
            extend(alpha_index + 1, used | (1 << point.beta))
            chosen.pop()

    extend(0, 0)
    generators.sort(key=lambda generator: generator.points)
    return generators


def cycle_count(g):
    """Number of cycles of the permutation of a generator, ``|g|``.

    Raises
    ------
    DiagramError
        If the generator is not a bijective matching.
    """
    return permutation_cycles(g.permutation)


def check_nice(d):
    """List the regions that keep a diagram from being nice.

    A diagram is nice when every region that misses the suture and carries
    no basepoint is a disk with two or four corners.

    Returns
    -------
    violations : `list` [`Violation`]
        One entry per offending region, kind ``nice``.
    """
    violations = []
    for region in d.regions.values():
        if not region.is_free:
            continue
        if region.chi != 1 or len(region.corners) not in (2, 4):
            violations.append(
                Violation(
                    "nice",
                    region.id,
                    f"Region {region.id!r} (chi {region.chi}, {len(region.corners)} corners) "
                    "is neither a bigon nor a square.",
                )
            )
    return violations


def eh_generator(d):
    """Return the marked contact generator of a diagram.

    Raises
    ------
    DiagramError
        If no generator is marked or the marked points are not a
        generator.
    """
    if d.eh is None:
        raise DiagramError("Diagram has no marked EH generator.")
    return d.make_generator(d.eh)


def diagram_from_dict(data):
    """Build a diagram from data in the diagram file format.

    The data must already match `DIAGRAM_SCHEMA`.
    """
    points = [
        IntersectionPoint(
            point_id,
            value["alpha"],
            value["beta"],
            tuple(value["quadrants"][quadrant] for quadrant in QUADRANTS),
        )
        for point_id, value in data["points"].items()
    ]
    regions = [
        Region(
            value["id"],
            value["chi"],
            tuple((corner[0], corner[1]) for corner in value["corners"]),
            value.get("on_boundary", False),
            value.get("basepoints", 0),
        )
        for value in data["regions"]
    ]
    return HeegaardDiagram(data["alpha"], data["beta"], points, regions, data.get("eh"))


def diagram_to_dict(d):
    """Convert a diagram to data in the diagram file format."""
    data = {
        "alpha": [list(curve.points) for curve in d.alpha],
        "beta": [list(curve.points) for curve in d.beta],
        "points": {
            point.id: {
                "alpha": point.alpha,
                "beta": point.beta,
                "quadrants": dict(zip(QUADRANTS, point.quadrants)),
            }
            for point in d.points.values()
        },
        "regions": [
            {
                "id": region.id,
                "chi": region.chi,
                "corners": [list(corner) for corner in region.corners],
                "on_boundary": region.on_boundary,
                "basepoints": region.basepoints,
            }
            for region in d.regions.values()
        ],
    }
    if d.eh is not None:
        data["eh"] = list(d.eh)
    return data


def load_diagram(path, log=None):
    """Read a diagram file.

    Raises
    ------
    lsst.ts.sfhtorsion.InputFileError
        If the file cannot be read or does not match the diagram format.
    """
    return diagram_from_dict(load_json_file(path, DIAGRAM_SCHEMA, log=log))


def _fresh_names(ids, taken, suffix):
    """Rename the ids that are in ``taken`` by appending ``suffix`` until
    they collide with nothing.
    """
    collisions = [name for name in ids if name in taken]
    if collisions and not suffix:
        raise DiagramError(f"Ids {collisions} collide and the suffix is empty.")
    used = set(taken) | set(ids)
    names = dict()
    for name in ids:
        new_name = name
        while name in taken and new_name in used:
            new_name += suffix
        used.add(new_name)
        names[name] = new_name
    return names


def disjoint_union(first, second, suffix="'"):
    """Disjoint union of two diagrams.

    Curves of ``second`` are numbered after those of ``first``. Point and
    region ids of ``second`` that collide with ids of ``first`` get
    ``suffix`` appended, as often as needed to make every id of the
    union distinct. The contact generator of the union is the union
    of the two contact generators, if both are marked.

    Returns
    -------
    union : `HeegaardDiagram`
        The union.
    renamed : `dict` [`str`, `dict`]
        Maps ``"points"`` and ``"regions"`` to the id changes applied to
        ``second``, and ``"alpha"``/``"beta"`` to its curve index changes.

    Raises
    ------
    DiagramError
        If ids collide and ``suffix`` is empty.
    """
    point_names = _fresh_names(second.points, first.points, suffix)
    region_names = _fresh_names(second.regions, first.regions, suffix)
    alpha_shift, beta_shift = first.num_alpha, first.num_beta
    points = list(first.points.values()) + [
        IntersectionPoint(
            point_names[point.id],
            point.alpha + alpha_shift,
            point.beta + beta_shift,
            tuple(region_names[region_id] for region_id in point.quadrants),
        )
        for point in second.points.values()
    ]
    regions = list(first.regions.values()) + [
        dataclasses.replace(
            region,
            id=region_names[region.id],
            corners=tuple((point_names[point_id], quadrant) for point_id, quadrant in region.corners),
        )
        for region in second.regions.values()
    ]
    alpha = [list(curve.points) for curve in first.alpha] + [
        [point_names[point_id] for point_id in curve.points] for curve in second.alpha
    ]
    beta = [list(curve.points) for curve in first.beta] + [
        [point_names[point_id] for point_id in curve.points] for curve in second.beta
    ]
    eh = None
    if first.eh is not None and second.eh is not None:
        eh = list(first.eh) + [point_names[point_id] for point_id in second.eh]
    renamed = {
        "points": point_names,
        "regions": region_names,
        "alpha": {i: i + alpha_shift for i in range(second.num_alpha)},
        "beta": {i: i + beta_shift for i in range(second.num_beta)},
    }
    return HeegaardDiagram(alpha, beta, points, regions, eh), renamed
