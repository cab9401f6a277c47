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
    "DiskCountError",
    "CountedDisk",
    "SplitDifferential",
    "enumerate_disks",
    "j_plus_index1",
    "j_plus_general",
    "split_differential",
    "disk_table",
]

import dataclasses
import logging
from fractions import Fraction

from .diagram import QUADRANTS, DiagramError, check_nice, enumerate_generators, validate_diagram
from .domains import (
    Domain,
    DomainError,
    check_admissible,
    euler_measure,
    generator_measure,
    is_connecting,
    maslov_index,
    region_euler_measure,
)
from .utils.f2_linalg import convolution_failures

# Quadrant entered when the boundary of a disk passes straight through a
# point, given the quadrant in which it arrived.
STRAIGHT = {"NW": "NE", "SE": "SW", "NE": "SE", "SW": "NW"}
# Quadrant on the other side of the edge leaving a corner.
ACROSS = {"NE": "SE", "SW": "NW", "NW": "NE", "SE": "SW"}
# Corners at points of the source generator.
FROM_QUADRANTS = ("NW", "SE")
DIAGONALS = ({"NE", "SW"}, {"NW", "SE"})


class DiskCountError(ValueError):
    """Disks cannot be counted, or a disk has the wrong index."""


@dataclasses.dataclass(frozen=True)
class CountedDisk:
    """An empty embedded bigon or rectangle.

    Attributes
    ----------
    source : `Generator`
        Generator the disk starts at; its domain is in
        ``D(source, target)``.
    target : `Generator`
        Generator the disk ends at.
    domain : `Domain`
        Domain of the disk, all coefficients 0 or 1.
    shape : `str`
        ``"bigon"`` or ``"rectangle"``.
    j_plus : `int`
        J+ of the disk, even and nonnegative.
    corners : `tuple` [`tuple` [`str`, `str`]]
        ``(point id, quadrant)`` of the convex corners in counterclockwise
        order, starting at a corner of ``source``.
    """

    source: object
    target: object
    domain: Domain
    shape: str
    j_plus: int
    corners: tuple

    @property
    def name(self):
        """Corner point ids in boundary order."""
        return "".join(point_id for point_id, _ in self.corners)

    @property
    def multi_region(self):
        return len(self.domain.support) > 1

    @property
    def corner_measure(self):
        """``2(n_source + n_target)``: 1 for bigons, 2 for rectangles."""
        return len(self.corners) // 2

    @property
    def cycle_difference(self):
        return self.source.cycles - self.target.cycles


class _BoundaryTracer:
    """Trace candidate disk boundaries along region edges.

    A state is a region together with one of its corners; the boundary
    leaves along the edge that follows this corner. At the next corner the
    boundary either turns (staying in the region) or goes straight into
    the neighbouring region.
    """

    def __init__(self, d):
        self.d = d
        self.free = {region.id for region in d.regions.values() if region.is_free}
        self.corner_index = {
            region.id: {corner: i for i, corner in enumerate(region.corners)} for region in d.regions.values()
        }

    def side_limit(self, point_id, quadrant):
        point = self.d.points[point_id]
        kind = "alpha" if quadrant in ("NE", "SW") else "beta"
        return len(self.d.curves(kind)[getattr(point, kind)].points) - 1

    def trace(self, start_region, start_index):
        """Return ``(edges, turns)`` for every closed boundary found from
        the given start corner.
        """
        results = []
        edges = []
        turns = [self.d.regions[start_region].corners[start_index]]
        used = set()

        def walk(region_id, index, straights, limit):
            edge = (region_id, index)
            if edge in used:
                return
            used.add(edge)
            edges.append(edge)
            corners = self.d.regions[region_id].corners
            next_index = (index + 1) % len(corners)
            point_id, quadrant = corners[next_index]
            if (region_id, next_index) == (start_region, start_index):
                if len(turns) in (2, 4):
                    results.append((tuple(edges), tuple(turns)))
            elif (point_id, quadrant) != turns[0]:
                if len(turns) < 4:
                    turns.append((point_id, quadrant))
                    walk(region_id, next_index, 0, self.side_limit(point_id, quadrant))
                    turns.pop()
                if straights < limit:
                    straight = STRAIGHT[quadrant]
                    neighbour = self.d.points[point_id].region(straight)
                    if neighbour in self.free:
                        next_corner = self.corner_index[neighbour][(point_id, straight)]
                        walk(neighbour, next_corner, straights + 1, limit)
            edges.pop()
            used.discard(edge)

        point_id, quadrant = turns[0]
        walk(start_region, start_index, 0, self.side_limit(point_id, quadrant))
        return results

    def fill(self, edges):
        """Regions enclosed by a traced boundary, or `None` if the
        enclosed area leaves the free regions or is not bounded by the
        trace.
        """
        boundary = set(edges)
        filled = {region_id for region_id, _ in edges}
        stack = sorted(filled)
        while stack:
            region_id = stack.pop()
            for i, (point_id, quadrant) in enumerate(self.d.regions[region_id].corners):
                if (region_id, i) in boundary:
                    continue
                neighbour = self.d.points[point_id].region(ACROSS[quadrant])
                if neighbour not in self.free:
                    return None
                if neighbour not in filled:
                    filled.add(neighbour)
                    stack.append(neighbour)
        for region_id, i in boundary:
            point_id, quadrant = self.d.regions[region_id].corners[i]
            if self.d.points[point_id].region(ACROSS[quadrant]) in filled:
                return None
        return filled


def _covered_quadrants(d, filled):
    covered = dict()
    for point in d.points.values():
        quadrants = {q for q, region_id in zip(QUADRANTS, point.quadrants) if region_id in filled}
        if quadrants:
            covered[point.id] = quadrants
    return covered


def _corner_pattern_ok(covered, turns):
    turn_set = set(turns)
    for point_id, quadrants in covered.items():
        if len(quadrants) == 1:
            if (point_id, next(iter(quadrants))) not in turn_set:
                return False
        elif len(quadrants) == 2:
            if quadrants in DIAGONALS:
                return False
        elif len(quadrants) == 3:
            return False
    return all(covered.get(point_id) == {quadrant} for point_id, quadrant in turns)


def _rest_choices(d, used_alpha, used_beta, covered):
    """Partial generators on the alpha curves not in ``used_alpha``,
    avoiding the beta curves in ``used_beta`` and every covered point.
    """
    remaining = [curve for curve in d.alpha if curve.index not in used_alpha]
    choices = []
    chosen = []

    def extend(position, used):
        if position == len(remaining):
            choices.append(tuple(chosen))
            return
        for point_id in remaining[position].points:
            point = d.points[point_id]
            if point.beta in used or point_id in covered:
                continue
            chosen.append(point_id)
            extend(position + 1, used | {point.beta})
            chosen.pop()

    extend(0, frozenset(used_beta))
    return choices


def j_plus_index1(d, domain, x, y):
    """J+ of an index one disk: ``2(n_x + n_y) - 1 + |x| - |y|``.

    Raises
    ------
    DiskCountError
        If the Maslov index of ``domain`` is not 1.
    lsst.ts.sfhtorsion.DomainError
        If ``domain`` does not connect ``x`` to ``y``.
    """
    mu = maslov_index(d, domain, x, y)
    if mu != 1:
        raise DiskCountError(f"Domain {domain.to_json()} from {x} to {y} has Maslov index {mu}, not 1.")
    value = 2 * (generator_measure(d, domain, x) + generator_measure(d, domain, y)) - 1 + x.cycles - y.cycles
    return int(value)


def j_plus_general(d, D, x, y):
    """J+ of a connecting domain: ``n_x + n_y - e + |x| - |y|``.

    Raises
    ------
    DiskCountError
        If ``D`` covers a region that touches the suture.
    lsst.ts.sfhtorsion.DomainError
        If ``D`` does not connect ``x`` to ``y``.
    """
    for region_id in D.support:
        if d.region(region_id).on_boundary:
            raise DiskCountError(f"Domain covers region {region_id!r}, which touches the suture.")
    if not is_connecting(d, D, x, y):
        raise DomainError(f"Domain {D.to_json()} does not connect {x} to {y}.")
    value = (
        generator_measure(d, D, x) + generator_measure(d, D, y) - euler_measure(d, D) + x.cycles - y.cycles
    )
    return int(value) if value.denominator == 1 else value


def _check_countable(d, log):
    report = validate_diagram(d)
    if not report.ok:
        raise DiskCountError(f"Diagram is invalid: {report.violations[0].message}")
    violations = check_nice(d)
    if violations:
        raise DiskCountError(f"Diagram is not nice: {violations[0].message}")
    if not check_admissible(d, log=log):
        raise DiskCountError("Diagram is not admissible: it has a nonnegative periodic domain.")


def enumerate_disks(d, log=None):
    """Enumerate the empty embedded bigons and rectangles of a nice
    diagram.

    Parameters
    ----------
    d : `HeegaardDiagram`
        A valid, nice and admissible diagram.
    log : `logging.Logger`, optional
        Logger.

    Returns
    -------
    disks : `list` [`CountedDisk`]
        Sorted by source, target and domain.

    Raises
    ------
    DiskCountError
        If the diagram is invalid, not nice or not admissible.
    """
    log = log or logging.getLogger(__name__)
    _check_countable(d, log)
    tracer = _BoundaryTracer(d)
    found = dict()
    for region_id in sorted(tracer.free):
        region = d.regions[region_id]
        for index, (point_id, quadrant) in enumerate(region.corners):
            if quadrant not in FROM_QUADRANTS:
                continue
            for edges, turns in tracer.trace(region_id, index):
                for disk in _disks_from_boundary(d, tracer, edges, turns):
                    key = (disk.domain, disk.source.points, disk.target.points)
                    found.setdefault(key, disk)
    disks = sorted(
        found.values(), key=lambda disk: (disk.source.points, disk.target.points, disk.domain.coefficients)
    )
    multi = sum(1 for disk in disks if disk.multi_region)
    if multi:
        log.warning("%d of %d disks cover more than one region.", multi, len(disks))
    log.debug("Found %d disks.", len(disks))
    return disks


def _disks_from_boundary(d, tracer, edges, turns):
    filled = tracer.fill(edges)
    if filled is None:
        return []
    euler = sum((region_euler_measure(d.regions[region_id]) for region_id in filled), Fraction(0))
    if euler != 1 - Fraction(len(turns), 4):
        return []
    covered = _covered_quadrants(d, filled)
    if not _corner_pattern_ok(covered, turns):
        return []
    sources = [d.points[point_id] for point_id, quadrant in turns if quadrant in FROM_QUADRANTS]
    targets = [d.points[point_id] for point_id, quadrant in turns if quadrant not in FROM_QUADRANTS]
    for points in (sources, targets):
        if len({point.alpha for point in points}) != len(points):
            return []
        if len({point.beta for point in points}) != len(points):
            return []
    if {point.alpha for point in sources} != {point.alpha for point in targets}:
        return []
    if {point.beta for point in sources} != {point.beta for point in targets}:
        return []
    domain = Domain.from_regions(filled)
    shape = "bigon" if len(turns) == 2 else "rectangle"
    used_alpha = {point.alpha for point in sources}
    used_beta = {point.beta for point in sources}
    disks = []
    for rest in _rest_choices(d, used_alpha, used_beta, covered):
        try:
            x = d.make_generator([point.id for point in sources] + list(rest))
            y = d.make_generator([point.id for point in targets] + list(rest))
        except DiagramError:
            continue
        if maslov_index(d, domain, x, y) != 1:
            continue
        disks.append(CountedDisk(x, y, domain, shape, j_plus_index1(d, domain, x, y), turns))
    return disks


@dataclasses.dataclass(frozen=True)
class SplitDifferential:
    """The differential split by J+.

    Attributes
    ----------
    generators : `tuple` [`Generator`]
        Generators, indexing the rows and columns.
    matrices : `tuple` [`tuple` [`int`]]
        ``matrices[r][j]`` is the bitset of ``∂_r`` applied to generator
        ``j``.
    disks : `tuple` [`CountedDisk`]
        The counted disks.
    """

    generators: tuple
    matrices: tuple
    disks: tuple = ()

    @property
    def max_level(self):
        """Largest ``r`` with a nonzero ``∂_r`` (0 when there is none)."""
        return len(self.matrices) - 1

    @property
    def names(self):
        return tuple(generator.name for generator in self.generators)

    def total(self):
        """Columns of ``∂_0 + ∂_1 + ...``."""
        columns = [0] * len(self.generators)
        for matrix in self.matrices:
            columns = [a ^ b for a, b in zip(columns, matrix)]
        return columns

    def convolution_failures(self):
        """Levels ``n`` at which ``Σ_{i+j=n} ∂_i ∂_j`` is nonzero."""
        return convolution_failures([list(matrix) for matrix in self.matrices])


def split_differential(d, disks=None, log=None):
    """Group disk counts mod 2 by ``J+ / 2``.

    Parameters
    ----------
    d : `HeegaardDiagram`
        Diagram.
    disks : `list` [`CountedDisk`], optional
        Disks of ``d``; enumerated if omitted.
    log : `logging.Logger`, optional
        Logger.

    Returns
    -------
    split : `SplitDifferential`
        The matrices ``∂_0, ..., ∂_I``.
    """
    if disks is None:
        disks = enumerate_disks(d, log=log)
    generators = enumerate_generators(d)
    index = {generator.points: i for i, generator in enumerate(generators)}
    max_level = max((disk.j_plus // 2 for disk in disks), default=0)
    matrices = [[0] * len(generators) for _ in range(max_level + 1)]
    for disk in disks:
        matrices[disk.j_plus // 2][index[disk.source.points]] ^= 1 << index[disk.target.points]
    while len(matrices) > 1 and not any(matrices[-1]):
        matrices.pop()
    return SplitDifferential(tuple(generators), tuple(tuple(matrix) for matrix in matrices), tuple(disks))


def disk_table(disks):
    """Rows of the disk table: shape, name, ``2(n_x + n_y)``, ``|x| - |y|``
    and J+, plus the generator pair.
    """
    return [
        {
            "shape": disk.shape,
            "name": disk.name,
            "2(n_x+n_y)": disk.corner_measure,
            "|x|-|y|": disk.cycle_difference,
            "jplus": disk.j_plus,
            "from": disk.source.name,
            "to": disk.target.name,
            "multi_region": disk.multi_region,
        }
        for disk in disks
    ]
