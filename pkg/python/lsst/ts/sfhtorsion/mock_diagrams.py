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
    "GridRange",
    "grid_diagram",
    "flower_diagram",
    "random_grid_diagram",
    "random_grid_diagrams",
    "random_mixed_diagram",
    "random_mixed_diagrams",
]

import logging
import types

import numpy as np

from .diagram import HeegaardDiagram, IntersectionPoint, Region, disjoint_union

# Ranges of the random grid diagrams.
GridRange = types.SimpleNamespace(
    size=(2, 4),  # min, max number of alpha (and beta) curves
    boundary_fraction=0.5,  # chance that a blocked square touches the suture
    petals=(1, 3),  # min, max number of upper bigons of a flower
)


def _point_id(i, j):
    return f"p{i}_{j}"


def _square_id(i, j):
    return f"S{i}_{j}"


def grid_diagram(n, basepoint_squares, boundary_squares=(), eh=None):
    """Build an ``n`` by ``n`` grid diagram on the torus.

    Alpha curve ``i`` is the ``i``-th row and beta curve ``j`` the
    ``j``-th column; ``p{i}_{j}`` is their intersection point. Square
    ``S{i}_{j}`` has corners ``p{i}_{j}`` (NE), ``p{i}_{j+1}`` (NW),
    ``p{i+1}_{j+1}`` (SW) and ``p{i+1}_{j}`` (SE), indices mod ``n``.

    Parameters
    ----------
    n : `int`
        Number of alpha curves.
    basepoint_squares : `iterable` [`tuple` [`int`, `int`]]
        Squares carrying one basepoint.
    boundary_squares : `iterable` [`tuple` [`int`, `int`]], optional
        Squares touching the suture.
    eh : `list` [`str`], optional
        Point ids of the contact generator.

    Returns
    -------
    d : `HeegaardDiagram`
        The diagram; it is nice, and admissible when the blocked squares
        meet every row and column.
    """
    basepoint_squares = set(basepoint_squares)
    boundary_squares = set(boundary_squares)
    points = [
        IntersectionPoint(
            _point_id(i, j),
            i,
            j,
            (
                _square_id(i, j),
                _square_id(i, (j - 1) % n),
                _square_id((i - 1) % n, (j - 1) % n),
                _square_id((i - 1) % n, j),
            ),
        )
        for i in range(n)
        for j in range(n)
    ]
    regions = []
    for i in range(n):
        for j in range(n):
            on_boundary = (i, j) in boundary_squares
            regions.append(
                Region(
                    _square_id(i, j),
                    0 if on_boundary else 1,
                    (
                        (_point_id(i, j), "NE"),
                        (_point_id(i, (j + 1) % n), "NW"),
                        (_point_id((i + 1) % n, (j + 1) % n), "SW"),
                        (_point_id((i + 1) % n, j), "SE"),
                    ),
                    on_boundary,
                    1 if (i, j) in basepoint_squares else 0,
                )
            )
    alpha = [[_point_id(i, j) for j in range(n)] for i in range(n)]
    beta = [[_point_id(i, j) for i in range(n)] for j in range(n)]
    return HeegaardDiagram(alpha, beta, points, regions, eh)


def flower_diagram(m, eh=None):
    """Build one alpha and one beta curve crossing in ``2m`` points, with
    a bigon between each pair of neighbouring points.

    Alpha runs along the equator of a sphere through ``f0, ..., f{2m-1}``
    and beta weaves across it through the same points. The bigons
    ``U{k}`` above alpha join ``f{2k}`` and ``f{2k+1}``; the bigons
    ``L{k}`` below alpha join ``f{2k+1}`` and ``f{2k+2}``. The two caps
    left over, ``north`` and ``south``, touch the suture. Every bigon
    leaves an odd point for an even one.

    Parameters
    ----------
    m : `int`
        Number of bigons on each side of alpha.
    eh : `list` [`str`], optional
        Point ids of the contact generator.

    Returns
    -------
    d : `HeegaardDiagram`
        A nice admissible diagram.
    """
    n = 2 * m
    point_ids = [f"f{a}" for a in range(n)]

    def upper(k):
        return f"U{k % m}"

    def lower(k):
        return f"L{k % m}"

    points = []
    regions = []
    for k in range(m):
        even, odd, after = point_ids[2 * k], point_ids[2 * k + 1], point_ids[(2 * k + 2) % n]
        points.append(IntersectionPoint(even, 0, 0, (upper(k), "north", lower(k - 1), "south")))
        points.append(IntersectionPoint(odd, 0, 0, ("north", upper(k), "south", lower(k))))
        regions.append(Region(upper(k), 1, ((even, "NE"), (odd, "NW"))))
        regions.append(Region(lower(k), 1, ((after, "SW"), (odd, "SE"))))
    north = tuple((point_id, "NE" if a % 2 else "NW") for a, point_id in enumerate(point_ids))
    south = tuple((point_id, "SW" if a % 2 else "SE") for a, point_id in enumerate(point_ids))
    regions.append(Region("north", 0, north, True))
    regions.append(Region("south", 0, south, True))
    return HeegaardDiagram([list(point_ids)], [list(point_ids)], points, regions, eh)


def random_grid_diagram(rng, n=None, log=None):
    """Make a random nice admissible grid diagram.

    The squares ``(i, sigma(i))`` of a random permutation ``sigma`` are
    blocked, plus a random set of further squares. Each blocked square
    either carries a basepoint or touches the suture.

    Parameters
    ----------
    rng : `numpy.random.Generator`
        Random number generator.
    n : `int`, optional
        Grid size; random within ``GridRange.size`` if omitted.
    log : `logging.Logger`, optional
        Logger.
    """
    log = log or logging.getLogger(__name__)
    if n is None:
        n = int(rng.integers(GridRange.size[0], GridRange.size[1] + 1))
    sigma = rng.permutation(n)
    blocked = {(i, int(sigma[i])) for i in range(n)}
    extra = int(rng.integers(0, n))
    for flat in rng.choice(n * n, size=extra, replace=False):
        blocked.add(divmod(int(flat), n))
    boundary = {square for square in sorted(blocked) if rng.random() < GridRange.boundary_fraction}
    log.debug("Grid of size %d with %d blocked squares, %d on the suture.", n, len(blocked), len(boundary))
    return grid_diagram(n, blocked - boundary, boundary)


def random_grid_diagrams(count, seed=0, log=None):
    """Return ``count`` random grid diagrams from a seeded generator."""
    rng = np.random.default_rng(seed)
    return [random_grid_diagram(rng, log=log) for _ in range(count)]


def random_mixed_diagram(rng, log=None):
    """Make a random nice admissible diagram with both squares and
    bigons: a random grid next to a flower with a random number of
    petals.
    """
    log = log or logging.getLogger(__name__)
    grid = random_grid_diagram(rng, n=int(rng.integers(2, 4)), log=log)
    m = int(rng.integers(GridRange.petals[0], GridRange.petals[1] + 1))
    log.debug("Flower with %d bigons on each side.", m)
    union, _ = disjoint_union(grid, flower_diagram(m))
    return union


def random_mixed_diagrams(count, seed=0, log=None):
    """Return ``count`` random mixed diagrams from a seeded generator."""
    rng = np.random.default_rng(seed)
    return [random_mixed_diagram(rng, log=log) for _ in range(count)]
