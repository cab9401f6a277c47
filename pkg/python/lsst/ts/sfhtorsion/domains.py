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
    "DomainError",
    "Domain",
    "PointChain",
    "ConnectingDomains",
    "region_euler_measure",
    "euler_measure",
    "point_measure",
    "generator_measure",
    "domain_boundary",
    "boundary_matrix",
    "is_connecting",
    "connecting_domains",
    "maslov_index",
    "periodic_domains",
    "restricted_periodic_domains",
    "positive_periodic_domain",
    "check_admissible",
]

import dataclasses
import logging
import math
from fractions import Fraction

import numpy as np
from scipy import optimize

from .diagram import QUADRANTS
from .utils.integer_linalg import integer_kernel, integer_solve, nonnegative_kernel_vector

# Sign of a quadrant coefficient in the alpha boundary chain at a point.
ALPHA_SIGN = {"NE": -1, "NW": 1, "SW": -1, "SE": 1}


class DomainError(ValueError):
    """A domain does not fit its diagram or generators."""


@dataclasses.dataclass(frozen=True)
class Domain:
    """An integer combination of regions.

    Attributes
    ----------
    coefficients : `tuple` [`tuple` [`str`, `int`]]
        Sorted ``(region id, coefficient)`` pairs with nonzero coefficient.
    """

    coefficients: tuple = ()

    @classmethod
    def from_dict(cls, coefficients):
        """Build a domain from a mapping region id: coefficient."""
        return cls(tuple(sorted((key, int(value)) for key, value in coefficients.items() if value != 0)))

    @classmethod
    def from_regions(cls, region_ids):
        """Domain with coefficient 1 on each listed region (repeats add)."""
        coefficients = dict()
        for region_id in region_ids:
            coefficients[region_id] = coefficients.get(region_id, 0) + 1
        return cls.from_dict(coefficients)

    def as_dict(self):
        return dict(self.coefficients)

    def __getitem__(self, region_id):
        return self.as_dict().get(region_id, 0)

    @property
    def support(self):
        return frozenset(region_id for region_id, _ in self.coefficients)

    def is_zero(self):
        return not self.coefficients

    def __add__(self, other):
        total = self.as_dict()
        for region_id, value in other.coefficients:
            total[region_id] = total.get(region_id, 0) + value
        return Domain.from_dict(total)

    def __neg__(self):
        return Domain(tuple((region_id, -value) for region_id, value in self.coefficients))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, factor):
        return Domain.from_dict({region_id: factor * value for region_id, value in self.coefficients})

    __rmul__ = __mul__

    def to_json(self):
        return {region_id: value for region_id, value in self.coefficients}


@dataclasses.dataclass(frozen=True)
class PointChain:
    """A signed combination of intersection points.

    Attributes
    ----------
    terms : `tuple` [`tuple` [`str`, `int`]]
        Sorted ``(point id, multiplicity)`` pairs with nonzero
        multiplicity.
    """

    terms: tuple = ()

    @classmethod
    def from_dict(cls, terms):
        return cls(tuple(sorted((key, value) for key, value in terms.items() if value != 0)))

    @classmethod
    def difference(cls, x, y):
        """The chain ``x - y`` of two generators."""
        terms = dict()
        for point_id in x.points:
            terms[point_id] = terms.get(point_id, 0) + 1
        for point_id in y.points:
            terms[point_id] = terms.get(point_id, 0) - 1
        return cls.from_dict(terms)

    def as_dict(self):
        return dict(self.terms)

    def __neg__(self):
        return PointChain(tuple((point_id, -value) for point_id, value in self.terms))

    def is_zero(self):
        return not self.terms


@dataclasses.dataclass(frozen=True)
class ConnectingDomains:
    """Solution lattice of the connecting domain equations.

    Attributes
    ----------
    particular : `Domain`
        One domain connecting the two generators.
    periodic_basis : `tuple` [`Domain`]
        Lattice basis of the periodic domains; every connecting domain is
        ``particular`` plus an integer combination of these.
    """

    particular: Domain
    periodic_basis: tuple


def _check_support(d, D):
    for region_id in D.support:
        if region_id not in d.regions:
            raise DomainError(f"Domain uses unknown region {region_id!r}.")


def region_euler_measure(r):
    """Euler measure of one region: ``chi - corners / 4``."""
    return Fraction(r.chi) - Fraction(len(r.corners), 4)


def euler_measure(d, D):
    """Euler measure ``e(D)`` of a domain.

    Raises
    ------
    DomainError
        If the domain uses a region unknown to the diagram.
    """
    _check_support(d, D)
    return sum(
        (value * region_euler_measure(d.regions[region_id]) for region_id, value in D.coefficients),
        Fraction(0),
    )


def point_measure(d, D, p):
    """Average of the coefficients of ``D`` in the four quadrants at ``p``.

    Parameters
    ----------
    d : `HeegaardDiagram`
        Diagram.
    D : `Domain`
        Domain.
    p : `str` or `IntersectionPoint`
        Point or point id.
    """
    _check_support(d, D)
    point = d.point(p if isinstance(p, str) else p.id)
    coefficients = D.as_dict()
    return Fraction(sum(coefficients.get(region_id, 0) for region_id in point.quadrants), 4)


def generator_measure(d, D, g):
    """Point measure ``n_g(D)`` of a generator: the sum over its points."""
    return sum((point_measure(d, D, point_id) for point_id in g.points), Fraction(0))


def domain_boundary(d, D, kind):
    """Endpoint chain of the part of the boundary of ``D`` on one kind of
    curve.

    At a point the alpha part of the boundary of a domain enters along the
    negative alpha ray with multiplicity ``c_NW - c_SW`` and leaves along the
    positive ray with multiplicity ``c_NE - c_SE``. The beta chain is the
    negative of the alpha chain.

    Parameters
    ----------
    d : `HeegaardDiagram`
        Diagram.
    D : `Domain`
        Domain.
    kind : `str`
        ``"alpha"`` or ``"beta"``.

    Returns
    -------
    chain : `PointChain`
        ``∂(∂D ∩ alpha)`` or ``∂(∂D ∩ beta)``.
    """
    if kind not in ("alpha", "beta"):
        raise DomainError(f"Unknown curve kind {kind!r}; must be 'alpha' or 'beta'.")
    _check_support(d, D)
    coefficients = D.as_dict()
    sign = 1 if kind == "alpha" else -1
    terms = dict()
    for point in d.points.values():
        total = sum(
            ALPHA_SIGN[quadrant] * coefficients.get(region_id, 0)
            for quadrant, region_id in zip(QUADRANTS, point.quadrants)
        )
        if total:
            terms[point.id] = sign * total
    return PointChain.from_dict(terms)


def boundary_matrix(d, region_ids=None):
    """Integer matrix of the alpha boundary map.

    Parameters
    ----------
    d : `HeegaardDiagram`
        Diagram.
    region_ids : `list` [`str`], optional
        Columns; all regions by default.

    Returns
    -------
    point_ids : `list` [`str`]
        Row labels, sorted.
    region_ids : `list` [`str`]
        Column labels.
    matrix : `numpy.ndarray`
        Object dtype matrix; entry (p, R) is the alpha chain coefficient of
        ``p`` for the domain ``R``.
    """
    point_ids = sorted(d.points)
    region_ids = list(d.regions) if region_ids is None else list(region_ids)
    column = {region_id: j for j, region_id in enumerate(region_ids)}
    matrix = np.zeros((len(point_ids), len(region_ids)), dtype=object)
    for i, point_id in enumerate(point_ids):
        point = d.points[point_id]
        for quadrant, region_id in zip(QUADRANTS, point.quadrants):
            if region_id in column:
                matrix[i, column[region_id]] += ALPHA_SIGN[quadrant]
    return point_ids, region_ids, matrix


def is_connecting(d, D, x, y):
    """True if ``D`` is in ``D(x, y)``, i.e. its alpha chain is ``x - y``."""
    return domain_boundary(d, D, "alpha") == PointChain.difference(x, y)


def _solve(d, x, y, region_ids):
    point_ids, region_ids, matrix = boundary_matrix(d, region_ids)
    target = PointChain.difference(x, y).as_dict()
    rhs = [target.get(point_id, 0) for point_id in point_ids]
    solution = integer_solve(matrix, rhs)
    if solution is None:
        return None
    return Domain.from_dict(dict(zip(region_ids, solution)))


def connecting_domains(d, x, y):
    """Solve ``∂(∂D ∩ α) = x - y`` and ``∂(∂D ∩ β) = y - x`` over the
    integers.

    A particular solution avoiding the suture and the basepoints is
    preferred when one exists.

    Returns
    -------
    result : `ConnectingDomains` or `None`
        The solution lattice, or `None` if the equations have no integer
        solution.
    """
    free = [region.id for region in d.regions.values() if region.is_free]
    particular = _solve(d, x, y, free)
    if particular is None:
        particular = _solve(d, x, y, None)
    if particular is None:
        return None
    return ConnectingDomains(particular, tuple(periodic_domains(d)))


def maslov_index(d, D, x, y):
    """Maslov index ``e(D) + n_x(D) + n_y(D)`` of a connecting domain.

    Raises
    ------
    DomainError
        If ``D`` is not in ``D(x, y)``.
    """
    if not is_connecting(d, D, x, y):
        raise DomainError(f"Domain {D.to_json()} does not connect {x} to {y}.")
    return euler_measure(d, D) + generator_measure(d, D, x) + generator_measure(d, D, y)


def periodic_domains(d):
    """Lattice basis of the domains with empty alpha and beta boundary."""
    _, region_ids, matrix = boundary_matrix(d)
    return [Domain.from_dict(dict(zip(region_ids, vector))) for vector in integer_kernel(matrix)]


def restricted_periodic_domains(d):
    """Lattice basis of the periodic domains vanishing on every region
    that touches the suture or carries a basepoint.
    """
    free = [region.id for region in d.regions.values() if region.is_free]
    _, region_ids, matrix = boundary_matrix(d, free)
    return [Domain.from_dict(dict(zip(region_ids, vector))) for vector in integer_kernel(matrix)]


def _rationalize(values):
    """Smallest common integer multiple of rounded floats."""
    fractions = [Fraction(float(value)).limit_denominator(10**6) for value in values]
    scale = math.lcm(*[value.denominator for value in fractions])
    return [int(value * scale) for value in fractions]


def _certify_vertex(matrix, x):
    """Exact nonnegative periodic vector near the LP solution ``x``, or
    `None`.
    """
    ncols = matrix.shape[1]
    support = [j for j in range(ncols) if x[j] > 1e-9]
    for vector in integer_kernel(matrix[:, support]):
        if all(value > 0 for value in vector) or all(value < 0 for value in vector):
            sign = 1 if vector[0] > 0 else -1
            full = [0] * ncols
            for j, value in zip(support, vector):
                full[j] = sign * value
            return full
    vector = _rationalize(x)
    periodic = not any(matrix.dot(np.array(vector, dtype=object)))
    if any(vector) and all(value >= 0 for value in vector) and periodic:
        return vector
    return None


def _certify_infeasible(matrix):
    """True if some ``y`` with ``A^T y > 0`` exactly is found, which rules
    out every nonzero ``c >= 0`` with ``A c = 0``.
    """
    nrows, ncols = matrix.shape
    if not nrows:
        return False
    result = optimize.linprog(
        np.zeros(nrows),
        A_ub=-matrix.T.astype(float),
        b_ub=-np.ones(ncols),
        bounds=[(None, None)] * nrows,
        method="highs",
    )
    if result.status != 0:
        return False
    y = np.array(_rationalize(result.x), dtype=object)
    return all(value > 0 for value in matrix.T.dot(y))


def positive_periodic_domain(d, log=None):
    """Find a nonzero periodic domain with nonnegative coefficients that
    avoids the suture and the basepoints.

    Linear programming over ``{c >= 0, A c = 0, sum(c) = 1}`` gives a
    candidate answer which is then certified exactly: a vertex by the
    integer kernel of its support, an empty polytope by a dual vector
    ``y`` with ``A^T y > 0``. When neither certificate holds the
    question is decided by `nonnegative_kernel_vector` in rational
    arithmetic.

    Returns
    -------
    domain : `Domain` or `None`
        Such a domain, or `None` if there is none.
    """
    log = log or logging.getLogger(__name__)
    free = [region.id for region in d.regions.values() if region.is_free]
    if not free:
        return None
    _, region_ids, matrix = boundary_matrix(d, free)
    nrows, ncols = matrix.shape
    a_eq = np.vstack([matrix.astype(float), np.ones((1, ncols))])
    b_eq = np.zeros(nrows + 1)
    b_eq[-1] = 1.0
    result = optimize.linprog(
        np.zeros(ncols), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * ncols, method="highs"
    )
    vector = None
    if result.status == 0:
        vector = _certify_vertex(matrix, result.x)
    elif result.status == 2 and _certify_infeasible(matrix):
        return None
    if vector is None:
        log.debug("Linear programming status %d not certified; solving exactly.", result.status)
        vector = nonnegative_kernel_vector(matrix)
        if vector is None:
            return None
    return Domain.from_dict(dict(zip(region_ids, vector)))


def check_admissible(d, log=None):
    """True if every nonzero periodic domain with zero coefficients on the
    suture and basepoint regions has both positive and negative
    coefficients.
    """
    domain = positive_periodic_domain(d, log=log)
    if domain is not None:
        (log or logging.getLogger(__name__)).debug("Positive periodic domain %s", domain.to_json())
    return domain is None
