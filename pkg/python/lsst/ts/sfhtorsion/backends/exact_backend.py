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

from ..utils.poly_f2 import (
    poly_degree,
    poly_divmod,
    poly_gcdex,
    poly_inverse_series,
    poly_mul,
    poly_truncate,
    poly_valuation,
)
from .base_backend import BaseBackend

__all__ = ["ExactBackend", "PolynomialReduction"]


@dataclasses.dataclass
class PolynomialReduction:
    """Diagonal form ``U D(u) V = diag(λ_0, ..., λ_{rank-1}, 0, ...)``.

    Attributes
    ----------
    diagonal : `list` [`int`]
        Nonzero diagonal entries ``λ_l``.
    rhs : `list` [`int`]
        ``U`` applied to the target vector, one polynomial per row.
    columns : `list` [`list` [`int`]]
        Rows of ``V``.
    """

    diagonal: list
    rhs: list
    columns: list


def _combine(first, second, coefficients):
    # (first, second) <- (p*first + q*second, r*first + s*second)
    p, q, r, s = coefficients
    new_first = [poly_mul(p, a) ^ poly_mul(q, b) for a, b in zip(first, second)]
    new_second = [poly_mul(r, a) ^ poly_mul(s, b) for a, b in zip(first, second)]
    return new_first, new_second


def _clearing_coefficients(pivot, entry):
    """Unimodular 2x2 coefficients that zero ``entry`` against ``pivot``."""
    quotient, remainder = poly_divmod(entry, pivot)
    if remainder == 0:
        return (1, 0, quotient, 1)
    g, s, t = poly_gcdex(pivot, entry)
    return (s, t, poly_divmod(entry, g)[0], poly_divmod(pivot, g)[0])


class ExactBackend(BaseBackend):
    """Decide boundary depth for every ``k`` at once over F2[u].

    With ``D(u) = Σ_i ∂_i u^i`` and ``Q(u) = Σ_m c_m u^(k-m)``, the chain
    ``(c_0, ..., c_k)`` bounds ``a`` at depth ``k`` exactly when
    ``D(u) Q(u) ≡ a u^k (mod u^(k+1))``. After diagonalizing ``D(u)`` by
    unimodular row and column operations each diagonal entry
    ``λ_l = u^v μ`` with ``μ(0) = 1`` imposes ``k ≥ v`` when the
    transformed target has a constant term in row ``l``; a row outside
    the rank with such a constant term can never be solved.
    """

    def __init__(self, log):
        super().__init__(log)
        self._reductions = dict()

    def reduce(self, fc, vector):
        """Diagonalize ``D(u)``, tracking the target ``vector``.

        Returns
        -------
        reduction : `PolynomialReduction`
            The reduction, cached per complex and vector.
        """
        key = (fc.names, fc.matrices, vector)
        if key in self._reductions:
            return self._reductions[key]

        n = fc.num_generators
        rows = [
            [
                sum(((fc.matrix(i)[j] >> t) & 1) << i for i in range(fc.max_level + 1))
                for j in range(n)
            ]
            for t in range(n)
        ]
        rhs = [(vector >> t) & 1 for t in range(n)]
        columns = [[int(i == j) for j in range(n)] for i in range(n)]

        def swap_columns(c1, c2):
            for matrix in (rows, columns):
                for row in matrix:
                    row[c1], row[c2] = row[c2], row[c1]

        def column_op(c1, c2, coefficients):
            for matrix in (rows, columns):
                for row in matrix:
                    (row[c1],), (row[c2],) = _combine([row[c1]], [row[c2]], coefficients)

        rank = 0
        for t in range(n):
            candidates = [
                (poly_degree(rows[r][c]), r, c) for r in range(t, n) for c in range(t, n) if rows[r][c]
            ]
            if not candidates:
                break
            _, r, c = min(candidates)
            rows[t], rows[r] = rows[r], rows[t]
            rhs[t], rhs[r] = rhs[r], rhs[t]
            swap_columns(t, c)
            while True:
                for r in range(t + 1, n):
                    if rows[r][t]:
                        coefficients = _clearing_coefficients(rows[t][t], rows[r][t])
                        rows[t], rows[r] = _combine(rows[t], rows[r], coefficients)
                        (rhs[t],), (rhs[r],) = _combine([rhs[t]], [rhs[r]], coefficients)
                for c in range(t + 1, n):
                    if rows[t][c]:
                        column_op(t, c, _clearing_coefficients(rows[t][t], rows[t][c]))
                if not any(rows[r][t] for r in range(t + 1, n)):
                    break
            rank = t + 1

        reduction = PolynomialReduction([rows[l][l] for l in range(rank)], rhs, columns)
        self._reductions[key] = reduction
        self.log.debug("Reduced D(u) for %d generators to rank %d.", n, rank)
        return reduction

    def threshold(self, fc, vector):
        reduction = self.reduce(fc, vector)
        rank = len(reduction.diagonal)
        if any(value & 1 for value in reduction.rhs[rank:]):
            return None
        thresholds = [
            poly_valuation(diagonal) if target & 1 else 0
            for diagonal, target in zip(reduction.diagonal, reduction.rhs)
        ]
        return max(thresholds, default=0)

    def solve(self, fc, vector, k):
        threshold = self.threshold(fc, vector)
        if threshold is None or k < threshold:
            return None
        reduction = self.reduce(fc, vector)
        n = fc.num_generators
        length = k + 1
        solution = [0] * n
        for l, (diagonal, target) in enumerate(zip(reduction.diagonal, reduction.rhs)):
            valuation = poly_valuation(diagonal)
            if valuation > k:
                continue
            unit_inverse = poly_inverse_series(diagonal >> valuation, length)
            shifted = poly_mul(target, 1 << (k - valuation))
            solution[l] = poly_truncate(poly_mul(shifted, unit_inverse), length)
        chain = [0] * length
        for j in range(n):
            q = 0
            for l in range(n):
                q ^= poly_mul(reduction.columns[j][l], solution[l])
            q = poly_truncate(q, length)
            for m in range(length):
                if (q >> (k - m)) & 1:
                    chain[m] |= 1 << j
        return tuple(chain)
