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

from ..utils.f2_linalg import f2_solve
from .base_backend import BaseBackend

__all__ = ["IterativeBackend"]


class IterativeBackend(BaseBackend):
    """Solve the boundary depth equations for one ``k`` at a time as a
    single F2 system over the stacked unknowns ``c_0, ..., c_k``.

    Unknown ``(m, g)`` (generator ``g`` of ``c_m``) has index ``m * N + g``
    and the equation for output level ``j`` occupies rows ``j * N`` to
    ``j * N + N - 1``.
    """

    def stacked_columns(self, fc, k):
        """Columns of the stacked system for depth ``k``."""
        ngens = fc.num_generators
        columns = []
        for m in range(k + 1):
            for g in range(ngens):
                column = 0
                for i in range(min(m, fc.max_level) + 1):
                    column |= fc.matrix(i)[g] << ((m - i) * ngens)
                columns.append(column)
        return columns

    def solve(self, fc, vector, k):
        ngens = fc.num_generators
        solution = f2_solve(self.stacked_columns(fc, k), vector, nrows=(k + 1) * ngens)
        if solution is None:
            self.log.debug("No chain of depth %d.", k)
            return None
        mask = (1 << ngens) - 1
        return tuple((solution >> (m * ngens)) & mask for m in range(k + 1))
