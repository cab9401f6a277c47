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

import abc

__all__ = ["BaseBackend"]


class BaseBackend(abc.ABC):
    """Base class for boundary depth backends.

    A backend decides whether a level 0 vector ``a`` lies in
    ``B^k_0 = F_0 C ∩ ∂̂ F_k C``, i.e. whether there are ``c_0, ..., c_k``
    with ``Σ_{i=0}^{k} ∂_i c_i = a`` and ``Σ_{i=0}^{k-j} ∂_i c_{i+j} = 0``
    for ``j > 0``.

    Parameters
    ----------
    log : `logging.Logger`
        Parent logger.
    """

    def __init__(self, log):
        self.log = log.getChild(type(self).__name__)

    @abc.abstractmethod
    def solve(self, fc, vector, k):
        """Find a chain ``(c_0, ..., c_k)`` bounding ``vector`` at depth
        ``k``.

        Parameters
        ----------
        fc : `FilteredComplex`
            The complex.
        vector : `int`
            Level 0 vector as a bitset over the generators.
        k : `int`
            Boundary depth.

        Returns
        -------
        witness : `tuple` [`int`] or `None`
            The chain, or `None` if ``vector`` is not in ``B^k_0``.
        """
        raise NotImplementedError()

    def threshold(self, fc, vector):
        """Smallest ``k`` with ``vector`` in ``B^k_0``, if the backend can
        decide it without a bound.

        Returns
        -------
        k : `int` or `None`
            The threshold, or `None` if ``vector`` is in no ``B^k_0``.

        Raises
        ------
        NotImplementedError
            If the backend only answers one ``k`` at a time.
        """
        raise NotImplementedError(f"{type(self).__name__} cannot decide boundary depth without a bound.")
