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
    "parse_generator_shorthand",
    "format_generator_shorthand",
    "fraction_to_json",
    "names_to_vector",
    "vector_to_names",
]

import re
from fractions import Fraction

from .f2_linalg import bit_indices

_SHORTHAND_RE = re.compile(r"^\(\s*\d+(\s*,\s*\d+)*\s*\)$")


def parse_generator_shorthand(text):
    """Parse the tuple shorthand ``(i,j,k,l,m)`` of a generator.

    Parameters
    ----------
    text : `str`
        Shorthand such as ``"(9,11,2,3,2)"``; whitespace is allowed.

    Returns
    -------
    indices : `tuple` [`int`]
        The point indices, one per alpha curve.

    Raises
    ------
    ValueError
        If ``text`` is not in shorthand form.
    """
    if not _SHORTHAND_RE.match(text.strip()):
        raise ValueError(f"{text!r} is not a generator shorthand like '(1,2,2,1,1)'.")
    return tuple(int(item) for item in text.strip()[1:-1].split(","))


def format_generator_shorthand(indices):
    """Format point indices in the canonical shorthand, without spaces."""
    return "(" + ",".join(str(index) for index in indices) + ")"


def fraction_to_json(value):
    """Convert an exact rational to an `int` if integral, else a string
    such as ``"1/4"``.
    """
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def names_to_vector(names, index):
    """Convert generator names to an F2 bitset.

    Parameters
    ----------
    names : iterable of `str`
        Generator names; a name listed twice cancels.
    index : `dict` [`str`, `int`]
        Position of every generator name.

    Raises
    ------
    KeyError
        If a name is unknown.
    """
    vector = 0
    for name in names:
        if name not in index:
            raise KeyError(f"Unknown generator {name!r}.")
        vector ^= 1 << index[name]
    return vector


def vector_to_names(vector, names):
    """Convert an F2 bitset to the list of generator names in its
    support, in generator order.
    """
    return [names[i] for i in bit_indices(vector)]
