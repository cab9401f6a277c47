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
    "poly_degree",
    "poly_valuation",
    "poly_mul",
    "poly_divmod",
    "poly_gcdex",
    "poly_inverse_series",
    "poly_truncate",
]

# Polynomials over F2 in one variable u are Python integers: bit i is the
# coefficient of u**i.


def poly_degree(a):
    """Degree of ``a``; -1 for the zero polynomial."""
    return a.bit_length() - 1


def poly_valuation(a):
    """Largest ``v`` with ``u**v`` dividing ``a``; `None` for zero."""
    if a == 0:
        return None
    return (a & -a).bit_length() - 1


def poly_mul(a, b):
    """Product of two polynomials (carry-less multiplication)."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_divmod(a, b):
    """Quotient and remainder of ``a`` by a nonzero ``b``."""
    if b == 0:
        raise ZeroDivisionError("Polynomial division by zero.")
    quotient = 0
    degree_b = poly_degree(b)
    while poly_degree(a) >= degree_b:
        shift = poly_degree(a) - degree_b
        quotient ^= 1 << shift
        a ^= b << shift
    return quotient, a


def poly_gcdex(a, b):
    """Extended Euclid: return ``(g, s, t)`` with ``s*a + t*b = g``.

    ``g`` is the monic gcd (over F2 every nonzero polynomial is monic).
    """
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q, remainder = poly_divmod(old_r, r)
        old_r, r = r, remainder
        old_s, s = s, old_s ^ poly_mul(q, s)
        old_t, t = t, old_t ^ poly_mul(q, t)
    return old_r, old_s, old_t


def poly_truncate(a, length):
    """Reduce ``a`` modulo ``u**length``."""
    return a & ((1 << length) - 1)


def poly_inverse_series(a, length):
    """Inverse of ``a`` modulo ``u**length``.

    Parameters
    ----------
    a : `int`
        Polynomial with constant term 1.
    length : `int`
        Number of power series coefficients to compute.

    Raises
    ------
    ValueError
        If ``a`` is not a unit of the power series ring.
    """
    if not a & 1:
        raise ValueError("Only polynomials with constant term 1 are invertible as power series.")
    inverse = 1
    for n in range(1, length):
        # Coefficient n of a * inverse must vanish.
        coefficient = 0
        for i in range(1, n + 1):
            coefficient ^= ((a >> i) & 1) & ((inverse >> (n - i)) & 1)
        inverse |= coefficient << n
    return poly_truncate(inverse, length)
