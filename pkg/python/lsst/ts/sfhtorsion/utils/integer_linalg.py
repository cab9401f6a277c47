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

import math
from fractions import Fraction

import numpy as np

__all__ = ["exgcd", "normal_form", "integer_kernel", "integer_solve", "nonnegative_kernel_vector"]


def exgcd(a, b):
    """Extended gcd as a unimodular row operation.

    Parameters
    ----------
    a : `int`
        First entry.
    b : `int`
        Second entry.

    Returns
    -------
    M : `numpy.ndarray`
        2x2 integer matrix (object dtype) of determinant 1 with
        ``M @ [a, b] = [gcd(a, b), 0]``.
    """
    a_sign = -1 if a < 0 else 1
    b_sign = -1 if b < 0 else 1
    a *= a_sign
    b *= b_sign

    # Euclid on the column [b, a], augmented by the identity to record the
    # row operations.
    M = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]
    g = M[0, 0]
    M = M[:, 1:] * np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    else:
        M = np.eye(2, dtype=object)
    return M


def _inverse_2x2(M):
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


def normal_form(A):
    """Diagonalize an integer matrix with unimodular row and column
    operations.

    The diagonal carries no divisibility guarantee, which is all that is
    needed to solve linear systems and compute kernels over the integers.

    Parameters
    ----------
    A : `numpy.ndarray`
        Integer matrix, shape (m, n).

    Returns
    -------
    S, D, T, Sinv, Tinv : `numpy.ndarray`
        Object dtype matrices with ``A == S @ D @ T``, ``D`` diagonal of
        the shape of ``A``, and ``S @ Sinv`` and ``Tinv @ T`` identities.
    """
    D = np.array(A, dtype=object).reshape(np.shape(A))
    nrows, ncols = D.shape
    S, T = np.eye(nrows, dtype=object), np.eye(ncols, dtype=object)
    Sinv, Tinv = S.copy(), T.copy()

    def clear_row(i):
        if all(D[i, j] == 0 for j in range(i + 1, ncols)):
            return False
        for j in range(i + 1, ncols):
            M = exgcd(D[i, i], D[i, j]).T
            D[:, [i, j]] = D[:, [i, j]] @ M
            T[[i, j]] = _inverse_2x2(M) @ T[[i, j]]
            Tinv[:, [i, j]] = Tinv[:, [i, j]] @ M
        return True

    def clear_col(i):
        if all(D[j, i] == 0 for j in range(i + 1, nrows)):
            return False
        for j in range(i + 1, nrows):
            M = exgcd(D[i, i], D[j, i])
            D[[i, j]] = M @ D[[i, j]]
            S[:, [i, j]] = S[:, [i, j]] @ _inverse_2x2(M)
            Sinv[[i, j]] = M @ Sinv[[i, j]]
        return True

    for i in range(min(nrows, ncols)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass
    return S, D, T, Sinv, Tinv


def _diagonal(D, length):
    diagonal = [D[i, i] for i in range(min(D.shape))]
    return diagonal + [0] * (length - len(diagonal))


def integer_kernel(A):
    """Return a lattice basis of the integer kernel of ``A``.

    Parameters
    ----------
    A : `numpy.ndarray`
        Integer matrix, shape (m, n).

    Returns
    -------
    basis : `list` [`list` [`int`]]
        Basis vectors of length n.
    """
    _, D, _, _, Tinv = normal_form(A)
    ncols = D.shape[1]
    diagonal = _diagonal(D, ncols)
    return [[int(Tinv[i, j]) for i in range(ncols)] for j in range(ncols) if diagonal[j] == 0]


def integer_solve(A, b):
    """Find an integer solution of ``A x = b``.

    Parameters
    ----------
    A : `numpy.ndarray`
        Integer matrix, shape (m, n).
    b : `list` [`int`]
        Right hand side of length m.

    Returns
    -------
    x : `list` [`int`] or `None`
        A solution of length n, or `None` if there is no integer solution.
        Free coordinates of the diagonal system are set to zero.
    """
    _, D, _, Sinv, Tinv = normal_form(A)
    nrows, ncols = D.shape
    if len(b) != nrows:
        raise ValueError(f"Right hand side has length {len(b)}; expected {nrows}.")
    rhs = Sinv @ np.array(b, dtype=object).reshape(nrows) if nrows else np.zeros(0, dtype=object)
    y = [0] * ncols
    for i in range(nrows):
        d = D[i, i] if i < ncols else 0
        if d == 0:
            if rhs[i] != 0:
                return None
            continue
        q, r = divmod(rhs[i], d)
        if r != 0:
            return None
        y[i] = q
    if not ncols:
        return []
    x = Tinv @ np.array(y, dtype=object)
    return [int(value) for value in x]


def _pivot(rows, cost, basis, i, j):
    pivot = rows[i][j]
    rows[i] = [value / pivot for value in rows[i]]
    for k, row in enumerate(rows):
        if k != i and row[j] != 0:
            factor = row[j]
            rows[k] = [value - factor * p for value, p in zip(row, rows[i])]
    factor = cost[j]
    cost[:] = [value - factor * p for value, p in zip(cost, rows[i])]
    basis[i] = j


def nonnegative_kernel_vector(A):
    """Find a nonzero integer vector ``c >= 0`` with ``A c = 0``.

    Decided exactly: phase one of the simplex method on
    ``{A c = 0, sum(c) = 1, c >= 0}`` in rational arithmetic, with
    Bland's rule so that it terminates.

    Parameters
    ----------
    A : `numpy.ndarray`
        Integer matrix, shape (m, n).

    Returns
    -------
    c : `list` [`int`] or `None`
        A primitive solution of length n, or `None` if there is none.
    """
    A = np.asarray(A, dtype=object)
    nrows, ncols = A.shape
    if not ncols:
        return None
    size = nrows + 1
    rows = []
    for i in range(size):
        coefficients = [Fraction(int(A[i, j])) for j in range(ncols)] if i < nrows else [Fraction(1)] * ncols
        artificial = [Fraction(int(k == i)) for k in range(size)]
        rows.append(coefficients + artificial + [Fraction(int(i == nrows))])
    cost = [-sum(row[j] for row in rows) for j in range(ncols)] + [Fraction(0)] * size
    cost.append(-sum(row[-1] for row in rows))
    basis = [ncols + i for i in range(size)]

    while True:
        entering = next((j for j in range(ncols + size) if cost[j] < 0), None)
        if entering is None:
            break
        candidates = [
            (row[-1] / row[entering], basis[i], i) for i, row in enumerate(rows) if row[entering] > 0
        ]
        _, _, leaving = min(candidates)
        _pivot(rows, cost, basis, leaving, entering)

    if cost[-1] != 0:
        return None
    solution = [Fraction(0)] * ncols
    for i, j in enumerate(basis):
        if j < ncols:
            solution[j] = rows[i][-1]
    scale = math.lcm(*[value.denominator for value in solution])
    vector = [int(value * scale) for value in solution]
    divisor = math.gcd(*vector)
    return [value // divisor for value in vector]
