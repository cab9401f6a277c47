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
    "bit_indices",
    "f2_apply",
    "f2_compose",
    "f2_reduce",
    "f2_solve",
    "f2_image_basis",
    "f2_kernel_basis",
    "f2_rank",
    "convolution_failures",
]

# Vectors are Python integers used as bitsets: bit i is the coefficient of
# basis vector i. A matrix is a sequence of column bitsets, so columns[j] is
# the image of basis vector j.


def bit_indices(vector):
    """Return the indices of the set bits of ``vector``, in increasing
    order.

    Parameters
    ----------
    vector : `int`
        F2 vector as a bitset.

    Returns
    -------
    indices : `list` [`int`]
        Indices of the nonzero coefficients.
    """
    indices = []
    while vector:
        low = vector & -vector
        indices.append(low.bit_length() - 1)
        vector ^= low
    return indices


def f2_apply(columns, vector):
    """Apply the matrix given by ``columns`` to ``vector``."""
    result = 0
    for j in bit_indices(vector):
        result ^= columns[j]
    return result


def f2_compose(left, right):
    """Return the columns of the product ``left @ right``."""
    return [f2_apply(left, column) for column in right]


def f2_reduce(columns):
    """Eliminate a list of columns, tracking which columns were combined.

    Pivots are the highest set bit of each reduced vector and are
    assigned in column order, so the result is deterministic.

    Parameters
    ----------
    columns : `list` [`int`]
        Matrix columns as bitsets.

    Returns
    -------
    pivots : `dict` [`int`, `tuple`]
        Maps pivot bit to ``(vector, combination)`` where ``vector`` is the
        sum of the columns selected by the ``combination`` bitset.
    kernel : `list` [`int`]
        Combination bitsets of columns summing to zero; a basis of the
        kernel.
    """
    pivots = dict()
    kernel = []
    for j, column in enumerate(columns):
        vector, combination = column, 1 << j
        while vector:
            top = vector.bit_length() - 1
            if top not in pivots:
                pivots[top] = (vector, combination)
                break
            pivot_vector, pivot_combination = pivots[top]
            vector ^= pivot_vector
            combination ^= pivot_combination
        else:
            kernel.append(combination)
    return pivots, kernel


def _check_rows(columns, nrows, extra=0):
    if nrows is None:
        return
    limit = 1 << nrows
    for j, column in enumerate(columns):
        if column < 0 or column >= limit:
            raise ValueError(f"Column {j} has entries outside the {nrows} rows of the matrix.")
    if extra < 0 or extra >= limit:
        raise ValueError(f"Right hand side has entries outside the {nrows} rows of the matrix.")


def f2_solve(columns, rhs, nrows=None):
    """Solve ``A x = rhs`` over F2.

    Parameters
    ----------
    columns : `list` [`int`]
        Columns of ``A`` as bitsets.
    rhs : `int`
        Right hand side as a bitset.
    nrows : `int`, optional
        Number of rows of ``A``. If given, columns and right hand side are
        checked against it.

    Returns
    -------
    solution : `int` or `None`
        A bitset ``x`` over the columns with ``A x = rhs``, or `None` if the
        system is inconsistent.

    Raises
    ------
    ValueError
        If ``nrows`` is given and an entry lies outside it.
    """
    _check_rows(columns, nrows, rhs)
    pivots, _ = f2_reduce(columns)
    solution = 0
    while rhs:
        top = rhs.bit_length() - 1
        if top not in pivots:
            return None
        pivot_vector, pivot_combination = pivots[top]
        rhs ^= pivot_vector
        solution ^= pivot_combination
    return solution


def f2_image_basis(columns):
    """Return a basis of the column span, sorted by pivot bit."""
    pivots, _ = f2_reduce(columns)
    return [pivots[top][0] for top in sorted(pivots)]


def f2_kernel_basis(columns):
    """Return a basis of the kernel as combination bitsets."""
    return f2_reduce(columns)[1]


def f2_rank(columns):
    """Rank of the column span."""
    return len(f2_reduce(columns)[0])


def convolution_failures(matrices):
    """Levels at which the split differential fails to square to zero.

    For a differential split as ``d_0 + d_1 + ... + d_I`` the filtered
    total differential squares to zero if and only if for every ``n``
    the sum of ``d_i d_j`` over ``i + j = n`` vanishes.

    Parameters
    ----------
    matrices : `list` [`list` [`int`]]
        ``matrices[r]`` holds the columns of ``d_r``; all have the same
        number of columns.

    Returns
    -------
    levels : `list` [`int`]
        The levels ``n`` with a nonzero sum, in increasing order.
    """
    if not matrices:
        return []
    ngens = len(matrices[0])
    max_level = len(matrices) - 1
    failures = []
    for n in range(2 * max_level + 1):
        total = [0] * ngens
        for i in range(max(0, n - max_level), min(n, max_level) + 1):
            product = f2_compose(matrices[i], matrices[n - i])
            total = [a ^ b for a, b in zip(total, product)]
        if any(total):
            failures.append(n)
    return failures
