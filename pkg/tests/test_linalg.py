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

import unittest
from fractions import Fraction

import jsonschema
import numpy as np
import pytest
from lsst.ts.sfhtorsion import CONFIG_SCHEMA
from lsst.ts.sfhtorsion.utils import (
    DefaultingValidator,
    bit_indices,
    convolution_failures,
    exgcd,
    f2_apply,
    f2_compose,
    f2_image_basis,
    f2_kernel_basis,
    f2_rank,
    f2_solve,
    format_generator_shorthand,
    fraction_to_json,
    integer_kernel,
    integer_solve,
    nonnegative_kernel_vector,
    normal_form,
    parse_generator_shorthand,
    poly_divmod,
    poly_gcdex,
    poly_inverse_series,
    poly_mul,
    poly_valuation,
)


class F2LinalgTestCase(unittest.TestCase):
    def test_bit_indices(self):
        assert bit_indices(0) == []
        assert bit_indices(0b10110) == [1, 2, 4]

    def test_apply_and_compose(self):
        # columns of [[1, 1], [0, 1]]
        columns = [0b01, 0b11]
        assert f2_apply(columns, 0b10) == 0b11
        assert f2_apply(columns, 0b11) == 0b10
        assert f2_compose(columns, columns) == [0b01, 0b10]

    def test_solve(self):
        columns = [0b011, 0b110]
        solution = f2_solve(columns, 0b101)
        assert solution == 0b11
        assert f2_apply(columns, solution) == 0b101
        assert f2_solve(columns, 0b001) is None
        assert f2_solve(columns, 0) == 0

    def test_solve_checks_rows(self):
        with pytest.raises(ValueError):
            f2_solve([0b1000], 0b1, nrows=3)
        with pytest.raises(ValueError):
            f2_solve([0b1], 0b1000, nrows=3)

    def test_rank_and_kernel(self):
        columns = [0b011, 0b110, 0b101, 0b000]
        assert f2_rank(columns) == 2
        kernel = f2_kernel_basis(columns)
        assert len(kernel) == 2
        for combination in kernel:
            assert f2_apply(columns, combination) == 0
        basis = f2_image_basis(columns)
        assert len(basis) == 2
        assert f2_rank(basis + columns) == 2

    def test_convolution_failures(self):
        # d_0 squares to zero but d_0 d_1 + d_1 d_0 does not
        d0 = [0, 0b001, 0]
        d1 = [0, 0, 0b010]
        assert convolution_failures([d0]) == []
        assert convolution_failures([d0, d1]) == [1]
        assert convolution_failures([]) == []


class IntegerLinalgTestCase(unittest.TestCase):
    def test_exgcd(self):
        for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0), (3, -9)]:
            M = exgcd(a, b)
            assert M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0] == 1
            result = M @ np.array([a, b], dtype=object)
            assert abs(result[0]) == np.gcd(a, b)
            assert result[1] == 0

    def test_normal_form(self):
        A = np.array([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], dtype=object)
        S, D, T, Sinv, Tinv = normal_form(A)
        assert (S @ D @ T == A).all()
        assert (S @ Sinv == np.eye(3, dtype=object)).all()
        assert (Tinv @ T == np.eye(3, dtype=object)).all()
        for i in range(3):
            for j in range(3):
                if i != j:
                    assert D[i, j] == 0

    def test_kernel(self):
        A = np.array([[1, 1, 0, 0], [0, 1, -1, 0]], dtype=object)
        kernel = integer_kernel(A)
        assert len(kernel) == 2
        for vector in kernel:
            assert not any(A.dot(np.array(vector, dtype=object)))

    def test_solve(self):
        A = np.array([[2, 0], [0, 3]], dtype=object)
        assert integer_solve(A, [4, 9]) == [2, 3]
        assert integer_solve(A, [1, 0]) is None
        with pytest.raises(ValueError):
            integer_solve(A, [1])

    def test_nonnegative_kernel_vector(self):
        assert nonnegative_kernel_vector(np.array([[1, -1, 0], [0, 1, -1]], dtype=object)) == [1, 1, 1]
        assert nonnegative_kernel_vector(np.array([[1, -2]], dtype=object)) == [2, 1]
        assert nonnegative_kernel_vector(np.array([[1, 1]], dtype=object)) is None
        assert nonnegative_kernel_vector(np.array([[1, 0], [0, -1]], dtype=object)) is None
        assert nonnegative_kernel_vector(np.zeros((1, 0), dtype=object)) is None

        A = np.array([[1, 1, -1], [2, -1, 0]], dtype=object)
        vector = nonnegative_kernel_vector(A)
        assert vector == [1, 2, 3]
        assert not any(A.dot(np.array(vector, dtype=object)))

        vector = nonnegative_kernel_vector(np.zeros((0, 2), dtype=object))
        assert sum(vector) == 1 and min(vector) == 0


class PolyF2TestCase(unittest.TestCase):
    def test_mul_divmod(self):
        # (1 + u) * (1 + u) = 1 + u^2
        assert poly_mul(0b11, 0b11) == 0b101
        quotient, remainder = poly_divmod(0b1011, 0b11)
        assert poly_mul(quotient, 0b11) ^ remainder == 0b1011
        assert remainder.bit_length() < 2
        with pytest.raises(ZeroDivisionError):
            poly_divmod(1, 0)

    def test_gcdex(self):
        a, b = poly_mul(0b11, 0b111), poly_mul(0b11, 0b1011)
        g, s, t = poly_gcdex(a, b)
        assert g == 0b11
        assert poly_mul(s, a) ^ poly_mul(t, b) == g

    def test_valuation_and_inverse(self):
        assert poly_valuation(0) is None
        assert poly_valuation(0b1100) == 2
        inverse = poly_inverse_series(0b11, 8)
        assert inverse == 0xFF
        assert poly_mul(inverse, 0b11) & 0xFF == 1
        with pytest.raises(ValueError):
            poly_inverse_series(0b10, 4)


class ConversionTestCase(unittest.TestCase):
    def test_shorthand(self):
        assert parse_generator_shorthand("( 9, 11,2,3,2 )") == (9, 11, 2, 3, 2)
        assert format_generator_shorthand((1, 2, 2, 1, 1)) == "(1,2,2,1,1)"
        with pytest.raises(ValueError):
            parse_generator_shorthand("x1y1")

    def test_fraction_to_json(self):
        assert fraction_to_json(Fraction(3, 4)) == "3/4"
        assert fraction_to_json(2) == 2


class DefaultingValidatorTestCase(unittest.TestCase):
    def test_defaults(self):
        validator = DefaultingValidator(CONFIG_SCHEMA)
        data = {"cap": 3}
        result = validator.validate(data)
        assert result["cap"] == 3
        assert result["exact"] is False
        assert result["backend"] == "iterative"
        assert result["page_window"] == {"r_max": 8, "p_max": 8}
        assert data == {"cap": 3}
        assert validator.validate(None)["cap"] == 64

    def test_invalid(self):
        validator = DefaultingValidator(CONFIG_SCHEMA)
        with pytest.raises(jsonschema.ValidationError):
            validator.validate({"cap": -1})
        with pytest.raises(jsonschema.ValidationError):
            validator.validate({"colour": "red"})
        with pytest.raises(jsonschema.SchemaError):
            DefaultingValidator({"type": 12})
