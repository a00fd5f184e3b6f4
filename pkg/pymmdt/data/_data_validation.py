"""
 Copyright (C) Stichting Deltares 2024. All rights reserved.
 
 This file is part of the pymmdt toolbox.
 
 This program is free software; you can redistribute it and/or modify it under the terms of
 the GNU Lesser General Public License as published by the Free Software Foundation; either
 version 3 of the License, or (at your option) any later version.
 
 This program is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY;
 without even the implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.
 See the GNU Lesser General Public License for more details.
 
 You should have received a copy of the GNU Lesser General Public License along with this
 program; if not, see <https://www.gnu.org/licenses/>.
 
 All names, logos, and references to "Deltares" are registered trademarks of Stichting
 Deltares and remain full property of Stichting Deltares at all times. All rights reserved.
"""

import numpy as numpy


def validate_finite(values: numpy.ndarray, parameter_name: str):
    """
    This method validates whether all specified values are finite.

    Args:
        values (numpy.ndarray): The values to check.
        parameter_name (str): Name of the parameter (used in the error message).

    Raises:
        ValueError: In case one of the values is NaN or infinite.
    """
    if not numpy.all(numpy.isfinite(values)):
        raise ValueError("All values of {0} should be finite.".format(parameter_name))


def validate_sparse_indices(indices: numpy.ndarray, dimension: int):
    """
    This method validates the indices of a sparse vector.

    Args:
        indices (numpy.ndarray): Zero-based indices of the stored values.
        dimension (int): The declared dimension of the vector.

    Raises:
        ValueError: In case the indices are not strictly increasing.
        ValueError: In case an index is negative or not smaller than the dimension.
    """
    if len(indices) == 0:
        return
    if numpy.any(numpy.diff(indices) <= 0):
        raise ValueError("Sparse indices should be strictly increasing.")
    if indices[0] < 0 or indices[-1] >= dimension:
        raise ValueError(
            "Sparse indices should lie in [0, {0}), found [{1}, {2}].".format(
                dimension, indices[0], indices[-1]
            )
        )


def validate_matrix_shape(
    matrix: numpy.ndarray, parameter_name: str, rows: int | None, columns: int | None
):
    """
    This method validates whether a matrix is two-dimensional and has the expected shape.

    Args:
        matrix (numpy.ndarray): The matrix to check.
        parameter_name (str): Name of the parameter (used in the error message).
        rows (int | None): Expected number of rows, None to accept any.
        columns (int | None): Expected number of columns, None to accept any.

    Raises:
        ValueError: In case the matrix is not two-dimensional or its shape differs.
    """
    if matrix.ndim != 2:
        raise ValueError(
            "{0} should be a matrix, found {1} dimension(s).".format(
                parameter_name, matrix.ndim
            )
        )
    if (rows is not None and matrix.shape[0] != rows) or (
        columns is not None and matrix.shape[1] != columns
    ):
        raise ValueError(
            "{0} should have shape ({1}, {2}), found {3}.".format(
                parameter_name,
                "*" if rows is None else rows,
                "*" if columns is None else columns,
                matrix.shape,
            )
        )


def validate_equal_dimensions(
    first_dimension: int,
    second_dimension: int,
    first_parameter_name: str,
    second_parameter_name: str,
):
    """
    This method validates whether two dimensions are equal.

    Raises:
        ValueError: In case the dimensions differ.
    """
    if first_dimension != second_dimension:
        raise ValueError(
            "{0} ({1}) should be equal to {2} ({3})".format(
                first_parameter_name,
                first_dimension,
                second_parameter_name,
                second_dimension,
            )
        )


def as_float_array(values, ndim: int) -> numpy.ndarray:
    """
    Converts the specified values to a read-only float64 numpy array with the expected
    number of dimensions.
    """
    array = numpy.array(values, dtype=numpy.float64)
    if array.ndim != ndim:
        raise ValueError(
            "Expected an array with {0} dimension(s), found {1}.".format(
                ndim, array.ndim
            )
        )
    array.flags.writeable = False
    return array
