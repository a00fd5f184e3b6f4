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

from __future__ import annotations
import numpy as numpy
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pymmdt.data import _data_validation as data_validation


class FeatureVector(BaseModel):
    """
    A single feature vector, stored either dense (all values) or sparse (sorted
    zero-based indices with their values). Instances are immutable.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dimension: int = Field(gt=0)
    """The declared dimension of the vector - instance variable."""
    values: numpy.ndarray
    """The stored values (all values for a dense vector) - instance variable."""
    indices: numpy.ndarray | None = None
    """Zero-based indices of the stored values, None for a dense vector - instance variable."""

    @model_validator(mode="before")
    @classmethod
    def validate_values_and_indices(cls, values):
        vector_values = data_validation.as_float_array(values.get("values"), 1)
        data_validation.validate_finite(vector_values, "values")
        indices = values.get("indices")
        if indices is None:
            dimension = values.get("dimension", len(vector_values))
            data_validation.validate_equal_dimensions(
                len(vector_values), dimension, "number of values", "dimension"
            )
        else:
            indices = numpy.array(indices, dtype=numpy.int64)
            if indices.shape != vector_values.shape:
                raise ValueError("Sparse indices and values should have equal length.")
            dimension = values.get("dimension")
            if dimension is None:
                raise ValueError("A sparse vector requires a declared dimension.")
            data_validation.validate_sparse_indices(indices, dimension)
            indices.flags.writeable = False
        return {"dimension": dimension, "values": vector_values, "indices": indices}

    @classmethod
    def dense(cls, values) -> FeatureVector:
        """
        Creates a dense feature vector.

        Args:
            values (array-like): All values of the vector.

        Returns:
            FeatureVector: The dense vector.
        """
        return cls(values=values)

    @classmethod
    def sparse(cls, indices, values, dimension: int) -> FeatureVector:
        """
        Creates a sparse feature vector.

        Args:
            indices (array-like): Strictly increasing zero-based indices.
            values (array-like): The values at these indices.
            dimension (int): The declared dimension.

        Returns:
            FeatureVector: The sparse vector.
        """
        return cls(indices=indices, values=values, dimension=dimension)

    @property
    def is_sparse(self) -> bool:
        return self.indices is not None

    def to_dense(self) -> numpy.ndarray:
        """
        Returns:
            numpy.ndarray: All values of the vector, including zeros.
        """
        if not self.is_sparse:
            return self.values
        dense = numpy.zeros(self.dimension)
        dense[self.indices] = self.values
        return dense

    def dot_dense(self, other: numpy.ndarray) -> float:
        """
        Inner product with a dense vector of the same dimension (no dimension check).
        """
        if self.is_sparse:
            return float(self.values @ other[self.indices])
        return float(self.values @ other)

    def dot_rows(self, matrix: numpy.ndarray) -> numpy.ndarray:
        """
        Inner products of this vector with every row of the specified matrix.

        Args:
            matrix (numpy.ndarray): Matrix with `dimension` columns.

        Returns:
            numpy.ndarray: One inner product per row.
        """
        if self.is_sparse:
            return matrix[:, self.indices] @ self.values
        return matrix @ self.values

    def add_scaled_to(self, target: numpy.ndarray, scale: float):
        """
        Adds scale times this vector to the (writeable) dense target, in place.
        """
        if self.is_sparse:
            target[self.indices] += scale * self.values
        else:
            target += scale * self.values

    def with_bias(self) -> FeatureVector:
        """
        Returns:
            FeatureVector: This vector with a constant 1 feature appended.
        """
        if self.is_sparse:
            return FeatureVector.sparse(
                numpy.append(self.indices, self.dimension),
                numpy.append(self.values, 1.0),
                self.dimension + 1,
            )
        return FeatureVector.dense(numpy.append(self.values, 1.0))

    def squared_norm(self) -> float:
        return float(self.values @ self.values)


def dot(a: FeatureVector, b: FeatureVector | numpy.ndarray) -> float:
    """
    Inner product of a feature vector with another feature vector or a dense vector.

    Args:
        a (FeatureVector): The first vector.
        b (FeatureVector | numpy.ndarray): The second vector.

    Raises:
        ValueError: In case the dimensions of both vectors differ.

    Returns:
        float: The inner product.
    """
    if isinstance(b, FeatureVector):
        data_validation.validate_equal_dimensions(
            a.dimension, b.dimension, "dimension of a", "dimension of b"
        )
        if a.is_sparse and b.is_sparse:
            _, a_positions, b_positions = numpy.intersect1d(
                a.indices, b.indices, assume_unique=True, return_indices=True
            )
            return float(a.values[a_positions] @ b.values[b_positions])
        if a.is_sparse:
            return a.dot_dense(b.to_dense())
        return b.dot_dense(a.values)

    other = numpy.asarray(b, dtype=numpy.float64)
    if other.ndim != 1:
        raise ValueError("A dense vector should be one-dimensional.")
    data_validation.validate_equal_dimensions(
        a.dimension, len(other), "dimension of a", "dimension of b"
    )
    return a.dot_dense(other)


def squared_norm(a: FeatureVector) -> float:
    """
    Returns:
        float: The squared Euclidean norm of the vector.
    """
    return a.squared_norm()
