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
from enum import Enum
import numpy as numpy
import scipy.sparse as sparse
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pymmdt.data._featurevector import FeatureVector


class DomainTag(Enum):
    Source = "source"
    Target = "target"


class Dataset(BaseModel):
    """
    Labeled feature vectors of one domain. Category ids are dense integers 0..K-1,
    category_names holds the vocabulary they map to.
    """

    model_config = ConfigDict(frozen=True)

    features: list[FeatureVector]
    """The feature vectors - instance variable."""
    labels: list[int]
    """The category id of each feature vector - instance variable."""
    dimension: int = Field(gt=0)
    """The dimension of the feature space - instance variable."""
    category_count: int = Field(gt=0)
    """The number of categories K - instance variable."""
    domain_tag: DomainTag = DomainTag.Source
    """Whether this is source or target data - instance variable."""
    category_names: list[str] | None = None
    """Optional vocabulary mapping category ids to names - instance variable."""

    @model_validator(mode="after")
    def validate_examples(self):
        if len(self.features) != len(self.labels):
            raise ValueError(
                "Number of features ({0}) should equal number of labels ({1}).".format(
                    len(self.features), len(self.labels)
                )
            )
        for feature in self.features:
            if feature.dimension > self.dimension:
                raise ValueError(
                    "Feature dimension {0} exceeds the dataset dimension {1}.".format(
                        feature.dimension, self.dimension
                    )
                )
        if any(label < 0 or label >= self.category_count for label in self.labels):
            raise ValueError(
                "All labels should lie in [0, {0}).".format(self.category_count)
            )
        if (
            self.category_names is not None
            and len(self.category_names) != self.category_count
        ):
            raise ValueError("The vocabulary should contain one name per category.")
        return self

    @property
    def size(self) -> int:
        return len(self.features)

    @property
    def examples(self) -> list[tuple[FeatureVector, int]]:
        return list(zip(self.features, self.labels))

    @property
    def names(self) -> list[str]:
        """
        Returns:
            list[str]: The category names, defaulting to the category ids as text.
        """
        if self.category_names is not None:
            return list(self.category_names)
        return [str(k) for k in range(self.category_count)]

    def feature(self, index: int) -> FeatureVector:
        """
        Returns the feature vector at the specified index, padded to the dataset dimension.
        """
        feature = self.features[index]
        if feature.dimension == self.dimension:
            return feature
        if feature.is_sparse:
            return FeatureVector.sparse(feature.indices, feature.values, self.dimension)
        return FeatureVector.dense(
            numpy.append(feature.values, numpy.zeros(self.dimension - feature.dimension))
        )

    def aligned_features(self) -> list[FeatureVector]:
        """
        Returns:
            list[FeatureVector]: All feature vectors with dimension equal to the dataset dimension.
        """
        return [self.feature(index) for index in range(self.size)]

    def to_dense(self) -> numpy.ndarray:
        """
        Returns:
            numpy.ndarray: The features as a dense (size x dimension) matrix.
        """
        matrix = numpy.zeros((self.size, self.dimension))
        for row, feature in enumerate(self.features):
            if feature.is_sparse:
                matrix[row, feature.indices] = feature.values
            else:
                matrix[row, : feature.dimension] = feature.values
        return matrix

    def to_csr(self) -> sparse.csr_matrix:
        """
        Returns:
            sparse.csr_matrix: The features as a (size x dimension) compressed sparse row matrix.
        """
        rows, columns, values = [], [], []
        for row, feature in enumerate(self.features):
            indices = (
                feature.indices if feature.is_sparse else numpy.arange(feature.dimension)
            )
            rows.append(numpy.full(len(indices), row))
            columns.append(indices)
            values.append(feature.values)
        return sparse.csr_matrix(
            (
                numpy.concatenate(values) if values else numpy.zeros(0),
                (
                    numpy.concatenate(rows) if rows else numpy.zeros(0, dtype=int),
                    numpy.concatenate(columns) if columns else numpy.zeros(0, dtype=int),
                ),
            ),
            shape=(self.size, self.dimension),
        )

    def with_bias(self) -> Dataset:
        """
        Returns:
            Dataset: A copy of this dataset with a constant 1 feature appended to every vector.
        """
        return self.model_copy(
            update={
                "features": [feature.with_bias() for feature in self.aligned_features()],
                "dimension": self.dimension + 1,
            }
        )

    def subset(self, categories: list[int]) -> Dataset:
        """
        Selects the examples of the specified categories. Category ids are kept.

        Args:
            categories (list[int]): The category ids to keep.

        Returns:
            Dataset: The selected examples.
        """
        keep = set(categories)
        selection = [i for i, label in enumerate(self.labels) if label in keep]
        return self.model_copy(
            update={
                "features": [self.features[i] for i in selection],
                "labels": [self.labels[i] for i in selection],
            }
        )

    def present_categories(self) -> list[int]:
        """
        Returns:
            list[int]: Sorted ids of the categories that have at least one example.
        """
        return sorted(set(self.labels))
