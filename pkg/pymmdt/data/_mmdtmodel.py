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
from pydantic import BaseModel, ConfigDict, model_validator
from pymmdt.data._hyperplaneset import HyperplaneSet
from pymmdt.data._lowranktransform import LowRankTransform


class MmdtModel(BaseModel):
    """
    A trained max-margin domain transform: the transform W and the one-vs-all
    classifiers in the source space. Dimensions of transform and classifiers include
    the bias feature when augment_bias is set.
    """

    model_config = ConfigDict(frozen=True)

    transform: LowRankTransform
    """The learned transform from target to source space - instance variable."""
    classifiers: HyperplaneSet
    """One hyperplane per category in the source space - instance variable."""
    category_names: list[str]
    """The name of each category id - instance variable."""
    generator_categories: list[int]
    """The category id of every generator hyperplane of the transform - instance variable."""
    augment_bias: bool = True
    """Whether a constant 1 feature is appended to the input vectors - instance variable."""

    @model_validator(mode="after")
    def validate_dimensions(self):
        if self.classifiers.count != len(self.category_names):
            raise ValueError(
                "Number of classifiers ({0}) should equal the number of categories ({1}).".format(
                    self.classifiers.count, len(self.category_names)
                )
            )
        if self.classifiers.dimension != self.transform.source_dim:
            raise ValueError(
                "Classifier length ({0}) should equal the source dimension of the transform ({1}).".format(
                    self.classifiers.dimension, self.transform.source_dim
                )
            )
        if len(self.generator_categories) != self.transform.rank_bound:
            raise ValueError("Every generator requires a category id.")
        if any(
            k < 0 or k >= self.category_count for k in self.generator_categories
        ):
            raise ValueError("Generator categories should be valid category ids.")
        return self

    @property
    def category_count(self) -> int:
        return len(self.category_names)

    @property
    def source_dimension(self) -> int:
        """The source dimension D of the input data (without bias feature)."""
        return self.transform.source_dim - (1 if self.augment_bias else 0)

    @property
    def target_dimension(self) -> int:
        """The target dimension Dt of the input data (without bias feature)."""
        return self.transform.target_dim - (1 if self.augment_bias else 0)
