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
from pydantic import BaseModel, ConfigDict, field_validator
from pymmdt.data import _data_validation as data_validation


class HyperplaneSet(BaseModel):
    """
    A set of m linear classifiers (hyperplanes) in the source space, one per row.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    planes: numpy.ndarray
    """The hyperplanes as an (m x D) matrix - instance variable."""

    @field_validator("planes", mode="before")
    @classmethod
    def validate_planes(cls, value):
        planes = data_validation.as_float_array(value, 2)
        if planes.shape[0] < 1 or planes.shape[1] < 1:
            raise ValueError("At least one hyperplane of positive length is required.")
        data_validation.validate_finite(planes, "planes")
        return planes

    @property
    def count(self) -> int:
        """The number of hyperplanes m."""
        return self.planes.shape[0]

    @property
    def dimension(self) -> int:
        """The length D of every hyperplane."""
        return self.planes.shape[1]

    def append(self, plane: numpy.ndarray) -> HyperplaneSet:
        """
        Returns:
            HyperplaneSet: A new set with the specified plane added as the last row.
        """
        return HyperplaneSet(planes=numpy.vstack([self.planes, plane]))

    def select(self, rows: list[int]) -> HyperplaneSet:
        return HyperplaneSet(planes=self.planes[rows])
