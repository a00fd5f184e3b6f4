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
from pydantic import BaseModel, ConfigDict, model_validator
from pymmdt.data import _data_validation as data_validation


class TransformMode(Enum):
    Pure = "pure"
    """W is the sum of m dyadic products (regularizer ||W||_F^2)."""
    IdentityPlus = "identity_plus"
    """W is the identity plus m dyadic products (regularizer ||W - I||_F^2)."""


class LowRankTransform(BaseModel):
    """
    A linear map W from the target space (dimension Dt) to the source space (dimension D),
    held implicitly as W = sum_i V[i] B[i]^T (plus the identity in IdentityPlus mode).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    generators: numpy.ndarray
    """The generator hyperplanes V as an (m x D) matrix - instance variable."""
    betas: numpy.ndarray
    """The coefficient vectors B as an (m x Dt) matrix - instance variable."""
    rho: numpy.ndarray
    """The correlation matrix R = V V^T (m x m) - instance variable."""
    mode: TransformMode = TransformMode.Pure
    """Whether the identity is part of the transform - instance variable."""

    @model_validator(mode="before")
    @classmethod
    def validate_matrices(cls, values):
        generators = data_validation.as_float_array(values.get("generators"), 2)
        betas = data_validation.as_float_array(values.get("betas"), 2)
        data_validation.validate_finite(generators, "generators")
        data_validation.validate_finite(betas, "betas")
        data_validation.validate_equal_dimensions(
            generators.shape[0], betas.shape[0], "number of generators", "number of betas"
        )
        rho = values.get("rho")
        rho = (
            compute_rho(generators)
            if rho is None
            else data_validation.as_float_array(rho, 2)
        )
        data_validation.validate_matrix_shape(
            rho, "rho", generators.shape[0], generators.shape[0]
        )
        if not numpy.array_equal(rho, rho.T):
            raise ValueError("rho should be symmetric.")
        mode = TransformMode(values.get("mode", TransformMode.Pure))
        if mode == TransformMode.IdentityPlus:
            data_validation.validate_equal_dimensions(
                generators.shape[1], betas.shape[1], "D", "Dt"
            )
        return {"generators": generators, "betas": betas, "rho": rho, "mode": mode}

    @classmethod
    def zero(
        cls, generators: numpy.ndarray, target_dim: int, mode: TransformMode
    ) -> LowRankTransform:
        """
        Creates the transform with all betas zero (W = 0, or W = I in IdentityPlus mode).
        """
        generators = numpy.asarray(generators, dtype=numpy.float64)
        return cls(
            generators=generators,
            betas=numpy.zeros((generators.shape[0], target_dim)),
            mode=mode,
        )

    @property
    def rank_bound(self) -> int:
        """The number of dyadic products m."""
        return self.generators.shape[0]

    @property
    def source_dim(self) -> int:
        return self.generators.shape[1]

    @property
    def target_dim(self) -> int:
        return self.betas.shape[1]

    def regularizer(self) -> float:
        """
        Returns:
            float: 0.5 ||W||_F^2 (Pure) or 0.5 ||W - I||_F^2 (IdentityPlus) via
            0.5 sum_{i,i'} rho[i,i'] B[i].B[i'].
        """
        return 0.5 * float(numpy.sum(self.rho * (self.betas @ self.betas.T)))


def compute_rho(generators: numpy.ndarray) -> numpy.ndarray:
    """
    Computes the correlation matrix of the generator hyperplanes, rho[i, i'] = V[i].V[i'].
    The result is symmetric bit for bit.

    Args:
        generators (numpy.ndarray): The (m x D) generator matrix.

    Returns:
        numpy.ndarray: The (m x m) matrix R.
    """
    generators = numpy.asarray(generators, dtype=numpy.float64)
    gram = generators @ generators.T
    upper = numpy.triu(gram)
    rho = upper + numpy.triu(gram, 1).T
    rho.flags.writeable = False
    return rho
