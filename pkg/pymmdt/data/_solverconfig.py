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
from typing import Literal
from pydantic import BaseModel, ConfigDict, Field
from pymmdt.data._lowranktransform import TransformMode


class SolverConfig(BaseModel):
    """
    Settings for the hyperplane (svm) and transform solvers and their alternation.
    """

    model_config = ConfigDict(validate_assignment=True)

    c_tilde: float = Field(gt=0.0, default=1.0)
    """Cost of the target (transformed) constraints - instance variable."""
    c: float = Field(gt=0.0, default=1.0)
    """Cost of the source constraints - instance variable."""
    loss_exponent: Literal[1, 2] = 2
    """Exponent p of the hinge loss (1: L1-loss, 2: L2-loss) - instance variable."""
    epsilon: float = Field(gt=0.0, default=0.1)
    """Stopping tolerance on the projected gradient gap - instance variable."""
    max_passes: int = Field(gt=0, default=1000)
    """Maximum number of passes over the dual variables - instance variable."""
    regularizer: TransformMode = TransformMode.Pure
    """Pure (||W||) or IdentityPlus (||W - I||) regularization - instance variable."""
    outer_iterations: int = Field(ge=0, default=2)
    """Number of (hyperplanes, transform) alternations; 0 trains source-only hyperplanes - instance variable."""
    rng_seed: int = Field(ge=0, default=0)
    """Seed of the coordinate permutations - instance variable."""
    augment_bias: bool = True
    """Append a constant 1 feature to source and target vectors - instance variable."""
    shrinking: bool = True
    """Use the shrinking heuristic - instance variable."""
    warm_start: bool = True
    """Start each transform solve from the previous dual variables - instance variable."""
    final_hyperplane_refresh: bool = False
    """Retrain the hyperplanes after the last transform step - instance variable."""
    n_jobs: int = Field(gt=0, default=1)
    """Number of threads used to train the one-vs-all problems - instance variable."""

    @property
    def lambda_(self) -> float:
        """The diagonal regularization of the dual, 1/(2 C_tilde) for L2-loss and 0 for L1-loss."""
        return 1.0 / (2.0 * self.c_tilde) if self.loss_exponent == 2 else 0.0

    @property
    def upper_bound(self) -> float:
        """The upper bound of the target dual variables, C_tilde for L1-loss and infinite for L2-loss."""
        return self.c_tilde if self.loss_exponent == 1 else float("inf")
