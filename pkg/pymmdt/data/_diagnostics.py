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
from pydantic import BaseModel, ConfigDict


class TransformDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    passes: int
    """The number of passes over the active constraints."""
    pg_gap: float
    """The projected gradient gap (max - min) of the last pass."""
    converged: bool
    """Whether the gap dropped below epsilon on a full (unshrunk) pass."""
    dual_objective: float
    """The dual objective at the returned point."""
    primal_objective: float
    """The primal objective of the returned transform."""
    skipped_constraints: int
    """Number of constraints with zero curvature that were skipped."""
    steps: int
    """Number of coordinate updates that changed a dual variable."""
    visited_constraints: list[int]
    """Number of constraints visited in each pass."""
    pass_seconds: list[float]
    """Wall time of each pass."""
    dual_objective_history: list[float] | None = None
    """The dual objective after every pass, if requested."""
    alphas: numpy.ndarray | None = None
    """The final dual variables as an (n_t x m) matrix, used to warm start the next solve."""

    @property
    def duality_gap(self) -> float:
        """The primal objective minus the dual function value (= -dual_objective)."""
        return self.primal_objective + self.dual_objective


class AlternationRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    iteration: int
    """The alternation (0 for the initialization)."""
    step: str
    """Either "hyperplanes" or "transform"."""
    joint_objective: float
    """The joint objective after this step."""
    seconds: float
    """Wall time of this step."""


class MmdtDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: list[AlternationRecord]
    """One record per solved block."""
    transform_diagnostics: list[TransformDiagnostics]
    """Diagnostics of every transform solve."""

    @property
    def joint_objectives(self) -> list[float]:
        return [record.joint_objective for record in self.records]
