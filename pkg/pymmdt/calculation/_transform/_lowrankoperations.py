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
from pymmdt.data import FeatureVector, LowRankTransform, TransformMode
from pymmdt.calculation._solverexception import SolverException, SolverExceptionType


def materialize(transform: LowRankTransform, budget: int = 10**7) -> numpy.ndarray:
    """
    Forms the explicit (D x Dt) matrix W = V^T B (+ I).

    Args:
        transform (LowRankTransform): The transform.
        budget (int, optional): The maximum number of entries D Dt. Defaults to 10**7.

    Raises:
        SolverException: In case D Dt exceeds the budget.

    Returns:
        numpy.ndarray: The matrix W.
    """
    size = transform.source_dim * transform.target_dim
    if size > budget:
        raise SolverException(
            SolverExceptionType.BudgetExceeded,
            "W has {0} entries, the budget is {1}.".format(size, budget),
        )
    matrix = transform.generators.T @ transform.betas
    if transform.mode == TransformMode.IdentityPlus:
        matrix += numpy.eye(transform.source_dim)
    return matrix


def apply_to_target(transform: LowRankTransform, x: FeatureVector) -> numpy.ndarray:
    """
    Maps a target vector to the source space: W x = sum_i v_i (beta_i^T x) (+ x).

    Raises:
        SolverException: In case the dimension of x differs from Dt.
    """
    if x.dimension != transform.target_dim:
        raise SolverException(
            SolverExceptionType.DimensionMismatch,
            "Vector has dimension {0}, the transform expects {1}.".format(
                x.dimension, transform.target_dim
            ),
        )
    mapped = x.dot_rows(transform.betas) @ transform.generators
    if transform.mode == TransformMode.IdentityPlus:
        x.add_scaled_to(mapped, 1.0)
    return mapped


def map_hyperplane(transform: LowRankTransform, u: numpy.ndarray) -> numpy.ndarray:
    """
    Maps a source hyperplane to the target space: W^T u = sum_i (u . v_i) beta_i (+ u),
    so that u . (W x) equals (W^T u) . x.

    Raises:
        SolverException: In case the length of u differs from D.
    """
    u = numpy.asarray(u, dtype=numpy.float64)
    if u.shape != (transform.source_dim,):
        raise SolverException(
            SolverExceptionType.DimensionMismatch,
            "Hyperplane has shape {0}, the transform expects length {1}.".format(
                u.shape, transform.source_dim
            ),
        )
    mapped = (transform.generators @ u) @ transform.betas
    if transform.mode == TransformMode.IdentityPlus:
        mapped = mapped + u
    return mapped
