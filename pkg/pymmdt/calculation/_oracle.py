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

# Reference implementations with the transform written out as a vector of D Dt weights.
# These are slow and only meant to check the low-rank solver on small problems.

from __future__ import annotations
import numpy as numpy
from pydantic import BaseModel, ConfigDict
from pymmdt.data import Dataset, FeatureVector, HyperplaneSet, SolverConfig, TransformMode
from pymmdt.calculation._solverexception import SolverException, SolverExceptionType
from pymmdt.calculation import _svm as svm
from pymmdt.calculation._transform import constraint_label


class AugmentedExample(BaseModel):
    """
    The constraint between generator i and target example j as an ordinary SVM example:
    d = vec(v_i x_j^T) with sign t.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: numpy.ndarray
    """The augmented feature vector of length D Dt."""
    t: float
    """The sign of the constraint."""
    origin: tuple[int, int]
    """The pair (i, j) of generator and target example."""


def vectorize(matrix: numpy.ndarray) -> numpy.ndarray:
    """
    Concatenates the rows of a matrix into a single vector.
    """
    return numpy.array(matrix, dtype=numpy.float64).reshape(-1)


def build_augmented(
    targets: Dataset,
    generators: HyperplaneSet,
    generator_categories: list[int] | None = None,
    budget: int = 10**4,
) -> list[AugmentedExample]:
    """
    Builds the m n_t augmented examples, example l = m j + i belongs to generator i and
    target example j.

    Raises:
        SolverException: In case D Dt exceeds the budget.
    """
    size = generators.dimension * targets.dimension
    if size > budget:
        raise SolverException(
            SolverExceptionType.BudgetExceeded,
            "Augmented vectors have length {0}, the budget is {1}.".format(size, budget),
        )
    dense = targets.to_dense()
    examples = []
    for j, label in enumerate(targets.labels):
        for i, plane in enumerate(generators.planes):
            examples.append(
                AugmentedExample(
                    d=vectorize(numpy.outer(plane, dense[j])),
                    t=constraint_label(label, i, generator_categories),
                    origin=(i, j),
                )
            )
    return examples


def naive_solve(
    targets: Dataset,
    generators: HyperplaneSet,
    config: SolverConfig,
    generator_categories: list[int] | None = None,
    budget: int = 10**4,
) -> tuple[numpy.ndarray, float]:
    """
    Learns W by training a single binary SVM on the augmented examples. In IdentityPlus
    mode the SVM learns W - I, with margins reduced by t v_i^T x_j.

    Returns:
        tuple[numpy.ndarray, float]: The (D x Dt) matrix W and the dual objective.
    """
    if config.regularizer == TransformMode.IdentityPlus and (
        generators.dimension != targets.dimension
    ):
        raise SolverException(SolverExceptionType.IdentityRequiresEqualDimensions)
    examples = build_augmented(targets, generators, generator_categories, budget)
    margins = None
    if config.regularizer == TransformMode.IdentityPlus:
        dense = targets.to_dense()
        margins = [
            1.0 - example.t * float(generators.planes[i] @ dense[j])
            for example in examples
            for i, j in [example.origin]
        ]
    solution = svm.solve_dual(
        [FeatureVector.dense(example.d) for example in examples],
        [example.t for example in examples],
        config.c_tilde,
        loss_exponent=config.loss_exponent,
        epsilon=config.epsilon,
        max_passes=config.max_passes,
        rng_seed=config.rng_seed,
        margins=margins,
        shrinking=config.shrinking,
    )
    matrix = solution.weights.reshape(generators.dimension, targets.dimension)
    if config.regularizer == TransformMode.IdentityPlus:
        matrix = matrix + numpy.eye(generators.dimension)
    return matrix, solution.dual_objective
