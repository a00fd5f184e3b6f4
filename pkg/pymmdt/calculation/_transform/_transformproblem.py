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
from pymmdt.data import Dataset, HyperplaneSet, TransformMode, compute_rho
from pymmdt.calculation._solverexception import SolverException, SolverExceptionType


def constraint_label(category: int, generator: int, generator_categories=None) -> float:
    """
    Returns the sign of the constraint between a target example and a generator hyperplane.

    Args:
        category (int): The category id of the target example.
        generator (int): The index i of the generator hyperplane.
        generator_categories (list[int] | None, optional): The category id of every
            generator. Generator i stands for category i when None.

    Returns:
        float: +1 if the example belongs to the category of the generator, -1 otherwise.
    """
    generator_category = (
        generator if generator_categories is None else generator_categories[generator]
    )
    return 1.0 if category == generator_category else -1.0


class TransformProblem:
    """
    The fixed data of a transform solve: target examples, generator hyperplanes V, their
    correlation matrix R, the norms q_j and the constraint signs t_(i,j). Constructing a
    problem is the only place where the source dimension D is touched.
    """

    def __init__(
        self,
        targets: Dataset,
        generators: HyperplaneSet,
        mode: TransformMode = TransformMode.Pure,
        generator_categories: list[int] | None = None,
    ):
        """
        Args:
            targets (Dataset): The labeled target examples.
            generators (HyperplaneSet): The hyperplanes V inducing the constraints.
            mode (TransformMode, optional): Pure or IdentityPlus. Defaults to Pure.
            generator_categories (list[int] | None, optional): The category id of every
                generator; defaults to 0..m-1, in which case m must equal the number of
                target categories.

        Raises:
            SolverException: In case of empty targets or inconsistent dimensions or categories.
        """
        if targets.size == 0:
            raise SolverException(SolverExceptionType.EmptyInput)
        if generator_categories is None:
            if generators.count != targets.category_count:
                raise SolverException(
                    SolverExceptionType.CategoryMismatch,
                    "{0} hyperplanes for {1} target categories.".format(
                        generators.count, targets.category_count
                    ),
                )
            generator_categories = list(range(generators.count))
        elif len(generator_categories) != generators.count:
            raise SolverException(
                SolverExceptionType.CategoryMismatch,
                "{0} generator categories for {1} hyperplanes.".format(
                    len(generator_categories), generators.count
                ),
            )
        if mode == TransformMode.IdentityPlus and generators.dimension != targets.dimension:
            raise SolverException(
                SolverExceptionType.IdentityRequiresEqualDimensions,
                "D = {0}, Dt = {1}.".format(generators.dimension, targets.dimension),
            )

        self.mode = mode
        self.generators: numpy.ndarray = generators.planes
        self.generator_categories: list[int] = list(generator_categories)
        self.rho: numpy.ndarray = compute_rho(self.generators)
        self.features = targets.aligned_features()
        self.labels: list[int] = list(targets.labels)
        self.q = numpy.array([x.squared_norm() for x in self.features])
        categories = numpy.array(self.generator_categories)
        self.signs = numpy.where(
            numpy.array(self.labels)[:, None] == categories[None, :], 1.0, -1.0
        )
        if mode == TransformMode.IdentityPlus:
            self.offsets = numpy.array([x.dot_rows(self.generators) for x in self.features])
        else:
            self.offsets = numpy.zeros((len(self.features), generators.count))

    @property
    def generator_count(self) -> int:
        """The number of generators m."""
        return self.generators.shape[0]

    @property
    def target_count(self) -> int:
        """The number of target examples n_t."""
        return len(self.features)

    @property
    def source_dim(self) -> int:
        return self.generators.shape[1]

    @property
    def target_dim(self) -> int:
        return self.features[0].dimension

    def curvature(self, i: int, j: int, lambda_: float) -> float:
        """
        Returns:
            float: The diagonal q_j rho[i, i] + lambda of the dual Hessian, equal to ||d_l||^2 + lambda.
        """
        return float(self.q[j] * self.rho[i, i] + lambda_)
