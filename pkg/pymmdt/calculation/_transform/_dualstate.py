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
from pymmdt.calculation._transform._transformproblem import TransformProblem


class DualState:
    """
    The mutable state of one transform solve: the dual variables alpha (stored as an
    (n_t x m) matrix, alphas[j, i] is alpha_l with l = m j + i), the betas they define,
    the active set and the per-example cache of the products B x_j.

    The cache row of example j is valid while its stamp equals update_count; each
    beta update increments update_count, so a stale row is detected in O(1).
    """

    def __init__(
        self,
        problem: TransformProblem,
        lambda_: float,
        upper_bound: float,
        alphas: numpy.ndarray | None = None,
    ):
        shape = (problem.target_count, problem.generator_count)
        self.lambda_ = lambda_
        self.upper_bound = upper_bound
        self.q = problem.q
        if alphas is None:
            self.alphas = numpy.zeros(shape)
        else:
            self.alphas = numpy.clip(numpy.array(alphas, dtype=numpy.float64), 0.0, upper_bound)
            if self.alphas.shape != shape:
                raise ValueError(
                    "Initial dual variables should have shape {0}, found {1}.".format(
                        shape, self.alphas.shape
                    )
                )
        self.betas = self.recompute_betas(problem)
        self.active = numpy.ones(shape, dtype=bool)
        self.cache = numpy.zeros(shape)
        self.cache_stamp = numpy.full(problem.target_count, -1, dtype=numpy.int64)
        self.update_count = 0
        self.steps = 0
        self.skipped = 0

    def flat_alphas(self) -> numpy.ndarray:
        """
        Returns:
            numpy.ndarray: The dual variables as a vector indexed by l = m j + i.
        """
        return self.alphas.reshape(-1).copy()

    def recompute_betas(self, problem: TransformProblem) -> numpy.ndarray:
        """
        Computes B from scratch with the representer expansion
        beta_i = sum_j alpha_(i,j) t_(i,j) x_j.

        Returns:
            numpy.ndarray: The (m x Dt) matrix B.
        """
        betas = numpy.zeros((problem.generator_count, problem.target_dim))
        weights = self.alphas * problem.signs
        for j, x in enumerate(problem.features):
            for i in numpy.nonzero(weights[j])[0]:
                x.add_scaled_to(betas[i], weights[j, i])
        return betas

    def cached_products(self, j: int, problem: TransformProblem) -> numpy.ndarray:
        """
        Returns the products beta_i' . x_j for all i', refreshing them in O(m Dt) when stale.
        """
        if self.cache_stamp[j] != self.update_count:
            self.cache[j] = problem.features[j].dot_rows(self.betas)
            self.cache_stamp[j] = self.update_count
        return self.cache[j]

    def apply_update(self, i: int, j: int, delta: float, sign: float, problem: TransformProblem):
        """
        Adds delta to alpha_(i,j) and updates beta_i in O(Dt) and the cached product
        beta_i . x_j in O(1). The cache row of j must be valid.
        """
        self.alphas[j, i] += delta
        problem.features[j].add_scaled_to(self.betas[i], delta * sign)
        self.cache[j, i] += delta * sign * self.q[j]
        self.update_count += 1
        self.cache_stamp[j] = self.update_count
        self.steps += 1
