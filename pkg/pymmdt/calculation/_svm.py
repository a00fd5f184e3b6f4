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

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
import numpy as numpy
from pydantic import BaseModel, ConfigDict
from pymmdt.data import Dataset, FeatureVector, HyperplaneSet, SolverConfig
from pymmdt.calculation._solverexception import SolverException, SolverExceptionType

_logger = logging.getLogger(__name__)

# steps with a smaller projected gradient do not change the variable
_PG_TOLERANCE = 1e-12


class BinarySolution(BaseModel):
    """
    Result of a binary dual coordinate descent solve.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: numpy.ndarray
    """The hyperplane w = sum_l alpha_l t_l x_l."""
    alphas: numpy.ndarray
    """The dual variables."""
    passes: int
    """Number of passes performed."""
    pg_gap: float
    """Projected gradient gap of the last pass."""
    converged: bool
    """Whether the gap fell below epsilon on a full pass."""
    dual_objective: float
    """The dual objective at the returned point."""
    skipped: int
    """Number of rows skipped due to zero curvature."""
    dual_objective_history: list[float] | None = None
    """The dual objective after every pass, if requested."""


def solve_dual(
    rows: Sequence[FeatureVector],
    signs: Sequence[float],
    costs: float | Sequence[float],
    loss_exponent: int = 2,
    epsilon: float = 0.1,
    max_passes: int = 1000,
    rng_seed: int = 0,
    margins: Sequence[float] | None = None,
    shrinking: bool = True,
    record_objective: bool = False,
) -> BinarySolution:
    """
    Minimizes 0.5 ||w||^2 + sum_l costs_l max(0, margins_l - t_l w.x_l)^p with dual
    coordinate descent and the shrinking heuristic. Coordinates are visited in a
    random permutation per pass.

    Args:
        rows (Sequence[FeatureVector]): The examples x_l, all of the same dimension.
        signs (Sequence[float]): The labels t_l (+1 or -1).
        costs (float | Sequence[float]): One cost for all rows or a cost per row.
        loss_exponent (int, optional): 1 (L1-loss) or 2 (L2-loss). Defaults to 2.
        epsilon (float, optional): Tolerance on the projected gradient gap. Defaults to 0.1.
        max_passes (int, optional): Maximum number of passes. Defaults to 1000.
        rng_seed (int, optional): Seed of the permutations. Defaults to 0.
        margins (Sequence[float] | None, optional): Required margins b_l, 1 when None.
        shrinking (bool, optional): Whether to shrink pinned variables. Defaults to True.
        record_objective (bool, optional): Record the dual objective after each pass.

    Raises:
        SolverException: In case no rows are specified.

    Returns:
        BinarySolution: The solution and its diagnostics.
    """
    n = len(rows)
    if n == 0:
        raise SolverException(SolverExceptionType.EmptyInput)
    dimension = rows[0].dimension
    if any(row.dimension != dimension for row in rows):
        raise SolverException(
            SolverExceptionType.DimensionMismatch, "All rows need equal dimensions."
        )

    t = [float(s) for s in signs]
    c = (
        [float(costs)] * n
        if numpy.isscalar(costs)
        else [float(value) for value in costs]
    )
    b = [1.0] * n if margins is None else [float(value) for value in margins]
    if loss_exponent == 2:
        diag = [1.0 / (2.0 * value) for value in c]
        upper = [float("inf")] * n
    else:
        diag = [0.0] * n
        upper = c
    qd = [row.squared_norm() + d for row, d in zip(rows, diag)]

    w = numpy.zeros(dimension)
    alphas = [0.0] * n
    rng = numpy.random.default_rng(rng_seed)
    index = numpy.arange(n)
    active_size = n
    pg_max_old, pg_min_old = float("inf"), float("-inf")
    history = [] if record_objective else None
    skipped = sum(1 for value in qd if value <= 0.0)
    passes, gap, converged = 0, float("inf"), False

    def objective() -> float:
        a = numpy.array(alphas)
        return float(
            0.5 * (w @ w) + 0.5 * (numpy.array(diag) @ (a * a)) - numpy.array(b) @ a
        )

    while passes < max_passes:
        pg_max_new, pg_min_new = float("-inf"), float("inf")
        rng.shuffle(index[:active_size])
        s = 0
        while s < active_size:
            i = index[s]
            if qd[i] <= 0.0:
                s += 1
                continue
            g = t[i] * rows[i].dot_dense(w) - b[i] + diag[i] * alphas[i]
            pg = 0.0
            if alphas[i] == 0.0:
                if shrinking and g > pg_max_old:
                    active_size -= 1
                    index[s], index[active_size] = index[active_size], index[s]
                    continue
                if g < 0.0:
                    pg = g
            elif alphas[i] >= upper[i]:
                if shrinking and g < pg_min_old:
                    active_size -= 1
                    index[s], index[active_size] = index[active_size], index[s]
                    continue
                if g > 0.0:
                    pg = g
            else:
                pg = g
            pg_max_new = max(pg_max_new, pg)
            pg_min_new = min(pg_min_new, pg)
            if abs(pg) > _PG_TOLERANCE:
                old = alphas[i]
                alphas[i] = min(max(old - g / qd[i], 0.0), upper[i])
                rows[i].add_scaled_to(w, (alphas[i] - old) * t[i])
            s += 1
        passes += 1
        gap = pg_max_new - pg_min_new
        if history is not None:
            history.append(objective())
        if gap <= epsilon:
            if active_size == n:
                converged = True
                break
            active_size = n
            pg_max_old, pg_min_old = float("inf"), float("-inf")
            continue
        pg_max_old = pg_max_new if pg_max_new > 0.0 else float("inf")
        pg_min_old = pg_min_new if pg_min_new < 0.0 else float("-inf")

    if not converged:
        _logger.warning(
            "Dual coordinate descent stopped after %d passes with gap %.3g > %.3g.",
            passes,
            gap,
            epsilon,
        )
    if skipped > 0:
        _logger.warning("Skipped %d rows with zero curvature.", skipped)

    return BinarySolution(
        weights=w,
        alphas=numpy.array(alphas),
        passes=passes,
        pg_gap=max(gap, 0.0),
        converged=converged,
        dual_objective=objective(),
        skipped=skipped,
        dual_objective_history=history,
    )


def train_binary(
    examples: Sequence[tuple[FeatureVector, int]],
    cost: float,
    loss_exponent: int = 2,
    epsilon: float = 0.1,
    max_passes: int = 1000,
    rng_seed: int = 0,
) -> numpy.ndarray:
    """
    Trains a linear SVM without bias on examples labeled +1 or -1.

    Args:
        examples (Sequence[tuple[FeatureVector, int]]): Pairs of feature vector and sign.
        cost (float): The cost C of the hinge losses.
        loss_exponent (int, optional): 1 or 2. Defaults to 2.
        epsilon (float, optional): Stopping tolerance. Defaults to 0.1.
        max_passes (int, optional): Maximum number of passes. Defaults to 1000.
        rng_seed (int, optional): Seed of the permutations. Defaults to 0.

    Raises:
        SolverException: In case no examples are specified.

    Returns:
        numpy.ndarray: The hyperplane w.
    """
    if len(examples) == 0:
        raise SolverException(SolverExceptionType.EmptyInput)
    rows = [feature for feature, _ in examples]
    signs = [1.0 if sign > 0 else -1.0 for _, sign in examples]
    return solve_dual(
        rows,
        signs,
        cost,
        loss_exponent=loss_exponent,
        epsilon=epsilon,
        max_passes=max_passes,
        rng_seed=rng_seed,
    ).weights


def train_one_vs_all(data: Dataset, cost: float, config: SolverConfig) -> HyperplaneSet:
    """
    Trains one hyperplane per category (+1 for the category, -1 for all others).

    Args:
        data (Dataset): The training data.
        cost (float): The cost C of the hinge losses.
        config (SolverConfig): Loss, tolerance, pass limit, seed and number of threads.

    Raises:
        SolverException: In case the data has fewer than two categories or no examples.

    Returns:
        HyperplaneSet: K hyperplanes of length data.dimension.
    """
    if data.category_count < 2:
        raise SolverException(SolverExceptionType.TooFewCategories)
    return train_weighted_one_vs_all(
        data.aligned_features(), data.labels, data.category_count, cost, config
    )


def train_weighted_one_vs_all(
    rows: Sequence[FeatureVector],
    labels: Sequence[int],
    category_count: int,
    costs: float | Sequence[float],
    config: SolverConfig,
    selections: dict[int, list[int]] | None = None,
) -> HyperplaneSet:
    """
    Trains one hyperplane per category with a cost per row. Problem k is seeded with
    rng_seed + k, so the result does not depend on the number of threads.

    Args:
        rows (Sequence[FeatureVector]): The examples.
        labels (Sequence[int]): The category id of each example.
        category_count (int): The number of categories K.
        costs (float | Sequence[float]): One cost or a cost per row.
        config (SolverConfig): Solver settings.
        selections (dict[int, list[int]] | None, optional): Rows to use for category k,
            all rows for categories that are not in the dictionary.

    Returns:
        HyperplaneSet: K hyperplanes.
    """
    if len(rows) == 0:
        raise SolverException(SolverExceptionType.EmptyInput)
    row_costs = (
        numpy.full(len(rows), float(costs))
        if numpy.isscalar(costs)
        else numpy.asarray(costs, dtype=numpy.float64)
    )

    def train(category: int) -> numpy.ndarray:
        selection = (
            selections[category]
            if selections is not None and category in selections
            else range(len(rows))
        )
        selected_rows = [rows[i] for i in selection]
        signs = [1.0 if labels[i] == category else -1.0 for i in selection]
        return solve_dual(
            selected_rows,
            signs,
            row_costs[list(selection)],
            loss_exponent=config.loss_exponent,
            epsilon=config.epsilon,
            max_passes=config.max_passes,
            rng_seed=config.rng_seed + category,
            shrinking=config.shrinking,
        ).weights

    if config.n_jobs > 1:
        with ThreadPoolExecutor(max_workers=config.n_jobs) as executor:
            planes = list(executor.map(train, range(category_count)))
    else:
        planes = [train(category) for category in range(category_count)]
    _logger.debug("Trained %d one-vs-all hyperplanes.", category_count)
    return HyperplaneSet(planes=numpy.array(planes))


def binary_primal_objective(
    weights: numpy.ndarray,
    rows: Sequence[FeatureVector],
    signs: Sequence[float],
    costs: float | Sequence[float],
    loss_exponent: int = 2,
    margins: Sequence[float] | None = None,
) -> float:
    """
    Returns:
        float: 0.5 ||w||^2 + sum_l costs_l max(0, margins_l - t_l w.x_l)^p.
    """
    scores = numpy.array([row.dot_dense(weights) for row in rows])
    required = numpy.ones(len(rows)) if margins is None else numpy.asarray(margins)
    hinge = numpy.maximum(0.0, required - numpy.asarray(signs) * scores)
    return float(
        0.5 * (weights @ weights)
        + numpy.sum(numpy.asarray(costs) * hinge**loss_exponent)
    )


def one_vs_all_objective(
    hyperplanes: HyperplaneSet, data: Dataset, cost: float, loss_exponent: int = 2
) -> float:
    """
    Computes sum_k 0.5 ||theta_k||^2 + C sum_{i,k} max(0, 1 - y_i^k theta_k.x_i)^p.

    Args:
        hyperplanes (HyperplaneSet): The K hyperplanes.
        data (Dataset): Data with dimension equal to the hyperplane length.
        cost (float): The cost C.
        loss_exponent (int, optional): 1 or 2. Defaults to 2.

    Returns:
        float: The objective value.
    """
    if hyperplanes.dimension != data.dimension:
        raise SolverException(
            SolverExceptionType.DimensionMismatch,
            "Hyperplanes have length {0}, data has dimension {1}.".format(
                hyperplanes.dimension, data.dimension
            ),
        )
    scores = numpy.asarray(data.to_csr() @ hyperplanes.planes.T)
    signs = -numpy.ones_like(scores)
    signs[numpy.arange(data.size), data.labels] = 1.0
    hinge = numpy.maximum(0.0, 1.0 - signs * scores)
    return float(
        0.5 * numpy.sum(hyperplanes.planes**2) + cost * numpy.sum(hinge**loss_exponent)
    )
