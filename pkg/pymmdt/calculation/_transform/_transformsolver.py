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
import logging
import time
import numpy as numpy
from pymmdt.data import (
    Dataset,
    HyperplaneSet,
    LowRankTransform,
    SolverConfig,
    TransformDiagnostics,
    TransformMode,
)
from pymmdt.calculation._transform._transformproblem import TransformProblem
from pymmdt.calculation._transform._dualstate import DualState

_logger = logging.getLogger(__name__)

_PG_TOLERANCE = 1e-12


def score(i: int, j: int, problem: TransformProblem, state: DualState) -> float:
    """
    Computes s = v_i^T W x_j = sum_i' rho[i, i'] beta_i'^T x_j (+ v_i^T x_j for IdentityPlus)
    in O(m) from the cached products of example j.
    """
    products = state.cached_products(j, problem)
    return float(problem.rho[i] @ products) + float(problem.offsets[j, i])


def projected_gradient(
    i: int, j: int, problem: TransformProblem, state: DualState
) -> tuple[float, float]:
    """
    Computes the partial derivative G = t s + lambda alpha - 1 of the dual objective with
    respect to alpha_(i,j) and its projection on the feasible interval.

    Returns:
        tuple[float, float]: G and the projected gradient PG.
    """
    alpha = state.alphas[j, i]
    g = problem.signs[j, i] * score(i, j, problem, state) + state.lambda_ * alpha - 1.0
    if alpha <= 0.0:
        return g, min(g, 0.0)
    if alpha >= state.upper_bound:
        return g, max(g, 0.0)
    return g, g


def coordinate_step(i: int, j: int, problem: TransformProblem, state: DualState) -> float:
    """
    Minimizes the dual objective along alpha_(i,j). Constraints with zero curvature and
    variables with a zero projected gradient are left untouched.

    Returns:
        float: The change of alpha_(i,j).
    """
    curvature = problem.curvature(i, j, state.lambda_)
    if curvature <= 0.0:
        _logger.warning("Skipped constraint (%d, %d) with zero curvature.", i, j)
        state.skipped += 1
        return 0.0
    g, pg = projected_gradient(i, j, problem, state)
    if abs(pg) <= _PG_TOLERANCE:
        return 0.0
    return _update(i, j, g, curvature, problem, state)


def _update(
    i: int, j: int, g: float, curvature: float, problem: TransformProblem, state: DualState
) -> float:
    old = state.alphas[j, i]
    new = min(max(old - g / curvature, 0.0), state.upper_bound)
    delta = new - old
    if delta != 0.0:
        state.apply_update(i, j, delta, problem.signs[j, i], problem)
    return delta


def solve_transform(
    targets: Dataset,
    generators: HyperplaneSet,
    config: SolverConfig,
    generator_categories: list[int] | None = None,
    initial_alphas: numpy.ndarray | None = None,
    record_objective: bool = False,
) -> tuple[LowRankTransform, TransformDiagnostics]:
    """
    Learns the transform W = sum_i v_i beta_i^T (+ I) by dual coordinate descent over the
    constraints t_(i,j) v_i^T W x_j >= 1 - eta_(i,j).

    Each pass visits the target examples in a random order and, per example, all
    generators in a fixed order so the cached products B x_j are refreshed once per
    example. Pinned variables are shrunk from the active set; convergence is only
    declared after a pass over all constraints.

    Args:
        targets (Dataset): The labeled target examples (dimension Dt).
        generators (HyperplaneSet): The hyperplanes V (length D).
        config (SolverConfig): Costs, loss, tolerance, pass limit, mode and seed.
        generator_categories (list[int] | None, optional): The category id of every
            generator, generator i stands for category i when None.
        initial_alphas (numpy.ndarray | None, optional): Dual variables to start from
            (n_t x m); the betas are rebuilt from them against the specified generators.
        record_objective (bool, optional): Record the dual objective after every pass.

    Raises:
        SolverException: In case of empty or inconsistent input.

    Returns:
        tuple[LowRankTransform, TransformDiagnostics]: The transform and its diagnostics.
    """
    problem = TransformProblem(
        targets, generators, config.regularizer, generator_categories
    )
    state = DualState(problem, config.lambda_, config.upper_bound, initial_alphas)

    m, nt = problem.generator_count, problem.target_count
    curvature = problem.q[:, None] * numpy.diag(problem.rho)[None, :] + state.lambda_
    usable = curvature > 0.0
    state.skipped = int(numpy.count_nonzero(~usable))
    if state.skipped > 0:
        _logger.warning("Skipped %d constraints with zero curvature.", state.skipped)
    state.active = usable.copy()
    usable_count = int(numpy.count_nonzero(usable))
    active_count = usable_count
    signs, rho, offsets = problem.signs, problem.rho, problem.offsets
    lambda_, upper = state.lambda_, state.upper_bound

    rng = numpy.random.default_rng(config.rng_seed)
    pg_max_old, pg_min_old = float("inf"), float("-inf")
    passes, gap, converged = 0, float("inf"), False
    visited, pass_seconds = [], []
    history = [] if record_objective else None

    while passes < config.max_passes and usable_count > 0:
        start = time.perf_counter()
        pg_max_new, pg_min_new = float("-inf"), float("inf")
        visited_count = 0
        for j in rng.permutation(nt):
            active_row = state.active[j]
            if not active_row.any():
                continue
            products = state.cached_products(j, problem)
            for i in range(m):
                if not active_row[i]:
                    continue
                alpha = state.alphas[j, i]
                g = (
                    signs[j, i] * (rho[i] @ products + offsets[j, i])
                    + lambda_ * alpha
                    - 1.0
                )
                pg = 0.0
                if alpha <= 0.0:
                    if config.shrinking and g > pg_max_old:
                        active_row[i] = False
                        active_count -= 1
                        continue
                    if g < 0.0:
                        pg = g
                elif alpha >= upper:
                    if config.shrinking and g < pg_min_old:
                        active_row[i] = False
                        active_count -= 1
                        continue
                    if g > 0.0:
                        pg = g
                else:
                    pg = g
                visited_count += 1
                pg_max_new = max(pg_max_new, pg)
                pg_min_new = min(pg_min_new, pg)
                if abs(pg) > _PG_TOLERANCE:
                    _update(i, j, g, curvature[j, i], problem, state)
        passes += 1
        pass_seconds.append(time.perf_counter() - start)
        visited.append(visited_count)
        gap = pg_max_new - pg_min_new if visited_count > 0 else 0.0
        if history is not None:
            history.append(dual_objective(state, problem))
        _logger.debug(
            "Pass %d: %d constraints visited, gap %.3g.", passes, visited_count, gap
        )
        if gap <= config.epsilon:
            if active_count == usable_count:
                converged = True
                break
            state.active = usable.copy()
            active_count = usable_count
            pg_max_old, pg_min_old = float("inf"), float("-inf")
            continue
        pg_max_old = pg_max_new if pg_max_new > 0.0 else float("inf")
        pg_min_old = pg_min_new if pg_min_new < 0.0 else float("-inf")

    if usable_count == 0:
        converged, gap = True, 0.0
    if not converged:
        _logger.warning(
            "Transform solve stopped after %d passes with gap %.3g > %.3g.",
            passes,
            gap,
            config.epsilon,
        )

    transform = LowRankTransform(
        generators=problem.generators,
        betas=state.betas.copy(),
        rho=problem.rho,
        mode=config.regularizer,
    )
    diagnostics = TransformDiagnostics(
        passes=passes,
        pg_gap=max(gap, 0.0),
        converged=converged,
        dual_objective=dual_objective(state, problem),
        primal_objective=primal_objective(
            transform, targets, generators, config, problem.generator_categories
        ),
        skipped_constraints=state.skipped,
        steps=state.steps,
        visited_constraints=visited,
        pass_seconds=pass_seconds,
        dual_objective_history=history,
        alphas=state.alphas.copy(),
    )
    _logger.info(
        "Transform solved in %d passes (%d updates), dual %.6g, primal %.6g.",
        passes,
        state.steps,
        diagnostics.dual_objective,
        diagnostics.primal_objective,
    )
    return transform, diagnostics


def dual_objective(state: DualState, problem: TransformProblem) -> float:
    """
    Evaluates 0.5 alpha^T Q alpha - sum_l alpha_l (1 - t_l v_i^T x_j) with the low-rank
    identity ||sum_l alpha_l t_l d_l||^2 = sum_(i,i') rho[i,i'] beta_i^T beta_i'.
    The shift term vanishes in Pure mode.

    Args:
        state (DualState): The dual variables and their betas.
        problem (TransformProblem): The problem they belong to.

    Returns:
        float: The dual objective value.
    """
    alphas = state.alphas
    regularizer = 0.5 * float(numpy.sum(problem.rho * (state.betas @ state.betas.T)))
    return (
        regularizer
        + 0.5 * state.lambda_ * float(numpy.sum(alphas * alphas))
        - float(numpy.sum(alphas * (1.0 - problem.signs * problem.offsets)))
    )


def constraint_scores(
    transform: LowRankTransform, targets: Dataset, generators: HyperplaneSet
) -> numpy.ndarray:
    """
    Computes v_i^T W x_j for all target examples j and hyperplanes i without forming W.

    Returns:
        numpy.ndarray: An (n_t x m) matrix of scores.
    """
    cross = generators.planes @ transform.generators.T
    features = targets.to_csr()
    scores = numpy.asarray(features @ transform.betas.T) @ cross.T
    if transform.mode == TransformMode.IdentityPlus:
        scores += numpy.asarray(features @ generators.planes.T)
    return scores


def primal_objective(
    transform: LowRankTransform,
    targets: Dataset,
    generators: HyperplaneSet,
    config: SolverConfig,
    generator_categories: list[int] | None = None,
) -> float:
    """
    Evaluates 0.5 ||W||_F^2 (or 0.5 ||W - I||_F^2) + C_tilde sum_(i,j) max(0, 1 - t_(i,j) v_i^T W x_j)^p.

    Args:
        transform (LowRankTransform): The transform.
        targets (Dataset): The target examples.
        generators (HyperplaneSet): The hyperplanes inducing the constraints, these may
            differ from the generators of the transform.
        config (SolverConfig): Provides C_tilde and p.
        generator_categories (list[int] | None, optional): The category id of every hyperplane.

    Returns:
        float: The primal objective value.
    """
    categories = (
        numpy.arange(generators.count)
        if generator_categories is None
        else numpy.array(generator_categories)
    )
    signs = numpy.where(
        numpy.array(targets.labels)[:, None] == categories[None, :], 1.0, -1.0
    )
    hinge = numpy.maximum(
        0.0, 1.0 - signs * constraint_scores(transform, targets, generators)
    )
    return transform.regularizer() + config.c_tilde * float(
        numpy.sum(hinge**config.loss_exponent)
    )


def duality_gap(state: DualState, problem: TransformProblem, config: SolverConfig) -> float:
    """
    Returns the primal objective of the betas in the state minus the dual function value
    -dual_objective. The gap is nonnegative and zero at the optimum.
    """
    products = numpy.array([x.dot_rows(state.betas) for x in problem.features])
    scores = products @ problem.rho + problem.offsets
    hinge = numpy.maximum(0.0, 1.0 - problem.signs * scores)
    primal = 0.5 * float(
        numpy.sum(problem.rho * (state.betas @ state.betas.T))
    ) + config.c_tilde * float(numpy.sum(hinge**config.loss_exponent))
    return primal + dual_objective(state, problem)
