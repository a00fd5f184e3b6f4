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

from pymmdt.calculation import transform, oracle, SolverException, SolverExceptionType
from pymmdt.data import (
    Dataset,
    DomainTag,
    FeatureVector,
    HyperplaneSet,
    LowRankTransform,
    SolverConfig,
    TransformMode,
)
import numpy as numpy
import pytest


def create_state(targets, generators, config, mode=TransformMode.Pure, alphas=None):
    problem = transform.TransformProblem(targets, generators, mode)
    state = transform.DualState(problem, config.lambda_, config.upper_bound, alphas)
    return problem, state


@pytest.mark.parametrize(
    ("category", "generator", "expected"), ((2, 2, 1.0), (2, 0, -1.0), (0, 1, -1.0))
)
def test_constraint_label(category, generator, expected):
    assert transform.constraint_label(category, generator) == expected


def test_constraint_label_with_generator_categories():
    assert transform.constraint_label(4, 1, [2, 4]) == 1.0
    assert transform.constraint_label(4, 0, [2, 4]) == -1.0


def test_exactly_one_positive_label_per_example(random_instance):
    targets, generators = random_instance(0, category_count=4, target_count=10)
    problem = transform.TransformProblem(targets, generators)
    assert numpy.count_nonzero(problem.signs == 1.0) == targets.size
    assert numpy.count_nonzero(problem.signs == -1.0) == 3 * targets.size


def test_score_zero_transform(random_instance):
    targets, generators = random_instance(1)
    problem, state = create_state(targets, generators, SolverConfig())
    for j in range(targets.size):
        for i in range(generators.count):
            assert transform.score(i, j, problem, state) == 0.0


def test_score_identity_without_betas(random_instance):
    targets, generators = random_instance(2, source_dim=3, target_dim=3)
    problem, state = create_state(
        targets, generators, SolverConfig(), TransformMode.IdentityPlus
    )
    for j, x in enumerate(targets.features):
        for i, v in enumerate(generators.planes):
            assert transform.score(i, j, problem, state) == pytest.approx(
                x.dot_dense(v), abs=1e-12
            )


def test_score_single_generator(single_example_instance):
    targets, generators = single_example_instance(generator=2.0)
    problem, state = create_state(targets, generators, SolverConfig())
    state.betas = numpy.array([[3.0]])
    assert transform.score(0, 0, problem, state) == 12.0
    matrix = transform.materialize(
        LowRankTransform(generators=[[2.0]], betas=state.betas)
    )
    assert matrix[0, 0] == 6.0


@pytest.mark.parametrize("mode", (TransformMode.Pure, TransformMode.IdentityPlus))
def test_score_matches_materialized_transform(random_instance, mode):
    targets, generators = random_instance(3, source_dim=4, target_dim=4)
    config = SolverConfig(regularizer=mode, epsilon=1e-3)
    solution, diagnostics = transform.solve_transform(targets, generators, config)
    problem, state = create_state(targets, generators, config, mode, diagnostics.alphas)
    matrix = transform.materialize(solution)
    for j, x in enumerate(targets.features):
        mapped = matrix @ x.to_dense()
        for i, v in enumerate(generators.planes):
            assert transform.score(i, j, problem, state) == pytest.approx(
                v @ mapped, abs=1e-9
            )


def test_cold_start_gradient(random_instance):
    targets, generators = random_instance(4)
    problem, state = create_state(targets, generators, SolverConfig())
    for j in range(targets.size):
        for i in range(generators.count):
            assert transform.projected_gradient(i, j, problem, state) == (-1.0, -1.0)


def test_gradient_at_satisfied_margin(single_example_instance):
    targets, generators = single_example_instance()
    problem, state = create_state(targets, generators, SolverConfig())
    state.betas = numpy.array([[2.0]])
    assert transform.projected_gradient(0, 0, problem, state) == (1.0, 0.0)


def test_projected_gradient_at_upper_bound(single_example_instance):
    targets, generators = single_example_instance()
    config = SolverConfig(loss_exponent=1, c_tilde=0.25)
    problem, state = create_state(targets, generators, config, alphas=[[0.25]])
    g, pg = transform.projected_gradient(0, 0, problem, state)
    assert g == pytest.approx(-0.75)
    assert pg == 0.0


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("mode", (TransformMode.Pure, TransformMode.IdentityPlus))
def test_gradient_matches_finite_differences(random_instance, seed, mode):
    targets, generators = random_instance(seed, source_dim=3, target_dim=3, target_count=6)
    config = SolverConfig(c_tilde=0.8)
    alphas = numpy.random.default_rng(seed).uniform(0.1, 1.0, (6, 3))
    problem, state = create_state(targets, generators, config, mode, alphas)
    h = 1e-6

    def objective(shifted):
        _, shifted_state = create_state(targets, generators, config, mode, shifted)
        return transform.dual_objective(shifted_state, problem)

    for j in range(6):
        for i in range(3):
            g, _ = transform.projected_gradient(i, j, problem, state)
            plus, minus = alphas.copy(), alphas.copy()
            plus[j, i] += h
            minus[j, i] -= h
            difference = (objective(plus) - objective(minus)) / (2.0 * h)
            assert g == pytest.approx(difference, rel=1e-5, abs=1e-6)


def test_single_coordinate_step(single_example_instance):
    targets, generators = single_example_instance()
    config = SolverConfig(c_tilde=0.5)
    problem, state = create_state(targets, generators, config)
    delta = transform.coordinate_step(0, 0, problem, state)
    assert delta == pytest.approx(0.5)
    assert state.alphas[0, 0] == pytest.approx(0.5)
    assert state.betas[0, 0] == pytest.approx(0.5)
    assert transform.projected_gradient(0, 0, problem, state)[1] == pytest.approx(0.0)
    assert transform.dual_objective(state, problem) == pytest.approx(-0.25)


def test_step_only_changes_one_beta(random_instance):
    targets, generators = random_instance(5)
    problem, state = create_state(targets, generators, SolverConfig())
    before = state.betas.copy()
    transform.coordinate_step(1, 2, problem, state)
    assert not numpy.array_equal(state.betas[1], before[1])
    assert numpy.array_equal(state.betas[0], before[0])
    assert numpy.array_equal(state.betas[2], before[2])


def test_cache_is_patched_after_step(random_instance):
    targets, generators = random_instance(6)
    problem, state = create_state(targets, generators, SolverConfig())
    transform.coordinate_step(0, 3, problem, state)
    transform.coordinate_step(2, 3, problem, state)
    expected = targets.features[3].dot_rows(state.betas)
    assert numpy.allclose(state.cache[3], expected, atol=1e-12)
    assert state.cache_stamp[3] == state.update_count


@pytest.mark.parametrize(
    ("c_tilde", "expected"), ((0.5, 0.5), (1.0, 2.0 / 3.0), (1e8, 1.0))
)
def test_solve_single_example(single_example_instance, c_tilde, expected):
    targets, generators = single_example_instance()
    config = SolverConfig(c_tilde=c_tilde, epsilon=1e-10)
    solution, diagnostics = transform.solve_transform(targets, generators, config)
    assert diagnostics.converged
    assert transform.materialize(solution)[0, 0] == pytest.approx(expected, abs=1e-7)


def test_single_example_objectives(single_example_instance):
    targets, generators = single_example_instance()
    config = SolverConfig(c_tilde=0.5, epsilon=1e-10)
    solution, diagnostics = transform.solve_transform(targets, generators, config)
    assert diagnostics.dual_objective == pytest.approx(-0.25)
    assert diagnostics.primal_objective == pytest.approx(0.25)
    assert diagnostics.duality_gap == pytest.approx(0.0, abs=1e-12)
    assert transform.primal_objective(
        solution, targets, generators, config
    ) == pytest.approx(0.25)


@pytest.mark.parametrize("loss_exponent", (1, 2))
def test_zero_targets_give_zero_transform(loss_exponent):
    targets = Dataset(
        features=[FeatureVector.dense([0.0, 0.0])] * 4,
        labels=[0, 1, 0, 1],
        dimension=2,
        category_count=2,
        domain_tag=DomainTag.Target,
    )
    generators = HyperplaneSet(planes=[[1.0, 2.0, 3.0], [0.0, 1.0, 0.0]])
    config = SolverConfig(loss_exponent=loss_exponent)
    solution, diagnostics = transform.solve_transform(targets, generators, config)
    assert numpy.array_equal(solution.betas, numpy.zeros((2, 2)))
    assert numpy.array_equal(transform.materialize(solution), numpy.zeros((3, 2)))
    if loss_exponent == 1:
        assert diagnostics.skipped_constraints == 8
        assert diagnostics.steps == 0


def test_zero_transform_primal(random_instance):
    targets, generators = random_instance(7, category_count=3, target_count=9)
    zero = LowRankTransform.zero(generators.planes, targets.dimension, TransformMode.Pure)
    config = SolverConfig(c_tilde=1.5)
    assert transform.primal_objective(zero, targets, generators, config) == pytest.approx(
        1.5 * 3 * 9
    )


def test_zero_alphas_dual(random_instance):
    targets, generators = random_instance(8)
    problem, state = create_state(targets, generators, SolverConfig())
    assert transform.dual_objective(state, problem) == 0.0


@pytest.mark.parametrize("seed", range(50))
def test_low_rank_solver_matches_dense_solver(random_instance, seed):
    rng = numpy.random.default_rng(1000 + seed)
    mode = TransformMode.IdentityPlus if seed % 2 == 1 else TransformMode.Pure
    source_dim = int(rng.integers(2, 7))
    target_dim = source_dim if mode == TransformMode.IdentityPlus else int(rng.integers(2, 7))
    targets, generators = random_instance(
        seed,
        source_dim=source_dim,
        target_dim=target_dim,
        category_count=int(rng.integers(2, 5)),
        target_count=int(rng.integers(4, 21)),
        sparse=seed % 3 == 0,
    )
    config = SolverConfig(
        regularizer=mode,
        loss_exponent=1 if (seed // 2) % 2 == 1 else 2,
        c_tilde=(0.1, 1.0, 10.0)[seed % 3],
        epsilon=1e-8,
        max_passes=10**4,
    )
    solution, diagnostics = transform.solve_transform(targets, generators, config)
    dense_matrix, dense_dual = oracle.naive_solve(targets, generators, config)
    matrix = transform.materialize(solution)
    assert diagnostics.converged
    assert diagnostics.dual_objective == pytest.approx(dense_dual, rel=1e-6, abs=1e-9)
    assert numpy.linalg.norm(matrix - dense_matrix) <= 1e-4 * max(
        numpy.linalg.norm(dense_matrix), 1.0
    )


def test_reference_instance_matches_dense_solver(random_instance):
    targets, generators = random_instance(42, source_dim=4, target_dim=3, category_count=3, target_count=12)
    config = SolverConfig(epsilon=1e-8)
    solution, _ = transform.solve_transform(targets, generators, config)
    dense_matrix, _ = oracle.naive_solve(targets, generators, config)
    matrix = transform.materialize(solution)
    assert numpy.linalg.norm(matrix - dense_matrix) <= 1e-4 * numpy.linalg.norm(dense_matrix)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("mode", (TransformMode.Pure, TransformMode.IdentityPlus))
def test_dual_objective_matches_dense_formulation(random_instance, seed, mode):
    targets, generators = random_instance(seed, source_dim=3, target_dim=3, target_count=5)
    config = SolverConfig(c_tilde=0.7)
    alphas = numpy.random.default_rng(seed).uniform(0.0, 1.0, (5, 3))
    problem, state = create_state(targets, generators, config, mode, alphas)
    examples = oracle.build_augmented(targets, generators)
    flat = state.flat_alphas()
    w = sum(a * example.t * example.d for a, example in zip(flat, examples))
    shift = numpy.array(
        [
            example.t * generators.planes[i] @ targets.features[j].to_dense()
            if mode == TransformMode.IdentityPlus
            else 0.0
            for example in examples
            for i, j in [example.origin]
        ]
    )
    expected = 0.5 * w @ w + 0.5 * config.lambda_ * flat @ flat - flat @ (1.0 - shift)
    assert transform.dual_objective(state, problem) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("loss_exponent", (1, 2))
def test_representer_consistency(random_instance, seed, loss_exponent):
    targets, generators = random_instance(seed, sparse=seed % 2 == 0)
    config = SolverConfig(loss_exponent=loss_exponent, epsilon=1e-4)
    solution, diagnostics = transform.solve_transform(targets, generators, config)
    problem, state = create_state(targets, generators, config, alphas=diagnostics.alphas)
    assert numpy.allclose(state.recompute_betas(problem), solution.betas, rtol=0.0, atol=1e-9)
    assert numpy.all(diagnostics.alphas >= 0.0)
    if loss_exponent == 1:
        assert numpy.all(diagnostics.alphas <= config.c_tilde)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("loss_exponent", (1, 2))
def test_dual_objective_is_non_increasing(random_instance, seed, loss_exponent):
    targets, generators = random_instance(seed, target_count=20)
    config = SolverConfig(loss_exponent=loss_exponent, epsilon=1e-6)
    _, diagnostics = transform.solve_transform(
        targets, generators, config, record_objective=True
    )
    history = diagnostics.dual_objective_history
    assert len(history) == diagnostics.passes
    assert all(b <= a + 1e-10 for a, b in zip(history, history[1:]))
    assert diagnostics.passes <= config.max_passes


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("mode", (TransformMode.Pure, TransformMode.IdentityPlus))
def test_duality_gap(random_instance, seed, mode):
    targets, generators = random_instance(seed, source_dim=3, target_dim=3)
    config = SolverConfig(regularizer=mode, epsilon=1e-6)
    _, diagnostics = transform.solve_transform(targets, generators, config)
    problem, state = create_state(targets, generators, config, mode, diagnostics.alphas)
    assert diagnostics.converged
    assert -1e-9 <= diagnostics.duality_gap <= 1e-3
    assert transform.duality_gap(state, problem, config) == pytest.approx(
        diagnostics.duality_gap, abs=1e-9
    )


def test_weak_duality_away_from_optimum(random_instance):
    targets, generators = random_instance(9)
    config = SolverConfig()
    alphas = numpy.random.default_rng(9).uniform(0.0, 3.0, (12, 3))
    problem, state = create_state(targets, generators, config, alphas=alphas)
    assert transform.duality_gap(state, problem, config) >= 0.0


@pytest.mark.parametrize("seed", range(5))
def test_norm_factorization(seed):
    rng = numpy.random.default_rng(seed)
    v, x = rng.normal(size=4), rng.normal(size=6)
    targets = Dataset(
        features=[FeatureVector.dense(x)], labels=[0], dimension=6, category_count=1
    )
    problem = transform.TransformProblem(targets, HyperplaneSet(planes=[v]))
    assert problem.q[0] * problem.rho[0, 0] == pytest.approx(
        numpy.linalg.norm(numpy.outer(v, x)) ** 2, rel=1e-12
    )


def test_source_dimension_only_enters_the_correlations(random_instance):
    targets, generators = random_instance(10, source_dim=5)
    padded = HyperplaneSet(
        planes=numpy.hstack([generators.planes, numpy.zeros((generators.count, 500))])
    )
    config = SolverConfig(epsilon=1e-6)
    _, small = transform.solve_transform(targets, generators, config)
    _, large = transform.solve_transform(targets, padded, config)
    assert numpy.allclose(small.alphas, large.alphas, rtol=0.0, atol=1e-5)


def test_warm_start(random_instance):
    targets, generators = random_instance(11, target_count=20)
    config = SolverConfig(epsilon=1e-6)
    _, cold = transform.solve_transform(targets, generators, config)
    moved = HyperplaneSet(planes=generators.planes * 1.01)
    _, warm = transform.solve_transform(targets, moved, config, initial_alphas=cold.alphas)
    _, reference = transform.solve_transform(targets, moved, config)
    assert warm.converged
    assert warm.dual_objective == pytest.approx(reference.dual_objective, rel=1e-5)


def test_generator_categories(random_instance):
    targets, generators = random_instance(12, category_count=4)
    subset = targets.subset([1, 3])
    config = SolverConfig(epsilon=1e-6)
    solution, diagnostics = transform.solve_transform(
        subset, generators.select([1, 3]), config, generator_categories=[1, 3]
    )
    assert solution.rank_bound == 2
    assert diagnostics.alphas.shape == (subset.size, 2)


def test_empty_targets(random_instance):
    _, generators = random_instance(13)
    targets = Dataset(features=[], labels=[], dimension=3, category_count=3)
    with pytest.raises(SolverException) as e:
        transform.solve_transform(targets, generators, SolverConfig())
    assert e.value.type == SolverExceptionType.EmptyInput


def test_category_mismatch(random_instance):
    targets, generators = random_instance(14, category_count=3)
    with pytest.raises(SolverException) as e:
        transform.solve_transform(targets, generators.select([0, 1]), SolverConfig())
    assert e.value.type == SolverExceptionType.CategoryMismatch


def test_identity_requires_equal_dimensions(random_instance):
    targets, generators = random_instance(15, source_dim=4, target_dim=3)
    config = SolverConfig(regularizer=TransformMode.IdentityPlus)
    with pytest.raises(SolverException) as e:
        transform.solve_transform(targets, generators, config)
    assert e.value.type == SolverExceptionType.IdentityRequiresEqualDimensions


def test_materialize_examples():
    identity = LowRankTransform.zero(numpy.eye(3), 3, TransformMode.IdentityPlus)
    assert numpy.array_equal(transform.materialize(identity), numpy.eye(3))
    stacked = LowRankTransform(
        generators=[[1.0, 0.0], [0.0, 1.0]], betas=[[2.0, 3.0], [4.0, 5.0]]
    )
    assert numpy.array_equal(transform.materialize(stacked), [[2.0, 3.0], [4.0, 5.0]])


def test_materialize_budget():
    large = LowRankTransform.zero(numpy.ones((1, 100)), 200, TransformMode.Pure)
    with pytest.raises(SolverException) as e:
        transform.materialize(large, budget=10**4)
    assert e.value.type == SolverExceptionType.BudgetExceeded


def test_materialize_default_budget():
    large = LowRankTransform.zero(numpy.ones((1, 4000)), 3000, TransformMode.Pure)
    with pytest.raises(SolverException) as e:
        transform.materialize(large)
    assert e.value.type == SolverExceptionType.BudgetExceeded
    assert not hasattr(SolverConfig(), "materialize_budget")


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("mode", (TransformMode.Pure, TransformMode.IdentityPlus))
def test_materialized_rank(seed, mode):
    rng = numpy.random.default_rng(seed)
    low_rank = LowRankTransform(
        generators=rng.normal(size=(3, 8)), betas=rng.normal(size=(3, 8)), mode=mode
    )
    matrix = transform.materialize(low_rank)
    if mode == TransformMode.IdentityPlus:
        matrix = matrix - numpy.eye(8)
    singular_values = numpy.linalg.svd(matrix, compute_uv=False)
    assert numpy.all(singular_values[3:] < 1e-8 * singular_values[0])


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("mode", (TransformMode.Pure, TransformMode.IdentityPlus))
def test_apply_and_map_match_materialized_transform(seed, mode):
    rng = numpy.random.default_rng(seed)
    low_rank = LowRankTransform(
        generators=rng.normal(size=(3, 6)), betas=rng.normal(size=(3, 6)), mode=mode
    )
    matrix = transform.materialize(low_rank)
    x = FeatureVector.sparse([1, 4], rng.normal(size=2), 6)
    u = rng.normal(size=6)
    mapped = transform.apply_to_target(low_rank, x)
    assert numpy.allclose(mapped, matrix @ x.to_dense(), rtol=0.0, atol=1e-9)
    assert numpy.allclose(transform.map_hyperplane(low_rank, u), matrix.T @ u, rtol=0.0, atol=1e-9)
    assert x.dot_dense(transform.map_hyperplane(low_rank, u)) == pytest.approx(u @ mapped, abs=1e-9)


def test_zero_betas_apply():
    x = FeatureVector.dense([1.0, -2.0, 3.0])
    pure = LowRankTransform.zero(numpy.ones((2, 3)), 3, TransformMode.Pure)
    identity = LowRankTransform.zero(numpy.ones((2, 3)), 3, TransformMode.IdentityPlus)
    assert numpy.array_equal(transform.apply_to_target(pure, x), numpy.zeros(3))
    assert numpy.array_equal(transform.apply_to_target(identity, x), x.to_dense())


def test_map_orthogonal_hyperplane():
    low_rank = LowRankTransform(generators=[[1.0, 0.0, 0.0]], betas=[[1.0, 2.0]])
    assert numpy.array_equal(
        transform.map_hyperplane(low_rank, numpy.array([0.0, 3.0, -1.0])), numpy.zeros(2)
    )


def test_dimension_mismatch():
    low_rank = LowRankTransform.zero(numpy.ones((2, 3)), 4, TransformMode.Pure)
    with pytest.raises(SolverException):
        transform.apply_to_target(low_rank, FeatureVector.dense([1.0, 2.0]))
    with pytest.raises(SolverException):
        transform.map_hyperplane(low_rank, numpy.ones(4))
