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
from collections.abc import Sequence
import numpy as numpy
from pymmdt.data import (
    Dataset,
    FeatureVector,
    HyperplaneSet,
    LowRankTransform,
    MmdtDiagnostics,
    MmdtModel,
    AlternationRecord,
    SolverConfig,
    TransformDiagnostics,
    TransformMode,
)
from pymmdt.calculation._solverexception import SolverException, SolverExceptionType
from pymmdt.calculation import _svm as svm
from pymmdt.calculation import _transform as transform_solver

_logger = logging.getLogger(__name__)


class Mmdt:
    """
    Learns a max-margin domain transform by alternating between the one-vs-all
    hyperplanes (on source data and transformed target data) and the transform
    (against the current hyperplanes). A step whose result would raise the joint
    objective keeps the previous hyperplanes or transform.

    Call run() to start the calculation; on success the model is available as output
    and the per-step objective values as diagnostics. Validation and solver problems
    are reported in messages.
    """

    def __init__(
        self, source: Dataset, target: Dataset, config: SolverConfig | None = None
    ):
        """
        Args:
            source (Dataset): Labeled source data (dimension D).
            target (Dataset): Labeled target data (dimension Dt), with the same categories.
            config (SolverConfig | None, optional): Solver settings, defaults when None.
        """
        self.source = source
        self.target = target
        self.config = config if config is not None else SolverConfig()
        self.output: MmdtModel | None = None
        """The trained model (available after a successful run)."""
        self.diagnostics: MmdtDiagnostics | None = None
        """Joint objective per step and transform solver diagnostics (available after a run)."""
        self.messages: list[str] = []
        """Validation and error messages of the last run."""
        self.error: SolverException | None = None
        """The first error of the last run, None when it succeeded."""

    def run(self) -> bool:
        """
        Validates the input and runs the alternation.

        Returns:
            bool: True if a model was produced.
        """
        self.messages = []
        self.error = None
        self.output = None
        self.diagnostics = None
        if not self.__validate_input_data():
            return False
        try:
            self.output, self.diagnostics = self.__fit()
        except SolverException as e:
            self.__report(e)
            return False
        return True

    def __report(self, error: SolverException):
        if self.error is None:
            self.error = error
        self.messages.append(str(error))
        _logger.error(str(error))

    def __validate_input_data(self) -> bool:
        if self.source is None or self.target is None:
            self.__report(
                SolverException(SolverExceptionType.EmptyInput, "Specify both domains.")
            )
            return False
        if self.source.size == 0:
            self.__report(
                SolverException(SolverExceptionType.EmptyInput, "The source is empty.")
            )
        if self.target.size == 0:
            self.__report(
                SolverException(SolverExceptionType.EmptyInput, "The target is empty.")
            )
        if self.source.category_count < 2:
            self.__report(SolverException(SolverExceptionType.TooFewCategories))
        if self.source.category_count != self.target.category_count:
            self.__report(
                SolverException(
                    SolverExceptionType.CategoryMismatch,
                    "Source has {0} categories, target has {1}.".format(
                        self.source.category_count, self.target.category_count
                    ),
                )
            )
        if (
            self.config.regularizer == TransformMode.IdentityPlus
            and self.source.dimension != self.target.dimension
        ):
            self.__report(
                SolverException(
                    SolverExceptionType.IdentityRequiresEqualDimensions,
                    "D = {0}, Dt = {1}.".format(
                        self.source.dimension, self.target.dimension
                    ),
                )
            )
        return self.error is None

    def __fit(self) -> tuple[MmdtModel, MmdtDiagnostics]:
        config = self.config
        source = self.source.with_bias() if config.augment_bias else self.source
        target = self.target.with_bias() if config.augment_bias else self.target
        constraint_categories = target.present_categories()
        records: list[AlternationRecord] = []
        solves: list[TransformDiagnostics] = []
        model: MmdtModel | None = None
        objective = float("inf")

        def advance(iteration: int, step: str, candidate: MmdtModel, start: float):
            # steps never raise the joint objective, an inexact solve that would is dropped
            nonlocal model, objective
            value = joint_objective(candidate, self.source, self.target, config)
            if value <= objective:
                model, objective = candidate, value
            else:
                _logger.debug(
                    "Iteration %d (%s): the step would raise the joint objective to %.9g, keeping the previous model.",
                    iteration,
                    step,
                    value,
                )
            records.append(
                AlternationRecord(
                    iteration=iteration,
                    step=step,
                    joint_objective=objective,
                    seconds=time.perf_counter() - start,
                )
            )
            _logger.info("Iteration %d (%s): joint objective %.9g.", iteration, step, objective)

        def create_model(transform: LowRankTransform, classifiers: HyperplaneSet):
            return MmdtModel(
                transform=transform,
                classifiers=classifiers,
                category_names=self.source.names,
                generator_categories=constraint_categories,
                augment_bias=config.augment_bias,
            )

        start = time.perf_counter()
        source_rows = source.aligned_features()
        classifiers = svm.train_weighted_one_vs_all(
            source_rows, source.labels, source.category_count, config.c, config
        )
        transform = LowRankTransform.zero(
            classifiers.planes[constraint_categories], target.dimension, config.regularizer
        )
        advance(0, "hyperplanes", create_model(transform, classifiers), start)

        alphas = None
        for iteration in range(1, config.outer_iterations + 1):
            start = time.perf_counter()
            classifiers = self.__train_hyperplanes(
                source, target, model.transform, constraint_categories
            )
            advance(iteration, "hyperplanes", create_model(model.transform, classifiers), start)

            start = time.perf_counter()
            transform, diagnostics = transform_solver.solve_transform(
                target,
                model.classifiers.select(constraint_categories),
                config,
                generator_categories=constraint_categories,
                initial_alphas=alphas if config.warm_start else None,
            )
            alphas = diagnostics.alphas
            solves.append(diagnostics)
            advance(iteration, "transform", create_model(transform, model.classifiers), start)

        if config.final_hyperplane_refresh and config.outer_iterations > 0:
            start = time.perf_counter()
            classifiers = self.__train_hyperplanes(
                source, target, model.transform, constraint_categories
            )
            advance(
                config.outer_iterations,
                "hyperplanes",
                create_model(model.transform, classifiers),
                start,
            )

        return model, MmdtDiagnostics(records=records, transform_diagnostics=solves)

    def __train_hyperplanes(
        self,
        source: Dataset,
        target: Dataset,
        transform: LowRankTransform,
        constraint_categories: list[int],
    ) -> HyperplaneSet:
        config = self.config
        mapped = [
            FeatureVector.dense(transform_solver.apply_to_target(transform, x))
            for x in target.aligned_features()
        ]
        rows = source.aligned_features() + mapped
        labels = list(source.labels) + list(target.labels)
        costs = [config.c] * source.size + [config.c_tilde] * target.size
        # categories without target examples only see source rows
        source_only = list(range(source.size))
        selections = {
            k: source_only
            for k in range(source.category_count)
            if k not in constraint_categories
        }
        return svm.train_weighted_one_vs_all(
            rows, labels, source.category_count, costs, config, selections
        )


def fit(source: Dataset, target: Dataset, config: SolverConfig | None = None) -> MmdtModel:
    """
    Trains a model with the Mmdt runner.

    Raises:
        SolverException: The first validation or solver error.

    Returns:
        MmdtModel: The trained model.
    """
    runner = Mmdt(source, target, config)
    if not runner.run():
        raise (
            runner.error
            if runner.error is not None
            else SolverException(SolverExceptionType.SolverFailed)
        )
    return runner.output


def joint_objective(
    model: MmdtModel, source: Dataset, target: Dataset, config: SolverConfig
) -> float:
    """
    Evaluates 0.5 ||W||^2 (or 0.5 ||W - I||^2) + 0.5 sum_k ||theta_k||^2 plus the hinge
    losses of the source rows (cost C) and of the transformed target rows against the
    hyperplanes of the target categories (cost C_tilde).

    Args:
        model (MmdtModel): The model.
        source (Dataset): The source data without bias feature.
        target (Dataset): The target data without bias feature.
        config (SolverConfig): Provides C, C_tilde and p.

    Returns:
        float: The joint objective.
    """
    if model.augment_bias:
        source, target = source.with_bias(), target.with_bias()
    generators = model.classifiers.select(model.generator_categories)
    return transform_solver.primal_objective(
        model.transform, target, generators, config, model.generator_categories
    ) + svm.one_vs_all_objective(
        model.classifiers, source, config.c, config.loss_exponent
    )


def _prepare(model: MmdtModel, x: FeatureVector) -> FeatureVector:
    if x.dimension != model.target_dimension:
        raise SolverException(
            SolverExceptionType.DimensionMismatch,
            "Vector has dimension {0}, the model expects {1}.".format(
                x.dimension, model.target_dimension
            ),
        )
    return x.with_bias() if model.augment_bias else x


def predict(model: MmdtModel, x: FeatureVector) -> tuple[int, numpy.ndarray]:
    """
    Classifies a target vector with theta_k^T W x = sum_i (theta_k . v_i) beta_i^T x
    (+ theta_k^T x). Ties go to the smallest category id.

    Args:
        model (MmdtModel): The trained model.
        x (FeatureVector): A target vector of dimension Dt.

    Raises:
        SolverException: In case of a dimension mismatch.

    Returns:
        tuple[int, numpy.ndarray]: The predicted category id and the K scores.
    """
    x = _prepare(model, x)
    transform = model.transform
    scores = (model.classifiers.planes @ transform.generators.T) @ x.dot_rows(
        transform.betas
    )
    if transform.mode == TransformMode.IdentityPlus:
        scores = scores + x.dot_rows(model.classifiers.planes)
    return int(numpy.argmax(scores)), scores


def predict_dataset(model: MmdtModel, data: Dataset) -> tuple[list[int], numpy.ndarray]:
    """
    Returns:
        tuple[list[int], numpy.ndarray]: The predicted category ids and the (size x K) scores.
    """
    if data.dimension != model.target_dimension:
        raise SolverException(
            SolverExceptionType.DimensionMismatch,
            "Data has dimension {0}, the model expects {1}.".format(
                data.dimension, model.target_dimension
            ),
        )
    predictions = [predict(model, x) for x in data.aligned_features()]
    if len(predictions) == 0:
        return [], numpy.zeros((0, model.category_count))
    return [label for label, _ in predictions], numpy.array(
        [scores for _, scores in predictions]
    )


def accuracy(model: MmdtModel, data: Dataset) -> tuple[float, list[float | None]]:
    """
    Returns:
        tuple[float, list[float | None]]: The overall accuracy and the accuracy per
        category (None for categories without examples).
    """
    if data.size == 0:
        raise SolverException(SolverExceptionType.EmptyInput)
    predicted, _ = predict_dataset(model, data)
    correct = numpy.array(predicted) == numpy.array(data.labels)
    labels = numpy.array(data.labels)
    per_class = []
    for k in range(model.category_count):
        members = labels == k
        per_class.append(float(numpy.mean(correct[members])) if members.any() else None)
    return float(numpy.mean(correct)), per_class


def transfer_new_category(
    model: MmdtModel,
    new_examples: Sequence[FeatureVector],
    all_source: Dataset,
    cost: float,
    config: SolverConfig | None = None,
    category_name: str | None = None,
) -> MmdtModel:
    """
    Adds a category that has source examples only. Its hyperplane is trained one-vs-all
    in the source space (the new examples positive, all source examples negative) and
    applied to target data through the existing transform, which is left unchanged.

    Args:
        model (MmdtModel): The trained model.
        new_examples (Sequence[FeatureVector]): Source vectors of the new category.
        all_source (Dataset): The source data of the existing categories.
        cost (float): The cost C.
        config (SolverConfig | None, optional): Loss, tolerance, pass limit and seed.
        category_name (str | None, optional): Name of the new category, its id as text when None.

    Raises:
        SolverException: In case the category already exists, no examples are given or
            dimensions do not match.

    Returns:
        MmdtModel: A model with K + 1 classifiers and the same transform.
    """
    config = config if config is not None else SolverConfig()
    name = category_name if category_name is not None else str(model.category_count)
    if name in model.category_names:
        raise SolverException(
            SolverExceptionType.DuplicateCategory, "Category '{0}'.".format(name)
        )
    if len(new_examples) == 0:
        raise SolverException(SolverExceptionType.EmptyInput)
    dimensions = {x.dimension for x in new_examples} | {all_source.dimension}
    if dimensions != {model.source_dimension}:
        raise SolverException(
            SolverExceptionType.DimensionMismatch,
            "The model expects source dimension {0}.".format(model.source_dimension),
        )
    negatives = all_source.aligned_features()
    rows = list(new_examples) + negatives
    if model.augment_bias:
        rows = [x.with_bias() for x in rows]
    signs = [1.0] * len(new_examples) + [-1.0] * len(negatives)
    plane = svm.solve_dual(
        rows,
        signs,
        cost,
        loss_exponent=config.loss_exponent,
        epsilon=config.epsilon,
        max_passes=config.max_passes,
        rng_seed=config.rng_seed + model.category_count,
        shrinking=config.shrinking,
    ).weights
    _logger.info("Added category '%s' without target examples.", name)
    return model.model_copy(
        update={
            "classifiers": model.classifiers.append(plane),
            "category_names": model.category_names + [name],
        }
    )
