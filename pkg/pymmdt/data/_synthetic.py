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
from enum import Enum
import numpy as numpy
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pymmdt.data._dataset import Dataset, DomainTag
from pymmdt.data._featurevector import FeatureVector
from pymmdt.data import _data_validation as data_validation


class ShiftKind(Enum):
    Identity = "identity"
    Rotation = "rotation"
    RandomLinear = "random_linear"
    LinearPlusBias = "linear_plus_bias"
    DimensionChange = "dimension_change"


class SynthConfig(BaseModel):
    """
    Settings of a synthetic source/target pair with a hidden linear domain shift.
    """

    model_config = ConfigDict(validate_assignment=True)

    n_source_per_class: int = Field(gt=0, default=20)
    """Number of labeled source examples per category - instance variable."""
    n_target_per_class: int = Field(ge=0, default=5)
    """Number of labeled target training examples per (not held-out) category - instance variable."""
    n_test_per_class: int = Field(ge=0, default=20)
    """Number of labeled target test examples per category - instance variable."""
    source_dim: int = Field(gt=0, default=50)
    """The source dimension D - instance variable."""
    target_dim: int = Field(gt=0, default=50)
    """The target dimension Dt - instance variable."""
    category_count: int = Field(ge=2, default=10)
    """The number of categories K - instance variable."""
    center_spread: float = Field(gt=0.0, default=1.0)
    """Standard deviation of the class center coordinates - instance variable."""
    noise: float = Field(ge=0.0, default=0.5)
    """Standard deviation of the within-class noise - instance variable."""
    shift: ShiftKind = ShiftKind.Rotation
    """The kind of hidden map from source to target - instance variable."""
    shift_strength: float = Field(ge=0.0, default=1.0)
    """Scale of the translation of LinearPlusBias shifts, relative to center_spread - instance variable."""
    heldout_categories: list[int] = []
    """Categories without target training examples - instance variable."""
    rng_seed: int = Field(ge=0, default=0)
    """Seed of the generator - instance variable."""

    @model_validator(mode="after")
    def validate_shift(self):
        if self.shift in (ShiftKind.Identity, ShiftKind.Rotation):
            data_validation.validate_equal_dimensions(
                self.source_dim, self.target_dim, "source_dim", "target_dim"
            )
        if any(k < 0 or k >= self.category_count for k in self.heldout_categories):
            raise ValueError(
                "Held-out categories should lie in [0, {0}).".format(self.category_count)
            )
        return self


class ShiftMap(BaseModel):
    """
    The hidden map x_target = matrix x_source + offset, and the pseudo-inverse mapping back.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: numpy.ndarray
    """A (Dt x D)."""
    offset: numpy.ndarray
    """b (Dt)."""
    inverse: numpy.ndarray
    """The pseudo-inverse of A (D x Dt)."""


class SyntheticDomainPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: Dataset
    """Labeled source data of all categories."""
    target: Dataset
    """Labeled target training data, without the held-out categories."""
    target_test: Dataset
    """Labeled target test data of all categories."""
    shift_map: ShiftMap
    """The ground truth map from source to target."""


def make_shifted_pair(config: SynthConfig) -> SyntheticDomainPair:
    """
    Generates a source dataset of Gaussian classes and a target dataset obtained by
    mapping source-distributed draws through a hidden (affine) map. The result only
    depends on the configuration (including its seed).

    Args:
        config (SynthConfig): The generator settings.

    Returns:
        SyntheticDomainPair: Source, target training and target test data plus the hidden map.
    """
    rng = numpy.random.default_rng(config.rng_seed)
    dimension = config.source_dim
    centers = rng.normal(0.0, config.center_spread, (config.category_count, dimension))
    shift_map = _create_shift_map(config, rng)

    def draw(category: int, count: int) -> numpy.ndarray:
        return centers[category] + config.noise * rng.normal(0.0, 1.0, (count, dimension))

    def to_dataset(rows: list[numpy.ndarray], labels: list[int], tag: DomainTag, dim: int):
        return Dataset(
            features=[FeatureVector.dense(row) for row in rows],
            labels=labels,
            dimension=dim,
            category_count=config.category_count,
            domain_tag=tag,
            category_names=[str(k) for k in range(config.category_count)],
        )

    def to_target(points: numpy.ndarray) -> numpy.ndarray:
        return points @ shift_map.matrix.T + shift_map.offset

    source_rows, source_labels = [], []
    for category in range(config.category_count):
        source_rows.extend(draw(category, config.n_source_per_class))
        source_labels.extend([category] * config.n_source_per_class)

    target_rows, target_labels = [], []
    for category in range(config.category_count):
        if category in config.heldout_categories:
            continue
        target_rows.extend(to_target(draw(category, config.n_target_per_class)))
        target_labels.extend([category] * config.n_target_per_class)

    test_rows, test_labels = [], []
    for category in range(config.category_count):
        test_rows.extend(to_target(draw(category, config.n_test_per_class)))
        test_labels.extend([category] * config.n_test_per_class)

    return SyntheticDomainPair(
        source=to_dataset(source_rows, source_labels, DomainTag.Source, dimension),
        target=to_dataset(
            target_rows, target_labels, DomainTag.Target, config.target_dim
        ),
        target_test=to_dataset(
            test_rows, test_labels, DomainTag.Target, config.target_dim
        ),
        shift_map=shift_map,
    )


def _create_shift_map(config: SynthConfig, rng: numpy.random.Generator) -> ShiftMap:
    source_dim = config.source_dim
    target_dim = config.target_dim
    offset = numpy.zeros(target_dim)
    match config.shift:
        case ShiftKind.Identity:
            matrix = numpy.eye(target_dim)
        case ShiftKind.Rotation:
            q, r = numpy.linalg.qr(rng.normal(0.0, 1.0, (target_dim, source_dim)))
            # column signs follow the diagonal of r
            matrix = q * numpy.sign(numpy.diag(r))
        case ShiftKind.RandomLinear | ShiftKind.DimensionChange:
            matrix = rng.normal(0.0, 1.0 / numpy.sqrt(source_dim), (target_dim, source_dim))
        case ShiftKind.LinearPlusBias:
            matrix = rng.normal(0.0, 1.0 / numpy.sqrt(source_dim), (target_dim, source_dim))
            offset = rng.normal(
                0.0, config.shift_strength * config.center_spread, target_dim
            )
    return ShiftMap(matrix=matrix, offset=offset, inverse=numpy.linalg.pinv(matrix))
