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

from pymmdt.calculation import svm
from pymmdt.data import Dataset, ShiftKind, SolverConfig, SynthConfig, make_shifted_pair
import numpy as numpy
import pytest
from pydantic import ValidationError


def test_fixed_seed_is_deterministic():
    config = SynthConfig(source_dim=8, target_dim=8, category_count=3, rng_seed=7)
    first = make_shifted_pair(config)
    second = make_shifted_pair(config)
    for a, b in (
        (first.source, second.source),
        (first.target, second.target),
        (first.target_test, second.target_test),
    ):
        assert a.labels == b.labels
        assert numpy.array_equal(a.to_dense(), b.to_dense())


def test_sizes():
    config = SynthConfig(
        n_source_per_class=4,
        n_target_per_class=2,
        n_test_per_class=3,
        source_dim=6,
        target_dim=6,
        category_count=5,
        heldout_categories=[1, 3],
    )
    pair = make_shifted_pair(config)
    assert pair.source.size == 20
    assert pair.target.size == 6
    assert pair.target_test.size == 15
    assert pair.target.present_categories() == [0, 2, 4]
    assert pair.target_test.present_categories() == [0, 1, 2, 3, 4]
    assert pair.target.category_count == 5


def test_identity_without_noise_maps_onto_source_centers():
    config = SynthConfig(
        source_dim=4, target_dim=4, category_count=3, noise=0.0, shift=ShiftKind.Identity
    )
    pair = make_shifted_pair(config)
    assert numpy.array_equal(pair.shift_map.matrix, numpy.eye(4))
    assert numpy.array_equal(pair.shift_map.offset, numpy.zeros(4))
    source = pair.source.to_dense()
    target = pair.target.to_dense()
    for row, label in zip(target, pair.target.labels):
        center = source[pair.source.labels.index(label)]
        assert numpy.allclose(row, center, rtol=0.0, atol=1e-12)


def test_rotation_is_orthogonal():
    pair = make_shifted_pair(SynthConfig(source_dim=10, target_dim=10))
    matrix = pair.shift_map.matrix
    assert numpy.allclose(matrix @ matrix.T, numpy.eye(10), atol=1e-12)
    assert numpy.allclose(pair.shift_map.inverse, matrix.T, atol=1e-10)


def test_rotation_defeats_source_classifiers():
    settings = dict(
        source_dim=50,
        target_dim=50,
        category_count=10,
        n_source_per_class=20,
        n_target_per_class=5,
        n_test_per_class=20,
        rng_seed=0,
    )
    rotated = make_shifted_pair(SynthConfig(shift=ShiftKind.Rotation, **settings))
    # same seed, so the same class centers
    unshifted = make_shifted_pair(SynthConfig(shift=ShiftKind.Identity, **settings))
    config = SolverConfig(epsilon=1e-3)
    planes = svm.train_one_vs_all(rotated.source.with_bias(), config.c, config).planes

    def accuracy(data: Dataset) -> float:
        predicted = numpy.argmax(data.with_bias().to_dense() @ planes.T, axis=1)
        return float(numpy.mean(predicted == numpy.array(data.labels)))

    assert accuracy(unshifted.target_test) >= accuracy(rotated.target_test) + 0.2


def test_dimension_change():
    pair = make_shifted_pair(
        SynthConfig(source_dim=12, target_dim=5, shift=ShiftKind.DimensionChange)
    )
    assert pair.source.dimension == 12
    assert pair.target.dimension == 5
    assert pair.shift_map.matrix.shape == (5, 12)
    assert pair.shift_map.inverse.shape == (12, 5)


def test_linear_plus_bias_has_offset():
    pair = make_shifted_pair(
        SynthConfig(source_dim=5, target_dim=5, shift=ShiftKind.LinearPlusBias)
    )
    assert numpy.linalg.norm(pair.shift_map.offset) > 0.0


@pytest.mark.parametrize(
    "settings",
    (
        {"source_dim": 4, "target_dim": 5, "shift": ShiftKind.Rotation},
        {"category_count": 1},
        {"heldout_categories": [10]},
        {"noise": -1.0},
    ),
)
def test_invalid_config(settings):
    with pytest.raises(ValidationError):
        SynthConfig(**settings)
