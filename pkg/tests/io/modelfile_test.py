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

import os
from pymmdt.io import modelfile, ModelFileException, ModelFileExceptionType
from pymmdt.calculation import mmdt
from pymmdt.data import (
    FeatureVector,
    ShiftKind,
    SolverConfig,
    SynthConfig,
    TransformMode,
    make_shifted_pair,
)
import numpy as numpy
import pytest


def test_read_minimal_model(test_data_dir):
    model = modelfile.load(os.path.join(test_data_dir, "minimal_model.txt"))
    assert model.category_names == ["pos", "neg"]
    assert model.generator_categories == [0]
    assert not model.augment_bias
    assert model.transform.mode == TransformMode.Pure
    assert numpy.array_equal(model.transform.rho, [[1.0]])
    assert mmdt.predict(model, FeatureVector.dense([2.0]))[0] == 0
    assert mmdt.predict(model, FeatureVector.dense([-2.0]))[0] == 1


@pytest.mark.parametrize(
    ("file_name", "expected_type"),
    (
        ("future_model.txt", ModelFileExceptionType.UnsupportedVersion),
        ("truncated_model.txt", ModelFileExceptionType.Truncated),
        ("inconsistent_model.txt", ModelFileExceptionType.DimensionInconsistency),
        ("notutf8_model.txt", ModelFileExceptionType.NotUtf8),
        ("missing_model.txt", ModelFileExceptionType.FileNotFound),
    ),
)
def test_read_incorrect_file(test_data_dir, file_name, expected_type):
    with pytest.raises(ModelFileException) as e:
        modelfile.load(os.path.join(test_data_dir, file_name))
    assert e.value.type == expected_type


def test_unsupported_version_names_supported_versions(test_data_dir):
    with pytest.raises(ModelFileException) as e:
        modelfile.load(os.path.join(test_data_dir, "future_model.txt"))
    assert "supported versions are: 1" in str(e.value)


@pytest.mark.parametrize("mode", (TransformMode.Pure, TransformMode.IdentityPlus))
def test_saved_model_gives_same_scores(tmp_path, mode):
    pair = make_shifted_pair(
        SynthConfig(
            source_dim=5,
            target_dim=5,
            category_count=3,
            n_source_per_class=8,
            n_target_per_class=2,
            n_test_per_class=5,
            shift=ShiftKind.LinearPlusBias,
            heldout_categories=[2],
        )
    )
    model = mmdt.fit(pair.source, pair.target, SolverConfig(regularizer=mode))
    file_name = os.path.join(tmp_path, "model.txt")
    modelfile.save(model, file_name)
    loaded = modelfile.load(file_name)
    assert loaded.generator_categories == [0, 1]
    assert loaded.transform.mode == mode
    assert numpy.array_equal(loaded.transform.betas, model.transform.betas)
    assert numpy.array_equal(loaded.classifiers.planes, model.classifiers.planes)
    _, expected = mmdt.predict_dataset(model, pair.target_test)
    _, scores = mmdt.predict_dataset(loaded, pair.target_test)
    assert numpy.array_equal(scores, expected)
