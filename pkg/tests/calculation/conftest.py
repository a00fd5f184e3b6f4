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

import numpy as numpy
import pytest
from pymmdt.data import Dataset, DomainTag, FeatureVector, HyperplaneSet


def create_instance(
    seed: int,
    source_dim: int = 4,
    target_dim: int = 3,
    category_count: int = 3,
    target_count: int = 12,
    sparse: bool = False,
) -> tuple[Dataset, HyperplaneSet]:
    """
    Random target examples with every category present and random hyperplanes.
    """
    rng = numpy.random.default_rng(seed)
    rows = rng.normal(0.0, 1.0, (target_count, target_dim))
    if sparse:
        rows[rng.random(rows.shape) < 0.4] = 0.0
    features = [
        FeatureVector.sparse(numpy.nonzero(row)[0], row[numpy.nonzero(row)[0]], target_dim)
        if sparse
        else FeatureVector.dense(row)
        for row in rows
    ]
    labels = [int(k) for k in numpy.arange(target_count) % category_count]
    targets = Dataset(
        features=features,
        labels=labels,
        dimension=target_dim,
        category_count=category_count,
        domain_tag=DomainTag.Target,
    )
    generators = HyperplaneSet(
        planes=rng.normal(0.0, 1.0, (category_count, source_dim))
    )
    return targets, generators


def create_single_example_instance(
    generator: float = 1.0, value: float = 1.0
) -> tuple[Dataset, HyperplaneSet]:
    targets = Dataset(
        features=[FeatureVector.dense([value])],
        labels=[0],
        dimension=1,
        category_count=1,
        domain_tag=DomainTag.Target,
    )
    return targets, HyperplaneSet(planes=[[generator]])


@pytest.fixture()
def random_instance():
    return create_instance


@pytest.fixture()
def single_example_instance():
    return create_single_example_instance
