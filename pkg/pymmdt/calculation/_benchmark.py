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
import itertools
import logging
import numpy as numpy
from pydantic import BaseModel, ConfigDict
from pymmdt.data import Dataset, DomainTag, FeatureVector, HyperplaneSet, SolverConfig
from pymmdt.calculation._transform import solve_transform

_logger = logging.getLogger(__name__)

CSV_HEADER = "n,nt,D,Dt,K,pass_ms,per_constraint_ns"


class BenchmarkRow(BaseModel):
    """
    Timing of the transform solver for one grid point, medians over the repetitions.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    """Number of source examples used to derive the hyperplanes."""
    nt: int
    """Number of target examples."""
    D: int
    """Source dimension."""
    Dt: int
    """Target dimension."""
    K: int
    """Number of categories (and hyperplanes)."""
    pass_ms: float
    """Wall time of one pass over all constraints in milliseconds."""
    per_constraint_ns: float
    """Wall time per visited constraint in nanoseconds."""

    def to_csv(self) -> str:
        return "{0},{1},{2},{3},{4},{5!r},{6!r}".format(
            self.n, self.nt, self.D, self.Dt, self.K, self.pass_ms, self.per_constraint_ns
        )


def run_point(
    n: int,
    nt: int,
    D: int,
    Dt: int,
    K: int,
    repetitions: int = 5,
    passes: int = 3,
    rng_seed: int = 0,
) -> BenchmarkRow:
    """
    Times solve_transform on random data. The hyperplanes are the centered class means
    of n random source points, so n and D only enter the precomputation.

    Args:
        n (int): Number of source examples.
        nt (int): Number of target examples.
        D (int): Source dimension.
        Dt (int): Target dimension.
        K (int): Number of categories.
        repetitions (int, optional): Number of timed solves. Defaults to 5.
        passes (int, optional): Number of passes per solve. Defaults to 3.
        rng_seed (int, optional): Seed of the random data. Defaults to 0.

    Returns:
        BenchmarkRow: The median timings.
    """
    rng = numpy.random.default_rng(rng_seed)
    source = rng.normal(0.0, 1.0, (n, D))
    source_labels = numpy.arange(n) % K
    means = numpy.zeros((K, D))
    for k in range(K):
        members = source[source_labels == k]
        if len(members) > 0:
            means[k] = members.mean(axis=0)
    generators = HyperplaneSet(planes=means - means.mean(axis=0))
    targets = Dataset(
        features=[FeatureVector.dense(row) for row in rng.normal(0.0, 1.0, (nt, Dt))],
        labels=[int(k) for k in numpy.arange(nt) % K],
        dimension=Dt,
        category_count=K,
        domain_tag=DomainTag.Target,
    )
    # a tiny tolerance keeps every pass a full pass over all constraints
    config = SolverConfig(
        epsilon=1e-12, max_passes=passes, shrinking=False, rng_seed=rng_seed
    )
    pass_times, constraint_times = [], []
    for _ in range(repetitions):
        _, diagnostics = solve_transform(targets, generators, config)
        pass_times.append(float(numpy.median(diagnostics.pass_seconds)))
        constraint_times.append(
            sum(diagnostics.pass_seconds) / max(sum(diagnostics.visited_constraints), 1)
        )
    row = BenchmarkRow(
        n=n,
        nt=nt,
        D=D,
        Dt=Dt,
        K=K,
        pass_ms=1e3 * float(numpy.median(pass_times)),
        per_constraint_ns=1e9 * float(numpy.median(constraint_times)),
    )
    _logger.info(row.to_csv())
    return row


def run_grid(
    source_counts: list[int],
    target_counts: list[int],
    source_dims: list[int],
    target_dims: list[int],
    category_counts: list[int],
    repetitions: int = 5,
    passes: int = 3,
    rng_seed: int = 0,
) -> list[BenchmarkRow]:
    """
    Runs run_point for every combination of the specified values.

    Returns:
        list[BenchmarkRow]: One row per grid point, in itertools.product order.
    """
    return [
        run_point(n, nt, D, Dt, K, repetitions, passes, rng_seed)
        for n, nt, D, Dt, K in itertools.product(
            source_counts, target_counts, source_dims, target_dims, category_counts
        )
    ]
