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

import argparse
import logging
import os
import sys
import numpy as numpy
from pydantic import ValidationError
from pymmdt.data import (
    Dataset,
    DomainTag,
    ShiftKind,
    SolverConfig,
    SynthConfig,
    TransformMode,
    make_shifted_pair,
)
from pymmdt.calculation import SolverException, SolverExceptionType, Mmdt, mmdt, benchmark
from pymmdt.io import (
    ModelFileException,
    SparseDataReaderException,
    modelfile,
    sparsereader,
)

_logger = logging.getLogger(__name__)

EXIT_SOLVER_FAILURE = 1
EXIT_CONFIGURATION_ERROR = 2
EXIT_DATA_ERROR = 3

_DATA_ERRORS = (
    SolverExceptionType.EmptyInput,
    SolverExceptionType.TooFewCategories,
    SolverExceptionType.DimensionMismatch,
    SolverExceptionType.CategoryMismatch,
)

_PRESETS = {
    "rotation": ShiftKind.Rotation,
    "linear": ShiftKind.RandomLinear,
    "bias": ShiftKind.LinearPlusBias,
    "dimchange": ShiftKind.DimensionChange,
}


class CommandError(Exception):
    """
    Raised by a command to stop with a message and an exit code.
    """

    def __init__(self, message: str, exit_code: int):
        self.exit_code = exit_code
        super().__init__(message)


def main(argv: list[str] | None = None) -> int:
    """
    Entry point of the pymmdt command.

    Args:
        argv (list[str] | None, optional): The arguments, sys.argv[1:] when None.

    Returns:
        int: The exit code: 0 on success, 1 on solver failure, 2 on invalid flags or
        configuration and 3 on data errors.
    """
    parser = create_parser()
    try:
        arguments = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if arguments.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        arguments.command(arguments)
    except CommandError as e:
        _logger.error(str(e))
        return e.exit_code
    except ValidationError as e:
        _logger.error(str(e))
        return EXIT_CONFIGURATION_ERROR
    except (SparseDataReaderException, ModelFileException) as e:
        _logger.error(str(e))
        return EXIT_DATA_ERROR
    except SolverException as e:
        _logger.error(str(e))
        return EXIT_DATA_ERROR if e.type in _DATA_ERRORS else EXIT_SOLVER_FAILURE
    except OSError as e:
        _logger.error(str(e))
        return EXIT_DATA_ERROR
    return 0


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pymmdt",
        description="Max-margin domain transforms: train, predict, evaluate, generate data and benchmark.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    subparsers = parser.add_subparsers(required=True, metavar="command")

    train = subparsers.add_parser("train", help="learn a transform and classifiers")
    train.add_argument("--source", required=True, help="labeled source data")
    train.add_argument("--target", required=True, help="labeled target data")
    train.add_argument("--out", required=True, help="model file to write")
    train.add_argument("--c-src", type=float, default=1.0, help="cost of source constraints")
    train.add_argument("--c-tgt", type=float, default=1.0, help="cost of target constraints")
    train.add_argument("--loss", choices=("l1", "l2"), default="l2")
    train.add_argument("--mode", choices=("pure", "identity"), default="pure")
    train.add_argument("--epsilon", type=float, default=0.1)
    train.add_argument("--max-passes", type=int, default=1000)
    train.add_argument("--outer-iters", type=int, default=2)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--no-bias", action="store_true", help="do not append a constant feature")
    train.add_argument("--final-refresh", action="store_true", help="retrain the classifiers after the last transform")
    train.add_argument("--jobs", type=int, default=1, help="threads for one-vs-all training")
    train.set_defaults(command=cmd_train)

    predict = subparsers.add_parser("predict", help="classify target data")
    predict.add_argument("--model", required=True)
    predict.add_argument("--data", required=True)
    predict.add_argument("--scores", action="store_true", help="also print the score of every category")
    predict.set_defaults(command=cmd_predict)

    evaluate = subparsers.add_parser("eval", help="report accuracy on labeled target data")
    evaluate.add_argument("--model", required=True)
    evaluate.add_argument("--data", required=True)
    evaluate.set_defaults(command=cmd_eval)

    synth = subparsers.add_parser("synth", help="write a synthetic source/target pair")
    synth.add_argument("--preset", choices=tuple(_PRESETS), default="rotation")
    synth.add_argument("--out-dir", required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--classes", type=int, default=10)
    synth.add_argument("--source-dim", type=int, default=50)
    synth.add_argument("--target-dim", type=int, default=None, help="defaults to half the source dimension for dimchange")
    synth.add_argument("--n-source", type=int, default=20, help="source examples per class")
    synth.add_argument("--n-target", type=int, default=5, help="target training examples per class")
    synth.add_argument("--n-test", type=int, default=20, help="target test examples per class")
    synth.add_argument("--noise", type=float, default=0.5)
    synth.add_argument("--heldout", type=int, nargs="*", default=[], help="categories without target training data")
    synth.set_defaults(command=cmd_synth)

    bench = subparsers.add_parser("bench", help="time transform solver passes as CSV")
    bench.add_argument(
        "--grid",
        nargs="*",
        default=[],
        metavar="KEY=VALUES",
        help="comma separated values per key n, nt, D, Dt, K (e.g. nt=500,1000 Dt=64)",
    )
    bench.add_argument("--repeats", type=int, default=5)
    bench.add_argument("--passes", type=int, default=3)
    bench.add_argument("--seed", type=int, default=0)
    bench.set_defaults(command=cmd_bench)
    return parser


def cmd_train(arguments: argparse.Namespace):
    config = SolverConfig(
        c=arguments.c_src,
        c_tilde=arguments.c_tgt,
        loss_exponent=1 if arguments.loss == "l1" else 2,
        epsilon=arguments.epsilon,
        max_passes=arguments.max_passes,
        regularizer=TransformMode.IdentityPlus if arguments.mode == "identity" else TransformMode.Pure,
        outer_iterations=arguments.outer_iters,
        rng_seed=arguments.seed,
        augment_bias=not arguments.no_bias,
        final_hyperplane_refresh=arguments.final_refresh,
        n_jobs=arguments.jobs,
    )
    source = sparsereader.read(arguments.source)
    target = sparsereader.read(arguments.target, vocabulary=source.names)
    if config.regularizer == TransformMode.IdentityPlus and source.dimension != target.dimension:
        raise CommandError(
            "The identity mode requires equal dimensions, source dimension is {0} and target dimension is {1}.".format(
                source.dimension, target.dimension
            ),
            EXIT_CONFIGURATION_ERROR,
        )

    runner = Mmdt(source, target, config)
    if not runner.run():
        raise runner.error
    print("iteration\tstep\tjoint_objective\tseconds")
    for record in runner.diagnostics.records:
        print("{0}\t{1}\t{2!r}\t{3:.6f}".format(record.iteration, record.step, record.joint_objective, record.seconds))
    modelfile.save(runner.output, arguments.out)


def __read_for_model(arguments: argparse.Namespace):
    model = modelfile.load(arguments.model)
    data = sparsereader.read(arguments.data, vocabulary=model.category_names, domain_tag=DomainTag.Target)
    if data.dimension > model.target_dimension:
        raise SolverException(
            SolverExceptionType.DimensionMismatch,
            "Data has dimension {0}, the model expects {1}.".format(data.dimension, model.target_dimension),
        )
    if data.dimension < model.target_dimension:
        data = data.model_copy(update={"dimension": model.target_dimension})
    return model, data


def cmd_predict(arguments: argparse.Namespace):
    model, data = __read_for_model(arguments)
    labels, scores = mmdt.predict_dataset(model, data)
    for label, row in zip(labels, scores):
        line = model.category_names[label]
        if arguments.scores:
            line += "\t" + "\t".join(repr(float(value)) for value in row)
        print(line)


def cmd_eval(arguments: argparse.Namespace):
    model, data = __read_for_model(arguments)
    overall, per_class = mmdt.accuracy(model, data)
    print("accuracy\t{0!r}".format(overall))
    for name, value in zip(model.category_names, per_class):
        print("{0}\t{1}".format(name, "nan" if value is None else repr(value)))


def cmd_synth(arguments: argparse.Namespace):
    shift = _PRESETS[arguments.preset]
    target_dim = arguments.target_dim
    if target_dim is None:
        target_dim = max(arguments.source_dim // 2, 1) if shift == ShiftKind.DimensionChange else arguments.source_dim
    config = SynthConfig(
        n_source_per_class=arguments.n_source,
        n_target_per_class=arguments.n_target,
        n_test_per_class=arguments.n_test,
        source_dim=arguments.source_dim,
        target_dim=target_dim,
        category_count=arguments.classes,
        noise=arguments.noise,
        shift=shift,
        heldout_categories=arguments.heldout,
        rng_seed=arguments.seed,
    )
    pair = make_shifted_pair(config)
    os.makedirs(arguments.out_dir, exist_ok=True)
    files = {
        "source.svm": pair.source,
        "target.svm": pair.target,
        "target_test.svm": pair.target_test,
    }
    if len(config.heldout_categories) > 0:
        files["heldout.svm"] = pair.target_test.subset(config.heldout_categories)
    for file_name, data in files.items():
        __write_nonempty(data, os.path.join(arguments.out_dir, file_name))


def __write_nonempty(data: Dataset, file_name: str):
    if data.size == 0:
        _logger.warning("Skipped %s, it would contain no examples.", file_name)
        return
    sparsereader.write(data, file_name)
    _logger.info("Wrote %d examples to %s.", data.size, file_name)


def cmd_bench(arguments: argparse.Namespace):
    if arguments.repeats < 1 or arguments.passes < 1:
        raise CommandError("--repeats and --passes should be positive.", EXIT_CONFIGURATION_ERROR)
    grid = {"n": [200], "nt": [200], "D": [100], "Dt": [100], "K": [10]}
    for entry in arguments.grid:
        key, separator, values = entry.partition("=")
        if separator == "" or key not in grid:
            raise CommandError(
                "Grid entries should read KEY=VALUES with KEY one of {0}.".format(", ".join(grid)),
                EXIT_CONFIGURATION_ERROR,
            )
        try:
            grid[key] = [int(value) for value in values.split(",")]
        except ValueError:
            raise CommandError("Grid values should be integers: {0}.".format(entry), EXIT_CONFIGURATION_ERROR)
        if any(value < 1 for value in grid[key]):
            raise CommandError("Grid values should be positive: {0}.".format(entry), EXIT_CONFIGURATION_ERROR)

    print(benchmark.CSV_HEADER)
    for n, nt, D, Dt, K in numpy.ndindex(*[len(values) for values in grid.values()]):
        row = benchmark.run_point(
            grid["n"][n],
            grid["nt"][nt],
            grid["D"][D],
            grid["Dt"][Dt],
            grid["K"][K],
            repetitions=arguments.repeats,
            passes=arguments.passes,
            rng_seed=arguments.seed,
        )
        print(row.to_csv(), flush=True)
