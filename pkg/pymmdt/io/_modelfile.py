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

# Text persistence of trained models. A model file is UTF-8 text with LF line endings:
#
#     format_version 1
#     mode pure
#     D 3
#     Dt 3
#     m 2
#     K 3
#     bias 1
#     generator_categories 0 1
#     V
#     <m rows of D values>
#     B
#     <m rows of Dt values>
#     theta
#     <K rows of D values>
#     categories
#     <K names, one per line>
#
# D and Dt are the lengths of the stored rows, including the bias feature when bias is 1.
# The correlation matrix of the generators is recomputed on load.

import os.path
import logging
from enum import Enum
import numpy as numpy
from pydantic import ValidationError
from pymmdt.data import HyperplaneSet, LowRankTransform, MmdtModel, TransformMode

_logger = logging.getLogger(__name__)

SUPPORTED_VERSIONS = (1,)
_HEADER_KEYS = ("format_version", "mode", "D", "Dt", "m", "K", "bias", "generator_categories")


class ModelFileExceptionType(Enum):
    """
    This enum provides the type of error raised in case a model file could not be read.
    """

    FileNotFound = "File could not be found."
    UnsupportedVersion = "Unsupported format version, supported versions are: {0}.".format(
        ", ".join(str(version) for version in SUPPORTED_VERSIONS)
    )
    Truncated = "The file ended before the model was complete."
    MalformedValue = "A header entry or matrix value could not be read."
    DimensionInconsistency = "The stored matrices do not have the declared dimensions."
    NotUtf8 = "The file is not UTF-8 encoded text."


class ModelFileException(Exception):
    """
    Custom exception used when reading model files. The ModelFileExceptionType (type) provides
    information on what went wrong.

    Args:
        type (ModelFileExceptionType): The type of exception that occurred.
        detail (str | None): Additional information.
    """

    def __init__(self, type: ModelFileExceptionType, detail: str | None = None):
        self.type = type
        self.detail = detail
        message = str(self.type.value)
        if detail is not None:
            message = "{0} {1}".format(message, detail)
        super().__init__(message)


def save(model: MmdtModel, file_name: str):
    """
    Writes a model. Values are written with the shortest decimal representation that
    reads back to the same float.

    Args:
        model (MmdtModel): The model to save.
        file_name (str): The full path to the file.
    """
    transform = model.transform

    def rows(matrix: numpy.ndarray) -> list[str]:
        return [" ".join(repr(float(value)) for value in row) for row in matrix]

    lines = [
        "format_version {0}".format(SUPPORTED_VERSIONS[-1]),
        "mode {0}".format(transform.mode.value),
        "D {0}".format(transform.source_dim),
        "Dt {0}".format(transform.target_dim),
        "m {0}".format(transform.rank_bound),
        "K {0}".format(model.category_count),
        "bias {0}".format(1 if model.augment_bias else 0),
        "generator_categories {0}".format(" ".join(str(k) for k in model.generator_categories)),
        "V",
        *rows(transform.generators),
        "B",
        *rows(transform.betas),
        "theta",
        *rows(model.classifiers.planes),
        "categories",
        *model.category_names,
    ]
    with open(file_name, "w", encoding="utf-8", newline="\n") as file:
        file.write("\n".join(lines) + "\n")
    _logger.debug("Saved model with %d categories to %s.", model.category_count, file_name)


def load(file_name: str) -> MmdtModel:
    """
    Reads a model written by save.

    Args:
        file_name (str): The full path to the file.

    Raises:
        ModelFileException: Raised in case the file could not be read.

    Returns:
        MmdtModel: The model.
    """
    if not os.path.isfile(file_name):
        raise ModelFileException(ModelFileExceptionType.FileNotFound)

    try:
        with open(file_name, encoding="utf-8") as file:
            lines = [line.rstrip("\r\n") for line in file]
    except UnicodeDecodeError:
        raise ModelFileException(ModelFileExceptionType.NotUtf8)

    header = __read_header(lines)
    D, Dt, m, K = header["D"], header["Dt"], header["m"], header["K"]
    position = len(_HEADER_KEYS)
    generators, position = __read_block(lines, position, "V", m, D)
    betas, position = __read_block(lines, position, "B", m, Dt)
    theta, position = __read_block(lines, position, "theta", K, D)
    __expect(lines, position, "categories")
    names = lines[position + 1 : position + 1 + K]
    if len(names) < K:
        raise ModelFileException(ModelFileExceptionType.Truncated)

    try:
        return MmdtModel(
            transform=LowRankTransform(
                generators=generators, betas=betas, mode=header["mode"]
            ),
            classifiers=HyperplaneSet(planes=theta),
            category_names=names,
            generator_categories=header["generator_categories"],
            augment_bias=header["bias"],
        )
    except ValidationError as e:
        raise ModelFileException(ModelFileExceptionType.DimensionInconsistency, str(e))


def __read_header(lines: list[str]) -> dict:
    if len(lines) < len(_HEADER_KEYS):
        raise ModelFileException(ModelFileExceptionType.Truncated)
    entries = {}
    for key, line in zip(_HEADER_KEYS, lines):
        found, _, value = line.partition(" ")
        if found != key:
            raise ModelFileException(
                ModelFileExceptionType.MalformedValue,
                "Expected '{0}', found '{1}'.".format(key, line),
            )
        entries[key] = value.strip()

    try:
        version = int(entries["format_version"])
    except ValueError:
        raise ModelFileException(ModelFileExceptionType.MalformedValue, lines[0])
    if version not in SUPPORTED_VERSIONS:
        raise ModelFileException(
            ModelFileExceptionType.UnsupportedVersion, "Found {0}.".format(version)
        )

    try:
        header = {
            "mode": TransformMode(entries["mode"]),
            "D": int(entries["D"]),
            "Dt": int(entries["Dt"]),
            "m": int(entries["m"]),
            "K": int(entries["K"]),
            "bias": bool(int(entries["bias"])),
            "generator_categories": [int(k) for k in entries["generator_categories"].split()],
        }
    except ValueError as e:
        raise ModelFileException(ModelFileExceptionType.MalformedValue, str(e))
    if min(header["D"], header["Dt"], header["m"], header["K"]) < 1:
        raise ModelFileException(
            ModelFileExceptionType.DimensionInconsistency, "Sizes should be positive."
        )
    if len(header["generator_categories"]) != header["m"]:
        raise ModelFileException(
            ModelFileExceptionType.DimensionInconsistency,
            "Expected {0} generator categories.".format(header["m"]),
        )
    return header


def __expect(lines: list[str], position: int, keyword: str):
    if position >= len(lines):
        raise ModelFileException(ModelFileExceptionType.Truncated)
    if lines[position].strip() != keyword:
        raise ModelFileException(
            ModelFileExceptionType.MalformedValue,
            "Expected '{0}' at line {1}.".format(keyword, position + 1),
        )


def __read_block(
    lines: list[str], position: int, keyword: str, rows: int, columns: int
) -> tuple[numpy.ndarray, int]:
    __expect(lines, position, keyword)
    start = position + 1
    if start + rows > len(lines):
        raise ModelFileException(ModelFileExceptionType.Truncated)
    matrix = numpy.zeros((rows, columns))
    for row, line in enumerate(lines[start : start + rows]):
        try:
            values = [float(value) for value in line.split()]
        except ValueError:
            raise ModelFileException(
                ModelFileExceptionType.MalformedValue, "Line {0}.".format(start + row + 1)
            )
        if len(values) != columns:
            raise ModelFileException(
                ModelFileExceptionType.DimensionInconsistency,
                "Line {0} has {1} values, expected {2}.".format(
                    start + row + 1, len(values), columns
                ),
            )
        matrix[row] = values
    return matrix, start + rows
