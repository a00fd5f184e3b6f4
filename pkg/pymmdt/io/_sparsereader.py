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

import os.path
import math
import logging
from enum import Enum
from pymmdt.data import Dataset, DomainTag, FeatureVector

_logger = logging.getLogger(__name__)


class SparseDataReaderExceptionType(Enum):
    """
    This enum provides the type of error raised by the sparse data reader in case a file could not be read.
    """

    FileNotFound = "File could not be found."
    EmptyFile = "The file should contain at least one example."
    MalformedLine = "The line should read '<label> <index>:<value> ...'."
    NonFiniteValue = "Feature values should be finite."
    BadIndex = "Indices should be strictly increasing, start at 1 and not exceed the dimension."
    UnknownLabel = "The label is not part of the vocabulary."
    NotUtf8 = "The file is not UTF-8 encoded text."


class SparseDataReaderException(Exception):
    """
    Custom exception used by the sparse data reader. The SparseDataReaderExceptionType (type) provides
    information on what went wrong, line_number (1-based) where it went wrong.

    Args:
        type (SparseDataReaderExceptionType): The type of exception that occurred.
        line_number (int | None): The offending line, if any.
    """

    def __init__(self, type: SparseDataReaderExceptionType, line_number: int | None = None):
        self.type = type
        self.line_number = line_number
        message = str(self.type.value)
        if line_number is not None:
            message = "Line {0}: {1}".format(line_number, message)
        super().__init__(message)


def read(
    file_name: str,
    dimension: int | None = None,
    vocabulary: list[str] | None = None,
    domain_tag: DomainTag = DomainTag.Source,
) -> Dataset:
    """
    Reads a dataset in the sparse text format: one example per line, `<label> <index>:<value> ...`
    with 1-based, strictly increasing indices. Blank lines and lines starting with `#`
    are skipped, except for the headers `# dimension: D` and `# categories: name ...`.

    Without a vocabulary (argument or header) the labels found are sorted, numerically
    if they all are integers, and numbered from 0.

    Args:
        file_name (str): The full path to the file.
        dimension (int | None, optional): The dimension of the data; the header or the largest
            index when None.
        vocabulary (list[str] | None, optional): The label of each category id.
        domain_tag (DomainTag, optional): The domain of the data. Defaults to Source.

    Raises:
        SparseDataReaderException: Raised in case the file could not be read.

    Returns:
        Dataset: The examples in the file.
    """
    if not os.path.isfile(file_name):
        raise SparseDataReaderException(SparseDataReaderExceptionType.FileNotFound)

    try:
        with open(file_name, encoding="utf-8") as file:
            lines = [line.strip() for line in file]
    except UnicodeDecodeError:
        raise SparseDataReaderException(SparseDataReaderExceptionType.NotUtf8)

    header_dimension, header_vocabulary = __read_headers(lines)
    if dimension is None:
        dimension = header_dimension
    if vocabulary is None:
        vocabulary = header_vocabulary

    entries = []
    for line_number, line in enumerate(lines, start=1):
        if len(line) == 0 or line.startswith("#"):
            continue
        label, indices, values = __parse_line(line, line_number)
        if dimension is not None and len(indices) > 0 and indices[-1] >= dimension:
            raise SparseDataReaderException(SparseDataReaderExceptionType.BadIndex, line_number)
        entries.append((line_number, label, indices, values))

    if len(entries) == 0:
        raise SparseDataReaderException(SparseDataReaderExceptionType.EmptyFile)

    if dimension is None:
        dimension = max([indices[-1] + 1 for _, _, indices, _ in entries if len(indices) > 0], default=1)
    if vocabulary is None:
        vocabulary = __sorted_labels({label for _, label, _, _ in entries})
    category_ids = {name: k for k, name in enumerate(vocabulary)}

    features, labels = [], []
    for line_number, label, indices, values in entries:
        if label not in category_ids:
            raise SparseDataReaderException(SparseDataReaderExceptionType.UnknownLabel, line_number)
        features.append(FeatureVector.sparse(indices, values, dimension))
        labels.append(category_ids[label])

    _logger.debug("Read %d examples of dimension %d from %s.", len(features), dimension, file_name)
    return Dataset(
        features=features,
        labels=labels,
        dimension=dimension,
        category_count=len(vocabulary),
        domain_tag=domain_tag,
        category_names=list(vocabulary),
    )


def write(data: Dataset, file_name: str):
    """
    Writes a dataset in the sparse text format, including the dimension and category
    headers. Values are written with the shortest decimal representation that reads
    back to the same float, zero entries are omitted.

    Args:
        data (Dataset): The data to write.
        file_name (str): The full path to the file.
    """
    names = data.names
    if any(len(name.split()) != 1 for name in names):
        raise ValueError("Category names should be single words.")
    with open(file_name, "w", encoding="utf-8", newline="\n") as file:
        file.write("# dimension: {0}\n".format(data.dimension))
        file.write("# categories: {0}\n".format(" ".join(names)))
        for feature, label in data.examples:
            dense = feature.to_dense()
            tokens = [names[label]] + [
                "{0}:{1!r}".format(index + 1, float(dense[index]))
                for index in dense.nonzero()[0]
            ]
            file.write(" ".join(tokens) + "\n")


def __read_headers(lines: list[str]) -> tuple[int | None, list[str] | None]:
    dimension, vocabulary = None, None
    for line_number, line in enumerate(lines, start=1):
        if not line.startswith("#"):
            continue
        key, separator, value = line[1:].partition(":")
        if separator == "":
            continue
        match key.strip():
            case "dimension":
                try:
                    dimension = int(value)
                except ValueError:
                    raise SparseDataReaderException(
                        SparseDataReaderExceptionType.MalformedLine, line_number
                    )
                if dimension < 1:
                    raise SparseDataReaderException(SparseDataReaderExceptionType.BadIndex, line_number)
            case "categories":
                vocabulary = value.split()
    return dimension, vocabulary


def __parse_line(line: str, line_number: int) -> tuple[str, list[int], list[float]]:
    tokens = line.split()
    label = tokens[0]
    if ":" in label:
        raise SparseDataReaderException(SparseDataReaderExceptionType.MalformedLine, line_number)
    indices, values = [], []
    for token in tokens[1:]:
        index_text, separator, value_text = token.partition(":")
        if separator == "":
            raise SparseDataReaderException(SparseDataReaderExceptionType.MalformedLine, line_number)
        try:
            index = int(index_text)
            value = float(value_text)
        except ValueError:
            raise SparseDataReaderException(SparseDataReaderExceptionType.MalformedLine, line_number)
        if not math.isfinite(value):
            raise SparseDataReaderException(SparseDataReaderExceptionType.NonFiniteValue, line_number)
        if index < 1 or (len(indices) > 0 and index - 1 <= indices[-1]):
            raise SparseDataReaderException(SparseDataReaderExceptionType.BadIndex, line_number)
        indices.append(index - 1)
        values.append(value)
    return label, indices, values


def __sorted_labels(labels: set[str]) -> list[str]:
    try:
        return sorted(labels, key=int)
    except ValueError:
        return sorted(labels)
