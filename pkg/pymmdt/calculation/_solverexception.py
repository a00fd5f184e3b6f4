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

from enum import Enum


class SolverExceptionType(Enum):
    """
    This enum provides the type of error raised by the solvers in case input could not be handled.
    """

    EmptyInput = "At least one example is required."
    TooFewCategories = "At least two categories are required."
    DimensionMismatch = "The dimensions of the specified data do not match."
    CategoryMismatch = "The number of categories of the specified data do not match."
    IdentityRequiresEqualDimensions = (
        "The identity regularizer requires equal source and target dimensions."
    )
    BudgetExceeded = "The matrix exceeds the configured memory budget."
    DuplicateCategory = "The category already exists."
    SolverFailed = "The solver did not produce a model."


class SolverException(Exception):
    """
    Custom exception used by the solvers. The SolverExceptionType (type) provides
    information on what went wrong, the optional detail adds specifics.

    Args:
        type (SolverExceptionType): The type of exception that occurred.
        detail (str | None): Additional information, for example the offending dimensions.
    """

    def __init__(self, type: SolverExceptionType, detail: str | None = None):
        self.type = type
        self.detail = detail
        message = str(self.type.value)
        if detail is not None:
            message = "{0} {1}".format(message, detail)
        super().__init__(message)
