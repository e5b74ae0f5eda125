#
# kinds.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from enum import Enum

__all__ = [
    "StepKind",
    "SesMode",
    "SortMode",
    "Sign",
]


class StepKind(Enum):
    STAR = "star"
    EXT = "ext"


class SesMode(Enum):
    ADD_B = "addB"
    ADD_C = "addC"


class SortMode(Enum):
    WELL = "well"
    PARTIAL = "partial"
    CUSTOM = "custom"


class Sign(Enum):
    # Position of t = <m, v> + a relative to the integer thresholds
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1
