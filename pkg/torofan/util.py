#
# util.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
import hashlib
import json
import os

__all__ = [
    "null_logger",
    "FanError",
    "PreconditionError",
    "VerificationError",
    "THREADS_VARIABLE",
    "thread_count",
    "sweep_map",
    "parse_rat",
    "format_rat",
    "input_digest",
]

THREADS_VARIABLE = "TOROFAN_THREADS"


class _NullLogger:
    __slots__ = ()

    def __init__(self):
        pass

    def debug(self, *args, **kwargs):
        pass

    def info(self, *args, **kwargs):
        pass

    def warning(self, *args, **kwargs):
        pass

    def error(self, *args, **kwargs):
        pass


null_logger = _NullLogger()


class FanError(ValueError):
    """
    Raised for malformed fans, fan files and decorations.
    """


class PreconditionError(ValueError):
    """
    Raised when an operation is called outside of its domain,
    for instance an order that does not put every C-ray first.
    """


class VerificationError(ArithmeticError):
    """
    Raised when an identity that must hold exactly does not,
    such as d^2 != 0 in an assembled complex.
    """


def thread_count(default=1):
    value = os.environ.get(THREADS_VARIABLE)
    if value is None:
        return default

    try:
        count = int(value)
    except ValueError:
        return default
    return max(count, 1)


def sweep_map(func, items, threads=None):
    """
    Maps func over items, in parallel when more than one thread
    is allowed. Results always come back in input order.
    """

    items = list(items)
    if threads is None:
        threads = thread_count()

    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def parse_rat(value):
    if isinstance(value, bool):
        raise FanError(f"Not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise FanError(f"Not a rational number: {value!r}")


def format_rat(value):
    return str(Fraction(value))


def input_digest(obj):
    """
    Stable sha512 hex digest of a JSON-compatible object.
    """

    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha512(text.encode("utf-8")).hexdigest()
