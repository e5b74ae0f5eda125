#
# __init__.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from . import (
    cache,
    cech,
    certify,
    commands,
    cone,
    config,
    divisor,
    fan,
    fanio,
    forms,
    kinds,
    linalg,
    lp,
    resolution,
    schema,
    sorting,
    sql,
    subdivision,
    util,
)

__all__ = [
    "__version__",
    "cache",
    "cech",
    "certify",
    "commands",
    "cone",
    "config",
    "divisor",
    "fan",
    "fanio",
    "forms",
    "kinds",
    "linalg",
    "lp",
    "resolution",
    "schema",
    "sorting",
    "sql",
    "subdivision",
    "util",
]

__version__ = "0.1.0"
