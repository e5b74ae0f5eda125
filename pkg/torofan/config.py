#
# config.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

import copy

import yaml

from .cache import DEFAULT_CACHE_SIZE
from .util import null_logger

__all__ = [
    "DEFAULT_CONFIG",
    "check",
    "load_config",
    "default_config",
]

DEFAULT_CONFIG = {
    "sweep": {
        "threads": 1,
        "bound": 3,
    },
    "cache": {
        "lookup-size": DEFAULT_CACHE_SIZE,
    },
    "logger": {
        "log-file": "torofan.log",
        "full-reports": False,
    },
    "archive": {
        "db-url": None,
    },
}


def is_string_or_null(obj):
    """
    Determines if the given object
    is of type str or is None.
    """

    return isinstance(obj, str) or obj is None


def is_int(obj):
    return isinstance(obj, int) and not isinstance(obj, bool)


def check(cfg, logger=null_logger):
    """
    Determines if the given dictionary has
    the correct fields and types.
    """

    # pylint: disable=too-many-return-statements
    try:
        if not is_int(cfg["sweep"]["threads"]):
            logger.error("Configuration field 'sweep.threads' is not an int")
            return False
        if cfg["sweep"]["threads"] <= 0:
            logger.error("Configuration field 'sweep.threads' is zero or negative")
            return False
        if not is_int(cfg["sweep"]["bound"]):
            logger.error("Configuration field 'sweep.bound' is not an int")
            return False
        if cfg["sweep"]["bound"] < 0:
            logger.error("Configuration field 'sweep.bound' is negative")
            return False
        if not is_int(cfg["cache"]["lookup-size"]):
            logger.error("Configuration field 'cache.lookup-size' is not an int")
            return False
        if cfg["cache"]["lookup-size"] <= 0:
            logger.error("Configuration field 'cache.lookup-size' is zero or negative")
            return False
        if not isinstance(cfg["logger"]["log-file"], str):
            logger.error("Configuration field 'logger.log-file' is not a string")
            return False
        if not isinstance(cfg["logger"]["full-reports"], bool):
            logger.error("Configuration field 'logger.full-reports' is not a bool")
            return False
        if not is_string_or_null(cfg["archive"]["db-url"]):
            logger.error("Configuration field 'archive.db-url' is not a string or null")
            return False

    except (KeyError, TypeError) as err:
        logger.error(f"Configuration missing field: {err}")
        return False
    else:
        return True


def default_config():
    return copy.deepcopy(DEFAULT_CONFIG)


def load_config(fn, logger=null_logger):
    """
    Loads a YAML config from the given file.
    This returns a tuple of the object and whether
    it is valid or not.
    """

    with open(fn, "r") as fh:
        obj = yaml.safe_load(fh)
    return obj, check(obj, logger)
