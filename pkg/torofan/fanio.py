#
# fanio.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

import json

from .divisor import TorusDivisor
from .fan import Fan, FanQuadruple, FanTriple, Order
from .util import FanError, format_rat, input_digest, null_logger, parse_rat

__all__ = [
    "FanFile",
    "parse_fan_file",
    "load_fan_file",
    "fan_file_json",
    "dump_json",
]


class FanFile:
    """
    The contents of a fan file: a decorated fan plus its named
    divisors and orders.
    """

    __slots__ = (
        "quadruple",
        "divisors",
        "orders",
        "digest",
    )

    def __init__(self, quadruple, divisors=None, orders=None, digest=None):
        self.quadruple = quadruple
        self.divisors = dict(divisors or {})
        self.orders = dict(orders or {})
        self.digest = digest

    @property
    def fan(self):
        return self.quadruple.fan

    def triple(self):
        if self.quadruple.H:
            raise FanError("Fan file carries H-rays, it is not a triple")
        return FanTriple(self.fan, self.quadruple.B, self.quadruple.C)

    def order(self, name):
        try:
            return self.orders[name]
        except KeyError:
            raise FanError(f"No order named '{name}' in the fan file") from None

    def divisor(self, name):
        try:
            return self.divisors[name]
        except KeyError:
            raise FanError(f"No divisor named '{name}' in the fan file") from None


def _int_list(obj, field):
    if not isinstance(obj, list):
        raise FanError(f"Fan file field '{field}' is not a list")
    for value in obj:
        if isinstance(value, bool) or not isinstance(value, int):
            raise FanError(f"Fan file field '{field}' has a non-integer entry {value!r}")
    return obj


def parse_fan_file(obj, logger=null_logger):
    if not isinstance(obj, dict):
        raise FanError("Fan file is not a JSON object")

    for field in ("lattice_rank", "rays", "maximal_cones"):
        if field not in obj:
            raise FanError(f"Fan file field '{field}' is missing")

    rank = obj["lattice_rank"]
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 1:
        raise FanError("Fan file field 'lattice_rank' is not a positive int")

    if not isinstance(obj["rays"], list):
        raise FanError("Fan file field 'rays' is not a list")
    rays = [_int_list(ray, f"rays[{i}]") for i, ray in enumerate(obj["rays"])]

    if not isinstance(obj["maximal_cones"], list):
        raise FanError("Fan file field 'maximal_cones' is not a list")
    cones = [
        _int_list(cone, f"maximal_cones[{i}]")
        for i, cone in enumerate(obj["maximal_cones"])
    ]

    fan = Fan(rays, cones, rank)
    B = _int_list(obj.get("B", []), "B")
    C = _int_list(obj.get("C", []), "C")
    H = _int_list(obj.get("H", []), "H")

    h = obj.get("h", {})
    if not isinstance(h, dict):
        raise FanError("Fan file field 'h' is not an object")
    try:
        h = {int(key): parse_rat(value) for key, value in h.items()}
    except (ValueError, ZeroDivisionError) as error:
        raise FanError(f"Fan file field 'h' has a bad entry: {error}") from None

    if H:
        quadruple = FanQuadruple(fan, B, C, H, h)
    else:
        if h:
            raise FanError("Fan file field 'h' given without H")
        quadruple = FanTriple(fan, B, C)

    divisors = {}
    for name, values in obj.get("divisors", {}).items():
        if not isinstance(values, list) or len(values) != len(fan.rays):
            raise FanError(f"Divisor '{name}' needs one coefficient per ray")
        try:
            divisors[name] = TorusDivisor.from_list([parse_rat(value) for value in values])
        except (ValueError, ZeroDivisionError) as error:
            raise FanError(f"Divisor '{name}' has a bad coefficient: {error}") from None

    orders = {}
    for name, sequence in obj.get("orders", {}).items():
        sequence = _int_list(sequence, f"orders.{name}")
        for index in sequence:
            if not 0 <= index < len(fan.rays):
                raise FanError(f"Order '{name}' names ray {index}, which does not exist")
        orders[name] = Order(sequence)

    logger.debug(f"Parsed fan with {len(fan.rays)} rays and {len(fan.maximal_cones)} cones")
    return FanFile(quadruple, divisors, orders, input_digest(obj))


def load_fan_file(path, logger=null_logger):
    logger.info(f"Loading fan file '{path}'")
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as error:
            raise FanError(
                f"Fan file '{path}' is not valid JSON (line {error.lineno}): {error.msg}"
            ) from None
    return parse_fan_file(obj, logger)


def fan_file_json(quadruple, divisors=None, orders=None):
    fan = quadruple.fan
    obj = {
        "lattice_rank": fan.ambient_rank,
        "rays": [list(ray) for ray in fan.rays],
        "maximal_cones": [sorted(cone) for cone in fan.maximal_cones],
        "B": sorted(quadruple.B),
        "C": sorted(quadruple.C),
    }
    if quadruple.H:
        obj["H"] = sorted(quadruple.H)
        obj["h"] = {str(index): format_rat(value) for index, value in sorted(quadruple.h.items())}
    if divisors:
        obj["divisors"] = {
            name: divisor.to_json(len(fan.rays)) for name, divisor in sorted(divisors.items())
        }
    if orders:
        obj["orders"] = {name: list(order.sequence) for name, order in sorted(orders.items())}
    return obj


def dump_json(obj, path, logger=null_logger):
    logger.info(f"Writing '{path}'")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
