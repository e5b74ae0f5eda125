#
# divisor.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from collections import namedtuple
from fractions import Fraction

from .fan import FanQuadruple
from .linalg import ZERO, dot, solve
from .lp import LinearProgram
from .util import FanError, format_rat, null_logger, parse_rat

__all__ = [
    "TorusDivisor",
    "Witness",
    "character_divisor",
    "character_of",
    "q_linear_equivalent",
    "compatibility_witness",
    "check_witness",
    "induced_quadruple",
]

Witness = namedtuple("Witness", ("b", "c", "m"))


class TorusDivisor:
    """
    A torus-invariant Q-divisor, sum of coeffs[i] D_i over ray indices.
    Zero coefficients are not stored.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        coeffs = coeffs or {}
        self.coeffs = {
            int(index): parse_rat(value)
            for index, value in coeffs.items()
            if parse_rat(value) != 0
        }

    @classmethod
    def from_list(cls, values):
        return cls({index: value for index, value in enumerate(values)})

    @classmethod
    def prime(cls, index, coefficient=1):
        return cls({index: coefficient})

    def __getitem__(self, index):
        return self.coeffs.get(index, ZERO)

    def support(self):
        return frozenset(self.coeffs)

    def __add__(self, other):
        coeffs = dict(self.coeffs)
        for index, value in other.coeffs.items():
            coeffs[index] = coeffs.get(index, ZERO) + value
        return TorusDivisor(coeffs)

    def __neg__(self):
        return TorusDivisor({index: -value for index, value in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        factor = Fraction(factor)
        return TorusDivisor({index: factor * value for index, value in self.coeffs.items()})

    def is_integral(self):
        return all(value.denominator == 1 for value in self.coeffs.values())

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, TorusDivisor) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        terms = " + ".join(f"{value}*D{index}" for index, value in sorted(self.coeffs.items()))
        return f"TorusDivisor({terms or '0'})"

    def to_json(self, num_rays):
        return [format_rat(self[index]) for index in range(num_rays)]


def character_divisor(fan, m):
    return TorusDivisor(
        {index: dot(m, fan.rays[index]) for index in sorted(fan.used_rays())}
    )


def character_of(fan, divisor):
    """
    A rational m with div(x^m) equal to the divisor on the used rays,
    or None when the divisor is not a character divisor.
    """

    used = sorted(fan.used_rays())
    rows = [fan.rays[index] for index in used]
    rhs = [divisor[index] for index in used]
    for index in divisor.support():
        if index not in fan.used_rays():
            return None
    return solve(rows, rhs, fan.ambient_rank)


def q_linear_equivalent(fan, first, second):
    return character_of(fan, first - second) is not None


def compatibility_witness(divisor, triple, logger=null_logger):
    """
    Finds b in [0,1]^B, c in [0,1]^C and m with
    L = bB - cC + div(x^m), minimizing b then c lexicographically.
    """

    fan = triple.fan
    B = sorted(triple.B)
    C = sorted(triple.C)
    n = fan.ambient_rank
    offset_c = len(B)
    offset_m = len(B) + len(C)
    program = LinearProgram(offset_m + n, logger)

    for index in sorted(fan.used_rays()):
        coeffs = {}
        if index in triple.B:
            coeffs[B.index(index)] = 1
        if index in triple.C:
            coeffs[offset_c + C.index(index)] = -1
        for axis, value in enumerate(fan.rays[index]):
            if value:
                coeffs[offset_m + axis] = coeffs.get(offset_m + axis, 0) + value
        program.add_equality(coeffs, divisor[index])

    for variable in range(offset_m):
        program.add_inequality({variable: 1}, ">=", 0)
        program.add_inequality({variable: 1}, "<=", 1)

    solution = program.lexmin(range(offset_m))
    if solution is None:
        logger.debug(f"No compatibility witness for {divisor!r}")
        return None

    return Witness(
        b={index: solution[i] for i, index in enumerate(B)},
        c={index: solution[offset_c + i] for i, index in enumerate(C)},
        m=tuple(solution[offset_m:]),
    )


def check_witness(divisor, triple, witness):
    fan = triple.fan
    if set(witness.b) != set(triple.B) or set(witness.c) != set(triple.C):
        return False
    if any(not 0 <= value <= 1 for value in list(witness.b.values()) + list(witness.c.values())):
        return False

    for index in fan.used_rays():
        value = witness.b.get(index, ZERO) - witness.c.get(index, ZERO)
        value += dot(witness.m, fan.rays[index])
        if value != divisor[index]:
            return False
    return True


def induced_quadruple(triple, divisor, witness):
    """
    The quadruple (F, G, hH) a compatible divisor induces: coefficients
    strictly between 0 and 1 go to H, B-rays with b = 0 and C-rays with
    c = 1 go to F, B-rays with b = 1 and C-rays with c = 0 go to G.
    """

    if not check_witness(divisor, triple, witness):
        raise FanError("Invalid compatibility witness")

    F, G, H, h = set(), set(), set(), {}
    for index, value in witness.b.items():
        if value == 0:
            F.add(index)
        elif value == 1:
            G.add(index)
        else:
            H.add(index)
            h[index] = value

    for index, value in witness.c.items():
        if value == 1:
            F.add(index)
        elif value == 0:
            G.add(index)
        else:
            H.add(index)
            h[index] = 1 - value

    quadruple = FanQuadruple(triple.fan, F, G, H, h)

    # G + hH must be Q-linearly equivalent to C + L
    left = TorusDivisor({index: 1 for index in G}) + TorusDivisor(h)
    right = TorusDivisor({index: 1 for index in triple.C}) + divisor
    if not q_linear_equivalent(triple.fan, left, right):
        raise FanError("Induced coefficients do not solve G + hH = C + L")
    return quadruple
