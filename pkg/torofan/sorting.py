#
# sorting.py
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

from .kinds import SortMode
from .linalg import add
from .lp import OPTIMAL, LinearProgram
from .util import PreconditionError, format_rat, null_logger, sweep_map

__all__ = [
    "SortednessCertificate",
    "SortResult",
    "sort_mode",
    "unsettled_cones",
    "find_sorting_function",
    "classify_sorted",
    "geometric_partial_check",
    "add_certificates",
    "transfer_certificate",
]

SortResult = namedtuple("SortResult", ("sorted", "certificate", "counterexample"))


class SortednessCertificate:
    """
    One sorting functional per unsettled cone, for a fixed
    (B-sharp, C-flat, H-sharp) mode.
    """

    __slots__ = (
        "B_sharp",
        "C_flat",
        "H_sharp",
        "cones",
    )

    def __init__(self, B_sharp, C_flat, H_sharp, cones):
        self.B_sharp = frozenset(B_sharp)
        self.C_flat = frozenset(C_flat)
        self.H_sharp = frozenset(H_sharp)
        self.cones = dict(cones)

    @property
    def mode(self):
        return (self.B_sharp, self.C_flat, self.H_sharp)

    def to_json(self, fan):
        cones = []
        for cone, rho in sorted(self.cones.items(), key=lambda item: sorted(item[0])):
            cones.append(
                {
                    "rays": sorted(cone),
                    "rho": [format_rat(value) for value in rho],
                }
            )
        return {
            "mode": {
                "B_sharp": sorted(self.B_sharp),
                "C_flat": sorted(self.C_flat),
                "H_sharp": sorted(self.H_sharp),
            },
            "cones": cones,
        }


def sort_mode(quadruple, mode):
    if mode == SortMode.WELL:
        return quadruple.B, quadruple.C, quadruple.H
    if mode == SortMode.PARTIAL:
        return frozenset(), quadruple.C, frozenset()
    raise ValueError(f"Mode {mode} needs explicit subsets")


def unsettled_cones(fan, marked):
    """
    Nonzero cones none of whose rays lie in the marked set.
    """

    marked = frozenset(marked)
    return [cone for cone in fan.cones() if cone and not cone & marked]


def find_sorting_function(quadruple, strict=(), cone=None, logger=null_logger):
    """
    A linear functional rho, nonnegative on B, nonpositive on C, zero on A
    and at most -1 on the strict rays, over the rays of one cone.
    Returns None when no such functional exists.
    """

    if cone is None:
        cone = quadruple.base_cone()
    cone = frozenset(cone)
    strict = frozenset(strict)
    if not strict <= quadruple.C:
        raise PreconditionError("Strict rays must be C-rays")

    fan = quadruple.fan
    program = LinearProgram(fan.ambient_rank, logger)
    for index in sorted(cone):
        ray = fan.rays[index]
        if index in quadruple.B:
            program.add_inequality(ray, ">=", 0)
        elif index in quadruple.C:
            program.add_inequality(ray, "<=", -1 if index in strict else 0)
        elif index not in quadruple.H:
            program.add_equality(ray, 0)

    result = program.solve()
    if result.status != OPTIMAL:
        logger.debug(f"No sorting function on cone {sorted(cone)}")
        return None
    return result.solution


def classify_sorted(quadruple, B_sharp, C_flat, H_sharp, threads=None, logger=null_logger):
    B_sharp, C_flat, H_sharp = frozenset(B_sharp), frozenset(C_flat), frozenset(H_sharp)
    if not (
        B_sharp <= quadruple.B and C_flat <= quadruple.C and H_sharp <= quadruple.H
    ):
        raise PreconditionError("Sortedness mode subsets must lie in B, C and H")

    B_flat = quadruple.B - B_sharp
    H_flat = quadruple.H - H_sharp
    cones = unsettled_cones(quadruple.fan, B_flat | H_flat)
    logger.debug(f"Checking {len(cones)} unsettled cones")

    def solve_cone(cone):
        return find_sorting_function(quadruple, C_flat & cone, cone, logger)

    results = sweep_map(solve_cone, cones, threads)
    certificate = {}
    for cone, rho in zip(cones, results):
        if rho is None:
            logger.info(f"Cone {sorted(cone)} admits no strict sorting function")
            return SortResult(False, None, cone)
        certificate[cone] = rho

    return SortResult(
        True, SortednessCertificate(B_sharp, C_flat, H_sharp, certificate), None
    )


def geometric_partial_check(quadruple):
    """
    Partial sortedness through distinguished faces: every (B u H)-unsettled
    cone must have a face whose rays are exactly its unmarked rays.
    Returns the verdict and the distinguished face of each cone.
    """

    fan = quadruple.fan
    distinguished = {}
    for cone in unsettled_cones(fan, quadruple.B | quadruple.H):
        unmarked = quadruple.unmarked(cone)
        if unmarked not in fan.faces_of(cone):
            return False, {}
        distinguished[cone] = unmarked
    return True, distinguished


def add_certificates(first, second):
    """
    Sum of two certificates sharing B-sharp and H-sharp, certifying
    the union of their strict sets.
    """

    if first.B_sharp != second.B_sharp or first.H_sharp != second.H_sharp:
        raise PreconditionError("Certificates disagree on B-sharp or H-sharp")

    cones = {}
    for cone, rho in first.cones.items():
        other = second.cones.get(cone)
        if other is None:
            raise PreconditionError(f"Cone {sorted(cone)} missing from second certificate")
        cones[cone] = add(rho, other)

    return SortednessCertificate(
        first.B_sharp, first.C_flat | second.C_flat, first.H_sharp, cones
    )


def transfer_certificate(certificate, target, logger=null_logger):
    """
    Reuses the functionals of a certificate for a quadruple with grown
    decorations. Returns None if some functional does not carry over.
    """

    from .certify import verify_sorting_function

    B_flat = target.B - certificate.B_sharp
    H_flat = target.H - certificate.H_sharp
    cones = {}
    for cone in unsettled_cones(target.fan, B_flat | H_flat):
        rho = certificate.cones.get(cone)
        strict = certificate.C_flat & cone
        if rho is None or not verify_sorting_function(target, cone, rho, strict):
            logger.debug(f"Functional on {sorted(cone)} does not carry over")
            return None
        cones[cone] = rho

    return SortednessCertificate(
        certificate.B_sharp, certificate.C_flat, certificate.H_sharp, cones
    )
