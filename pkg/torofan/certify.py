#
# certify.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

"""
Independent checks for certificates. Nothing here builds or solves
a linear program; every condition is evaluated directly on the rays.
"""

from itertools import combinations

from .linalg import dot, rank

__all__ = [
    "verify_sorting_function",
    "verify_sortedness_certificate",
    "verify_pl_function",
]


def _sign_violation(quadruple, index, value):
    if index in quadruple.B and value < 0:
        return "negative on B-ray"
    if index in quadruple.C and value > 0:
        return "positive on C-ray"
    if index in quadruple.H:
        return None
    if index not in quadruple.B and index not in quadruple.C and value != 0:
        return "nonzero on A-ray"
    return None


def verify_sorting_function(quadruple, cone, rho, strict=()):
    fan = quadruple.fan
    if len(rho) != fan.ambient_rank:
        return False

    for index in cone:
        value = dot(rho, fan.rays[index])
        if _sign_violation(quadruple, index, value) is not None:
            return False
        if index in strict and not value < 0:
            return False
    return True


def verify_sortedness_certificate(quadruple, certificate):
    """
    Returns the list of violations, empty when the certificate holds.
    """

    violations = []
    B_flat = quadruple.B - certificate.B_sharp
    H_flat = quadruple.H - certificate.H_sharp
    marked = B_flat | H_flat

    for cone in quadruple.fan.cones():
        if not cone or cone & marked:
            continue

        rho = certificate.cones.get(cone)
        if rho is None:
            violations.append(f"Unsettled cone {sorted(cone)} has no functional")
            continue

        strict = certificate.C_flat & cone
        if not verify_sorting_function(quadruple, cone, rho, strict):
            violations.append(f"Functional on cone {sorted(cone)} breaks a sign condition")
    return violations


def verify_pl_function(pl, quadruple):
    """
    Checks a piecewise linear function against a decorated subdivision:
    pieces agree on shared rays, the function is strictly convex (as a
    minimum of its pieces) across every wall inside a base cone, and the
    sign conditions of the decorations hold on every ray.
    """

    fan = pl.fan
    n = fan.ambient_rank
    violations = []

    for cone in fan.maximal_cones:
        if cone not in pl.pieces:
            violations.append(f"Cone {sorted(cone)} has no piece")
    if violations:
        return violations

    for cone, covector in pl.pieces.items():
        if len(covector) != n:
            violations.append(f"Piece on {sorted(cone)} has the wrong length")
            continue
        for index in cone:
            reason = _sign_violation(quadruple, index, dot(covector, fan.rays[index]))
            if reason is not None:
                violations.append(f"Piece on {sorted(cone)} is {reason} {index}")

    for first, second in combinations(fan.maximal_cones, 2):
        common = first & second
        for index in common:
            ray = fan.rays[index]
            if dot(pl.pieces[first], ray) != dot(pl.pieces[second], ray):
                violations.append(
                    f"Pieces on {sorted(first)} and {sorted(second)} disagree on ray {index}"
                )

        base = pl.assignment.get(first)
        if base is None or base != pl.assignment.get(second):
            continue

        base_dim = rank([fan.rays[index] for index in base], n) if base else 0
        if fan.dim(first) != base_dim or fan.dim(second) != base_dim:
            continue
        if not common or fan.dim(common) != base_dim - 1:
            continue

        for near, far in ((first, second), (second, first)):
            for index in far - near:
                ray = fan.rays[index]
                if not dot(pl.pieces[near], ray) > dot(pl.pieces[far], ray):
                    violations.append(
                        f"Wall {sorted(common)} is not strictly convex at ray {index}"
                    )
    return violations
