#
# subdivision.py
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
from itertools import combinations

from .certify import verify_pl_function
from .cone import Cone, intersect_cones
from .fan import subdivision_map
from .kinds import SortMode
from .linalg import ZERO, add, dot, primitive, scale, solve
from .lp import OPTIMAL, LinearProgram
from .sorting import classify_sorted, find_sorting_function, sort_mode
from .util import FanError, PreconditionError, VerificationError, format_rat, null_logger, sweep_map

__all__ = [
    "PLFunction",
    "SeparatingRay",
    "star_subdivision",
    "ext",
    "base_assignment",
    "find_good_sorting_function",
    "is_locally_convex",
    "star_convexity_function",
    "star_at_c_function",
    "star_at_c_certificate",
    "compose_good_functions",
    "find_separating_ray",
]

SeparatingRay = namedtuple("SeparatingRay", ("ray", "B_plus", "C_plus"))


class PLFunction:
    """
    A continuous piecewise linear function on the support of a fan,
    one covector per maximal cone. The assignment records which cone
    of the coarser fan each piece lies in; convexity is only demanded
    across walls inside a single coarse cone.
    """

    __slots__ = (
        "fan",
        "pieces",
        "assignment",
    )

    def __init__(self, fan, pieces, assignment):
        self.fan = fan
        self.pieces = {frozenset(cone): tuple(covector) for cone, covector in pieces.items()}
        self.assignment = {frozenset(cone): frozenset(base) for cone, base in assignment.items()}

    def value(self, vector):
        """
        The minimum over the pieces whose cone contains the vector.
        """

        values = [
            dot(self.pieces[cone], vector)
            for cone in self.fan.maximal_cones
            if self.fan.cone(cone).contains(vector)
        ]
        if not values:
            raise ValueError("Point is outside the support")
        return min(values)

    def ray_value(self, index):
        for cone in self.fan.maximal_cones:
            if index in cone:
                return dot(self.pieces[cone], self.fan.rays[index])
        raise ValueError(f"Ray {index} is not used by the fan")

    def __add__(self, other):
        if self.fan.canonical_key() != other.fan.canonical_key():
            raise ValueError("Functions live on different fans")
        pieces = {cone: add(covector, other.pieces[cone]) for cone, covector in self.pieces.items()}
        return PLFunction(self.fan, pieces, self.assignment)

    def scale(self, factor):
        factor = Fraction(factor)
        pieces = {cone: scale(covector, factor) for cone, covector in self.pieces.items()}
        return PLFunction(self.fan, pieces, self.assignment)

    def to_json(self):
        return {
            "pieces": [
                {
                    "cone": sorted(cone),
                    "base": sorted(self.assignment.get(cone, ())),
                    "psi": [format_rat(value) for value in self.pieces[cone]],
                }
                for cone in sorted(self.pieces, key=sorted)
            ]
        }

    @classmethod
    def from_json(cls, fan, obj):
        pieces, assignment = {}, {}
        for entry in obj["pieces"]:
            cone = frozenset(entry["cone"])
            pieces[cone] = tuple(Fraction(value) for value in entry["psi"])
            assignment[cone] = frozenset(entry["base"])
        return cls(fan, pieces, assignment)

    def __repr__(self):
        return f"PLFunction({len(self.pieces)} pieces)"


def star_subdivision(fan, vector):
    """
    Star subdivision at a primitive vector in the support. Every cone
    containing the vector is replaced by the joins of the vector with
    its facets that avoid it.
    """

    vector = primitive(vector)
    if not fan.support_contains(vector):
        raise FanError(f"Ray {vector} is outside the support of the fan")

    fan, ray = fan.add_ray(vector)
    cones = []
    for cone in fan.maximal_cones:
        geometry = fan.cone(cone)
        if not geometry.contains(vector):
            cones.append(cone)
            continue

        dim = fan.dim(cone)
        for face in fan.faces_of(cone):
            if fan.dim(face) != dim - 1:
                continue
            if face and fan.cone(face).contains(vector):
                continue
            cones.append(face | {ray})

    return fan.with_cones(cones)


def ext(fan, base, ray):
    """
    Extends a subdivision of the base cone by a ray outside of it.
    When the ray leaves the span of the base every cone is joined with
    it; otherwise the walls on the facets the ray sees from outside
    are joined with it and the subdivision is kept.
    """

    base = frozenset(base)
    geometry = fan.cone(base) if base else Cone.zero(fan.ambient_rank)
    vector = fan.rays[ray]
    if geometry.contains(vector):
        raise PreconditionError(f"Ray {ray} already lies in the base cone")

    dim = fan.dim(base)
    if fan.dim(base | {ray}) == dim + 1:
        return fan.with_cones([cone | {ray} for cone in fan.maximal_cones])

    visible = [normal for normal in geometry.facets if dot(normal, vector) < 0]
    cones = list(fan.maximal_cones)
    for cone in fan.maximal_cones:
        for face in fan.faces_of(cone):
            if fan.dim(face) != dim - 1:
                continue
            for normal in visible:
                if all(dot(normal, fan.rays[index]) == 0 for index in face):
                    cones.append(face | {ray})
                    break

    return fan.with_cones(cones)


def _single_base(fan):
    used = fan.used_rays()
    geometry = fan.cone(used) if used else Cone.zero(fan.ambient_rank)
    base = []
    for vector in geometry.rays:
        index = fan.index_of(vector)
        if index is None:
            raise FanError("Support of the fan is not spanned by its own rays")
        base.append(index)
    return fan.with_cones([frozenset(base)])


def base_assignment(fine, base_fan=None, logger=null_logger):
    """
    Sends every maximal cone of the subdivision to a maximal cone of
    the base fan containing it. Raises FanError when the fine fan does
    not subdivide the base.
    """

    if base_fan is None:
        base_fan = _single_base(fine)

    mapping = subdivision_map(fine, base_fan, logger)
    assignment = {}
    for cone in fine.maximal_cones:
        image = mapping(cone)
        for base in base_fan.maximal_cones:
            if image <= base:
                assignment[cone] = base
                break
    return base_fan, assignment


def find_good_sorting_function(fine, quadruple, base_fan=None, logger=null_logger):
    """
    Searches for a good sorting function: one covector per maximal cone,
    continuous, the minimum of its pieces with a jump of at least one
    across every wall inside a base cone, and satisfying the sign
    conditions of the decorations on every ray.
    """

    base_fan, assignment = base_assignment(fine, base_fan, logger)
    n = fine.ambient_rank
    cones = list(fine.maximal_cones)
    program = LinearProgram(n * len(cones), logger)

    def coeffs(position, vector, sign=1):
        return {position * n + axis: sign * value for axis, value in enumerate(vector) if value}

    for position, cone in enumerate(cones):
        for index in sorted(cone):
            ray = fine.rays[index]
            if index in quadruple.B:
                program.add_inequality(coeffs(position, ray), ">=", 0)
            elif index in quadruple.C:
                program.add_inequality(coeffs(position, ray), "<=", 0)
            elif index not in quadruple.H:
                program.add_equality(coeffs(position, ray), 0)

    walls = 0
    for (i, first), (j, second) in combinations(enumerate(cones), 2):
        common = first & second
        for index in sorted(common):
            ray = fine.rays[index]
            row = coeffs(i, ray)
            row.update(coeffs(j, ray, -1))
            program.add_equality(row, 0)

        base = assignment[first]
        if base != assignment[second] or not common:
            continue
        base_dim = base_fan.dim(base)
        if fine.dim(first) != base_dim or fine.dim(second) != base_dim:
            continue
        if fine.dim(common) != base_dim - 1:
            continue

        walls += 1
        for near, far, (p, q) in ((first, second, (i, j)), (second, first, (j, i))):
            for index in sorted(far - near):
                ray = fine.rays[index]
                row = coeffs(p, ray)
                for key, value in coeffs(q, ray, -1).items():
                    row[key] = row.get(key, ZERO) + value
                program.add_inequality(row, ">=", 1)

    logger.debug(f"Good sorting LP: {len(cones)} pieces, {walls} walls")
    result = program.solve()
    if result.status != OPTIMAL:
        logger.info("No good sorting function exists")
        return None

    solution = result.solution
    pieces = {
        cone: tuple(solution[position * n : (position + 1) * n])
        for position, cone in enumerate(cones)
    }
    pl = PLFunction(fine, pieces, assignment)

    violations = verify_pl_function(pl, quadruple)
    if violations:
        raise VerificationError(f"Good sorting function fails its check: {violations[0]}")
    return pl


def is_locally_convex(step, quadruple, threads=None, logger=null_logger):
    """
    One good sorting function per maximal cone of the coarse fan of
    a subdivision map, or None if some cone has none.
    """

    fine, coarse = step.source, step.target

    def certify(base):
        local = fine.restricted_to(base)
        return find_good_sorting_function(
            local, quadruple.with_fan(local), coarse.with_cones([base]), logger
        )

    bases = list(coarse.maximal_cones)
    results = sweep_map(certify, bases, threads)
    certificates = {}
    for base, pl in zip(bases, results):
        if pl is None:
            logger.info(f"Subdivision of {sorted(base)} is not convex")
            return None
        certificates[base] = pl
    return certificates


def star_convexity_function(fine, ray, base_fan=None, logger=null_logger):
    """
    The tent function of a star subdivision: one on the new ray,
    zero on every other ray.
    """

    base_fan, assignment = base_assignment(fine, base_fan, logger)
    n = fine.ambient_rank
    pieces = {}
    for cone in fine.maximal_cones:
        if ray not in cone:
            pieces[cone] = tuple(ZERO for _ in range(n))
            continue

        rows = [fine.rays[index] for index in sorted(cone)]
        rhs = [1 if index == ray else 0 for index in sorted(cone)]
        covector = solve(rows, rhs, n)
        if covector is None:
            raise PreconditionError(f"Cone {sorted(cone)} is not simplicial at ray {ray}")
        pieces[cone] = covector
    return PLFunction(fine, pieces, assignment)


def star_at_c_function(fine, ray, rho, base_fan=None, logger=null_logger):
    """
    For a star at a C-ray with a sorting function rho negative on it,
    shifts the tent function by a multiple of rho until it vanishes
    on the ray.
    """

    value = dot(rho, fine.rays[ray])
    if not value < 0:
        raise PreconditionError(f"Sorting function is not negative on ray {ray}")

    alpha = Fraction(1) / -value
    tent = star_convexity_function(fine, ray, base_fan, logger)
    shift = scale(rho, alpha)
    pieces = {cone: add(covector, shift) for cone, covector in tent.pieces.items()}
    return PLFunction(fine, pieces, tent.assignment), alpha


def star_at_c_certificate(quadruple, ray, logger=null_logger):
    """
    Stars an affine quadruple at one of its C-rays and certifies the
    result with the shifted tent function. Returns the subdivided fan,
    the function and alpha, or None when no sorting function is strict
    on the ray.
    """

    if ray not in quadruple.C:
        raise PreconditionError(f"Ray {ray} is not a C-ray")

    fan = quadruple.fan
    rho = find_sorting_function(quadruple, strict={ray}, logger=logger)
    if rho is None:
        logger.debug(f"No sorting function is strict on ray {ray}")
        return None

    fine = star_subdivision(fan, fan.rays[ray])
    pl, alpha = star_at_c_function(fine, ray, rho, fan, logger)
    violations = verify_pl_function(pl, quadruple.with_fan(fine))
    if violations:
        raise VerificationError(f"Shifted tent function fails its check: {violations[0]}")

    logger.debug(f"Star at C-ray {ray} certified with alpha = {alpha}")
    return fine, pl, alpha


def compose_good_functions(outer, inner, quadruple, max_halvings=64):
    """
    Combines a good function of X' over X with one of X'' over X' into
    outer + eps * inner, a good function of X'' over X. eps starts at 1
    and is halved until the combination passes the independent check.
    Returns the function and eps, or None.
    """

    pieces = {}
    assignment = {}
    for cone, covector in inner.pieces.items():
        middle = inner.assignment[cone]
        if middle not in outer.pieces:
            raise PreconditionError(f"Cone {sorted(cone)} does not lie in a piece of the outer function")
        pieces[cone] = (outer.pieces[middle], covector)
        assignment[cone] = outer.assignment[middle]

    epsilon = Fraction(1)
    for _ in range(max_halvings):
        combined = {
            cone: add(first, scale(second, epsilon)) for cone, (first, second) in pieces.items()
        }
        candidate = PLFunction(inner.fan, combined, assignment)
        if not verify_pl_function(candidate, quadruple):
            return candidate, epsilon
        epsilon /= 2
    return None


def find_separating_ray(triple, logger=null_logger):
    """
    For an affine triple on a cone with one ray more than its dimension,
    simplicial proper faces, and no strict sorting function, finds the
    ray where Cone(B u A) and Cone(C u A) meet outside Cone(A), along with
    the partition of the rays it induces.
    """

    fan = triple.fan
    tau = triple.base_cone()
    n = fan.ambient_rank
    if len(tau) != fan.dim(tau) + 1:
        raise PreconditionError("Cone must have exactly one ray more than its dimension")

    for face in fan.faces_of(tau):
        if face != tau and len(face) != fan.dim(face):
            raise PreconditionError(f"Proper face {sorted(face)} is not simplicial")

    result = classify_sorted(triple, *sort_mode(triple, SortMode.WELL), threads=1, logger=logger)
    if result.sorted:
        raise PreconditionError("Triple is well-sorted, there is no separating ray")

    A = triple.A & tau
    B_side = (triple.B & tau) | A
    C_side = (triple.C & tau) | A

    def geometry(indices):
        if not indices:
            return Cone.zero(n)
        return Cone([fan.rays[index] for index in indices], n)

    meet = intersect_cones(geometry(B_side), geometry(C_side))
    a_cone = geometry(A)
    candidates = [ray for ray in meet.rays if not a_cone.contains(ray)]
    if not candidates:
        raise VerificationError("Sides meet only inside Cone(A)")
    ray = min(candidates)
    logger.debug(f"Separating ray {ray} out of {len(candidates)} candidates")

    def plus(indices):
        cone = geometry(indices)
        return frozenset(fan.index_of(cone.rays[i]) for i in cone.face_rays(ray))

    B_plus = plus(B_side)
    C_plus = plus(C_side)

    if not (triple.B & tau) <= B_plus or not (triple.C & tau) <= C_plus:
        raise VerificationError("Partition does not extend the decorations")
    if B_plus & C_plus or (B_plus | C_plus) != tau:
        raise VerificationError("Partition does not split the rays of the cone")
    if intersect_cones(geometry(B_plus), geometry(C_plus)) != Cone([ray], n):
        raise VerificationError("Partition cones do not meet in the separating ray")

    return SeparatingRay(ray, B_plus, C_plus)
