#
# forms.py
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
Graded pieces of logarithmic p-forms on affine toric charts.

Every piece is a subspace of the p-th exterior power of M_Q, in the
lexicographic coordinates of linalg.wedge_basis. A chart is a cone
of the triple's fan; its pieces only depend on the faces of that cone.
"""

from collections import namedtuple
from itertools import combinations
from math import comb

from .cache import DEFAULT_CACHE_SIZE, LruCache
from .cone import Cone, lattice_points_window
from .divisor import compatibility_witness
from .fan import FanTriple, orbit_closure, restrict, xi_face
from .kinds import SesMode, Sign
from .linalg import (
    ZERO,
    CochainComplex,
    Subspace,
    add,
    dot,
    mat_vec,
    to_vector,
    wedge_multiplication_matrix,
    wedge_power,
)
from .util import FanError, PreconditionError, VerificationError, null_logger, sweep_map

__all__ = [
    "FormSpec",
    "GradedPiece",
    "HilbertTable",
    "CheckReport",
    "configure_cache",
    "chart_of",
    "phi",
    "degree_signs",
    "piece_from_signs",
    "graded_piece",
    "twisted_graded_piece",
    "hilbert_table",
    "de_rham_differential",
    "de_rham_complex",
    "verify_reflexive_intersection",
    "pushforward_hypotheses",
    "verify_pushforward",
    "ses_hypotheses",
    "verify_phi_ses_identities",
]

GradedPiece = namedtuple("GradedPiece", ("degree", "p", "value"))
CheckReport = namedtuple("CheckReport", ("name", "holds", "hypotheses", "mismatches", "checked"))

_cache = LruCache(DEFAULT_CACHE_SIZE)


def configure_cache(size):
    global _cache

    _cache = LruCache(size)


class FormSpec:
    """
    Selects the sheaf of p-forms of a fan triple, optionally twisted by
    an integral torus divisor. The shift is the character used by the
    de Rham differential of a twisted sheaf.
    """

    __slots__ = (
        "triple",
        "p",
        "twist",
        "shift",
    )

    def __init__(self, triple, p=0, twist=None, shift=None):
        if triple.H:
            raise PreconditionError("Forms are defined on fan triples, H must be empty")
        n = triple.fan.ambient_rank
        if not 0 <= p <= n:
            raise PreconditionError(f"Form degree {p} is outside [0, {n}]")
        if twist is not None and not twist.is_integral():
            raise PreconditionError(f"Twist {twist!r} is not integral")
        if shift is not None and len(shift) != n:
            raise PreconditionError(f"Shift has length {len(shift)}, expected {n}")

        self.triple = triple
        self.p = p
        self.twist = twist
        self.shift = None if shift is None else to_vector(shift)

    @property
    def rank(self):
        return self.triple.fan.ambient_rank

    def with_p(self, p):
        return FormSpec(self.triple, p, self.twist, self.shift)

    def with_triple(self, triple):
        return FormSpec(triple, self.p, self.twist, self.shift)

    def differential_shift(self, logger=null_logger):
        if self.shift is not None:
            return self.shift
        if self.twist is None or self.twist.is_zero():
            return tuple(ZERO for _ in range(self.rank))

        witness = compatibility_witness(self.twist, self.triple, logger)
        if witness is None:
            raise PreconditionError(
                f"Twist {self.twist!r} is not compatible, cannot pick a shift"
            )
        return witness.m

    def __repr__(self):
        return f"FormSpec({self.triple!r}, p={self.p}, twist={self.twist!r})"


class HilbertTable:
    __slots__ = (
        "bound",
        "p",
        "dims",
    )

    def __init__(self, bound, p, dims):
        self.bound = bound
        self.p = p
        self.dims = dict(dims)

    def total(self):
        return sum(self.dims.values())

    def to_json(self):
        return {
            "bound": self.bound,
            "p": self.p,
            "rows": [
                {"m": list(degree), "dim": dim}
                for degree, dim in sorted(self.dims.items())
            ],
        }


def _zero_piece(n, p):
    return Subspace.zero(comb(n, p))


def chart_of(fan, cone):
    """
    The first maximal cone containing the cone, used as its affine chart.
    """

    cone = frozenset(cone)
    for maximal in fan.maximal_cones:
        if cone <= maximal:
            return maximal
    if not cone and not fan.maximal_cones:
        return frozenset()
    raise FanError(f"Cone {sorted(cone)} is not in the fan")


def _dual_face_span(fan, chart, ray):
    # Span of the face of the chart's dual cut out by the ray
    key = ("vstar", fan.rays, chart, ray)

    def compute():
        n = fan.ambient_rank
        dual = fan.cone(chart).dual() if chart else Cone.full(n)
        vectors = [vector for vector in dual.rays if dot(vector, fan.rays[ray]) == 0]
        vectors += list(dual.lineality.basis)
        return Subspace(vectors, n)

    return _cache.get_or_compute(key, compute)


def phi(triple, zeta, chart=None):
    """
    The subspace of M_Q attached to a cone: zero on the star of B,
    otherwise the intersection of the dual-face spans of its A-rays.
    """

    fan = triple.fan
    zeta = frozenset(zeta)
    if zeta not in fan:
        raise FanError(f"Cone {sorted(zeta)} is not in the fan")
    if chart is None:
        chart = chart_of(fan, zeta)
    elif not zeta <= chart:
        raise FanError(f"Cone {sorted(zeta)} is not a face of chart {sorted(chart)}")

    n = fan.ambient_rank
    if zeta & triple.B:
        return Subspace.zero(n)

    key = ("phi", fan.rays, chart, zeta, triple.B & chart, triple.C & chart)

    def compute():
        value = Subspace.full(n)
        for ray in sorted(zeta - triple.B - triple.C):
            value = value.intersect(_dual_face_span(fan, chart, ray))
        return value

    return _cache.get_or_compute(key, compute)


def degree_signs(spec, m, chart):
    """
    Sign of <m, v> + a_v on every ray of the chart, a being the twist.
    """

    fan = spec.triple.fan
    signs = {}
    for ray in chart:
        value = dot(m, fan.rays[ray])
        if spec.twist is not None:
            value += spec.twist[ray]
        signs[ray] = Sign.POSITIVE if value > 0 else Sign.ZERO if value == 0 else Sign.NEGATIVE
    return signs


def piece_from_signs(triple, chart, p, signs):
    """
    The graded piece on a chart at any degree with the given signs.
    """

    n = triple.fan.ambient_rank
    chart = frozenset(chart)
    vanishing = []
    for ray in sorted(chart):
        sign = signs[ray]
        if sign == Sign.NEGATIVE:
            return _zero_piece(n, p)
        if sign == Sign.ZERO:
            if ray in triple.B:
                return _zero_piece(n, p)
            if ray not in triple.C:
                vanishing.append(ray)

    key = ("piece", triple.fan.rays, chart, tuple(vanishing), p)

    def compute():
        value = Subspace.full(n)
        for ray in vanishing:
            value = value.intersect(_dual_face_span(triple.fan, chart, ray))
        return wedge_power(value, p)

    return _cache.get_or_compute(key, compute)


def graded_piece(spec, m, chart=None):
    triple = spec.triple
    if spec.twist is not None:
        return twisted_graded_piece(spec, m, chart)
    if chart is None:
        chart = triple.base_cone()

    fan = triple.fan
    m = to_vector(m)
    n = fan.ambient_rank
    for ray in chart:
        value = dot(m, fan.rays[ray])
        if value < 0 or (value == 0 and ray in triple.B):
            return GradedPiece(m, spec.p, _zero_piece(n, spec.p))

    face = frozenset(ray for ray in chart if dot(m, fan.rays[ray]) == 0)
    value = wedge_power(phi(triple, face, chart), spec.p)
    return GradedPiece(m, spec.p, value)


def twisted_graded_piece(spec, m, chart=None):
    triple = spec.triple
    if chart is None:
        chart = triple.base_cone()
    m = to_vector(m)
    signs = degree_signs(spec, m, chart)
    return GradedPiece(m, spec.p, piece_from_signs(triple, chart, spec.p, signs))


def hilbert_table(spec, bound, chart=None, threads=None, logger=null_logger):
    window = lattice_points_window(Cone.full(spec.rank), bound)
    logger.debug(f"Sweeping {len(window)} degrees for p = {spec.p}")

    def dimension(m):
        return graded_piece(spec, m, chart).value.dim

    dims = sweep_map(dimension, window, threads)
    return HilbertTable(bound, spec.p, zip(window, dims))


def de_rham_differential(spec, m, chart=None, logger=null_logger):
    """
    The map omega -> (m + shift) ^ omega from the p-th to the (p+1)-th
    piece at degree m, in wedge coordinates.
    """

    covector = add(to_vector(m), spec.differential_shift(logger))
    matrix = wedge_multiplication_matrix(covector, spec.p)
    if spec.p == spec.rank:
        return matrix

    source = graded_piece(spec, m, chart).value
    target = graded_piece(spec.with_p(spec.p + 1), m, chart).value
    for row in source.basis:
        if not target.contains(mat_vec(matrix, row)):
            raise VerificationError(
                f"Differential leaves the {spec.p + 1}-form piece at degree {list(m)}"
            )
    return matrix


def de_rham_complex(spec, m, chart=None, logger=null_logger):
    terms = []
    maps = []
    for p in range(spec.rank + 1):
        current = spec.with_p(p)
        terms.append(graded_piece(current, m, chart).value)
        if p < spec.rank:
            maps.append(de_rham_differential(current, m, chart, logger))

    complex_ = CochainComplex(terms, maps)
    complex_.check()
    return complex_


def _window(spec, bound):
    return lattice_points_window(Cone.full(spec.rank), bound)


def verify_reflexive_intersection(spec, bound, logger=null_logger):
    """
    Compares each piece with the intersection of the pieces of the
    half-space charts, one per ray of the chart.
    """

    triple = spec.triple
    chart = triple.base_cone()
    fan = triple.fan
    hypotheses = []
    if fan.dim(chart) != fan.ambient_rank:
        hypotheses.append("Chart is not full-dimensional")
        return CheckReport("reflexive", False, hypotheses, [], 0)

    mismatches = []
    checked = 0
    for m in _window(spec, bound):
        expected = graded_piece(spec, m).value
        value = None
        for ray in sorted(chart):
            local = restrict(triple, frozenset((ray,)))
            piece = graded_piece(spec.with_triple(local), m, frozenset((ray,))).value
            value = piece if value is None else value.intersect(piece)

        checked += 1
        if value != expected:
            logger.info(f"Reflexive mismatch at degree {list(m)} for p = {spec.p}")
            mismatches.append({"m": list(m), "p": spec.p})

    return CheckReport("reflexive", not mismatches, hypotheses, mismatches, checked)


def _shares_indices(fine, coarse):
    return fine.rays[: len(coarse.rays)] == coarse.rays


def pushforward_hypotheses(triple, model):
    """
    Conditions on the decorations of a subdivision under which forms
    push forward. Returns the list of failed conditions.
    """

    coarse = triple.fan
    fine = model.fan
    if not _shares_indices(fine, coarse):
        raise FanError("The model must extend the ray list of the base fan")

    original = coarse.used_rays()
    failures = []

    for index in sorted(fine.used_rays()):
        image = coarse.minimal_cone_containing(fine.rays[index])
        if image is None:
            raise FanError(f"Ray {index} of the model is outside the base support")

        if index in model.B and not image & triple.B:
            failures.append(f"B'-ray {index} does not map into the star of B")
        if index in model.C and index in original and index not in triple.C:
            failures.append(f"C'-ray {index} is neither exceptional nor in C")
        if image & triple.C and not image & triple.B and index not in model.C:
            failures.append(f"Ray {index} maps into C away from B but is not in C'")

    for index in sorted(triple.B):
        if index not in model.B:
            failures.append(f"B-ray {index} has no B'-ray dominating it")
    return failures


def verify_pushforward(triple, model, p, bound, logger=null_logger):
    """
    Checks that the forms of an affine triple are the intersection of
    the forms of a subdivision's charts, degree by degree and on the
    level of the subspaces attached to cones.
    """

    hypotheses = pushforward_hypotheses(triple, model)
    if hypotheses:
        logger.info(f"Pushforward hypotheses fail: {hypotheses}")
        return CheckReport("pushforward", False, hypotheses, [], 0)

    spec = FormSpec(triple, p)
    fine = model.fan
    coarse = triple.fan
    mismatches = []
    checked = 0

    for m in _window(spec, bound):
        expected = graded_piece(spec, m).value
        value = None
        for chart in fine.maximal_cones:
            piece = graded_piece(FormSpec(model, p), m, chart).value
            value = piece if value is None else value.intersect(piece)

        checked += 1
        if value != expected:
            logger.info(f"Pushforward mismatch at degree {list(m)} for p = {p}")
            mismatches.append({"m": list(m), "p": p})

    for zeta in coarse.cones():
        expected = phi(triple, zeta)
        value = Subspace.full(coarse.ambient_rank)
        for chart in fine.maximal_cones:
            face = xi_face(fine, zeta, coarse, chart)
            value = value.intersect(phi(model, face, chart))

        checked += 1
        if value != expected:
            logger.info(f"Cone-level pushforward mismatch on {sorted(zeta)}")
            mismatches.append({"cone": sorted(zeta)})

    return CheckReport("pushforward", not mismatches, hypotheses, mismatches, checked)


def _minimal_cone(fan, rays):
    """
    The smallest cone of the fan having all the rays as faces, or None.
    """

    rays = frozenset(rays)
    containing = [cone for cone in fan.cones() if rays <= cone]
    if not containing:
        return None
    return frozenset.intersection(*containing)


def ses_hypotheses(triple, ray, mode):
    """
    Conditions under which adding the divisor of an A-ray to B or to C
    gives a short exact sequence of forms. Returns a mapping from
    condition name to the list of its failures.
    """

    fan = triple.fan
    failures = {"unmarked": [], "divisors": [], "extra": [], "extra-maximal": []}
    if ray not in triple.A:
        failures["unmarked"].append(f"Ray {ray} is not an A-ray")
        return failures

    adjacent = {
        index
        for index in fan.used_rays()
        if index != ray and frozenset((ray, index)) in fan
    }

    for cone in fan.star(ray):
        for index in sorted(cone & (triple.B | triple.C)):
            if index not in adjacent:
                failures["divisors"].append(
                    f"Marked ray {index} meets ray {ray} outside a 2-face"
                )

    if mode == SesMode.ADD_B:
        for index in sorted(fan.used_rays() - {ray}):
            mu = _minimal_cone(fan, (ray, index))
            if mu is None:
                continue
            touches_c = any(
                other in adjacent and other in mu for other in triple.C
            )
            if touches_c and not mu & triple.B and index not in triple.C:
                failures["extra"].append(
                    f"Ray {index} meets ray {ray} inside C away from B but is not in C"
                )
    else:
        others = sorted(triple.A - {ray})
        contained = []
        for size in range(1, len(others) + 1):
            for subset in combinations(others, size):
                mu = _minimal_cone(fan, subset)
                if mu is not None:
                    contained.append((frozenset(subset), mu))

        for subset, mu in contained:
            if ray in mu:
                failures["extra"].append(
                    f"Intersection of rays {sorted(subset)} lies on ray {ray}"
                )

        maximal = [
            (subset, mu)
            for subset, mu in contained
            if not any(subset < other for other, _ in contained)
        ]
        for subset, mu in maximal:
            if ray in mu:
                failures["extra-maximal"].append(
                    f"Maximal intersection of rays {sorted(subset)} lies on ray {ray}"
                )

    for key in list(failures):
        failures[key] = sorted(set(failures[key]))
    return failures


def verify_phi_ses_identities(triple, ray, mode, logger=null_logger):
    """
    Checks the cone-level identity behind the short exact sequence for
    the divisor of an A-ray. Adding it to B compares with the subspaces
    of the orbit closure; adding it to C raises every dimension by one.
    """

    mode = SesMode(mode)
    fan = triple.fan
    hypotheses = ses_hypotheses(triple, ray, mode)
    failed = [message for messages in hypotheses.values() for message in messages]
    if hypotheses["unmarked"]:
        return CheckReport(f"ses-{mode.value}", False, failed, [], 0)

    mismatches = []
    checked = 0
    cones = [cone for cone in fan.star(ray) if not cone & triple.B]

    if mode == SesMode.ADD_B:
        closure = orbit_closure(triple, ray)
        origin = closure.ray_origin
        for zeta in cones:
            image = frozenset(q for q, index in origin.items() if index in zeta)
            expected = phi(triple, zeta)
            quotient = phi(closure.quadruple, image)
            value = Subspace(
                [closure.pull_back(row) for row in quotient.basis], fan.ambient_rank
            )

            checked += 1
            if value != expected:
                logger.info(f"Orbit closure identity fails on {sorted(zeta)}")
                mismatches.append({"cone": sorted(zeta)})
    else:
        grown = FanTriple(fan, triple.B, triple.C | {ray})
        for zeta in cones:
            before = phi(triple, zeta).dim
            after = phi(grown, zeta).dim

            checked += 1
            if after != before + 1:
                logger.info(f"Dimension on {sorted(zeta)} goes from {before} to {after}")
                mismatches.append({"cone": sorted(zeta), "before": before, "after": after})

    return CheckReport(f"ses-{mode.value}", not mismatches, failed, mismatches, checked)
