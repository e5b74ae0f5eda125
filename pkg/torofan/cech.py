#
# cech.py
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
Equivariant Cech complexes of form sheaves, one degree m at a time.

The cover is the list of maximal cones, in the order of the fan.
Over a complete fan the degrees are grouped by the sign of
<m, v> + a_v on every ray; the complexes only depend on those signs.
"""

from collections import namedtuple
from fractions import Fraction
from itertools import combinations, product
from math import ceil, comb, floor

from .cache import DEFAULT_CACHE_SIZE, LruCache
from .fan import FanTriple, orbit_closure
from .forms import CheckReport, FormSpec, degree_signs, graded_piece, piece_from_signs
from .kinds import Sign
from .linalg import (
    ZERO,
    CochainComplex,
    Subspace,
    add,
    to_vector,
    wedge_multiplication_matrix,
)
from .lp import INFEASIBLE, OPTIMAL, LinearProgram
from .subdivision import find_separating_ray, star_subdivision
from .util import PreconditionError, VerificationError, null_logger, sweep_map

__all__ = [
    "CechSetup",
    "Chamber",
    "ChamberDecomposition",
    "CohomologyTable",
    "cech_complex_for_signs",
    "cech_complex_at_degree",
    "higher_direct_image_check",
    "chamber_decomposition",
    "complete_cohomology_dims",
    "total_complex_at_degree",
    "e1_degeneration_check",
    "hypersurface_report",
]

Chamber = namedtuple("Chamber", ("signs", "bounded", "points", "representative"))
E1Report = namedtuple("E1Report", ("holds", "shift", "hypercohomology", "hodge_sums", "table"))
HypersurfaceReport = namedtuple(
    "HypersurfaceReport", ("separating", "fan", "exceptional", "table", "total")
)


class CechSetup:
    """
    A form sheaf on a fan together with its cover by maximal cones.
    The base, when given, is an affine triple the fan subdivides.
    """

    __slots__ = (
        "spec",
        "base",
        "cover",
        "_intersections",
        "_complexes",
    )

    def __init__(self, spec, base=None, cache_size=DEFAULT_CACHE_SIZE):
        if base is not None and not base.is_affine():
            raise PreconditionError("The base of a relative setup must be affine")

        self.spec = spec
        self.base = base
        self.cover = tuple(spec.triple.fan.maximal_cones)
        self._intersections = None
        self._complexes = LruCache(cache_size)

    @property
    def fan(self):
        return self.spec.triple.fan

    @property
    def triple(self):
        return self.spec.triple

    def intersections(self):
        """
        For every k, the (k + 1)-subsets of the cover in lexicographic
        order, each with the rays of the common face.
        """

        if self._intersections is None:
            levels = []
            for size in range(1, len(self.cover) + 1):
                level = []
                for subset in combinations(range(len(self.cover)), size):
                    common = frozenset.intersection(*(self.cover[i] for i in subset))
                    level.append((subset, common))
                levels.append(level)
            self._intersections = levels
        return self._intersections

    def offsets(self):
        twist = self.spec.twist
        return {
            ray: (twist[ray] if twist is not None else ZERO)
            for ray in sorted(self.fan.used_rays())
        }

    def __repr__(self):
        return f"CechSetup({self.spec!r}, charts={len(self.cover)})"


def _signs_key(signs):
    return tuple(sorted((ray, sign.value) for ray, sign in signs.items()))


def _cech_maps(levels, width):
    maps = []
    for k in range(len(levels) - 1):
        sources = {subset: position for position, (subset, _) in enumerate(levels[k])}
        targets = levels[k + 1]
        matrix = [[ZERO] * (len(sources) * width) for _ in range(len(targets) * width)]

        for t, (subset, _) in enumerate(targets):
            for j in range(len(subset)):
                s = sources[subset[:j] + subset[j + 1 :]]
                sign = -1 if j % 2 else 1
                for a in range(width):
                    matrix[t * width + a][s * width + a] += sign
        maps.append([tuple(row) for row in matrix])
    return maps


def _block_term(pieces, width):
    total = len(pieces) * width
    vectors = []
    for position, piece in enumerate(pieces):
        for row in piece.basis:
            vector = [ZERO] * total
            vector[position * width : (position + 1) * width] = row
            vectors.append(tuple(vector))
    return Subspace(vectors, total)


def cech_complex_for_signs(setup, p, signs):
    key = (p, _signs_key(signs))

    def compute():
        triple = setup.triple
        width = comb(setup.fan.ambient_rank, p)
        levels = setup.intersections()
        terms = []
        for level in levels:
            pieces = [piece_from_signs(triple, common, p, signs) for _, common in level]
            terms.append(_block_term(pieces, width))

        complex_ = CochainComplex(terms, _cech_maps(levels, width))
        complex_.check()
        return complex_

    return setup._complexes.get_or_compute(key, compute)


def cech_complex_at_degree(setup, m, p=None):
    if p is None:
        p = setup.spec.p
    m = to_vector(m)
    signs = degree_signs(setup.spec, m, setup.fan.used_rays())
    return cech_complex_for_signs(setup, p, signs)


def _window(rank, bound):
    interval = range(-bound, bound + 1)
    return list(product(interval, repeat=rank))


def higher_direct_image_check(setup, p_values, bound, threads=None, logger=null_logger):
    """
    Sweeps a window of degrees, reporting every nonzero H^k with k >= 1.
    With a base, H^0 is also compared with the forms of the base.
    """

    if setup.base is None:
        raise PreconditionError("Relative checks need a base triple")

    p_values = list(p_values)
    fan = setup.fan
    window = _window(fan.ambient_rank, bound)
    logger.info(f"Checking {len(window)} degrees for p in {list(p_values)}")

    def sweep(m):
        found = []
        for p in p_values:
            complex_ = cech_complex_at_degree(setup, m, p)
            dims = complex_.cohomology_dims()
            for k, dim in enumerate(dims[1:], start=1):
                if dim:
                    found.append({"m": list(m), "p": p, "k": k, "dim": dim})

            sections = None
            for chart in setup.cover:
                piece = graded_piece(setup.spec.with_p(p), m, chart).value
                sections = piece if sections is None else sections.intersect(piece)

            base_spec = FormSpec(setup.base, p, setup.spec.twist, setup.spec.shift)
            expected = graded_piece(base_spec, m).value
            if dims[0] != sections.dim or sections != expected:
                found.append({"m": list(m), "p": p, "k": 0, "dim": dims[0]})
        return found

    mismatches = [entry for found in sweep_map(sweep, window, threads) for entry in found]
    for entry in mismatches:
        logger.info(f"Nonvanishing at degree {entry['m']}: p = {entry['p']}, k = {entry['k']}")

    checked = len(window) * len(p_values)
    return CheckReport("higher-direct-image", not mismatches, [], mismatches, checked)


# Chambers
class ChamberDecomposition:
    """
    The degrees of M grouped by the signs of <m, v> + a_v on every ray.
    Bounded chambers list their lattice points; unbounded chambers keep
    a rational representative.
    """

    __slots__ = (
        "rays",
        "offsets",
        "chambers",
    )

    def __init__(self, rays, offsets, chambers):
        self.rays = tuple(rays)
        self.offsets = dict(offsets)
        self.chambers = list(chambers)

    def bounded(self):
        return [chamber for chamber in self.chambers if chamber.bounded]

    def unbounded(self):
        return [chamber for chamber in self.chambers if not chamber.bounded]

    def lattice_points(self):
        return [point for chamber in self.bounded() for point in chamber.points]

    def to_json(self):
        return [
            {
                "signs": {str(ray): sign.value for ray, sign in sorted(chamber.signs.items())},
                "bounded": chamber.bounded,
                "points": len(chamber.points),
            }
            for chamber in self.chambers
        ]


def _chamber_program(fan, offsets, signs, logger, homogeneous=False):
    program = LinearProgram(fan.ambient_rank, logger)
    for ray, sign in signs.items():
        vector = fan.rays[ray]
        offset = ZERO if homogeneous else offsets[ray]
        if sign == Sign.POSITIVE:
            program.add_inequality(vector, ">=", (0 if homogeneous else 1) - offset)
        elif sign == Sign.ZERO:
            program.add_equality(vector, -offset)
        else:
            program.add_inequality(vector, "<=", (0 if homogeneous else -1) - offset)
    return program


def _is_bounded(fan, signs, logger):
    n = fan.ambient_rank
    recession = _chamber_program(fan, {}, signs, logger, homogeneous=True)
    for axis in range(n):
        for sense, rhs in ((">=", 1), ("<=", -1)):
            program = recession.copy()
            program.add_inequality({axis: 1}, sense, rhs)
            if program.feasible():
                return False
    return True


def _chamber_points(fan, offsets, signs, program):
    n = fan.ambient_rank
    ranges = []
    for axis in range(n):
        target = [ZERO] * n
        target[axis] = Fraction(1)
        low = program.solve(target).value
        target[axis] = Fraction(-1)
        high = -program.solve(target).value
        ranges.append(range(ceil(low), floor(high) + 1))

    points = []
    for point in product(*ranges):
        if all(
            _sign_of(point, fan.rays[ray], offsets[ray]) == sign
            for ray, sign in signs.items()
        ):
            points.append(point)
    return points


def _sign_of(m, ray, offset):
    value = sum(a * b for a, b in zip(m, ray)) + offset
    return Sign.POSITIVE if value > 0 else Sign.ZERO if value == 0 else Sign.NEGATIVE


def chamber_decomposition(setup, logger=null_logger):
    """
    Depth-first search over sign assignments, pruning infeasible ones
    with exact LPs. Integral offsets make each sign class closed:
    t >= 1, t = 0 or t <= -1.
    """

    fan = setup.fan
    offsets = setup.offsets()
    for ray, value in offsets.items():
        if value.denominator != 1:
            raise PreconditionError(f"Twist coefficient on ray {ray} is not integral")

    rays = sorted(offsets)
    chambers = []
    stack = [{}]
    while stack:
        signs = stack.pop()
        program = _chamber_program(fan, offsets, signs, logger)
        if program.solve().status == INFEASIBLE:
            continue

        if len(signs) < len(rays):
            ray = rays[len(signs)]
            for sign in (Sign.POSITIVE, Sign.ZERO, Sign.NEGATIVE):
                child = dict(signs)
                child[ray] = sign
                stack.append(child)
            continue

        result = program.solve()
        if result.status != OPTIMAL:
            continue
        if _is_bounded(fan, signs, logger):
            points = _chamber_points(fan, offsets, signs, program)
            chambers.append(Chamber(signs, True, points, points[0] if points else None))
        else:
            chambers.append(Chamber(signs, False, [], result.solution))

    chambers.sort(key=lambda chamber: _signs_key(chamber.signs))
    logger.debug(f"Found {len(chambers)} chambers over {len(rays)} rays")
    return ChamberDecomposition(rays, offsets, chambers)


class CohomologyTable:
    __slots__ = (
        "rank",
        "dims",
        "chambers",
    )

    def __init__(self, rank, dims, chambers):
        self.rank = rank
        self.dims = dict(dims)
        self.chambers = chambers

    def __getitem__(self, key):
        return self.dims.get(key, 0)

    def total(self):
        return sum(self.dims.values())

    def hodge_sum(self, k):
        return sum(dim for (p, q), dim in self.dims.items() if p + q == k)

    def to_json(self):
        return {
            "rows": [
                {"p": p, "q": q, "dim": dim} for (p, q), dim in sorted(self.dims.items())
            ],
            "chambers": self.chambers.to_json(),
        }


def _check_complete(setup):
    if not setup.fan.is_complete():
        raise PreconditionError("Total cohomology needs a complete fan")


def complete_cohomology_dims(setup, threads=None, logger=null_logger):
    _check_complete(setup)
    n = setup.fan.ambient_rank
    decomposition = chamber_decomposition(setup, logger)

    def chamber_dims(chamber):
        return [
            cech_complex_for_signs(setup, p, chamber.signs).cohomology_dims()
            for p in range(n + 1)
        ]

    results = sweep_map(chamber_dims, decomposition.chambers, threads)
    dims = {}
    for chamber, per_p in zip(decomposition.chambers, results):
        if not chamber.bounded:
            if any(any(row) for row in per_p):
                raise VerificationError(
                    f"Unbounded chamber {_signs_key(chamber.signs)} has cohomology"
                )
            continue

        for p, row in enumerate(per_p):
            for q, dim in enumerate(row):
                if dim:
                    dims[(p, q)] = dims.get((p, q), 0) + dim * len(chamber.points)

    logger.info(f"Total cohomology dimension {sum(dims.values())}")
    return CohomologyTable(n, dims, decomposition)


def total_complex_at_degree(setup, m, logger=null_logger):
    """
    The total complex of the Cech-de Rham double complex at degree m,
    with differential d + (-1)^p delta.
    """

    n = setup.fan.ambient_rank
    levels = setup.intersections()
    cech = [cech_complex_at_degree(setup, m, p) for p in range(n + 1)]
    widths = [comb(n, p) for p in range(n + 1)]

    # Blocks of total degree k are the (p, q) with p + q = k, by p
    degrees = range(n + len(levels))
    blocks = {}
    for k in degrees:
        offset = 0
        layout = []
        for p in range(n + 1):
            q = k - p
            if 0 <= q < len(levels):
                size = len(levels[q]) * widths[p]
                layout.append((p, q, offset, size))
                offset += size
        blocks[k] = (layout, offset)

    terms = []
    for k in degrees:
        layout, total = blocks[k]
        vectors = []
        for p, q, offset, size in layout:
            for row in cech[p].terms[q].basis:
                vector = [ZERO] * total
                vector[offset : offset + size] = row
                vectors.append(tuple(vector))
        terms.append(Subspace(vectors, total))

    covector = add(to_vector(m), setup.spec.differential_shift(logger))
    wedges = {p: wedge_multiplication_matrix(covector, p) for p in range(n)}

    maps = []
    for k in list(degrees)[:-1]:
        source_layout, source_total = blocks[k]
        target_layout, target_total = blocks[k + 1]
        target_offsets = {(p, q): offset for p, q, offset, _ in target_layout}
        matrix = [[ZERO] * source_total for _ in range(target_total)]

        for p, q, offset, size in source_layout:
            if p < n and (p + 1, q) in target_offsets:
                wedge = wedges[p]
                row_offset = target_offsets[(p + 1, q)]
                for position in range(len(levels[q])):
                    for i, row in enumerate(wedge):
                        for j, value in enumerate(row):
                            if value:
                                matrix[row_offset + position * widths[p + 1] + i][
                                    offset + position * widths[p] + j
                                ] += value

            if (p, q + 1) in target_offsets:
                delta = cech[p].maps[q]
                row_offset = target_offsets[(p, q + 1)]
                sign = -1 if p % 2 else 1
                for i, row in enumerate(delta):
                    for j, value in enumerate(row):
                        if value:
                            matrix[row_offset + i][offset + j] += sign * value

        maps.append([tuple(row) for row in matrix])

    complex_ = CochainComplex(terms, maps)
    complex_.check()
    return complex_


def e1_degeneration_check(setup, threads=None, logger=null_logger):
    """
    Compares the hypercohomology of the de Rham complex, indexed by
    k = p + q, with the sums of the Hodge pieces h^q(Omega^p). The
    report carries the shift n separately.
    """

    table = complete_cohomology_dims(setup, threads, logger)
    n = setup.fan.ambient_rank
    points = table.chambers.lattice_points()
    logger.info(f"Assembling total complexes at {len(points)} degrees")

    def point_dims(m):
        complex_ = total_complex_at_degree(setup, m, logger)
        dims = complex_.cohomology_dims()
        euler = sum(
            (-1) ** (p + q) * complex_dim
            for p in range(n + 1)
            for q, complex_dim in enumerate(cech_complex_at_degree(setup, m, p).cohomology_dims())
        )
        if complex_.euler_characteristic() != euler:
            raise VerificationError(f"Euler characteristics disagree at degree {list(m)}")
        return dims

    hypercohomology = [0] * (n + len(setup.cover))
    for dims in sweep_map(point_dims, points, threads):
        for k, dim in enumerate(dims):
            hypercohomology[k] += dim

    hodge_sums = [table.hodge_sum(k) for k in range(len(hypercohomology))]
    holds = hypercohomology == hodge_sums
    if not holds:
        logger.info(f"Hypercohomology {hypercohomology} differs from Hodge sums {hodge_sums}")
    return E1Report(holds, n, hypercohomology, hodge_sums, table)


def hypersurface_report(triple, threads=None, logger=null_logger):
    """
    Stars an affine triple at its separating ray and computes the
    cohomology of the exceptional divisor with the induced triple.
    """

    separating = find_separating_ray(triple, logger)
    fan = star_subdivision(triple.fan, separating.ray)
    ray = fan.index_of(separating.ray)
    closure = orbit_closure(triple.with_fan(fan), ray)
    exceptional = FanTriple(closure.fan, closure.quadruple.B, closure.quadruple.C)

    setup = CechSetup(FormSpec(exceptional))
    table = complete_cohomology_dims(setup, threads, logger)
    logger.info(f"Exceptional divisor has total cohomology {table.total()}")
    return HypersurfaceReport(separating, fan, exceptional, table, table.total())
