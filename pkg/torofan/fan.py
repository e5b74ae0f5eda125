#
# fan.py
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
from threading import Lock

from .cone import Cone, intersect_cones
from .linalg import add, dot, is_zero, mat_vec, primitive, rank, to_vector
from .util import FanError, PreconditionError, null_logger, parse_rat

__all__ = [
    "Fan",
    "FanQuadruple",
    "FanTriple",
    "Order",
    "FanReport",
    "SubdivisionMap",
    "fan_validate",
    "restrict",
    "star_closure",
    "subdivision_map",
    "xi_face",
    "is_e_simplicial",
    "is_log_simplicial",
    "unimodular_completion",
    "OrbitClosure",
    "orbit_closure",
]

FanReport = namedtuple("FanReport", ("valid", "violations"))


def _cone_key(fan, cone):
    return tuple(sorted(fan.rays[index] for index in cone))


class Fan:
    """
    A fan over a shared list of primitive ray generators. Cones are
    frozensets of ray indices; only the maximal cones are stored, in
    the order given, and every face is derived from them.

    Rays in the list that no cone uses are allowed, so subdivisions
    and local fans can share indices with the fan they came from.
    """

    __slots__ = (
        "ambient_rank",
        "rays",
        "maximal_cones",
        "_geometry",
        "_all_cones",
        "_cone_set",
        "_position",
        "_lock",
    )

    def __init__(self, rays, maximal_cones, ambient_rank=None):
        rays = [tuple(int(value) for value in ray) for ray in rays]
        if ambient_rank is None:
            if not rays:
                raise FanError("Cannot infer the lattice rank of a fan without rays")
            ambient_rank = len(rays[0])

        seen = set()
        for ray in rays:
            if len(ray) != ambient_rank:
                raise FanError(f"Ray {ray} does not have rank {ambient_rank}")
            if is_zero(ray):
                raise FanError("Zero vector in ray list")
            if primitive(ray) != ray:
                raise FanError(f"Ray {ray} is not primitive")
            if ray in seen:
                raise FanError(f"Duplicate ray {ray}")
            seen.add(ray)

        cones = []
        for cone in maximal_cones:
            cone = frozenset(cone)
            for index in cone:
                if not 0 <= index < len(rays):
                    raise FanError(f"Ray index {index} out of range")
            if cone not in cones:
                cones.append(cone)

        # Drop listed cones that are faces of other listed cones
        cones = [
            cone for cone in cones if not any(cone < other for other in cones)
        ]

        self.ambient_rank = ambient_rank
        self.rays = tuple(rays)
        self.maximal_cones = tuple(cones)
        self._geometry = {}
        self._all_cones = None
        self._cone_set = None
        self._position = {ray: index for index, ray in enumerate(self.rays)}
        self._lock = Lock()

    @classmethod
    def face_fan(cls, rays, cone, ambient_rank=None):
        return cls(rays, [cone], ambient_rank)

    def with_cones(self, maximal_cones):
        return Fan(self.rays, maximal_cones, self.ambient_rank)

    def add_ray(self, vector):
        """
        Returns a fan with the same cones whose ray list contains the
        primitive vector, and the index of that ray.
        """

        vector = primitive(vector)
        if vector in self.rays:
            return self, self.rays.index(vector)
        fan = Fan(self.rays + (vector,), self.maximal_cones, self.ambient_rank)
        return fan, len(self.rays)

    def index_of(self, vector):
        return self._position.get(primitive(vector))

    def cone(self, indices):
        indices = frozenset(indices)
        with self._lock:
            cone = self._geometry.get(indices)
        if cone is None:
            cone = Cone([self.rays[index] for index in indices], self.ambient_rank)
            with self._lock:
                self._geometry[indices] = cone
        return cone

    def dim(self, indices):
        if not indices:
            return 0
        return rank([self.rays[index] for index in indices], self.ambient_rank)

    def faces_of(self, indices):
        """
        All faces of a cone of this fan, as ray-index sets.
        """

        indices = frozenset(indices)
        cone = self.cone(indices)
        faces = []
        for ray_set in cone.faces().ray_sets:
            faces.append(frozenset(self._position[cone.rays[i]] for i in ray_set))
        return faces

    def cones(self):
        """
        Every cone of the fan, including the zero cone, sorted by
        dimension and then by ray index.
        """

        if self._all_cones is None:
            found = set()
            for cone in self.maximal_cones:
                found.update(self.faces_of(cone))
            found.add(frozenset())
            result = sorted(found, key=lambda cone: (self.dim(cone), sorted(cone)))
            with self._lock:
                self._all_cones = tuple(result)
                self._cone_set = frozenset(result)
        return self._all_cones

    def __contains__(self, indices):
        self.cones()
        return frozenset(indices) in self._cone_set

    def used_rays(self):
        used = set()
        for cone in self.maximal_cones:
            used.update(cone)
        return frozenset(used)

    def is_face(self, small, large):
        return frozenset(small) in self.faces_of(large)

    def support_contains(self, vector):
        return any(self.cone(cone).contains(vector) for cone in self.maximal_cones)

    def minimal_cone_containing(self, vector):
        for cone in self.maximal_cones:
            geometry = self.cone(cone)
            if geometry.contains(vector):
                return frozenset(
                    self._position[geometry.rays[i]] for i in geometry.face_rays(vector)
                )
        return None

    def interior_point(self, indices):
        point = tuple(Fraction(0) for _ in range(self.ambient_rank))
        for index in indices:
            point = add(point, to_vector(self.rays[index]))
        return point

    def star(self, ray):
        return [cone for cone in self.cones() if ray in cone]

    def cones_within(self, indices):
        """
        The inclusion-maximal cones of this fan contained in the given cone.
        """

        geometry = Cone([self.rays[index] for index in indices], self.ambient_rank)
        inside = [
            cone
            for cone in self.cones()
            if cone and all(geometry.contains(self.rays[index]) for index in cone)
        ]
        return [cone for cone in inside if not any(cone < other for other in inside)]

    def restricted_to(self, indices):
        return self.with_cones(self.cones_within(indices))

    def is_simplicial(self):
        return all(len(cone) == self.dim(cone) for cone in self.maximal_cones)

    def is_complete(self):
        """
        A fan with pure full-dimensional maximal cones is complete exactly
        when every wall lies in two maximal cones.
        """

        n = self.ambient_rank
        if not self.maximal_cones:
            return False
        if any(self.dim(cone) != n for cone in self.maximal_cones):
            return False

        walls = {}
        for cone in self.maximal_cones:
            for face in self.faces_of(cone):
                if self.dim(face) == n - 1:
                    walls[face] = walls.get(face, 0) + 1
        return all(count == 2 for count in walls.values())

    def canonical_key(self):
        return tuple(sorted(_cone_key(self, cone) for cone in self.maximal_cones))

    def same_fan(self, other):
        return self.canonical_key() == other.canonical_key()

    def to_json(self):
        used = sorted(self.used_rays(), key=lambda index: self.rays[index])
        renumber = {index: position for position, index in enumerate(used)}
        cones = sorted(
            sorted(renumber[index] for index in cone) for cone in self.maximal_cones
        )
        return {
            "lattice_rank": self.ambient_rank,
            "rays": [list(self.rays[index]) for index in used],
            "maximal_cones": cones,
        }

    def __repr__(self):
        return f"Fan(rank={self.ambient_rank}, rays={len(self.rays)}, cones={len(self.maximal_cones)})"


class FanQuadruple:
    """
    A fan with three disjoint sets of marked rays, B, C and H, and
    coefficients h in (0, 1) on H. The unmarked used rays form A.
    """

    __slots__ = (
        "fan",
        "B",
        "C",
        "H",
        "h",
    )

    def __init__(self, fan, B=(), C=(), H=(), h=None):
        B, C, H = frozenset(B), frozenset(C), frozenset(H)
        h = {int(key): parse_rat(value) for key, value in (h or {}).items()}

        for name, marked in (("B", B), ("C", C), ("H", H)):
            for index in marked:
                if not 0 <= index < len(fan.rays):
                    raise FanError(f"Ray index {index} in {name} out of range")

        if B & C or B & H or C & H:
            raise FanError("Decorations B, C and H must be pairwise disjoint")
        if set(h) != set(H):
            raise FanError("Coefficients h must be given exactly on H")
        for index, value in h.items():
            if not 0 < value < 1:
                raise FanError(f"Coefficient h[{index}] = {value} is not in (0, 1)")

        self.fan = fan
        self.B = B
        self.C = C
        self.H = H
        self.h = h

    @property
    def A(self):
        return self.fan.used_rays() - self.B - self.C - self.H

    @property
    def D(self):
        return self.B | self.C | self.H

    def unmarked(self, cone):
        return frozenset(cone) - self.D

    def with_fan(self, fan):
        return type(self)._build(fan, self.B, self.C, self.H, self.h)

    def with_decorations(self, B=None, C=None, H=None, h=None):
        return FanQuadruple(
            self.fan,
            self.B if B is None else B,
            self.C if C is None else C,
            self.H if H is None else H,
            self.h if h is None else h,
        )

    @classmethod
    def _build(cls, fan, B, C, H, h):
        if cls is FanTriple:
            return FanTriple(fan, B, C)
        return FanQuadruple(fan, B, C, H, h)

    def is_plenary(self):
        return not self.A

    def is_affine(self):
        return len(self.fan.maximal_cones) == 1

    def base_cone(self):
        if not self.is_affine():
            raise PreconditionError("Fan is not the face fan of a single cone")
        return self.fan.maximal_cones[0]

    def __eq__(self, other):
        if not isinstance(other, FanQuadruple):
            return NotImplemented
        return (
            self.fan.rays == other.fan.rays
            and set(self.fan.maximal_cones) == set(other.fan.maximal_cones)
            and (self.B, self.C, self.H, self.h) == (other.B, other.C, other.H, other.h)
        )

    def __hash__(self):
        return hash((self.fan.rays, frozenset(self.fan.maximal_cones), self.B, self.C))

    def __repr__(self):
        return (
            f"{type(self).__name__}({self.fan!r}, B={sorted(self.B)}, "
            f"C={sorted(self.C)}, H={sorted(self.H)})"
        )


class FanTriple(FanQuadruple):
    __slots__ = ()

    def __init__(self, fan, B=(), C=()):
        super().__init__(fan, B, C)


class Order:
    """
    A strict total order on a set of ray indices, smallest first.
    """

    __slots__ = ("sequence",)

    def __init__(self, sequence):
        sequence = tuple(int(index) for index in sequence)
        if len(set(sequence)) != len(sequence):
            raise PreconditionError(f"Order repeats a ray: {list(sequence)}")
        self.sequence = sequence

    @property
    def carrier(self):
        return frozenset(self.sequence)

    def reverse(self):
        return tuple(reversed(self.sequence))

    def restrict(self, indices):
        indices = frozenset(indices)
        return Order(index for index in self.sequence if index in indices)

    def position(self, index):
        return self.sequence.index(index)

    def precedes(self, first, second):
        """
        Whether every ray of the first set comes before every ray of the second.
        """

        first = [self.position(index) for index in first]
        second = [self.position(index) for index in second]
        return not first or not second or max(first) < min(second)

    def __iter__(self):
        return iter(self.sequence)

    def __len__(self):
        return len(self.sequence)

    def __eq__(self, other):
        return isinstance(other, Order) and self.sequence == other.sequence

    def __hash__(self):
        return hash(self.sequence)

    def __repr__(self):
        return f"Order({list(self.sequence)})"


def fan_validate(fan, logger=null_logger):
    violations = []

    for cone in fan.maximal_cones:
        geometry = fan.cone(cone)
        if not geometry.is_pointed():
            violations.append(f"Cone {sorted(cone)} is not strongly convex")
            continue

        listed = sorted(fan.rays[index] for index in cone)
        if list(geometry.rays) != listed:
            violations.append(f"Cone {sorted(cone)} lists rays that are not extreme")

    if violations:
        return FanReport(False, violations)

    for first, second in combinations(fan.maximal_cones, 2):
        common = first & second
        meet = intersect_cones(fan.cone(first), fan.cone(second))
        expected = fan.cone(common) if common else Cone.zero(fan.ambient_rank)

        if meet != expected or not fan.is_face(common, first) or not fan.is_face(
            common, second
        ):
            logger.debug(f"Cones {sorted(first)} and {sorted(second)} overlap badly")
            violations.append(
                f"Cones {sorted(first)} and {sorted(second)} do not meet in a common face"
            )

    return FanReport(not violations, violations)


def restrict(quadruple, cone):
    cone = frozenset(cone)
    if cone not in quadruple.fan:
        raise FanError(f"Cone {sorted(cone)} is not in the fan")

    fan = quadruple.fan.with_cones([cone] if cone else [])
    H = quadruple.H & cone
    h = {index: quadruple.h[index] for index in H}
    if isinstance(quadruple, FanTriple):
        return FanTriple(fan, quadruple.B & cone, quadruple.C & cone)
    return FanQuadruple(fan, quadruple.B & cone, quadruple.C & cone, H, h)


def star_closure(fan, rays):
    rays = frozenset(rays)
    return [cone for cone in fan.cones() if cone & rays]


class SubdivisionMap:
    """
    The map sending every cone of a subdivision to the smallest cone
    of the coarser fan containing it.
    """

    __slots__ = (
        "source",
        "target",
        "assignment",
        "is_efficient",
    )

    def __init__(self, source, target, assignment):
        self.source = source
        self.target = target
        self.assignment = assignment
        self.is_efficient = {source.rays[i] for i in source.used_rays()} == {
            target.rays[i] for i in target.used_rays()
        }

    def __call__(self, cone):
        return self.assignment[frozenset(cone)]

    def compose(self, inner):
        """
        Given inner: X'' -> X' and self: X' -> X, returns X'' -> X.
        """

        assignment = {
            cone: self(inner(cone)) if cone else frozenset()
            for cone in inner.source.cones()
        }
        return SubdivisionMap(inner.source, self.target, assignment)


def _covers(fine, coarse, cone, logger):
    geometry = coarse.cone(cone)
    dim = geometry.dim
    pieces = [
        piece
        for piece in fine.cones()
        if fine.dim(piece) == dim
        and all(geometry.contains(fine.rays[index]) for index in piece)
    ]
    if dim == 0:
        return True
    if not pieces:
        logger.debug(f"No cone of the subdivision fills {sorted(cone)}")
        return False

    facet_normals = geometry.facets
    walls = {}
    for piece in pieces:
        for face in fine.faces_of(piece):
            if fine.dim(face) == dim - 1:
                walls[face] = walls.get(face, 0) + 1

    for wall, count in walls.items():
        rays = [fine.rays[index] for index in wall]
        on_boundary = any(
            all(dot(normal, ray) == 0 for ray in rays) for normal in facet_normals
        )
        expected = 1 if on_boundary else 2
        if count != expected:
            logger.debug(f"Wall {sorted(wall)} lies in {count} cones, expected {expected}")
            return False
    return True


def subdivision_map(fine, coarse, logger=null_logger):
    if fine.ambient_rank != coarse.ambient_rank:
        raise FanError("Fans live in lattices of different rank")

    assignment = {}
    for cone in fine.cones():
        if not cone:
            assignment[cone] = frozenset()
            continue

        image = coarse.minimal_cone_containing(fine.interior_point(cone))
        if image is None:
            raise FanError(f"Cone {sorted(cone)} is not supported on the coarser fan")
        assignment[cone] = image

    for cone in coarse.maximal_cones:
        if not _covers(fine, coarse, cone, logger):
            raise FanError(f"Cone {sorted(cone)} is not covered by the subdivision")

    return SubdivisionMap(fine, coarse, assignment)


def xi_face(fine, coarse_cone, coarse, piece):
    """
    The largest face of the cone piece (in the fine fan) whose support
    lies inside the coarse cone.
    """

    geometry = coarse.cone(coarse_cone) if coarse_cone else Cone.zero(coarse.ambient_rank)
    inside = frozenset(index for index in piece if geometry.contains(fine.rays[index]))

    best = frozenset()
    best_dim = 0
    for face in fine.faces_of(piece):
        if face <= inside:
            dim = fine.dim(face)
            if dim > best_dim:
                best, best_dim = face, dim
    return best


def is_e_simplicial(fan, rays):
    """
    Every cone containing a ray of the set is the join of that ray
    with a face of one dimension less.
    """

    rays = frozenset(rays)
    for cone in fan.maximal_cones:
        for ray in cone & rays:
            others = [fan.rays[index] for index in cone - {ray}]
            others_rank = rank(others, fan.ambient_rank) if others else 0
            if others_rank != fan.dim(cone) - 1:
                return False
    return True


def is_log_simplicial(quadruple):
    return is_e_simplicial(quadruple.fan, quadruple.B | quadruple.C)


# Orbit closures
def unimodular_completion(vector):
    """
    A unimodular integer matrix U with U v = e_1 for a primitive v,
    built from Euclid steps on rows of the identity.
    """

    vector = [int(value) for value in vector]
    n = len(vector)
    matrix = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    current = list(vector)

    def combine(target, source, factor):
        matrix[target] = [a - factor * b for a, b in zip(matrix[target], matrix[source])]
        current[target] -= factor * current[source]

    def swap(i, j):
        matrix[i], matrix[j] = matrix[j], matrix[i]
        current[i], current[j] = current[j], current[i]

    for index in range(1, n):
        while current[index] != 0:
            factor = current[0] // current[index]
            combine(0, index, factor)
            swap(0, index)

    if current[0] < 0:
        matrix[0] = [-value for value in matrix[0]]
        current[0] = -current[0]
    if current[0] != 1:
        raise FanError(f"Vector {tuple(vector)} is not primitive")
    return matrix


class OrbitClosure:
    """
    The fan of the orbit closure of a ray: the cones containing the
    ray, projected to the quotient lattice. Carries the projection and
    the correspondence between quotient rays and original rays.
    """

    __slots__ = (
        "ray",
        "projection",
        "quadruple",
        "ray_origin",
        "cone_origin",
    )

    def __init__(self, ray, projection, quadruple, ray_origin, cone_origin):
        self.ray = ray
        self.projection = projection
        self.quadruple = quadruple
        self.ray_origin = ray_origin
        self.cone_origin = cone_origin

    @property
    def fan(self):
        return self.quadruple.fan

    def pull_back(self, covector):
        """
        Maps a covector on the quotient lattice to the annihilator of
        the ray in the original dual space.
        """

        n = len(self.projection[0]) if self.projection else 0
        result = [Fraction(0)] * n
        for weight, row in zip(covector, self.projection):
            if weight:
                result = [a + weight * b for a, b in zip(result, row)]
        return tuple(result)

    def project(self, vector):
        return mat_vec(self.projection, vector)


def orbit_closure(quadruple, ray):
    fan = quadruple.fan
    if fan.ambient_rank < 2:
        raise PreconditionError("Orbit closures need lattice rank at least 2")

    matrix = unimodular_completion(fan.rays[ray])
    projection = [tuple(row) for row in matrix[1:]]

    adjacent = [
        index
        for index in sorted(fan.used_rays())
        if index != ray and frozenset((ray, index)) in fan
    ]

    ray_list = []
    ray_origin = {}
    position = {}
    for index in adjacent:
        image = primitive(mat_vec(projection, fan.rays[index]))
        position[index] = len(ray_list)
        ray_origin[len(ray_list)] = index
        ray_list.append(image)

    cones = []
    cone_origin = {}
    for cone in fan.maximal_cones:
        if ray not in cone:
            continue
        image = frozenset(position[index] for index in cone if index in position)
        cones.append(image)
        cone_origin[image] = cone

    if ray_list:
        quotient = Fan(ray_list, cones, fan.ambient_rank - 1)
    else:
        quotient = Fan([], [frozenset()], fan.ambient_rank - 1)

    def images(marked):
        return frozenset(position[index] for index in marked if index in position)

    H = images(quadruple.H)
    h = {position[index]: quadruple.h[index] for index in quadruple.H if index in position}
    result = FanQuadruple(quotient, images(quadruple.B), images(quadruple.C), H, h)
    if isinstance(quadruple, FanTriple):
        result = FanTriple(quotient, result.B, result.C)
    return OrbitClosure(ray, projection, result, ray_origin, cone_origin)
