#
# cone.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from collections import deque
from itertools import product
from threading import Lock

import cdd

from .linalg import Subspace, dot, is_zero, primitive, rank, scale, to_vector

__all__ = [
    "double_description",
    "Cone",
    "FaceLattice",
    "dual_cone",
    "intersect_cones",
    "lattice_points_window",
]


def _canonical_ray(vector, lineality):
    if not lineality.is_zero():
        vector = lineality.reduce(vector)
    return primitive(vector)


def double_description(constraints, ambient_rank):
    """
    Generators of the polyhedral cone {x : <a, x> >= 0 for all a}.

    The conversion runs in cddlib with exact fractions. Returns the
    lineality space and the extreme rays, the rays as primitive integer
    vectors reduced modulo the lineality space.
    """

    n = ambient_rank
    rows = []
    for constraint in constraints:
        constraint = to_vector(constraint)
        if len(constraint) != n:
            raise ValueError(f"Constraint of length {len(constraint)} in rank {n}")
        if not is_zero(constraint):
            rows.append((0,) + constraint)

    if not rows:
        return Subspace.full(n), ()

    matrix = cdd.Matrix(rows, number_type="fraction")
    matrix.rep_type = cdd.RepType.INEQUALITY
    generators = cdd.Polyhedron(matrix).get_generators()

    lines, rays = [], []
    for index in range(generators.row_size):
        row = generators[index]
        # Rows starting with 1 are points; a cone only has the origin
        if row[0] != 0:
            continue
        vector = to_vector(row[1:])
        if index in generators.lin_set:
            lines.append(vector)
        else:
            rays.append(vector)

    lineality = Subspace(lines, n)
    unique = set()
    for ray in rays:
        ray = _canonical_ray(ray, lineality)
        if not is_zero(ray):
            unique.add(ray)
    return lineality, tuple(sorted(unique))


class Cone:
    """
    A rational polyhedral cone, stored canonically as its lineality
    space plus its primitive extreme rays, sorted. Facet normals and
    the face lattice are computed on first use.
    """

    __slots__ = (
        "ambient_rank",
        "rays",
        "lineality",
        "_facets",
        "_equations",
        "_faces",
        "_lock",
    )

    def __init__(self, generators, ambient_rank, lineality=()):
        generators = [to_vector(generator) for generator in generators]
        lineality = [to_vector(vector) for vector in lineality]
        for vector in generators + lineality:
            if len(vector) != ambient_rank:
                raise ValueError(f"Generator of length {len(vector)} in rank {ambient_rank}")

        # Canonicalize through the dual description
        constraints = generators + lineality + [scale(vector, -1) for vector in lineality]
        equations, facets = double_description(constraints, ambient_rank)
        normals = list(facets) + list(equations.basis)
        normals += [scale(vector, -1) for vector in equations.basis]
        space, rays = double_description(normals, ambient_rank)

        self._setup(ambient_rank, rays, space)
        self._facets = facets
        self._equations = equations

    def _setup(self, ambient_rank, rays, lineality):
        self.ambient_rank = ambient_rank
        self.rays = tuple(rays)
        self.lineality = lineality
        self._facets = None
        self._equations = None
        self._faces = None
        self._lock = Lock()

    @classmethod
    def trusted(cls, rays, ambient_rank, lineality=None):
        """
        Builds a cone from data already in canonical form: primitive
        extreme rays reduced modulo the lineality space.
        """

        cone = cls.__new__(cls)
        if lineality is None:
            lineality = Subspace.zero(ambient_rank)
        cone._setup(ambient_rank, sorted(tuple(ray) for ray in rays), lineality)
        return cone

    @classmethod
    def from_inequalities(cls, normals, ambient_rank, equations=()):
        constraints = [to_vector(normal) for normal in normals]
        for equation in equations:
            equation = to_vector(equation)
            constraints.append(equation)
            constraints.append(scale(equation, -1))

        lineality, rays = double_description(constraints, ambient_rank)
        return cls.trusted(rays, ambient_rank, lineality)

    @classmethod
    def zero(cls, ambient_rank):
        return cls.trusted((), ambient_rank)

    @classmethod
    def full(cls, ambient_rank):
        return cls.trusted((), ambient_rank, Subspace.full(ambient_rank))

    def _compute_dual(self):
        with self._lock:
            if self._facets is None:
                constraints = list(self.rays) + list(self.lineality.basis)
                constraints += [scale(vector, -1) for vector in self.lineality.basis]
                self._equations, self._facets = double_description(
                    constraints, self.ambient_rank
                )

    @property
    def facets(self):
        """
        Inner facet normals, primitive and reduced modulo the equations.
        """

        if self._facets is None:
            self._compute_dual()
        return self._facets

    @property
    def equations(self):
        if self._equations is None:
            self._compute_dual()
        return self._equations

    @property
    def generators(self):
        return self.rays + self.lineality.basis

    @property
    def lineality_dim(self):
        return self.lineality.dim

    @property
    def dim(self):
        return rank(self.generators, self.ambient_rank) if self.generators else 0

    def span(self):
        return Subspace(self.generators, self.ambient_rank)

    def is_pointed(self):
        return self.lineality.is_zero()

    def is_simplicial(self):
        return len(self.rays) == self.dim - self.lineality_dim

    def contains(self, vector):
        if any(dot(normal, vector) < 0 for normal in self.facets):
            return False
        return all(dot(row, vector) == 0 for row in self.equations.basis)

    def __contains__(self, vector):
        return self.contains(vector)

    def in_relative_interior(self, vector):
        if not self.contains(vector):
            return False
        return all(dot(normal, vector) > 0 for normal in self.facets)

    def contains_cone(self, other):
        return all(self.contains(vector) for vector in other.generators) and all(
            self.contains(scale(vector, -1)) for vector in other.lineality.basis
        )

    def face_rays(self, vector):
        """
        Indices of the rays of the smallest face containing the vector.
        """

        if not self.contains(vector):
            raise ValueError(f"Point {tuple(str(v) for v in vector)} is not in the cone")

        vanishing = [normal for normal in self.facets if dot(normal, vector) == 0]
        return frozenset(
            index
            for index, ray in enumerate(self.rays)
            if all(dot(normal, ray) == 0 for normal in vanishing)
        )

    def face(self, indices):
        return Cone.trusted(
            [self.rays[index] for index in indices], self.ambient_rank, self.lineality
        )

    def smallest_face_containing(self, vector):
        return self.face(self.face_rays(vector))

    def faces(self):
        with self._lock:
            faces = self._faces
        if faces is None:
            faces = FaceLattice(self)
            with self._lock:
                if self._faces is None:
                    self._faces = faces
                faces = self._faces
        return faces

    def dual(self):
        return Cone.trusted(self.facets, self.ambient_rank, self.equations)

    def join(self, *vectors):
        return Cone(self.rays + tuple(vectors), self.ambient_rank, self.lineality.basis)

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return (
            self.ambient_rank == other.ambient_rank
            and self.rays == other.rays
            and self.lineality == other.lineality
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.rays, self.lineality))

    def __repr__(self):
        rays = ", ".join(str(ray) for ray in self.rays)
        return f"Cone(rank={self.ambient_rank}, rays=[{rays}], lineality={self.lineality_dim})"

    def to_json(self):
        return {
            "rays": [list(ray) for ray in self.rays],
            "lineality": self.lineality.to_json()["basis"],
        }


class FaceLattice:
    """
    All faces of a cone, each recorded by the indices of the cone's rays
    it contains. Faces are sorted by dimension, then by ray indices.
    """

    __slots__ = (
        "cone",
        "ray_sets",
        "faces",
        "dims",
        "incidence",
        "_index",
    )

    def __init__(self, cone):
        rays = cone.rays
        facet_zeros = [
            frozenset(i for i, ray in enumerate(rays) if dot(normal, ray) == 0)
            for normal in cone.facets
        ]

        full = frozenset(range(len(rays)))
        found = {full}
        queue = deque([full])
        while queue:
            current = queue.popleft()
            for zeros in facet_zeros:
                child = current & zeros
                if child != current and child not in found:
                    found.add(child)
                    queue.append(child)

        faces = [(cone.face(ray_set), ray_set) for ray_set in found]
        faces.sort(key=lambda item: (item[0].dim, sorted(item[1])))

        self.cone = cone
        self.ray_sets = [ray_set for _, ray_set in faces]
        self.faces = [face for face, _ in faces]
        self.dims = [face.dim for face in self.faces]
        self._index = {ray_set: index for index, ray_set in enumerate(self.ray_sets)}

        # Covering relation: parent index -> child indices
        self.incidence = {}
        for parent, parent_set in enumerate(self.ray_sets):
            self.incidence[parent] = [
                child
                for child, child_set in enumerate(self.ray_sets)
                if child_set < parent_set and self.dims[child] == self.dims[parent] - 1
            ]

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def index(self, ray_set):
        return self._index[frozenset(ray_set)]

    def __contains__(self, ray_set):
        return frozenset(ray_set) in self._index

    def of_dim(self, dim):
        return [face for face, d in zip(self.faces, self.dims) if d == dim]

    def facets(self, index):
        return [self.faces[child] for child in self.incidence[index]]


def dual_cone(cone):
    return cone.dual()


def intersect_cones(first, second):
    if first.ambient_rank != second.ambient_rank:
        raise ValueError(
            f"Rank mismatch: {first.ambient_rank} != {second.ambient_rank}"
        )

    equations = first.equations.basis + second.equations.basis
    return Cone.from_inequalities(
        first.facets + second.facets, first.ambient_rank, equations
    )


def lattice_points_window(cone, bound):
    if bound < 0:
        raise ValueError(f"Window bound must be nonnegative: {bound}")

    interval = range(-bound, bound + 1)
    return [
        point
        for point in product(interval, repeat=cone.ambient_rank)
        if cone.contains(point)
    ]
