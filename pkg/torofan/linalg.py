#
# linalg.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from fractions import Fraction
from itertools import combinations
from math import gcd

import sympy

from .util import VerificationError

__all__ = [
    "ZERO",
    "to_vector",
    "dot",
    "add",
    "sub",
    "scale",
    "is_zero",
    "primitive",
    "mat_vec",
    "transpose",
    "rref",
    "rank",
    "fraction_free_rank",
    "nullspace",
    "solve",
    "determinant",
    "Subspace",
    "subspace_intersect",
    "wedge_basis",
    "wedge_power",
    "wedge_multiplication_matrix",
    "CochainComplex",
]

ZERO = Fraction(0)


# Vectors
def to_vector(values):
    return tuple(Fraction(value) for value in values)


def dot(u, v):
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(u, factor):
    return tuple(a * factor for a in u)


def is_zero(u):
    return all(a == 0 for a in u)


def primitive(values):
    """
    Returns the primitive integer vector on the ray spanned
    by the given rational vector. The zero vector is returned
    unchanged.
    """

    values = to_vector(values)
    if is_zero(values):
        return tuple(0 for _ in values)

    denominator = 1
    for value in values:
        denominator = denominator * value.denominator // gcd(
            denominator, value.denominator
        )

    integers = [int(value * denominator) for value in values]
    divisor = 0
    for value in integers:
        divisor = gcd(divisor, abs(value))
    return tuple(value // divisor for value in integers)


# Matrices
def mat_vec(matrix, vector):
    return tuple(dot(row, vector) for row in matrix)


def transpose(matrix, nrows=None):
    if not matrix:
        return [() for _ in range(nrows or 0)]
    return [tuple(column) for column in zip(*matrix)]


def _to_sympy(rows, ncols):
    rows = list(rows)
    entries = []
    for row in rows:
        row = to_vector(row)
        if len(row) != ncols:
            raise ValueError(f"Row of length {len(row)} in a {ncols}-column matrix")
        entries.extend(sympy.Rational(value.numerator, value.denominator) for value in row)
    return sympy.Matrix(len(rows), ncols, entries)


def _from_sympy(value):
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _rows_of(matrix, count=None):
    count = matrix.rows if count is None else count
    return [
        tuple(_from_sympy(matrix[i, j]) for j in range(matrix.cols)) for i in range(count)
    ]


def rref(rows, ncols):
    """
    Reduced row-echelon form over the rationals.
    Returns the nonzero rows and the pivot columns.
    """

    rows = list(rows)
    if not rows:
        return [], ()

    reduced, pivots = _to_sympy(rows, ncols).rref()
    return _rows_of(reduced, len(pivots)), tuple(pivots)


def rank(rows, ncols=None):
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(rref(rows, ncols)[1])


def fraction_free_rank(rows):
    """
    Rank by Bareiss elimination on integer-scaled rows.
    CochainComplex.check() compares it against the rref ranks.
    """

    matrix = []
    for row in rows:
        row = to_vector(row)
        denominator = 1
        for value in row:
            denominator = denominator * value.denominator // gcd(
                denominator, value.denominator
            )
        matrix.append([int(value * denominator) for value in row])

    if not matrix:
        return 0

    ncols = len(matrix[0])
    result = 0
    previous = 1
    for column in range(ncols):
        pivot = None
        for index in range(result, len(matrix)):
            if matrix[index][column] != 0:
                pivot = index
                break
        if pivot is None:
            continue

        matrix[result], matrix[pivot] = matrix[pivot], matrix[result]
        lead = matrix[result][column]
        for index in range(result + 1, len(matrix)):
            factor = matrix[index][column]
            matrix[index] = [
                Fraction(lead * a - factor * b, previous)
                for a, b in zip(matrix[index], matrix[result])
            ]
        previous = lead
        result += 1
        if result == len(matrix):
            break
    return result


def nullspace(rows, ncols):
    """
    Basis of {x : row . x = 0 for every row}, one vector per free column.
    """

    rows = list(rows)
    if not rows:
        return [
            tuple(Fraction(1) if i == j else ZERO for i in range(ncols)) for j in range(ncols)
        ]

    return [tuple(_rows_of(vector.T)[0]) for vector in _to_sympy(rows, ncols).nullspace()]


def solve(rows, rhs, ncols):
    """
    One solution of rows . x = rhs with every free variable set to zero,
    or None when the system is inconsistent.
    """

    rows = list(rows)
    if not rows:
        return tuple(ZERO for _ in range(ncols))

    augmented = [tuple(row) + (value,) for row, value in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None

    solution = [ZERO] * ncols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row[ncols]
    return tuple(solution)


def determinant(matrix):
    matrix = list(matrix)
    if not matrix:
        return Fraction(1)
    return _from_sympy(_to_sympy(matrix, len(matrix)).det(method="bareiss"))


# Subspaces
class Subspace:
    """
    A linear subspace of Q^n, stored as the reduced row-echelon basis
    of any spanning set. Two subspaces are equal exactly when their
    fields are equal.
    """

    __slots__ = (
        "ambient_dim",
        "basis",
        "pivots",
    )

    def __init__(self, vectors, ambient_dim):
        vectors = list(vectors)
        for vector in vectors:
            if len(vector) != ambient_dim:
                raise ValueError(
                    f"Vector of length {len(vector)} in ambient dimension {ambient_dim}"
                )

        if vectors:
            basis, pivots = rref(vectors, ambient_dim)
        else:
            basis, pivots = [], ()

        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)
        self.pivots = pivots

    @classmethod
    def full(cls, ambient_dim):
        vectors = []
        for index in range(ambient_dim):
            vectors.append(tuple(1 if i == index else 0 for i in range(ambient_dim)))
        return cls(vectors, ambient_dim)

    @classmethod
    def zero(cls, ambient_dim):
        return cls([], ambient_dim)

    @property
    def dim(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    def reduce(self, vector):
        vector = list(to_vector(vector))
        for row, pivot in zip(self.basis, self.pivots):
            factor = vector[pivot]
            if factor:
                vector = [a - factor * b for a, b in zip(vector, row)]
        return tuple(vector)

    def contains(self, vector):
        return is_zero(self.reduce(vector))

    def __contains__(self, vector):
        return self.contains(vector)

    def is_subspace_of(self, other):
        self._check_ambient(other)
        return all(other.contains(row) for row in self.basis)

    def annihilator(self):
        return Subspace(nullspace(self.basis, self.ambient_dim), self.ambient_dim)

    def sum(self, other):
        self._check_ambient(other)
        return Subspace(self.basis + other.basis, self.ambient_dim)

    def intersect(self, other):
        self._check_ambient(other)
        if self.is_subspace_of(other):
            return self
        if other.is_subspace_of(self):
            return other

        constraints = self.annihilator().basis + other.annihilator().basis
        return Subspace(nullspace(list(constraints), self.ambient_dim), self.ambient_dim)

    def _check_ambient(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"Ambient dimension mismatch: {self.ambient_dim} != {other.ambient_dim}"
            )

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        rows = ", ".join(
            "(" + ", ".join(str(value) for value in row) + ")" for row in self.basis
        )
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, [{rows}])"

    def to_json(self):
        return {
            "ambient_dim": self.ambient_dim,
            "basis": [[str(value) for value in row] for row in self.basis],
        }


def subspace_intersect(first, second):
    return first.intersect(second)


# Exterior powers
def wedge_basis(ambient_dim, p):
    """
    Lexicographically ordered p-subsets indexing the basis e_I of the
    p-th exterior power.
    """

    return list(combinations(range(ambient_dim), p))


def wedge_power(subspace, p):
    ambient_dim = subspace.ambient_dim
    if p < 0 or p > ambient_dim:
        raise ValueError(f"Wedge degree {p} out of range for ambient {ambient_dim}")

    index_sets = wedge_basis(ambient_dim, p)
    if p == 0:
        return Subspace([(1,)], 1)

    vectors = []
    for rows in combinations(subspace.basis, p):
        coords = []
        for index_set in index_sets:
            minor = [[row[column] for column in index_set] for row in rows]
            coords.append(determinant(minor))
        vectors.append(tuple(coords))
    return Subspace(vectors, len(index_sets))


def wedge_multiplication_matrix(covector, p):
    """
    Matrix of omega -> covector ^ omega from the p-th to the (p+1)-th
    exterior power, in lexicographic coordinates.
    """

    ambient_dim = len(covector)
    sources = wedge_basis(ambient_dim, p)
    targets = wedge_basis(ambient_dim, p + 1)
    target_index = {index_set: i for i, index_set in enumerate(targets)}

    matrix = [[ZERO] * len(sources) for _ in targets]
    for column, index_set in enumerate(sources):
        for j, value in enumerate(covector):
            if value == 0 or j in index_set:
                continue

            sign = -1 if sum(1 for i in index_set if i < j) % 2 else 1
            row = target_index[tuple(sorted(index_set + (j,)))]
            matrix[row][column] += sign * Fraction(value)
    return [tuple(row) for row in matrix]


# Complexes
class CochainComplex:
    """
    Terms are subspaces of coordinate spaces, maps[k] is a matrix from
    the coordinates of terms[k] to those of terms[k + 1].

    Ranks of the maps are computed twice, once through rref() and once
    by fraction-free elimination, and check() fails if they disagree.
    """

    __slots__ = (
        "terms",
        "maps",
        "_ranks",
        "_dims",
    )

    def __init__(self, terms, maps):
        terms = list(terms)
        maps = [list(matrix) for matrix in maps]
        if len(maps) != max(len(terms) - 1, 0):
            raise ValueError(f"{len(terms)} terms need {len(terms) - 1} maps")

        self.terms = terms
        self.maps = maps
        self._ranks = None
        self._dims = None

    def images(self, k):
        return [mat_vec(self.maps[k], row) for row in self.terms[k].basis]

    def check(self):
        for k in range(len(self.maps)):
            images = self.images(k)
            for image in images:
                if not self.terms[k + 1].contains(image):
                    raise VerificationError(f"Map {k} leaves term {k + 1}")

            if k + 1 < len(self.maps):
                for image in images:
                    if not is_zero(mat_vec(self.maps[k + 1], image)):
                        raise VerificationError(f"d^2 != 0 at index {k}")

        ranks = self.ranks()
        for k, expected in enumerate(ranks):
            independent = fraction_free_rank(self.images(k))
            if independent != expected:
                raise VerificationError(
                    f"Rank of map {k} is {expected} by rref but {independent} by Bareiss"
                )

    def ranks(self):
        if self._ranks is None:
            self._ranks = [
                rank(self.images(k), self.terms[k + 1].ambient_dim)
                for k in range(len(self.maps))
            ]
        return list(self._ranks)

    def cohomology_dims(self):
        if self._dims is None:
            self.check()
            ranks = self.ranks()

            dims = []
            for k, term in enumerate(self.terms):
                outgoing = ranks[k] if k < len(ranks) else 0
                incoming = ranks[k - 1] if k > 0 else 0
                dims.append(term.dim - outgoing - incoming)
            self._dims = dims
        return list(self._dims)

    def euler_characteristic(self):
        return sum((-1) ** k * term.dim for k, term in enumerate(self.terms))
