#
# lp.py
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

from .linalg import ZERO, dot, nullspace, solve, to_vector
from .util import null_logger

__all__ = [
    "OPTIMAL",
    "INFEASIBLE",
    "UNBOUNDED",
    "LPResult",
    "LinearProgram",
]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LPResult = namedtuple("LPResult", ("status", "solution", "value"))


def _pivot(rows, objective, row_index, column):
    lead = rows[row_index][column]
    pivot_row = [value / lead for value in rows[row_index]]
    rows[row_index] = pivot_row

    for index, row in enumerate(rows):
        factor = row[column]
        if index != row_index and factor != 0:
            rows[index] = [a - factor * b for a, b in zip(row, pivot_row)]

    factor = objective[column]
    if factor != 0:
        objective[:] = [a - factor * b for a, b in zip(objective, pivot_row)]


def _objective_row(rows, basis, cost):
    objective = list(cost) + [ZERO]
    for row, basic in zip(rows, basis):
        factor = cost[basic]
        if factor != 0:
            objective = [a - factor * b for a, b in zip(objective, row)]
    return objective


def _bland(rows, basis, objective, allowed, logger):
    """
    Primal simplex with Bland's rule: the entering column is the
    smallest improving index, the leaving row breaks ratio ties by
    the smallest basic index.
    """

    iterations = 0
    while True:
        entering = None
        for column in allowed:
            if objective[column] < 0:
                entering = column
                break
        if entering is None:
            logger.debug(f"Simplex optimal after {iterations} pivots")
            return OPTIMAL

        best = None
        for index, row in enumerate(rows):
            coefficient = row[entering]
            if coefficient > 0:
                key = (row[-1] / coefficient, basis[index])
                if best is None or key < best[0]:
                    best = (key, index)

        if best is None:
            logger.debug(f"Simplex unbounded in column {entering}")
            return UNBOUNDED

        _pivot(rows, objective, best[1], entering)
        basis[best[1]] = entering
        iterations += 1


class LinearProgram:
    """
    An exact LP over free rational variables.

    Equalities are eliminated first by parametrizing their solution
    set, so the simplex only ever sees the inequality rows. Every
    variable is free; bounds are ordinary inequalities.
    """

    __slots__ = (
        "num_vars",
        "equalities",
        "inequalities",
        "logger",
    )

    def __init__(self, num_vars, logger=null_logger):
        self.num_vars = num_vars
        self.equalities = []
        self.inequalities = []
        self.logger = logger

    def _coefficients(self, coeffs):
        if isinstance(coeffs, dict):
            row = [ZERO] * self.num_vars
            for index, value in coeffs.items():
                row[index] += Fraction(value)
            return tuple(row)

        row = to_vector(coeffs)
        if len(row) != self.num_vars:
            raise ValueError(f"Constraint of length {len(row)} for {self.num_vars} variables")
        return row

    def add_equality(self, coeffs, rhs=0):
        self.equalities.append((self._coefficients(coeffs), Fraction(rhs)))

    def add_inequality(self, coeffs, sense, rhs=0):
        row = self._coefficients(coeffs)
        rhs = Fraction(rhs)
        if sense == ">=":
            self.inequalities.append((row, rhs))
        elif sense == "<=":
            self.inequalities.append((tuple(-value for value in row), -rhs))
        else:
            raise ValueError(f"Unknown constraint sense: {sense!r}")

    def copy(self):
        other = LinearProgram(self.num_vars, self.logger)
        other.equalities = list(self.equalities)
        other.inequalities = list(self.inequalities)
        return other

    def feasible(self):
        return self.solve().status == OPTIMAL

    def solve(self, objective=None):
        """
        Minimizes the objective (a coefficient sequence over the variables).
        Without an objective the L1 norm of the free parameters left after
        eliminating equalities is minimized, which keeps witnesses small
        and reproducible.
        """

        n = self.num_vars
        if self.equalities:
            rows = [row for row, _ in self.equalities]
            rhs = [value for _, value in self.equalities]
            base = solve(rows, rhs, n)
            if base is None:
                self.logger.debug("Equality system is inconsistent")
                return LPResult(INFEASIBLE, None, None)
            directions = nullspace(rows, n)
        else:
            base = tuple(ZERO for _ in range(n))
            directions = [
                tuple(Fraction(1) if i == j else ZERO for i in range(n))
                for j in range(n)
            ]

        k = len(directions)
        reduced = []
        for row, value in self.inequalities:
            coeffs = [dot(row, direction) for direction in directions]
            reduced.append((coeffs, value - dot(row, base)))

        if objective is not None:
            objective = self._coefficients(objective)
            param_cost = [dot(objective, direction) for direction in directions]
            offset = dot(objective, base)
        else:
            param_cost = None
            offset = ZERO

        if k == 0:
            for _, value in reduced:
                if value > 0:
                    return LPResult(INFEASIBLE, None, None)
            return LPResult(OPTIMAL, base, offset)

        params = self._simplex(k, reduced, param_cost)
        if params in (INFEASIBLE, UNBOUNDED):
            return LPResult(params, None, None)

        solution = list(base)
        for weight, direction in zip(params, directions):
            if weight:
                solution = [a + weight * b for a, b in zip(solution, direction)]
        solution = tuple(solution)

        value = dot(objective, solution) if objective is not None else None
        return LPResult(OPTIMAL, solution, value)

    def _simplex(self, k, reduced, param_cost):
        # Columns: y+ (k), y- (k), one surplus per row, then artificials.
        num_rows = len(reduced)
        structural = 2 * k + num_rows
        needs_artificial = [value > 0 for _, value in reduced]
        num_artificial = sum(needs_artificial)
        width = structural + num_artificial

        rows = []
        basis = []
        artificial = structural
        for index, (coeffs, value) in enumerate(reduced):
            row = [ZERO] * (width + 1)
            if needs_artificial[index]:
                for j, coefficient in enumerate(coeffs):
                    row[j] = coefficient
                    row[k + j] = -coefficient
                row[2 * k + index] = Fraction(-1)
                row[artificial] = Fraction(1)
                row[width] = value
                basis.append(artificial)
                artificial += 1
            else:
                for j, coefficient in enumerate(coeffs):
                    row[j] = -coefficient
                    row[k + j] = coefficient
                row[2 * k + index] = Fraction(1)
                row[width] = -value
                basis.append(2 * k + index)
            rows.append(row)

        if num_artificial:
            cost = [ZERO] * structural + [Fraction(1)] * num_artificial
            objective = _objective_row(rows, basis, cost)
            _bland(rows, basis, objective, range(width), self.logger)
            if objective[width] != 0:
                self.logger.debug(f"Phase one left infeasibility {-objective[width]}")
                return INFEASIBLE

            self._drive_out(rows, basis, structural, objective)

        if param_cost is None:
            cost = [Fraction(1)] * (2 * k)
        else:
            cost = list(param_cost) + [-value for value in param_cost]
        cost += [ZERO] * (width - 2 * k)

        objective = _objective_row(rows, basis, cost)
        status = _bland(rows, basis, objective, range(structural), self.logger)
        if status == UNBOUNDED:
            return UNBOUNDED

        values = [ZERO] * width
        for row, basic in zip(rows, basis):
            values[basic] = row[width]
        return [values[j] - values[k + j] for j in range(k)]

    @staticmethod
    def _drive_out(rows, basis, structural, objective):
        index = 0
        while index < len(rows):
            if basis[index] < structural:
                index += 1
                continue

            column = None
            for j in range(structural):
                if rows[index][j] != 0:
                    column = j
                    break

            if column is None:
                # Redundant row
                del rows[index]
                del basis[index]
                continue

            _pivot(rows, objective, index, column)
            basis[index] = column
            index += 1

    def lexmin(self, order):
        """
        Lexicographically minimizes the listed variables, one LP per
        variable, fixing each optimum before moving on. Returns None
        when infeasible; variables that are unbounded below are left
        free.
        """

        program = self.copy()
        for variable in order:
            target = [ZERO] * self.num_vars
            target[variable] = Fraction(1)
            result = program.solve(target)
            if result.status == INFEASIBLE:
                return None
            if result.status == UNBOUNDED:
                continue
            program.add_equality(target, result.solution[variable])

        result = program.solve()
        return result.solution if result.status == OPTIMAL else None
