#
# resolution.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from .certify import verify_pl_function
from .fan import (
    Fan,
    FanQuadruple,
    FanTriple,
    Order,
    fan_validate,
    is_e_simplicial,
    is_log_simplicial,
    restrict,
    subdivision_map,
)
from .kinds import StepKind
from .subdivision import (
    PLFunction,
    compose_good_functions,
    ext,
    find_good_sorting_function,
    star_subdivision,
)
from .util import (
    FanError,
    PreconditionError,
    VerificationError,
    format_rat,
    null_logger,
    parse_rat,
    sweep_map,
)

__all__ = [
    "ResolutionStep",
    "ResolutionChain",
    "sequential_star",
    "is_sequentially_convex",
    "resolve_log_simplicial",
    "verify_chain",
    "canonicity_check",
]


def _cone_list(cones):
    return sorted(sorted(cone) for cone in cones)


def _certificates_to_json(certificates):
    result = []
    for base in sorted(certificates, key=sorted):
        pl = certificates[base]
        entry = {"base": sorted(base), "pieces": None}
        if pl is not None:
            entry["pieces"] = pl.to_json()["pieces"]
        result.append(entry)
    return result


def _certificates_from_json(rays, rank, entries):
    certificates = {}
    for entry in entries:
        base = frozenset(entry["base"])
        if entry["pieces"] is None:
            certificates[base] = None
            continue
        fan = Fan(rays, [piece["cone"] for piece in entry["pieces"]], rank)
        certificates[base] = PLFunction.from_json(fan, entry)
    return certificates


def _witnesses_to_json(witnesses):
    result = []
    for base in sorted(witnesses, key=sorted):
        pl, epsilon = witnesses[base]
        entry = {"base": sorted(base), "epsilon": None, "pieces": None}
        if pl is not None:
            entry["epsilon"] = format_rat(epsilon)
            entry["pieces"] = pl.to_json()["pieces"]
        result.append(entry)
    return result


def _witnesses_from_json(rays, rank, entries):
    functions = _certificates_from_json(rays, rank, entries)
    witnesses = {}
    for entry in entries:
        base = frozenset(entry["base"])
        epsilon = entry["epsilon"]
        witnesses[base] = (functions[base], None if epsilon is None else parse_rat(epsilon))
    return witnesses


class ResolutionStep:
    """
    One subdivision in a chain. Star steps over a whole fan have no base
    cone; resolution steps are local and carry the cone they subdivide.
    Certificates map a cone of the coarse side to a good sorting function
    of the fine side over it, or None when none was found.
    """

    __slots__ = (
        "kind",
        "ray",
        "base",
        "fan_before",
        "fan_after",
        "certificates",
    )

    def __init__(self, kind, ray, base, fan_before, fan_after, certificates=None):
        self.kind = kind
        self.ray = ray
        self.base = None if base is None else frozenset(base)
        self.fan_before = fan_before
        self.fan_after = fan_after
        self.certificates = certificates or {}

    def lift(self, ray):
        """
        Joins every cone of the step with a ray outside its span.
        """

        def join(fan):
            return fan.with_cones([cone | {ray} for cone in fan.maximal_cones])

        base = None if self.base is None else self.base | {ray}
        return ResolutionStep(self.kind, self.ray, base, join(self.fan_before), join(self.fan_after))

    def structure_key(self):
        return (
            self.kind.value,
            self.ray,
            None if self.base is None else tuple(sorted(self.base)),
            self.fan_before.canonical_key(),
            self.fan_after.canonical_key(),
        )

    def to_json(self):
        return {
            "kind": self.kind.value,
            "ray": self.ray,
            "base": None if self.base is None else sorted(self.base),
            "before": _cone_list(self.fan_before.maximal_cones),
            "after": _cone_list(self.fan_after.maximal_cones),
            "certificates": _certificates_to_json(self.certificates),
        }

    def __repr__(self):
        return f"ResolutionStep({self.kind.value}, ray={self.ray}, base={sorted(self.base or ())})"


class ResolutionChain:
    """
    The steps of a resolution and its final fan. The composite maps each
    maximal cone of the original fan to a good sorting function of the
    final fan over it, found directly. Witnesses map a cone to the pair
    (outer + eps * inner, eps) built from the first step's certificate.
    """

    __slots__ = (
        "quadruple",
        "order",
        "steps",
        "final_fan",
        "composite",
        "witnesses",
    )

    def __init__(self, quadruple, order, steps, final_fan, composite=None, witnesses=None):
        self.quadruple = quadruple
        self.order = order
        self.steps = list(steps)
        self.final_fan = final_fan
        self.composite = composite or {}
        self.witnesses = witnesses or {}

    @property
    def fan(self):
        return self.quadruple.fan

    def final_quadruple(self):
        return self.quadruple.with_fan(self.final_fan)

    def subdivision_map(self, logger=null_logger):
        return subdivision_map(self.final_fan, self.fan, logger)

    def structure_key(self):
        return (
            tuple(step.structure_key() for step in self.steps),
            self.final_fan.canonical_key(),
        )

    def to_json(self):
        quadruple = self.quadruple
        return {
            "lattice_rank": self.fan.ambient_rank,
            "rays": [list(ray) for ray in self.fan.rays],
            "maximal_cones": _cone_list(self.fan.maximal_cones),
            "B": sorted(quadruple.B),
            "C": sorted(quadruple.C),
            "H": sorted(quadruple.H),
            "h": {str(index): format_rat(value) for index, value in sorted(quadruple.h.items())},
            "order": list(self.order),
            "steps": [step.to_json() for step in self.steps],
            "final": _cone_list(self.final_fan.maximal_cones),
            "composite": _certificates_to_json(self.composite),
            "witnesses": _witnesses_to_json(self.witnesses),
        }

    @classmethod
    def from_json(cls, obj):
        try:
            rank = obj["lattice_rank"]
            rays = obj["rays"]
            fan = Fan(rays, obj["maximal_cones"], rank)
            if obj.get("H"):
                quadruple = FanQuadruple(fan, obj["B"], obj["C"], obj["H"], obj.get("h"))
            else:
                quadruple = FanTriple(fan, obj["B"], obj["C"])

            steps = []
            for entry in obj["steps"]:
                steps.append(
                    ResolutionStep(
                        StepKind(entry["kind"]),
                        entry["ray"],
                        entry["base"],
                        Fan(rays, entry["before"], rank),
                        Fan(rays, entry["after"], rank),
                        _certificates_from_json(rays, rank, entry["certificates"]),
                    )
                )

            final_fan = Fan(rays, obj["final"], rank)
            composite = _certificates_from_json(rays, rank, obj.get("composite", []))
            witnesses = _witnesses_from_json(rays, rank, obj.get("witnesses", []))
        except (KeyError, TypeError, ValueError) as error:
            raise FanError(f"Malformed resolution chain: {error}") from error

        return cls(quadruple, Order(obj["order"]), steps, final_fan, composite, witnesses)

    def __len__(self):
        return len(self.steps)

    def __repr__(self):
        return f"ResolutionChain({len(self.steps)} steps, final={self.final_fan!r})"


def sequential_star(quadruple, rays, order, logger=null_logger):
    """
    Stars the fan at every ray of the set, in the reverse of the order.
    """

    rays = frozenset(rays)
    if order.carrier != rays:
        raise PreconditionError("Order must carry exactly the rays to subdivide at")
    if not rays <= quadruple.D:
        raise PreconditionError("Only decorated rays can be starred")

    fan = quadruple.fan
    steps = []
    for ray in order.reverse():
        after = star_subdivision(fan, fan.rays[ray])
        logger.debug(f"Star at ray {ray}: {len(after.maximal_cones)} maximal cones")
        steps.append(ResolutionStep(StepKind.STAR, ray, None, fan, after))
        fan = after

    if not is_e_simplicial(fan, rays):
        raise VerificationError("Sequential star subdivision is not simplicial at its rays")
    return ResolutionChain(quadruple, order, steps, fan)


def is_sequentially_convex(chain, logger=null_logger):
    """
    Checks each star step for convexity on the cones of the original fan
    that contain the starred ray and no ray starred before it. Returns the
    verdict and, per step, the good sorting functions found.
    """

    quadruple = chain.quadruple
    fan = quadruple.fan
    starred = set()
    certificates = []

    for step in chain.steps:
        if step.kind != StepKind.STAR:
            raise PreconditionError("Sequential convexity is defined for star steps only")

        found = {}
        for cone in fan.cones():
            if step.ray not in cone or cone & starred:
                continue

            before = fan.with_cones([cone])
            after = star_subdivision(before, fan.rays[step.ray])
            pl = find_good_sorting_function(after, quadruple.with_fan(after), before, logger)
            found[cone] = pl
            if pl is None:
                logger.info(f"Star at ray {step.ray} is not convex over {sorted(cone)}")
                certificates.append(found)
                return False, certificates

        certificates.append(found)
        starred.add(step.ray)
    return True, certificates


def _check_order(triple, order):
    decorated = (triple.B | triple.C) & triple.fan.used_rays()
    if order.carrier != decorated:
        raise PreconditionError(
            f"Order must carry exactly the B- and C-rays {sorted(decorated)}"
        )
    if not order.precedes(triple.C & decorated, triple.B & decorated):
        raise PreconditionError("Order must put every C-ray before every B-ray")


def _resolve_cone(triple, tau, order, logger):
    """
    The canonical log-simplicial subdivision of one cone. Returns the
    steps and the maximal cones of the result.
    """

    fan = triple.fan
    tau = frozenset(tau)
    B = triple.B & tau
    C = triple.C & tau

    if B:
        beta = order.restrict(B).sequence[-1]
        before = fan.with_cones([tau])
        after = star_subdivision(before, fan.rays[beta])
        steps = []
        if not after.same_fan(before):
            steps.append(ResolutionStep(StepKind.STAR, beta, tau, before, after))
        logger.debug(f"Cone {sorted(tau)}: star at B-ray {beta}")

        cones = []
        for cone in after.maximal_cones:
            zeta = cone - {beta}
            sub_steps, sub_cones = _resolve_cone(triple, zeta, order, logger)
            steps.extend(step.lift(beta) for step in sub_steps)
            cones.extend(sub | {beta} for sub in sub_cones)
        return steps, cones

    A = tau - C
    base = frozenset(A)
    current = fan.with_cones([base])
    steps = []
    for ray in order.restrict(C):
        extended = ext(current, base, ray)
        base = base | {ray}
        before = fan.with_cones([base])
        if not extended.same_fan(before):
            steps.append(ResolutionStep(StepKind.EXT, ray, base, before, extended))
        logger.debug(f"Cone {sorted(tau)}: extension by C-ray {ray}")
        current = extended

    return steps, list(current.maximal_cones)


def _composition_witness(triple, tau, first, final_fan, logger):
    """
    Combines the certificate of the first step over a cone with a good
    function of the final fan over that step's output. Returns the pair
    (function, eps), or (None, None) when either half is missing.
    """

    outer = first.certificates.get(tau)
    if outer is None:
        return None, None

    local = final_fan.restricted_to(tau)
    quadruple = triple.with_fan(local)
    inner = find_good_sorting_function(local, quadruple, first.fan_after, logger)
    if inner is None:
        logger.info(f"No good function over the first step of {sorted(tau)}")
        return None, None

    combined = compose_good_functions(outer, inner, quadruple)
    if combined is None:
        logger.info(f"Halving found no composition witness over {sorted(tau)}")
        return None, None

    logger.debug(f"Composition witness over {sorted(tau)} with eps = {combined[1]}")
    return combined


def resolve_log_simplicial(triple, order, certify=True, threads=None, logger=null_logger):
    """
    The canonical efficient log-simplicial model of a fan triple, built
    cone by cone for an order putting C before B. Each step carries a
    good sorting function over its base cone when certify is set.
    """

    _check_order(triple, order)
    fan = triple.fan
    steps = []
    cones = []
    for tau in fan.maximal_cones:
        local_steps, local_cones = _resolve_cone(triple, tau, order, logger)
        steps.extend(local_steps)
        cones.extend(local_cones)

    final_fan = fan.with_cones(cones)
    report = fan_validate(final_fan, logger)
    if not report.valid:
        raise VerificationError(f"Resolved cones do not form a fan: {report.violations[0]}")

    composite, witnesses = {}, {}
    if certify:
        def certify_step(step):
            return find_good_sorting_function(
                step.fan_after, triple.with_fan(step.fan_after), step.fan_before, logger
            )

        for step, pl in zip(steps, sweep_map(certify_step, steps, threads)):
            step.certificates = {step.base: pl}

        def certify_cone(tau):
            local = final_fan.restricted_to(tau)
            return find_good_sorting_function(
                local, triple.with_fan(local), fan.with_cones([tau]), logger
            )

        bases = list(fan.maximal_cones)
        composite = dict(zip(bases, sweep_map(certify_cone, bases, threads)))

        for tau in bases:
            first = next((step for step in steps if step.base == tau), None)
            if first is None or final_fan.restricted_to(tau).same_fan(first.fan_after):
                continue
            witnesses[tau] = _composition_witness(triple, tau, first, final_fan, logger)

    logger.info(f"Resolution finished with {len(steps)} steps")
    return ResolutionChain(triple, order, steps, final_fan, composite, witnesses)


def verify_chain(chain, logger=null_logger):
    """
    Re-checks a chain from its data alone. Returns the list of
    violations, empty when everything holds.
    """

    violations = []
    quadruple = chain.quadruple

    for position, step in enumerate(chain.steps):
        try:
            mapping = subdivision_map(step.fan_after, step.fan_before, logger)
        except FanError as error:
            violations.append(f"Step {position}: {error}")
            continue

        if not mapping.is_efficient:
            violations.append(f"Step {position} introduces new rays")
        if not step.certificates:
            violations.append(f"Step {position} carries no certificate")

        for base, pl in step.certificates.items():
            if pl is None:
                violations.append(f"Step {position} has no good function over {sorted(base)}")
                continue
            for problem in verify_pl_function(pl, quadruple.with_fan(pl.fan)):
                violations.append(f"Step {position} over {sorted(base)}: {problem}")

    for base, pl in chain.composite.items():
        if pl is None:
            violations.append(f"No composite good function over {sorted(base)}")
            continue
        for problem in verify_pl_function(pl, quadruple.with_fan(pl.fan)):
            violations.append(f"Composite over {sorted(base)}: {problem}")

    for base, (pl, epsilon) in chain.witnesses.items():
        if pl is None:
            violations.append(f"No composition witness over {sorted(base)}")
            continue
        if epsilon is None or not epsilon > 0:
            violations.append(f"Composition witness over {sorted(base)} has no positive eps")
        for problem in verify_pl_function(pl, quadruple.with_fan(pl.fan)):
            violations.append(f"Witness over {sorted(base)}: {problem}")

    report = fan_validate(chain.final_fan, logger)
    violations.extend(report.violations)
    try:
        if not chain.subdivision_map(logger).is_efficient:
            violations.append("Final fan introduces new rays")
    except FanError as error:
        violations.append(f"Final fan: {error}")

    if not is_log_simplicial(chain.final_quadruple()):
        violations.append("Final fan is not log-simplicial")
    return violations


def canonicity_check(chain, logger=null_logger):
    """
    Resolves every proper face of every maximal cone with the restricted
    order and compares against the restriction of the chain's result.
    Returns the faces where the two differ.
    """

    triple = chain.quadruple
    fan = triple.fan
    mismatches = []
    for face in fan.cones():
        if not face or face in fan.maximal_cones:
            continue

        local = restrict(triple, face)
        order = chain.order.restrict(local.B | local.C)
        resolved = resolve_log_simplicial(local, order, certify=False, logger=logger)
        expected = chain.final_fan.restricted_to(face)
        if not resolved.final_fan.same_fan(expected):
            logger.info(f"Resolution of face {sorted(face)} differs from the restriction")
            mismatches.append(face)
    return mismatches
