#
# commands.py
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
Command handlers behind the command line. Each handler turns a
request into an outcome; run() wraps it into a report and an exit
status: 0 when the verdict holds, 2 when it does not, 1 on bad input.
"""

import json
import os
import time
from collections import namedtuple

from .cech import (
    CechSetup,
    complete_cohomology_dims,
    e1_degeneration_check,
    higher_direct_image_check,
    hypersurface_report,
)
from .fan import fan_validate, orbit_closure
from .fanio import dump_json, load_fan_file
from .forms import (
    FormSpec,
    hilbert_table,
    verify_phi_ses_identities,
    verify_pushforward,
    verify_reflexive_intersection,
)
from .kinds import SesMode, SortMode
from .resolution import (
    ResolutionChain,
    canonicity_check,
    is_sequentially_convex,
    resolve_log_simplicial,
    sequential_star,
    verify_chain,
)
from .sorting import classify_sorted, geometric_partial_check, sort_mode
from .subdivision import (
    ext,
    find_good_sorting_function,
    find_separating_ray,
    star_at_c_certificate,
    star_subdivision,
)
from .util import FanError, PreconditionError, VerificationError, format_rat, null_logger

__all__ = [
    "COMMANDS",
    "EXIT_SUCCESS",
    "EXIT_INPUT_ERROR",
    "EXIT_PROPERTY_FAILS",
    "CommandRequest",
    "RunReport",
    "Outcome",
    "run",
    "resolve_command",
]

EXIT_SUCCESS = 0
EXIT_INPUT_ERROR = 1
EXIT_PROPERTY_FAILS = 2

Outcome = namedtuple("Outcome", ("verdict", "holds", "tags", "certificates", "tables"))


class CommandRequest:
    __slots__ = (
        "name",
        "inputs",
        "flags",
    )

    def __init__(self, name, inputs, flags=None):
        self.name = name
        self.inputs = list(inputs)
        self.flags = dict(flags or {})

    def flag(self, key, default=None):
        value = self.flags.get(key)
        return default if value is None else value

    def to_json(self):
        flags = {key: value for key, value in sorted(self.flags.items()) if value is not None}
        return {"name": self.name, "inputs": self.inputs, "flags": flags}


class RunReport:
    """
    Everything a run produced. The body excludes timing, so two runs
    on the same inputs give the same body.
    """

    __slots__ = (
        "request",
        "outcome",
        "input_digest",
        "version",
        "timing",
        "error",
    )

    def __init__(self, request, outcome=None, input_digest=None, version=None, timing=0.0, error=None):
        self.request = request
        self.outcome = outcome
        self.input_digest = input_digest
        self.version = version
        self.timing = timing
        self.error = error

    @property
    def verdict(self):
        return None if self.outcome is None else self.outcome.verdict

    def body(self):
        outcome = self.outcome
        return {
            "command": self.request.to_json(),
            "verdict": self.verdict,
            "certificates": {} if outcome is None else outcome.certificates,
            "tables": {} if outcome is None else outcome.tables,
            "input_digest": self.input_digest,
            "version": self.version,
            "error": self.error,
        }

    def to_json(self):
        obj = self.body()
        obj["timing"] = round(self.timing, 6)
        return obj


def _flag_list(value):
    if value is None:
        return []
    if isinstance(value, str):
        return [int(item) for item in value.split(",") if item.strip()]
    return [int(item) for item in value]


def _p_values(request, rank):
    p = request.flag("p")
    return list(range(rank + 1)) if p is None else [int(p)]


def _pl_json(pl):
    return None if pl is None else pl.to_json()


# Handlers
def _validate(request, loaded, config, logger):
    fan = loaded.fan
    report = fan_validate(fan, logger)
    verdict = "valid" if report.valid else "invalid"
    return Outcome(verdict, report.valid, {verdict}, {}, {"violations": report.violations})


def _classify(request, loaded, config, logger):
    quadruple = loaded.quadruple
    mode = SortMode(request.flag("mode", "well"))
    threads = config["sweep"]["threads"]

    if mode == SortMode.CUSTOM:
        subsets = (
            _flag_list(request.flag("b_sharp")),
            _flag_list(request.flag("c_flat")),
            _flag_list(request.flag("h_sharp")),
        )
    else:
        subsets = sort_mode(quadruple, mode)

    result = classify_sorted(quadruple, *subsets, threads=threads, logger=logger)
    name = f"{mode.value}-sorted"
    verdict = name if result.sorted else f"not {name}"
    tags = {mode.value, "sorted"} if result.sorted else {f"not-{mode.value}", "unsorted"}

    tables = {}
    if mode == SortMode.PARTIAL:
        agrees, distinguished = geometric_partial_check(quadruple)
        tables["geometric"] = {
            "sorted": agrees,
            "distinguished": [
                {"cone": sorted(cone), "face": sorted(face)}
                for cone, face in sorted(distinguished.items(), key=lambda item: sorted(item[0]))
            ],
        }
    if not result.sorted:
        tables["counterexample"] = sorted(result.counterexample)

    certificates = {}
    if result.certificate is not None:
        certificates["sortedness"] = result.certificate.to_json(quadruple.fan)
    return Outcome(verdict, result.sorted, tags, certificates, tables)


def _subdivide(request, loaded, config, logger):
    quadruple = loaded.quadruple
    fan = quadruple.fan
    star = request.flag("star")
    seq = request.flag("seq")
    extend = request.flag("ext")

    if seq is not None:
        order = loaded.order(seq)
        chain = sequential_star(quadruple, order.carrier, order, logger)
        convex, found = is_sequentially_convex(chain, logger)
        verdict = "sequentially convex" if convex else "not sequentially convex"
        certificates = {
            "steps": [
                [{"cone": sorted(cone), "pl": _pl_json(pl)} for cone, pl in sorted(step.items(), key=lambda item: sorted(item[0]))]
                for step in found
            ]
        }
        tables = {"fan": chain.final_fan.to_json()}
        tags = {"convex"} if convex else {"not-convex"}
        return Outcome(verdict, convex, tags, certificates, tables)

    if star is not None:
        index = int(star)
        if not 0 <= index < len(fan.rays):
            raise FanError(f"Ray {index} does not exist")
        after = star_subdivision(fan, fan.rays[index])
    elif extend is not None:
        index = int(extend)
        if not 0 <= index < len(fan.rays):
            raise FanError(f"Ray {index} does not exist")
        base = fan.used_rays()
        if index in base:
            raise PreconditionError(f"Ray {index} is already used by the fan")
        after = ext(fan, base, index)
    else:
        raise PreconditionError("subdivide needs one of --star, --seq or --ext")

    pl, alpha = None, None
    if star is not None and index in quadruple.C and quadruple.is_affine():
        shifted = star_at_c_certificate(quadruple, index, logger)
        if shifted is not None:
            _, pl, alpha = shifted

    if pl is None:
        # Ext subdivides Cone(base, ray), which the single-cone default covers
        base_fan = fan if star is not None else None
        pl = find_good_sorting_function(after, quadruple.with_fan(after), base_fan, logger)

    convex = pl is not None
    verdict = "convex" if convex else "not convex"
    tables = {"fan": after.to_json(), "simplicial": after.is_simplicial()}
    if alpha is not None:
        tables["alpha"] = format_rat(alpha)
    tags = {"convex"} if convex else {"not-convex"}
    return Outcome(verdict, convex, tags, {"good_function": _pl_json(pl)}, tables)


def _chain_path(request, loaded, order_name):
    outdir = request.flag("outdir", ".")
    stem = os.path.splitext(os.path.basename(request.inputs[0]))[0]
    return os.path.join(outdir, f"{stem}-{order_name}.chain.json")


def resolve_command(request, loaded, config, logger=null_logger, sql=None):
    """
    Resolves the triple of a fan file for a named order and writes the
    chain. A chain already on disk is reloaded, re-verified and compared
    with the recomputed one, and so is the latest chain in the archive
    for the same input and order.
    """

    order_name = request.flag("order")
    if order_name is None:
        raise PreconditionError("resolve needs --order")

    triple = loaded.triple()
    order = loaded.order(order_name)
    chain = resolve_log_simplicial(
        triple, order, threads=config["sweep"]["threads"], logger=logger
    )
    violations = verify_chain(chain, logger)
    mismatches = canonicity_check(chain, logger)

    path = _chain_path(request, loaded, order_name)
    tables = {
        "steps": len(chain),
        "final": chain.final_fan.to_json(),
        "violations": violations,
        "canonicity": [sorted(face) for face in mismatches],
    }

    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            stored = ResolutionChain.from_json(json.load(fh))
        stored_violations = verify_chain(stored, logger)
        tables["stored"] = {
            "violations": stored_violations,
            "equal": stored.structure_key() == chain.structure_key(),
        }
        logger.info(f"Stored chain at '{path}' re-verified")
    else:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        dump_json(chain.to_json(), path, logger)

    if sql is not None:
        with sql.transaction() as txact:
            archived = sql.lookup_chain(txact, loaded.digest, order_name)
            sql.insert_chain(txact, loaded.digest, order_name, chain.to_json())

        if archived is not None:
            archived = ResolutionChain.from_json(archived)
            tables["archived"] = {
                "violations": verify_chain(archived, logger),
                "equal": archived.structure_key() == chain.structure_key(),
            }
            logger.info("Archived chain re-verified")

    previous_ok = all(
        not tables[key]["violations"] and tables[key]["equal"]
        for key in ("stored", "archived")
        if key in tables
    )
    holds = not violations and not mismatches and previous_ok
    verdict = "resolved" if holds else "resolution fails verification"
    tags = {"resolved", "verified"} if holds else {"failed"}
    certificates = {"chain": path}
    return Outcome(verdict, holds, tags, certificates, tables)


def _forms(request, loaded, config, logger):
    triple = loaded.triple()
    bound = int(request.flag("bound", config["sweep"]["bound"]))
    twist_name = request.flag("twist")
    twist = loaded.divisor(twist_name) if twist_name is not None else None

    tables = {}
    for p in _p_values(request, triple.fan.ambient_rank):
        spec = FormSpec(triple, p, twist)
        table = hilbert_table(spec, bound, threads=config["sweep"]["threads"], logger=logger)
        tables[str(p)] = table.to_json() if config["logger"]["full-reports"] else {
            "bound": bound,
            "total": table.total(),
        }
    return Outcome("computed", True, {"computed"}, {}, tables)


def _cech(request, loaded, config, logger):
    triple = loaded.triple()
    threads = config["sweep"]["threads"]
    twist_name = request.flag("twist")
    twist = loaded.divisor(twist_name) if twist_name is not None else None

    relative = request.flag("relative")
    orbit = request.flag("orbit")
    if relative is not None:
        base = load_fan_file(relative, logger).triple()
        bound = int(request.flag("bound", config["sweep"]["bound"]))
        setup = CechSetup(FormSpec(triple, 0, twist), base, config["cache"]["lookup-size"])
        report = higher_direct_image_check(
            setup, _p_values(request, triple.fan.ambient_rank), bound, threads, logger
        )
        verdict = "vanishes" if report.holds else "does not vanish"
        tags = {"vanishes", "verified"} if report.holds else {"failed"}
        tables = {"checked": report.checked, "mismatches": report.mismatches}
        return Outcome(verdict, report.holds, tags, {}, tables)

    if orbit is not None:
        closure = orbit_closure(triple, int(orbit))
        triple = closure.quadruple
        twist = None
    elif not request.flag("complete"):
        raise PreconditionError("cech needs one of --relative, --complete or --orbit")

    setup = CechSetup(FormSpec(triple, 0, twist), None, config["cache"]["lookup-size"])
    table = complete_cohomology_dims(setup, threads, logger)
    tables = table.to_json()
    tables["total"] = table.total()
    return Outcome("computed", True, {"computed"}, {}, tables)


def _report_outcome(report, extra=None):
    tables = {"checked": report.checked, "hypotheses": report.hypotheses, "mismatches": report.mismatches}
    tables.update(extra or {})
    verdict = "verified" if report.holds else "fails"
    tags = {"verified"} if report.holds else {"failed"}
    return Outcome(verdict, report.holds, tags, {}, tables)


def _verify(request, loaded, config, logger):
    kind = request.flag("kind")
    threads = config["sweep"]["threads"]
    bound = int(request.flag("bound", config["sweep"]["bound"]))

    if kind == "reflexive":
        triple = loaded.triple()
        reports = [
            verify_reflexive_intersection(FormSpec(triple, p), bound, logger)
            for p in _p_values(request, triple.fan.ambient_rank)
        ]
        holds = all(report.holds for report in reports)
        tables = {
            "checked": sum(report.checked for report in reports),
            "mismatches": [entry for report in reports for entry in report.mismatches],
            "hypotheses": sorted({h for report in reports for h in report.hypotheses}),
        }
        verdict = "verified" if holds else "fails"
        return Outcome(verdict, holds, {"verified"} if holds else {"failed"}, {}, tables)

    if kind == "pushforward":
        triple = loaded.triple()
        model_path = request.flag("model")
        if model_path is not None:
            model = load_fan_file(model_path, logger).triple()
        else:
            order_name = request.flag("order")
            if order_name is None:
                raise PreconditionError("verify pushforward needs --model or --order")
            chain = resolve_log_simplicial(triple, loaded.order(order_name), certify=False, logger=logger)
            model = chain.final_quadruple()

        reports = [
            verify_pushforward(triple, model, p, bound, logger)
            for p in _p_values(request, triple.fan.ambient_rank)
        ]
        holds = all(report.holds for report in reports)
        tables = {
            "checked": sum(report.checked for report in reports),
            "mismatches": [entry for report in reports for entry in report.mismatches],
            "hypotheses": sorted({h for report in reports for h in report.hypotheses}),
        }
        verdict = "verified" if holds else "fails"
        return Outcome(verdict, holds, {"verified"} if holds else {"failed"}, {}, tables)

    if kind == "ses":
        ray = request.flag("ray")
        if ray is None:
            raise PreconditionError("verify ses needs --ray")
        mode = SesMode(request.flag("ses_mode", SesMode.ADD_B.value))
        report = verify_phi_ses_identities(loaded.triple(), int(ray), mode, logger)
        return _report_outcome(report, {"mode": mode.value})

    if kind == "e1":
        setup = CechSetup(FormSpec(loaded.triple()), None, config["cache"]["lookup-size"])
        report = e1_degeneration_check(setup, threads, logger)
        tables = {
            "shift": report.shift,
            "hypercohomology": report.hypercohomology,
            "hodge_sums": report.hodge_sums,
        }
        verdict = "degenerates" if report.holds else "does not degenerate"
        tags = {"degenerates", "verified"} if report.holds else {"failed"}
        return Outcome(verdict, report.holds, tags, {}, tables)

    if kind == "separating-ray":
        separating = find_separating_ray(loaded.triple(), logger)
        tables = {
            "ray": [format_rat(value) for value in separating.ray],
            "B_plus": sorted(separating.B_plus),
            "C_plus": sorted(separating.C_plus),
        }
        return Outcome("found", True, {"found", "verified"}, {}, tables)

    if kind == "hypersurface":
        report = hypersurface_report(loaded.triple(), threads, logger)
        tables = report.table.to_json()
        tables["total"] = report.total
        tables["ray"] = [format_rat(value) for value in report.separating.ray]
        verdict = "nonzero" if report.total else "zero"
        return Outcome(verdict, True, {verdict}, {}, tables)

    raise PreconditionError(f"Unknown verification '{kind}'")


COMMANDS = {
    "validate": _validate,
    "classify": _classify,
    "subdivide": _subdivide,
    "resolve": resolve_command,
    "forms": _forms,
    "cech": _cech,
    "verify": _verify,
}


def run(request, config, logger=null_logger, sql=None):
    """
    Runs a command request. Returns the report and the exit status.
    """

    from . import __version__

    start = time.perf_counter()
    report = RunReport(request, version=__version__)
    handler = COMMANDS.get(request.name)

    try:
        if handler is None:
            raise PreconditionError(f"Unknown command '{request.name}'")
        if not request.inputs:
            raise PreconditionError(f"Command '{request.name}' needs an input file")

        loaded = load_fan_file(request.inputs[0], logger)
        report.input_digest = loaded.digest
        if handler is resolve_command:
            outcome = handler(request, loaded, config, logger, sql)
        else:
            outcome = handler(request, loaded, config, logger)
    except (FanError, PreconditionError, OSError, ValueError, KeyError) as error:
        logger.error(f"{type(error).__name__}: {error}")
        report.error = str(error)
        report.timing = time.perf_counter() - start
        return report, EXIT_INPUT_ERROR
    except VerificationError as error:
        logger.error(f"Verification failed: {error}")
        report.error = str(error)
        report.timing = time.perf_counter() - start
        return report, EXIT_PROPERTY_FAILS

    report.outcome = outcome
    report.timing = time.perf_counter() - start

    expect = request.flag("expect")
    holds = outcome.holds if expect is None else expect in outcome.tags
    status = EXIT_SUCCESS if holds else EXIT_PROPERTY_FAILS
    logger.info(f"{request.name}: {outcome.verdict} (exit {status})")

    if sql is not None:
        with sql.transaction() as txact:
            sql.insert_run(txact, report.to_json(), status)
    return report, status
