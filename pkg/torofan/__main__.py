#
# __main__.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

import argparse
import json
import logging
import sys

from .commands import EXIT_INPUT_ERROR, CommandRequest, run
from .config import default_config, load_config
from .forms import configure_cache
from .sql import ArchiveSqlHandler
from .util import thread_count

__all__ = [
    "LOG_FILE_MODE",
]

LOG_FILE_MODE = "w"
LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"
LOG_DATE_FORMAT = "[%d/%m/%Y %H:%M:%S]"


def add_sweep_arguments(parser):
    parser.add_argument("-p", "--p", dest="p", type=int, help="Only this form degree p.")
    parser.add_argument(
        "-b", "--bound", dest="bound", type=int, help="Override the degree window bound."
    )
    parser.add_argument("-t", "--twist", dest="twist", help="Named divisor to twist by.")


def build_parser():
    argparser = argparse.ArgumentParser(
        prog="torofan", description="Exact computations with fan triples and Danilov forms"
    )
    argparser.add_argument(
        "-q",
        "--quiet",
        "--no-stdout",
        dest="stdout",
        action="store_false",
        help="Don't output log messages to standard error.",
    )
    argparser.add_argument(
        "-v",
        "--verbose",
        dest="verbose",
        action="count",
        default=0,
        help="Increase the report's verbosity.",
    )
    argparser.add_argument(
        "-d",
        "--debug",
        dest="debug",
        action="store_true",
        help="Set logging level to debug.",
    )
    argparser.add_argument(
        "-c", "--config", dest="config_file", help="Specify a configuration file to use."
    )
    argparser.add_argument(
        "-j", "--threads", dest="threads", type=int, help="Override the sweep thread count."
    )
    argparser.add_argument(
        "-U", "--db-url", dest="db_url", help="Archive the run in this database."
    )
    argparser.add_argument(
        "-o", "--output", dest="output", help="Write the report here instead of stdout."
    )
    argparser.add_argument(
        "-e",
        "--expect",
        dest="expect",
        help="Exit successfully only if the verdict carries this tag.",
    )

    subparsers = argparser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser("validate", help="Check the fan axioms.")
    validate.add_argument("input")

    classify = subparsers.add_parser("classify", help="Decide sortedness.")
    classify.add_argument("input")
    classify.add_argument(
        "-m", "--mode", dest="mode", choices=("well", "partial", "custom"), default="well"
    )
    classify.add_argument("--b-sharp", dest="b_sharp", help="Comma-separated B-rays.")
    classify.add_argument("--c-flat", dest="c_flat", help="Comma-separated C-rays.")
    classify.add_argument("--h-sharp", dest="h_sharp", help="Comma-separated H-rays.")

    subdivide = subparsers.add_parser("subdivide", help="Star, sequential star or Ext.")
    subdivide.add_argument("input")
    group = subdivide.add_mutually_exclusive_group(required=True)
    group.add_argument("--star", dest="star", type=int, help="Star at this ray.")
    group.add_argument("--seq", dest="seq", help="Sequential star along this named order.")
    group.add_argument("--ext", dest="ext", type=int, help="Extend by this unused ray.")

    resolve = subparsers.add_parser("resolve", help="Log-simplicial resolution.")
    resolve.add_argument("input")
    resolve.add_argument("-O", "--order", dest="order", required=True)
    resolve.add_argument("--outdir", dest="outdir", default=".")

    forms = subparsers.add_parser("forms", help="Hilbert tables of graded pieces.")
    forms.add_argument("input")
    add_sweep_arguments(forms)

    cech = subparsers.add_parser("cech", help="Cech cohomology of forms.")
    cech.add_argument("input")
    group = cech.add_mutually_exclusive_group(required=True)
    group.add_argument("--relative", dest="relative", help="Base fan file.")
    group.add_argument("--complete", dest="complete", action="store_true")
    group.add_argument("--orbit", dest="orbit", type=int, help="Orbit closure of this ray.")
    add_sweep_arguments(cech)

    verify = subparsers.add_parser("verify", help="Check one of the identities.")
    verify.add_argument(
        "kind",
        choices=("pushforward", "reflexive", "ses", "e1", "separating-ray", "hypersurface"),
    )
    verify.add_argument("input")
    verify.add_argument("-O", "--order", dest="order")
    verify.add_argument("--model", dest="model", help="Subdivided fan file.")
    verify.add_argument("-r", "--ray", dest="ray", type=int)
    verify.add_argument("--mode", dest="ses_mode", choices=("addB", "addC"), default="addB")
    add_sweep_arguments(verify)

    return argparser


def request_from_args(args):
    flags = {
        key: value
        for key, value in vars(args).items()
        if key
        not in (
            "command",
            "input",
            "stdout",
            "verbose",
            "debug",
            "config_file",
            "threads",
            "db_url",
            "output",
        )
    }
    return CommandRequest(args.command, [args.input], flags)


if __name__ == "__main__":
    args = build_parser().parse_args()

    # Set up logging
    log_fmtr = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT)
    log_level = logging.DEBUG if args.debug else logging.INFO

    # Create instances
    def get_logger(name, level=log_level):
        logger = logging.getLogger(name)
        logger.setLevel(level=level)
        return logger

    main_logger = get_logger("torofan")
    sql_logger = get_logger("torofan.sql")
    sqlalchemy_logger = get_logger("sqlalchemy.engine", logging.WARNING)
    del get_logger

    # Reports own stdout, so log lines go to stderr
    if args.stdout:
        log_out_hndl = logging.StreamHandler(sys.stderr)
        log_out_hndl.setFormatter(log_fmtr)
        main_logger.addHandler(log_out_hndl)

    # Get and verify configuration
    if args.config_file is None:
        config, valid = default_config(), True
    else:
        config, valid = load_config(args.config_file, main_logger)

    if not valid:
        main_logger.error("Configuration file was invalid.")
        sys.exit(EXIT_INPUT_ERROR)

    # Map logging to outputs
    log_hndl = logging.FileHandler(filename=config["logger"]["log-file"], mode=LOG_FILE_MODE)
    log_hndl.setFormatter(log_fmtr)
    main_logger.addHandler(log_hndl)
    if args.debug:
        sqlalchemy_logger.addHandler(log_hndl)

    # Override configuration settings
    config["sweep"]["threads"] = thread_count(config["sweep"]["threads"])
    if args.threads is not None:
        config["sweep"]["threads"] = max(args.threads, 1)

    if args.verbose >= 1:
        config["logger"]["full-reports"] = True

    if args.db_url is not None:
        config["archive"]["db-url"] = args.db_url

    configure_cache(config["cache"]["lookup-size"])

    # Create SQL handler
    sql = None
    if config["archive"]["db-url"] is not None:
        sql = ArchiveSqlHandler(config["archive"]["db-url"], sql_logger)

    report, status = run(request_from_args(args), config, main_logger, sql)
    text = json.dumps(report.to_json(), indent=2, sort_keys=True)

    if args.output is None:
        print(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")

    if sql is not None:
        sql.close()
    sys.exit(status)
