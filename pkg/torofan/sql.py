#
# sql.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from datetime import datetime

from alembic import command
from alembic.config import Config
from alembic.migration import MigrationContext
from sqlalchemy import create_engine, inspect
from sqlalchemy.sql import select

from .schema import ArchiveMetadata
from .util import null_logger

__all__ = [
    "ArchiveSqlHandler",
]


# Value builders
def run_values(report, exit_status):
    return {
        "command": report["command"]["name"],
        "verdict": report.get("verdict"),
        "exit_status": exit_status,
        "input_digest": report.get("input_digest"),
        "report": report,
        "created_at": datetime.now(),
    }


def chain_values(digest, order_name, chain):
    return {
        "input_digest": digest,
        "order_name": order_name,
        "chain": chain,
        "created_at": datetime.now(),
    }


class _Transaction:
    __slots__ = (
        "conn",
        "logger",
        "txact",
        "ok",
    )

    def __init__(self, conn, logger):
        self.conn = conn
        self.logger = logger
        self.txact = None
        self.ok = True

    def __enter__(self):
        self.logger.debug("Starting transaction...")
        self.txact = self.conn.begin()
        return self

    def __exit__(self, type, value, traceback):
        if (type, value, traceback) == (None, None, None):
            self.logger.debug("Committing transaction...")
            self.txact.commit()
        else:
            self.logger.error("Exception occurred in 'with' scope!", exc_info=1)
            self.logger.debug("Rolling back transaction...")
            self.ok = False
            self.txact.rollback()

    def execute(self, *args, **kwargs):
        return self.conn.execute(*args, **kwargs)


class ArchiveSqlHandler:
    """
    Stores run reports and resolution chains, so that a later run
    can compare against what an earlier one computed.
    """

    # disable because we get false positives for dml in sqlalchemy insert/delete
    # pylint: disable=no-value-for-parameter

    __slots__ = (
        "db",
        "conn",
        "logger",
        "tb_runs",
        "tb_chains",
    )

    def __init__(self, addr, logger=null_logger, alembic_ini="alembic.ini"):
        logger.info(f"Opening database: '{addr}'")
        self.db = create_engine(addr)
        self.conn = self.db.connect()
        meta = ArchiveMetadata(self.db)
        self.logger = logger

        self.tb_runs = meta.tb_runs
        self.tb_chains = meta.tb_chains

        alembic_cfg = Config(alembic_ini)
        alembic_cfg.set_main_option("sqlalchemy.url", addr)

        # This is used in migrations/env.py and prevents Alembic from replacing
        # our logging handlers.
        alembic_cfg.attributes["configure_logger"] = False
        alembic_cfg.attributes["connection"] = self.conn

        if not inspect(self.db).has_table("runs"):
            self.logger.info("Creating tables")
            meta.metadata_obj.create_all(self.conn)
            command.stamp(alembic_cfg, "head")
        else:
            self.logger.info("Performing migrations")
            migration_context = MigrationContext.configure(self.conn)
            if migration_context.get_current_revision() is None:
                command.stamp(alembic_cfg, "initial_archive")
            command.upgrade(alembic_cfg, "head")
        self.logger.info("Created all tables.")

    # Transaction logic
    def transaction(self):
        return _Transaction(self.conn, self.logger)

    # Runs
    def insert_run(self, txact, report, exit_status):
        values = run_values(report, exit_status)
        self.logger.info(f"Archiving run of '{values['command']}' ({values['verdict']})")
        result = txact.execute(self.tb_runs.insert().values(values))
        return result.inserted_primary_key[0]

    def lookup_runs(self, txact, digest):
        sel = (
            select([self.tb_runs])
            .where(self.tb_runs.c.input_digest == digest)
            .order_by(self.tb_runs.c.run_id)
        )
        return [dict(row._mapping) for row in txact.execute(sel)]

    # Chains
    def insert_chain(self, txact, digest, order_name, chain):
        self.logger.info(f"Archiving resolution chain for order '{order_name}'")
        values = chain_values(digest, order_name, chain)
        result = txact.execute(self.tb_chains.insert().values(values))
        return result.inserted_primary_key[0]

    def lookup_chain(self, txact, digest, order_name):
        self.logger.debug(f"Looking up resolution chain for order '{order_name}'")
        sel = (
            select([self.tb_chains.c.chain])
            .where(self.tb_chains.c.input_digest == digest)
            .where(self.tb_chains.c.order_name == order_name)
            .order_by(self.tb_chains.c.chain_id.desc())
        )
        row = txact.execute(sel).fetchone()
        return None if row is None else row[0]

    def close(self):
        self.conn.close()
        self.db.dispose()
