#
# schema.py
#
# torofan - Exact computations with fan triples and Danilov forms
# Copyright (c) 2017-2018 Ammon Smith
#
# torofan is available free of charge under the terms of the MIT
# License. You are free to redistribute and/or modify it under those
# terms. It is distributed in the hopes that it will be useful, but
# WITHOUT ANY WARRANTY. See the LICENSE file for more details.
#

from sqlalchemy import (
    JSON,
    Column,
    DateTime,
    Integer,
    MetaData,
    SmallInteger,
    String,
    Table,
    Unicode,
)

__all__ = [
    "ArchiveMetadata",
]


class ArchiveMetadata:
    def __init__(self, db):
        self.metadata_obj = MetaData(db)

        self.tb_runs = Table(
            "runs",
            self.metadata_obj,
            Column("run_id", Integer, primary_key=True, autoincrement=True),
            Column("command", Unicode, nullable=False),
            Column("verdict", Unicode, nullable=True),
            Column("exit_status", SmallInteger, nullable=False),
            Column("input_digest", String(128), nullable=True),
            Column("report", JSON, nullable=False),
            Column("created_at", DateTime, nullable=False),
        )

        self.tb_chains = Table(
            "chains",
            self.metadata_obj,
            Column("chain_id", Integer, primary_key=True, autoincrement=True),
            Column("input_digest", String(128), nullable=False),
            Column("order_name", Unicode, nullable=False),
            Column("chain", JSON, nullable=False),
            Column("created_at", DateTime, nullable=False),
        )
