"""Initial run archive with runs and chains tables

Revision ID: initial_archive
Revises: 
Create Date: 2018-03-04 19:12:08.118203

"""
from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision = 'initial_archive'
down_revision = None
branch_labels = None
depends_on = None


def upgrade() -> None:
    op.create_table('runs',
    sa.Column('run_id', sa.Integer(), autoincrement=True, nullable=False),
    sa.Column('command', sa.Unicode(), nullable=False),
    sa.Column('verdict', sa.Unicode(), nullable=True),
    sa.Column('exit_status', sa.SmallInteger(), nullable=False),
    sa.Column('input_digest', sa.String(length=128), nullable=True),
    sa.Column('report', sa.JSON(), nullable=False),
    sa.Column('created_at', sa.DateTime(), nullable=False),
    sa.PrimaryKeyConstraint('run_id')
    )
    op.create_table('chains',
    sa.Column('chain_id', sa.Integer(), autoincrement=True, nullable=False),
    sa.Column('input_digest', sa.String(length=128), nullable=False),
    sa.Column('order_name', sa.Unicode(), nullable=False),
    sa.Column('chain', sa.JSON(), nullable=False),
    sa.Column('created_at', sa.DateTime(), nullable=False),
    sa.PrimaryKeyConstraint('chain_id')
    )


def downgrade() -> None:
    op.drop_table('chains')
    op.drop_table('runs')
