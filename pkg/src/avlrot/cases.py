"""Rebalancing case labels and validation issue codes.

The kernels report each rebalancing step as a small int so their hot
loops never touch enum machinery; the public API wraps those codes in
:class:`Case`.
"""

from enum import IntEnum


class Case(IntEnum):
    """One rebalancing step. INS_* fire during insert, DEL_* during delete."""

    INS_PROMOTE = 1        # parent promoted, violation moves up
    INS_SINGLE = 2         # terminal single rotation
    INS_DOUBLE = 3         # terminal double rotation
    DEL_DEMOTE = 4         # parent demoted, violation moves up
    DEL_SINGLE_STOP = 5    # single rotation, subtree rank kept, stop
    DEL_SINGLE_REPEAT = 6  # single rotation, subtree rank dropped, may repeat
    DEL_DOUBLE = 7         # double rotation, subtree rank dropped, may repeat


# Plain-int aliases for the kernels.
INS_PROMOTE = int(Case.INS_PROMOTE)
INS_SINGLE = int(Case.INS_SINGLE)
INS_DOUBLE = int(Case.INS_DOUBLE)
DEL_DEMOTE = int(Case.DEL_DEMOTE)
DEL_SINGLE_STOP = int(Case.DEL_SINGLE_STOP)
DEL_SINGLE_REPEAT = int(Case.DEL_SINGLE_REPEAT)
DEL_DOUBLE = int(Case.DEL_DOUBLE)

# Validation issue codes shared by the kernels and the report builder.
BST_ORDER = 1
RANK_DIFF = 2
RANK_HEIGHT = 3
