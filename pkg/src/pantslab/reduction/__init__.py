"""Constructive schedules: tree normalization, genus reduction, loop sorting."""

from .cycles import (CycleSet, G_MIN, cycle_count_target, find_disjoint_cycles,
                     genus_reduce)
from .loops import (ReductionTrace, is_treelike, sort_loops, split_edge,
                    to_treelike, treelike_to_treelike)
from .trees import TrimState, melt, to_linear, trim
from .work import WorkGraph

__all__ = [
    "CycleSet", "G_MIN", "ReductionTrace", "TrimState", "WorkGraph",
    "cycle_count_target", "find_disjoint_cycles", "genus_reduce", "is_treelike",
    "melt", "sort_loops", "split_edge", "to_linear", "to_treelike",
    "treelike_to_treelike", "trim",
]
