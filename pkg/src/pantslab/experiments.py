"""Seeded sweeps over random instances; each returns plain CSV-ready rows."""

from __future__ import annotations

import math
import random

from .families import random_cubic, random_tree
from .reduction import cycle_count_target, find_disjoint_cycles, melt, to_treelike, trim

TREE_COLUMNS = ["n", "seed", "cost", "unit_moves", "ratio", "stages",
                "isolated_violations", "shrink_violations"]
GENUS_COLUMNS = ["g", "seed", "cost", "unit_moves", "ratio", "rounds"]
CYCLE_COLUMNS = ["g", "seed", "count", "target", "ratio", "max_length"]


def _seed(base: int, size: int, i: int) -> int:
    # independent stream per (size, index), stable across worker layouts
    return base * 1_000_003 + size * 7919 + i


def tree_run(n: int, seed: int) -> dict:
    """Trim and melt one random tree with ``n`` leaves."""
    tree = random_tree(n, random.Random(seed))
    _, state, s1 = trim(tree)
    s2 = melt(state)
    cost = s1.total_cost + s2.total_cost
    return {"n": n, "seed": seed, "cost": cost, "unit_moves": s1.unit_moves + s2.unit_moves,
            "ratio": cost / math.sqrt(n), "stages": len(state.levels),
            "isolated_violations": len(state.isolated_violations),
            "shrink_violations": len(state.shrink_violations)}


def genus_run(g: int, seed: int) -> dict:
    """Reduce one random cubic graph of genus ``g`` to the treelike graph."""
    graph = random_cubic(g, random.Random(seed))
    schedule, trace = to_treelike(graph)
    cost = schedule.total_cost
    return {"g": g, "seed": seed, "cost": cost, "unit_moves": schedule.unit_moves,
            "ratio": cost / (math.sqrt(g) * math.log(g)), "rounds": len(trace.cycle_counts)}


def cycle_run(g: int, seed: int) -> dict:
    """Greedy disjoint cycle count on one random cubic graph of genus ``g``."""
    graph = random_cubic(g, random.Random(seed))
    cycles = find_disjoint_cycles(graph)
    target = cycle_count_target(g)
    return {"g": g, "seed": seed, "count": len(cycles), "target": target,
            "ratio": len(cycles) / target, "max_length": max(cycles.lengths, default=0)}


RUNS = {"trees": (tree_run, TREE_COLUMNS), "genus": (genus_run, GENUS_COLUMNS),
        "cycles": (cycle_run, CYCLE_COLUMNS)}


def sweep(kind: str, sizes, seeds: int, base_seed: int = 0, workers: int = 1) -> list[dict]:
    """Rows for every size and ``seeds`` seeds each, in a fixed order whatever ``workers`` is."""
    fn, _ = RUNS[kind]
    jobs = [(size, _seed(base_seed, size, i)) for size in sizes for i in range(seeds)]
    if workers <= 1:
        return [fn(*job) for job in jobs]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, *zip(*jobs), chunksize=max(1, len(jobs) // (4 * workers))))
