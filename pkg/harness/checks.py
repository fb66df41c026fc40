"""Seeded checks behind the lemma campaigns (solver ``lemma``).

Each check builds its instance from the task seed, runs one building block
and fills in the report row; precondition-false cases must be refused.
"""
import logging
import random
from typing import Any, Callable, Dict, List, Tuple

import networkx as nx

from cyclecover import oracle
from cyclecover.core import verify_partition
from cyclecover.errors import PreconditionViolated
from cyclecover.instances import amplify, gen_random_local, random_graph
from cyclecover.lemmas import merge_paths_bip, merge_paths_tri, patch_bipartite, posa_cycle_partition
from cyclecover.schemas import ColourId, CyclePartition, EdgeColouring, VerifyOptions

from .schemas import ExperimentRow

logger = logging.getLogger(__name__)

Task = Dict[str, Any]
Edge = Tuple[int, int]

POSA_DENSITIES = (0.2, 0.5, 0.8)
MERGE_PALETTE = 3
TWO_CYCLES = VerifyOptions(require_distinct_colours=True, max_cycles=2)


def _fail(row: ExperimentRow, error: str) -> None:
    row.valid, row.error = False, error


def _colouring(n: int, forced: Dict[Edge, ColourId], rng: random.Random) -> EdgeColouring:
    return EdgeColouring.from_function(n, lambda u, v: forced.get((u, v), rng.randrange(MERGE_PALETTE)))


def _force_path(forced: Dict[Edge, ColourId], path: List[int], colour: ColourId) -> None:
    for x, y in zip(path, path[1:]):
        forced[(min(x, y), max(x, y))] = colour


def _force_complete(forced: Dict[Edge, ColourId], a: List[int], b: List[int], colour: ColourId) -> None:
    for x in a:
        for y in b:
            forced[(min(x, y), max(x, y))] = colour


# ================================
# PATCHING
# ================================
def check_patch(task: Task, row: ExperimentRow) -> None:
    r, a_size = task["r"], task["n"]
    rng = random.Random(task["seed"])
    b_size = rng.randint(1, max(1, a_size // r ** (r + 3)))
    c = gen_random_local(a_size + b_size, r, task["s"], rng.getrandbits(63))
    a, b = list(range(a_size)), list(range(a_size, c.n))

    result = patch_bipartite(c, a, b, r)
    row.n, row.cycles, row.bound = c.n, len(result.cycles), r * r
    row.trace = f"b={b_size};colours={len(result.state.colours) if result.state else 0}"
    report = verify_partition(c, CyclePartition(cycles=result.cycles), VerifyOptions(require_cover=False, max_cycles=r * r))
    covered = {v for cyc in result.cycles for v in cyc.vertices}
    row.valid = report.valid
    if not report.valid:
        return _fail(row, report.failure_reason)
    if not set(b) <= covered:
        return _fail(row, f"b vertices {sorted(set(b) - covered)} left uncovered")
    for col, edges in result.aux_edges.items():
        g = nx.Graph()
        g.add_nodes_from(result.state.b_partition.get(col, ()))
        g.add_edges_from(edges)
        alpha = oracle.independence_number(g)
        if alpha > r:
            return _fail(row, f"auxiliary graph for colour {col} has independence number {alpha} > {r}")


# ================================
# POSA
# ================================
def check_posa(task: Task, row: ExperimentRow) -> None:
    rng = random.Random(task["seed"])
    p = rng.choice(POSA_DENSITIES)
    g = random_graph(task["n"], p, rng.getrandbits(32))
    cycles = posa_cycle_partition(g).cycles
    alpha = oracle.independence_number(g)
    row.cycles, row.bound, row.trace = len(cycles), alpha, f"p={p}"

    covered = [v for cyc in cycles for v in cyc.vertices]
    if sorted(covered) != sorted(g.nodes()):
        return _fail(row, "cycles do not partition the vertices")
    for cyc in cycles:
        vs = list(cyc.vertices)
        pairs = zip(vs, vs[1:] + vs[:1]) if len(vs) >= 3 else zip(vs, vs[1:])
        if not all(g.has_edge(x, y) for x, y in pairs):
            return _fail(row, f"{vs} is not a cycle of the graph")
    row.valid = len(cycles) <= alpha
    if not row.valid:
        _fail(row, f"{len(cycles)} cycles > independence number {alpha}")


# ================================
# MERGING LEMMAS
# ================================
def check_merge_bip(task: Task, row: ExperimentRow) -> None:
    na, nb, i, j = task["sizes"]
    rng = random.Random(task["seed"])
    a, b = list(range(na)), list(range(na, na + nb))
    forced: Dict[Edge, ColourId] = {}
    _force_complete(forced, a, b, 0)
    _force_path(forced, a[:i], 0)
    _force_path(forced, b[:j], 0)
    c = _colouring(na + nb, forced, rng)
    holds = nb - j <= na - i <= nb - 1

    try:
        cycle = merge_paths_bip(c, 0, a, b, a[:i], b[:j])
    except PreconditionViolated as e:
        row.trace = "refused"
        row.valid = not holds
        if holds:
            _fail(row, f"refused a valid case: {e}")
        return
    row.trace, row.cycles = "accepted", 1
    row.valid = holds and cycle.vertex_set() == set(a) | set(b)
    if not holds:
        _fail(row, "accepted a case violating |b-P_B| <= |a-P_A| <= |b|-1")
    elif not row.valid:
        _fail(row, f"cycle {cycle.vertices} does not span a and b")


def merge_tri_case(nb: int, rng: random.Random) -> Tuple[EdgeColouring, Tuple[List[int], ...], bool]:
    """Random merge_paths_tri input with |b| = nb and whether its preconditions hold."""
    n1, n2 = rng.randint(1, 3), rng.randint(1, 3)
    a1, a2 = list(range(n1)), list(range(n1, n1 + n2))
    b = list(range(n1 + n2, n1 + n2 + nb))
    pa1, pa2 = a1[: rng.randint(1, n1)], a2[: rng.randint(1, n2)]
    order = rng.sample(b, nb)
    cut = rng.randint(0, nb)
    pb1, pb2 = order[:cut], order[cut:]

    forced: Dict[Edge, ColourId] = {}
    _force_complete(forced, a1, b, 0)
    _force_complete(forced, a2, b, 1)
    for path, colour in ((pa1, 0), (pa2, 1), (pb1, 0), (pb2, 1)):
        _force_path(forced, path, colour)
    # a1[-1]-b[-1] is never the edge the a1 colour is read from
    corrupt = n1 * nb >= 2 and rng.random() < 0.25
    if corrupt:
        forced[(a1[-1], b[-1])] = 2
    c = _colouring(n1 + n2 + nb, forced, rng)
    holds = not corrupt and (n1 - len(pa1)) + (n2 - len(pa2)) + 2 <= nb
    return c, (a1, a2, b, pa1, pa2, pb1, pb2), holds


def check_merge_tri(task: Task, row: ExperimentRow) -> None:
    c, args, holds = merge_tri_case(task["n"], random.Random(task["seed"]))
    row.n = c.n
    try:
        first, second = merge_paths_tri(c, *args)
    except PreconditionViolated as e:
        row.trace = "refused"
        row.valid = not holds
        if holds:
            _fail(row, f"refused a valid case: {e}")
        return
    row.trace, row.cycles = "accepted", 2
    report = verify_partition(c, CyclePartition(cycles=(first, second)), TWO_CYCLES)
    row.valid = holds and report.valid
    if not holds:
        _fail(row, "accepted a case violating the merge preconditions")
    elif not report.valid:
        _fail(row, report.failure_reason)


# ================================
# AMPLIFIER
# ================================
def robust_level(c: EdgeColouring) -> int:
    """Largest s with robustness_check(c, s): the minimum over c and its one-vertex deletions."""
    level, _ = oracle.min_cycle_partition(c)
    for v in range(c.n):
        k, _ = oracle.min_cycle_partition(c.induced(u for u in range(c.n) if u != v))
        level = min(level, k)
    return level


def check_amplifier(task: Task, row: ExperimentRow) -> None:
    c = gen_random_local(task["n"], task["r"], task["s"], task["seed"])
    s = robust_level(c)
    if not oracle.robustness_check(c, s):
        return _fail(row, f"robustness check disagrees with level {s}")
    need, _ = oracle.min_cycle_partition(amplify(c))
    row.cycles, row.bound, row.trace = need, s + 1, f"robust={s}"
    row.valid = need >= s + 1
    if not row.valid:
        _fail(row, f"amplified minimum {need} < {s + 1}")


LEMMA_CHECKS: Dict[str, Callable[[Task, ExperimentRow], None]] = {
    "patch": check_patch,
    "posa": check_posa,
    "merge-bip": check_merge_bip,
    "merge-tri": check_merge_tri,
    "amplifier": check_amplifier,
}
