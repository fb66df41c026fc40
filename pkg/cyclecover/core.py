"""Locality queries and the partition referee."""
import logging
from collections import Counter
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional

from .errors import EmptyGraph, OutOfRange
from .schemas import (
    ColourId,
    ColouredPath,
    Cycle,
    CyclePartition,
    EdgeColouring,
    PartitionReport,
    VerifyOptions,
)

logger = logging.getLogger(__name__)


def _check_vertex(c: EdgeColouring, v: int) -> None:
    if not 0 <= v < c.n:
        raise OutOfRange(f"vertex {v} outside 0..{c.n - 1}")


def locality(c: EdgeColouring, v: int) -> int:
    _check_vertex(c, v)
    return len(c.colours_at(v))


def colours_at(c: EdgeColouring, v: int) -> FrozenSet[ColourId]:
    _check_vertex(c, v)
    return c.colours_at(v)


def sees(c: EdgeColouring, col: ColourId, v: int) -> bool:
    """True when some edge of colour ``col`` is incident with ``v``."""
    _check_vertex(c, v)
    return col in c.colours_at(v)


def is_r_local(c: EdgeColouring, r: int) -> bool:
    if r < 1:
        raise ValueError("r must be at least 1")
    return all(len(c.colours_at(v)) <= r for v in range(c.n))


def max_locality(c: EdgeColouring) -> int:
    return max((len(c.colours_at(v)) for v in range(c.n)), default=0)


def mean_locality(c: EdgeColouring) -> Fraction:
    if c.n == 0:
        raise EmptyGraph("mean locality of the empty graph is undefined")
    return Fraction(sum(len(c.colours_at(v)) for v in range(c.n)), c.n)


def colour_neighbourhood(c: EdgeColouring, v: int, col: ColourId) -> FrozenSet[int]:
    _check_vertex(c, v)
    mask = c.neighbour_mask(v, col)
    return frozenset(u for u in range(c.n) if mask >> u & 1)


def classify_by_locality(c: EdgeColouring) -> Dict[int, List[int]]:
    """Vertices seeing exactly one (1), exactly two (2) and three or more (3) colours."""
    classes: Dict[int, List[int]] = {1: [], 2: [], 3: []}
    for v in range(c.n):
        k = len(c.colours_at(v))
        if k >= 1:
            classes[min(k, 3)].append(v)
    return classes


def path_is_coloured(c: EdgeColouring, p: ColouredPath) -> bool:
    return all(c.colour(a, b) == p.colour for a, b in p.edge_pairs())


def cycle_is_coloured(c: EdgeColouring, cyc: Cycle) -> bool:
    return all(c.colour(a, b) == cyc.colour for a, b in cyc.edge_pairs())


def verify_partition(
    c: EdgeColouring,
    p: CyclePartition,
    opts: Optional[VerifyOptions] = None,
) -> PartitionReport:
    """Referee a cycle family against ``c``; failures are reported, never raised."""
    opts = opts or VerifyOptions()
    nonempty = [cyc for cyc in p.cycles if len(cyc) > 0]
    colours_used = tuple(sorted(cyc.colour for cyc in p.cycles if cyc.colour is not None))

    def report(reason=None, detail=None) -> PartitionReport:
        if reason:
            logger.debug(f"partition rejected: {reason} ({detail})")
        return PartitionReport(
            valid=reason is None,
            failure_reason=reason,
            cycle_count=len(p.cycles),
            nonempty_count=len(nonempty),
            colours_used=colours_used,
            detail=detail,
        )

    covered = set()
    for cyc in p.cycles:
        for v in cyc.vertices:
            if not 0 <= v < c.n:
                return report("UnknownVertex", f"vertex {v}")
            if v in covered:
                return report("NotDisjoint", f"vertex {v} on two cycles")
            covered.add(v)

    if opts.require_cover and len(covered) != c.n:
        missing = sorted(set(range(c.n)) - covered)
        return report("NotCovering", f"missing {missing}")

    for cyc in p.cycles:
        if not cycle_is_coloured(c, cyc):
            return report("NotMonochromatic", f"cycle {list(cyc.vertices)} stored colour {cyc.colour}")

    if opts.require_distinct_colours:
        repeated = [col for col, k in Counter(colours_used).items() if k > 1]
        if repeated:
            return report("ColourMismatch", f"colour {repeated[0]} used twice")

    if opts.max_cycles is not None and len(p.cycles) > opts.max_cycles:
        return report("TooManyCycles", f"{len(p.cycles)} > {opts.max_cycles}")

    return report()
