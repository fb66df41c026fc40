"""Exact exponential-time ground truth at desk scale.

Every search here runs over vertex subsets encoded as bitmasks and refuses
inputs larger than the budget instead of degrading silently.
"""
import logging
import time
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import BudgetExceeded, EmptyGraph
from .schemas import ColourId, ColouredPath, Cycle, CyclePartition, EdgeColouring, OracleBudget
from .utils import bits_of, lowest, mask_of, popcount

logger = logging.getLogger(__name__)

SubsetMask = int


class _Deadline:
    def __init__(self, budget: OracleBudget):
        self.end = time.monotonic() + budget.time_limit if budget.time_limit else None

    def check(self) -> None:
        if self.end is not None and time.monotonic() > self.end:
            raise BudgetExceeded("oracle time limit reached")


def _check_size(size: int, budget: OracleBudget, what: str = "vertices") -> None:
    cap = budget.effective_max_n
    if size > cap:
        raise BudgetExceeded(f"{size} {what} exceeds oracle cap {cap}")


# -------------------------------------------------------------
# subset tables
# -------------------------------------------------------------
def _cycle_ends_table(adj: Sequence[int], n: int, deadline: _Deadline) -> List[int]:
    """ends[mask] = vertices v such that some path starting at min(mask) covers mask and stops at v."""
    size = 1 << n
    ends = [0] * size
    for s in range(n):
        ends[1 << s] = 1 << s
    for mask in range(1, size):
        e = ends[mask]
        if not e:
            continue
        if not mask & 0xFFF:
            deadline.check()
        low = mask & -mask
        free = ~(mask | (low - 1))
        while e:
            vb = e & -e
            e ^= vb
            nxt = adj[vb.bit_length() - 1] & free
            while nxt:
                wb = nxt & -nxt
                nxt ^= wb
                ends[mask | wb] |= wb
    return ends


def _path_ends_table(adj: Sequence[int], n: int, deadline: _Deadline) -> List[int]:
    """ends[mask] = vertices where a path covering exactly mask (any start) can stop."""
    size = 1 << n
    ends = [0] * size
    for s in range(n):
        ends[1 << s] = 1 << s
    for mask in range(1, size):
        e = ends[mask]
        if not e:
            continue
        if not mask & 0xFFF:
            deadline.check()
        free = ~mask
        while e:
            vb = e & -e
            e ^= vb
            nxt = adj[vb.bit_length() - 1] & free
            while nxt:
                wb = nxt & -nxt
                nxt ^= wb
                ends[mask | wb] |= wb
    return ends


def _spans(adj: Sequence[int], ends: List[int], mask: int) -> bool:
    k = popcount(mask)
    if k <= 1:
        return True
    if k == 2:
        return ends[mask] != 0
    return (ends[mask] & adj[lowest(mask)]) != 0


def _extract_cycle(adj: Sequence[int], ends: List[int], mask: int) -> List[int]:
    k = popcount(mask)
    if k <= 2:
        return bits_of(mask)
    s = lowest(mask)
    cur = lowest(ends[mask] & adj[s])
    order = [cur]
    cur_mask = mask
    while True:
        prev_mask = cur_mask ^ (1 << cur)
        if prev_mask == 1 << s:
            break
        cur = lowest(ends[prev_mask] & adj[cur])
        order.append(cur)
        cur_mask = prev_mask
    order.append(s)
    order.reverse()
    return order


def _extract_path(adj: Sequence[int], ends: List[int], mask: int) -> List[int]:
    cur = lowest(ends[mask])
    order = [cur]
    cur_mask = mask
    while popcount(cur_mask) > 1:
        prev_mask = cur_mask ^ (1 << cur)
        cur = lowest(ends[prev_mask] & adj[cur])
        order.append(cur)
        cur_mask = prev_mask
    order.reverse()
    return order


def _compact(adj_full: Sequence[int], vertices: Sequence[int]) -> List[int]:
    """Re-index adjacency masks onto positions 0..len(vertices)-1."""
    pos = {v: i for i, v in enumerate(vertices)}
    out = []
    for v in vertices:
        m = 0
        for u in bits_of(adj_full[v]):
            if u in pos:
                m |= 1 << pos[u]
        out.append(m)
    return out


class _ColourTables:
    """Lazily built cycle tables, one per colour class of a colouring."""

    def __init__(self, c: EdgeColouring, deadline: _Deadline):
        self.c = c
        self.deadline = deadline
        self._ends: Dict[object, List[int]] = {}
        self._adj: Dict[object, Tuple[int, ...]] = {}

    def adjacency(self, key) -> Tuple[int, ...]:
        if key not in self._adj:
            if isinstance(key, tuple) and key[0] == "not":
                full = (1 << self.c.n) - 1
                alpha = self.c.colour_masks(key[1])
                self._adj[key] = tuple(full & ~(1 << v) & ~alpha[v] for v in range(self.c.n))
            else:
                self._adj[key] = self.c.colour_masks(key)
        return self._adj[key]

    def ends(self, key) -> List[int]:
        if key not in self._ends:
            self._ends[key] = _cycle_ends_table(self.adjacency(key), self.c.n, self.deadline)
        return self._ends[key]

    def spans(self, key, mask: int) -> bool:
        if popcount(mask) <= 1:
            return True
        return _spans(self.adjacency(key), self.ends(key), mask)

    def cycle(self, key, mask: int) -> Cycle:
        order = _extract_cycle(self.adjacency(key), self.ends(key), mask)
        if len(order) <= 1:
            return Cycle.of(order)
        colour = key[1] if isinstance(key, tuple) else key
        if isinstance(key, tuple):
            # merged class: report the colour of the first edge, callers check the rest
            colour = self.c.colour(order[0], order[1])
        return Cycle.of(order, colour)


# -------------------------------------------------------------
# public operations
# -------------------------------------------------------------
def mono_spanning_cycle(
    c: EdgeColouring,
    s: Union[SubsetMask, Iterable[int]],
    col: ColourId,
    budget: Optional[OracleBudget] = None,
) -> Optional[Cycle]:
    """A cycle through exactly the vertices of ``s`` in colour ``col``, or None."""
    budget = budget or OracleBudget.default()
    vertices = bits_of(s) if isinstance(s, int) else sorted(set(s))
    _check_size(len(vertices), budget)
    if len(vertices) <= 1:
        return Cycle.of(vertices)
    if len(vertices) == 2:
        u, v = vertices
        return Cycle.of(vertices, col) if c.colour(u, v) == col else None
    adj = _compact(c.colour_masks(col), vertices)
    k = len(vertices)
    ends = _cycle_ends_table(adj, k, _Deadline(budget))
    full = (1 << k) - 1
    if not _spans(adj, ends, full):
        return None
    order = _extract_cycle(adj, ends, full)
    return Cycle.of([vertices[i] for i in order], col)


def min_cycle_partition(
    c: EdgeColouring, budget: Optional[OracleBudget] = None
) -> Tuple[int, CyclePartition]:
    """Exact minimum number of nonempty monochromatic cycles partitioning V, with a witness."""
    budget = budget or OracleBudget.default()
    n = c.n
    _check_size(n, budget)
    if n == 0:
        return 0, CyclePartition()
    deadline = _Deadline(budget)
    tables = _ColourTables(c, deadline)
    size = 1 << n
    palette = sorted(c.palette)

    # span_colour[mask]: -1 = at most one vertex, None = no monochromatic spanning cycle
    span_colour: List[Optional[int]] = [None] * size
    for mask in range(1, size):
        k = popcount(mask)
        if k == 1:
            span_colour[mask] = -1
        elif k == 2:
            u, v = bits_of(mask)
            span_colour[mask] = c.colour(u, v)
    for col in palette:
        adj = tables.adjacency(col)
        ends = tables.ends(col)
        for mask in range(1, size):
            if span_colour[mask] is None and (ends[mask] & adj[lowest(mask)]):
                span_colour[mask] = col

    best = [0] * size
    choice = [0] * size
    for S in range(1, size):
        if not S & 0xFFF:
            deadline.check()
        if span_colour[S] is not None:
            best[S], choice[S] = 1, S
            continue
        low = S & -S
        rest = S ^ low
        top, pick = n + 1, 0
        sub = 0
        while True:
            T = sub | low
            if T != S and span_colour[T] is not None:
                val = 1 + best[S ^ T]
                if val < top:
                    top, pick = val, T
                    if top == 2:
                        break
            if sub == rest:
                break
            sub = (sub - rest) & rest
        best[S], choice[S] = top, pick

    cycles = []
    S = size - 1
    while S:
        T = choice[S]
        col = span_colour[T]
        if col == -1 or popcount(T) == 2:
            order = bits_of(T)
            cycles.append(Cycle.of(order, None if col == -1 else col))
        else:
            cycles.append(tables.cycle(col, T))
        S ^= T
    logger.debug(f"min_cycle_partition n={n} -> {best[size - 1]}")
    return best[size - 1], CyclePartition(cycles=tuple(cycles))


def _two_cycles(
    tables: _ColourTables,
    alpha: ColourId,
    beta_keys: List[object],
) -> Optional[Tuple[Cycle, Cycle]]:
    n = tables.c.n
    full = (1 << n) - 1

    def beta_key(mask: int):
        if popcount(mask) <= 1:
            return beta_keys[0] if beta_keys else None
        for key in beta_keys:
            if tables.spans(key, mask):
                return key
        return None

    def pair(T: int, key) -> Tuple[Cycle, Cycle]:
        first = tables.cycle(alpha, T)
        comp = full ^ T
        second = Cycle.of(bits_of(comp)) if popcount(comp) <= 1 else tables.cycle(key, comp)
        return first, second

    if tables.spans(alpha, full):
        return tables.cycle(alpha, full), Cycle.empty()
    key = beta_key(full)
    if key is not None or n <= 1:
        return Cycle.empty(), (tables.cycle(key, full) if key is not None else Cycle.of(bits_of(full)))
    for T in range(1, full):
        if not T & 0xFFF:
            tables.deadline.check()
        if not tables.spans(alpha, T):
            continue
        key = beta_key(full ^ T)
        if key is not None or popcount(full ^ T) <= 1:
            return pair(T, key)
    return None


def bt_two_cycles(
    c: EdgeColouring,
    alpha: ColourId,
    beta_is_merged: bool = True,
    budget: Optional[OracleBudget] = None,
) -> Optional[Tuple[Cycle, Cycle]]:
    """Two disjoint cycles covering V, the first in ``alpha``, the second in beta.

    With ``beta_is_merged`` every non-alpha colour counts as beta and the second
    cycle carries the colour of its first edge; otherwise beta must be one
    literal colour different from alpha.
    """
    budget = budget or OracleBudget.default()
    _check_size(c.n, budget)
    if c.n == 0:
        return Cycle.empty(), Cycle.empty()
    tables = _ColourTables(c, _Deadline(budget))
    if beta_is_merged:
        keys: List[object] = [("not", alpha)]
    else:
        keys = [col for col in sorted(c.palette) if col != alpha]
    return _two_cycles(tables, alpha, keys)


def two_cycle_partition(
    c: EdgeColouring, budget: Optional[OracleBudget] = None
) -> Optional[Tuple[Cycle, Cycle]]:
    """Any two disjoint monochromatic cycles of different colours covering V."""
    budget = budget or OracleBudget.default()
    _check_size(c.n, budget)
    if c.n <= 1:
        return Cycle.of(range(c.n)), Cycle.empty()
    tables = _ColourTables(c, _Deadline(budget))
    palette = sorted(c.palette)
    for alpha in palette:
        found = _two_cycles(tables, alpha, [col for col in palette if col != alpha])
        if found is not None:
            return found
    return None


def longest_mono_cycle(
    c: EdgeColouring, budget: Optional[OracleBudget] = None
) -> Tuple[int, Cycle]:
    budget = budget or OracleBudget.default()
    n = c.n
    _check_size(n, budget)
    if n == 0:
        return 0, Cycle.empty()
    if n == 1:
        return 1, Cycle.of([0])
    tables = _ColourTables(c, _Deadline(budget))
    best_len, best = 2, None
    for col in sorted(c.palette):
        adj = tables.adjacency(col)
        ends = tables.ends(col)
        for mask in range(1, 1 << n):
            k = popcount(mask)
            if k > best_len and (ends[mask] & adj[lowest(mask)]):
                best_len, best = k, (col, mask)
    if best is None:
        u, v, col = next(c.edges())
        return 2, Cycle.of([u, v], col)
    col, mask = best
    return best_len, tables.cycle(col, mask)


def longest_mono_path(
    c: EdgeColouring,
    vertices: Iterable[int],
    colour: ColourId,
    budget: Optional[OracleBudget] = None,
) -> ColouredPath:
    """Longest path of colour ``colour`` inside ``vertices`` (order >= 1 when nonempty)."""
    budget = budget or OracleBudget.default()
    vs = sorted(set(vertices))
    _check_size(len(vs), budget)
    if not vs:
        return ColouredPath()
    adj = _compact(c.colour_masks(colour), vs)
    ends = _path_ends_table(adj, len(vs), _Deadline(budget))
    best_mask = max((m for m in range(1, 1 << len(vs)) if ends[m]), key=lambda m: (popcount(m), -m))
    order = _extract_path(adj, ends, best_mask)
    return ColouredPath.of([vs[i] for i in order], colour)


def _graph_masks(g: nx.Graph) -> Tuple[List[object], List[int]]:
    nodes = list(g.nodes())
    pos = {v: i for i, v in enumerate(nodes)}
    masks = [0] * len(nodes)
    for a, b in g.edges():
        if a == b:
            continue
        masks[pos[a]] |= 1 << pos[b]
        masks[pos[b]] |= 1 << pos[a]
    return nodes, masks


def longest_cycle_in_graph(g: nx.Graph, budget: Optional[OracleBudget] = None) -> List[object]:
    """Vertices of a longest cycle of ``g`` in cyclic order; an edge counts as length 2."""
    budget = budget or OracleBudget.default()
    nodes, adj = _graph_masks(g)
    n = len(nodes)
    _check_size(n, budget)
    if n == 0:
        return []
    ends = _cycle_ends_table(adj, n, _Deadline(budget))
    best_len, best_mask = 0, 0
    for mask in range(1, 1 << n):
        k = popcount(mask)
        if k >= 3 and k > best_len and (ends[mask] & adj[lowest(mask)]):
            best_len, best_mask = k, mask
    if best_mask:
        return [nodes[i] for i in _extract_cycle(adj, ends, best_mask)]
    for a, b in g.edges():
        if a != b:
            return [a, b]
    return [nodes[0]]


def independence_number(g: nx.Graph, budget: Optional[OracleBudget] = None) -> int:
    budget = budget or OracleBudget.default()
    nodes, adj = _graph_masks(g)
    _check_size(len(nodes), budget)

    @lru_cache(maxsize=None)
    def alpha(mask: int) -> int:
        if not mask:
            return 0
        v = lowest(mask)
        rest = mask & ~(1 << v)
        if not adj[v] & rest:
            return 1 + alpha(rest)
        return max(alpha(rest), 1 + alpha(rest & ~adj[v]))

    return alpha((1 << len(nodes)) - 1)


def robustness_check(c: EdgeColouring, s: int, budget: Optional[OracleBudget] = None) -> bool:
    """True when at least ``s`` cycles are needed, even after deleting any one vertex."""
    budget = budget or OracleBudget.default()
    if c.n == 0:
        raise EmptyGraph("robustness needs at least one vertex")
    _check_size(c.n, budget)
    need, _ = min_cycle_partition(c, budget)
    if need < s:
        return False
    for v in range(c.n):
        rest = [u for u in range(c.n) if u != v]
        k, _ = min_cycle_partition(c.induced(rest), budget)
        if k < s:
            logger.debug(f"deleting {v} drops the minimum to {k} < {s}")
            return False
    return True


def subset_mask(vertices: Iterable[int]) -> SubsetMask:
    return mask_of(vertices)
