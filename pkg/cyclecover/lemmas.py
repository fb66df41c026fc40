"""Constructive building blocks shared by the solvers.

Each function either returns an object satisfying its postcondition or raises:
PreconditionViolated for bad input, LemmaViolation when the construction
itself misbehaves.
"""
import logging
from fractions import Fraction
from math import exp, factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from . import oracle
from .core import cycle_is_coloured, is_r_local, path_is_coloured
from .errors import (
    BadParams,
    BudgetExceeded,
    LemmaViolation,
    OutOfRange,
    PreconditionViolated,
    TooManyColours,
)
from .schemas import (
    ColourId,
    ColouredPath,
    Cycle,
    CyclePartition,
    EdgeColouring,
    OracleBudget,
    PatchResult,
    PathPair,
    ShrinkState,
)
from .utils import bits_of, mask_of, popcount

logger = logging.getLogger(__name__)

PathLike = Union[ColouredPath, Sequence[int]]


def _vertices(p: PathLike) -> List[int]:
    return list(p.vertices) if isinstance(p, ColouredPath) else list(p)


# ================================
# GRAPH LEMMAS
# ================================
def posa_cycle_partition(
    g: nx.Graph,
    alpha_hint: Optional[int] = None,
    colour: ColourId = 0,
    budget: Optional[OracleBudget] = None,
) -> CyclePartition:
    """Partition V(g) into at most alpha(g) cycles (singletons and edges allowed).

    Grows a path from the smallest remaining vertex until its last vertex has
    no neighbour off the path, then cuts the cycle closed by that vertex's
    earliest neighbour on the path. The closing vertices form an independent
    set, which bounds the count.
    """
    remaining = set(g.nodes())
    cycles: List[Cycle] = []
    closers = []
    while remaining:
        path = [min(remaining)]
        on_path = {path[0]}
        while True:
            nxt = sorted(u for u in g.neighbors(path[-1]) if u in remaining and u not in on_path)
            if not nxt:
                break
            path.append(nxt[0])
            on_path.add(nxt[0])
        end = path[-1]
        nbrs = {u for u in g.neighbors(end) if u in on_path and u != end}
        start = min((i for i, u in enumerate(path) if u in nbrs), default=len(path) - 1)
        piece = path[start:]
        cycles.append(Cycle.of(piece, colour))
        closers.append(end)
        remaining.difference_update(piece)

    alpha = alpha_hint if alpha_hint is not None else oracle.independence_number(g, budget)
    if len(cycles) > alpha:
        raise LemmaViolation(f"Posa produced {len(cycles)} cycles but alpha = {alpha}")
    logger.debug(f"posa: {g.number_of_nodes()} vertices -> {len(cycles)} cycles (alpha {alpha})")
    return CyclePartition(cycles=tuple(cycles))


def erdos_gallai_long_cycle(
    g: nx.Graph,
    l: int,
    colour: ColourId = 0,
    budget: Optional[OracleBudget] = None,
) -> Cycle:
    """A cycle of length >= l in a graph with at least l*n/2 edges.

    Exact up to the oracle cap; larger graphs go through rotation search and
    raise BudgetExceeded when it falls short of l.
    """
    n = g.number_of_nodes()
    e = g.number_of_edges()
    if l < 2 or n == 0 or 2 * e < l * n:
        raise PreconditionViolated(f"need l >= 2 and e >= l*n/2 (l={l}, n={n}, e={e})")
    budget = budget or OracleBudget.default()
    if n > budget.effective_max_n:
        found = long_cycle_by_rotation(g, l)
        if len(found) < l:
            raise BudgetExceeded(f"rotation search reached {len(found)} < {l} on {n} vertices above the oracle cap")
        logger.debug(f"rotation search: cycle of length {len(found)} on {n} vertices")
        return Cycle.of(found, colour)
    found = oracle.longest_cycle_in_graph(g, budget)
    if len(found) < l:
        raise LemmaViolation(f"longest cycle has length {len(found)} < {l} despite density")
    return Cycle.of(found, colour)


def long_cycle_by_rotation(g: nx.Graph, target: int, starts: int = 8) -> List[int]:
    """Long cycle in polynomial time; not guaranteed to be longest.

    Works in the densest core of g. A path is extended greedily towards
    vertices with the fewest free neighbours; when stuck, the tail after a
    neighbour of the end is reversed so a new end may continue. The end of the
    final path closes a cycle with its farthest neighbour on the path.
    """
    if g.number_of_nodes() == 0:
        return []
    core_number = nx.core_number(g)
    h = nx.k_core(g, max(core_number.values()))
    best: List[int] = []
    for start in sorted(h.nodes(), key=lambda v: (-h.degree(v), v))[:starts]:
        path, on_path = [start], {start}
        for _ in range(4 * h.number_of_nodes()):
            end = path[-1]
            free = [u for u in h.neighbors(end) if u not in on_path]
            if free:
                nxt = min(free, key=lambda u: (sum(1 for w in h.neighbors(u) if w not in on_path), u))
                path.append(nxt)
                on_path.add(nxt)
                continue
            pos = {v: i for i, v in enumerate(path)}
            pivots = sorted(pos[u] for u in h.neighbors(end) if pos[u] < len(path) - 2)
            i = next((i for i in pivots if any(w not in on_path for w in h.neighbors(path[i + 1]))), None)
            if i is None:
                break
            path[i + 1:] = path[:i:-1]

        for seq in (path, path[::-1]):
            pos = {v: i for i, v in enumerate(seq)}
            j = min((pos[u] for u in h.neighbors(seq[-1]) if u in pos), default=len(seq) - 1)
            if len(seq) - j > len(best):
                best = seq[j:]
        if len(best) >= target:
            break
    return best


# ================================
# RAMSEY ARITHMETIC
# ================================
def _ceil_root(y: Fraction, p: int) -> int:
    """Smallest integer m >= 0 with m**p >= y."""
    if y <= 0:
        return 0
    m = max(0, int(float(y) ** (1.0 / p)) - 1)
    while Fraction(m) ** p < y:
        m += 1
    while m > 0 and Fraction(m - 1) ** p >= y:
        m -= 1
    return m


def local_ramsey_upper_bound(c_density: Union[Fraction, int, str], eps: Union[Fraction, int, str], r: int) -> int:
    """ceil((4 * c_density * r) ** (1 / eps)), computed exactly."""
    c_density, eps = Fraction(c_density), Fraction(eps)
    if c_density <= 0 or not 0 < eps <= 1 or r < 1:
        raise BadParams(f"need c > 0, 0 < eps <= 1, r >= 1 (got c={c_density}, eps={eps}, r={r})")
    base = 4 * c_density * r
    # base ** (q/p) for eps = p/q
    return _ceil_root(base ** eps.denominator, eps.numerator)


def local_to_global_ratio(r: int) -> Fraction:
    """r^r / r!, the factor between local and ordinary Ramsey numbers of connected graphs."""
    if r < 1:
        raise BadParams("r must be at least 1")
    ratio = Fraction(r ** r, factorial(r))
    if ratio > exp(r):
        raise LemmaViolation(f"r^r/r! = {ratio} exceeds e^{r}")
    return ratio


# ================================
# PATHS IN TWO COLOURS
# ================================
def gyarfas_two_paths(
    c: EdgeColouring,
    colours: Optional[Tuple[ColourId, ColourId]] = None,
    order: Optional[Iterable[int]] = None,
) -> PathPair:
    """Split ``order`` (default all vertices) into a colour-a path and a colour-b path.

    P ends at p, Q starts at q; each new vertex x is absorbed by extending P,
    then Q, and otherwise by rerouting through the edge pq.
    """
    vertices = list(range(c.n)) if order is None else list(order)
    used = {c.colour(u, v) for i, u in enumerate(vertices) for v in vertices[i + 1:]}
    if colours is None:
        pal = sorted(used)
        if len(pal) > 2:
            raise TooManyColours(f"palette {pal} has more than two colours")
        if len(pal) == 2:
            colours = (pal[0], pal[1])
        elif pal:
            colours = (pal[0], pal[0] + 1)
        else:
            colours = (0, 1)
    a, b = colours
    if a == b:
        raise BadParams("the two path colours must differ")
    if not used <= {a, b}:
        raise TooManyColours(f"colours {sorted(used - {a, b})} outside {{{a}, {b}}}")

    P: List[int] = []
    Q: List[int] = []
    for x in vertices:
        if not P:
            P.append(x)
        elif c.colour(x, P[-1]) == a:
            P.append(x)
        elif not Q:
            Q.append(x)
        elif c.colour(x, Q[0]) == b:
            Q.insert(0, x)
        elif c.colour(P[-1], Q[0]) == a:
            # x-q and p-q both in a
            P.extend([Q.pop(0), x])
        else:
            # x-p and p-q both in b
            Q[:0] = [x, P.pop()]

    pair = PathPair(p_first=ColouredPath.of(P, a), p_second=ColouredPath.of(Q, b))
    if not (path_is_coloured(c, pair.p_first) and path_is_coloured(c, pair.p_second)):
        raise LemmaViolation("two-path construction produced a non-monochromatic path")
    return pair


# ================================
# PATCHING A SMALL SET B THROUGH A LARGE SET A
# ================================
def _independence_bound(g: nx.Graph, budget: Optional[OracleBudget]) -> int:
    budget = budget or OracleBudget.default()
    if g.number_of_nodes() <= budget.effective_max_n:
        return oracle.independence_number(g, budget)
    _, size = nx.max_weight_clique(nx.complement(g), weight=None)
    return size


def patch_bipartite(
    c: EdgeColouring,
    a: Iterable[int],
    b: Iterable[int],
    r: int,
    ratio_exp: Optional[int] = None,
    budget: Optional[OracleBudget] = None,
) -> PatchResult:
    """Cover ``b`` with at most r^2 disjoint monochromatic cycles threaded through ``a``.

    Only the colours of a-b edges are read.
    """
    A = sorted(set(a))
    B = sorted(set(b))
    if set(A) & set(B):
        raise PreconditionViolated("a and b must be disjoint")
    if not B:
        return PatchResult()
    if r < 1:
        raise PreconditionViolated("r must be at least 1")
    e = ratio_exp if ratio_exp is not None else r + 3
    if len(B) * r ** e > len(A):
        raise PreconditionViolated(f"|b| = {len(B)} exceeds |a|/r^{e} = {len(A)}/{r ** e}")

    a_mask, b_mask = mask_of(A), mask_of(B)
    for x in A:
        seen = {col for col in c.colours_at(x) if c.neighbour_mask(x, col) & b_mask}
        if len(seen) > r:
            raise PreconditionViolated(f"vertex {x} of a sees {len(seen)} colours towards b")
    for x in B:
        seen = {col for col in c.colours_at(x) if c.neighbour_mask(x, col) & a_mask}
        if len(seen) > r:
            raise PreconditionViolated(f"vertex {x} of b sees {len(seen)} colours towards a")

    def into(x: int, col: ColourId, target: int) -> int:
        return popcount(c.neighbour_mask(x, col) & target)

    # ----- shrink A along representatives of B
    state = ShrinkState(a_sets=[tuple(A)])
    current = a_mask
    while True:
        size = popcount(current)
        failing = None
        for x in B:
            if not any(into(x, col, current) * r >= size for col in state.colours):
                failing = x
                break
        if failing is None:
            break
        if len(state.colours) >= r:
            raise LemmaViolation(f"vertex {failing} fails after {r} shrinking steps")
        options = [col for col in sorted(c.colours_at(failing)) if col not in state.colours]
        col = max(options, key=lambda k: (into(failing, k, current), -k), default=None)
        if col is None or into(failing, col, current) * r < size or not into(failing, col, current):
            raise PreconditionViolated(f"no colour of {failing} keeps 1/{r} of the shrinking set")
        current &= c.neighbour_mask(failing, col)
        state.b_reps.append(failing)
        state.colours.append(col)
        state.a_sets.append(tuple(bits_of(current)))
        if popcount(current) * r ** len(state.colours) < len(A):
            raise LemmaViolation("shrinking set fell below |A|/r^i")
        logger.debug(f"patch: b{len(state.colours)}={failing} colour {col} |A_i|={popcount(current)}")

    a_prime = current
    size = popcount(a_prime)
    state.a_prime = tuple(bits_of(a_prime))
    for x in B:
        col = next(col for col in state.colours if into(x, col, a_prime) * r >= size)
        state.b_partition[col] = state.b_partition.get(col, ()) + (x,)

    # ----- auxiliary graphs and their cycles
    used = 0
    cycles: List[Cycle] = []
    aux: Dict[ColourId, Tuple[Tuple[int, int], ...]] = {}
    for col in state.colours:
        part = state.b_partition.get(col, ())
        if not part:
            continue
        g = nx.Graph()
        g.add_nodes_from(part)
        for i, x in enumerate(part):
            for y in part[i + 1:]:
                common = c.neighbour_mask(x, col) & c.neighbour_mask(y, col) & a_prime
                if popcount(common) * r ** 3 >= size:
                    g.add_edge(x, y)
        aux[col] = tuple(sorted(g.edges()))
        alpha = _independence_bound(g, budget)
        if alpha > r:
            raise LemmaViolation(f"auxiliary graph for colour {col} has independence number {alpha} > {r}")
        for piece in posa_cycle_partition(g, alpha_hint=alpha, colour=col).cycles:
            cycle, taken = _realise(c, col, list(piece.vertices), a_prime & ~used)
            used |= taken
            cycles.append(cycle)

    if len(cycles) > r * r:
        raise LemmaViolation(f"patching used {len(cycles)} cycles, more than r^2 = {r * r}")
    for cyc in cycles:
        if not cycle_is_coloured(c, cyc):
            raise LemmaViolation(f"patched cycle {cyc.vertices} is not monochromatic")
    logger.info(f"✓ patched |B|={len(B)} with {len(cycles)} cycles using {popcount(used)} vertices of A")
    return PatchResult(cycles=tuple(cycles), a_used=tuple(bits_of(used)), state=state, aux_edges=aux)


def _realise(c: EdgeColouring, col: ColourId, piece: List[int], free: int) -> Tuple[Cycle, int]:
    """Thread fresh common neighbours from ``free`` between consecutive B vertices."""
    if len(piece) == 1:
        return Cycle.of(piece), 0

    def pick(x: int, y: int, avoid: int) -> int:
        common = c.neighbour_mask(x, col) & c.neighbour_mask(y, col) & free & ~avoid
        if not common:
            raise PreconditionViolated(f"ran out of common {col}-neighbours for {x}, {y}")
        return (common & -common).bit_length() - 1

    taken = 0
    if len(piece) == 2:
        x, y = piece
        first = pick(x, y, 0)
        taken |= 1 << first
        second = pick(x, y, taken)
        taken |= 1 << second
        return Cycle.of([x, first, y, second], col), taken
    order: List[int] = []
    for i, x in enumerate(piece):
        y = piece[(i + 1) % len(piece)]
        mid = pick(x, y, taken)
        taken |= 1 << mid
        order.extend([x, mid])
    return Cycle.of(order, col), taken


# ================================
# MERGING PATHS INTO SPANNING CYCLES
# ================================
def _require_path(c: EdgeColouring, vs: List[int], inside: set, colour: ColourId, name: str) -> None:
    if not set(vs) <= inside:
        raise PreconditionViolated(f"{name} leaves its vertex set")
    if len(set(vs)) != len(vs):
        raise PreconditionViolated(f"{name} repeats a vertex")
    for x, y in zip(vs, vs[1:]):
        if c.colour(x, y) != colour:
            raise PreconditionViolated(f"{name} edge {x}-{y} is not colour {colour}")


def _require_complete(c: EdgeColouring, a: Iterable[int], b: Iterable[int], colour: ColourId) -> None:
    for x in a:
        for y in b:
            if c.colour(x, y) != colour:
                raise PreconditionViolated(f"edge {x}-{y} has colour {c.colour(x, y)}, expected {colour}")


def merge_paths_bip(
    c: EdgeColouring,
    colour: ColourId,
    a: Iterable[int],
    b: Iterable[int],
    p_a: PathLike,
    p_b: PathLike,
) -> Cycle:
    """Spanning cycle of a + b in ``colour`` from paths P_A in a and P_B in b.

    Needs |b - P_B| <= |a - P_A| <= |b| - 1 with every a-b edge in ``colour``.
    """
    A, B = sorted(set(a)), sorted(set(b))
    pa, pb = _vertices(p_a), _vertices(p_b)
    if set(A) & set(B):
        raise PreconditionViolated("a and b must be disjoint")
    if not pa or not pb:
        raise PreconditionViolated("both paths must be nonempty")
    _require_path(c, pa, set(A), colour, "P_A")
    _require_path(c, pb, set(B), colour, "P_B")
    rest_a = [x for x in A if x not in set(pa)]
    rest_b = [x for x in B if x not in set(pb)]
    if not len(rest_b) <= len(rest_a) <= len(B) - 1:
        raise PreconditionViolated(
            f"need |b-P_B| <= |a-P_A| <= |b|-1, got {len(rest_b)}, {len(rest_a)}, {len(B) - 1}"
        )
    _require_complete(c, A, B, colour)

    queue = rest_b + pb
    order = list(pa)
    for x in rest_a:
        order.extend([queue.pop(0), x])
    # what is left of the queue is a tail of P_B, still in path order
    order.extend(queue)
    cycle = Cycle.of(order, colour)
    if len(cycle) != len(A) + len(B) or not cycle_is_coloured(c, cycle):
        raise LemmaViolation(f"bipartite merge produced an invalid cycle {order}")
    return cycle


def merge_paths_tri(
    c: EdgeColouring,
    a1: Iterable[int],
    a2: Iterable[int],
    b: Iterable[int],
    p_a1: PathLike,
    p_a2: PathLike,
    p_b1: PathLike,
    p_b2: PathLike,
) -> Tuple[Cycle, Cycle]:
    """Two cycles, one per colour, partitioning a1 + a2 + b.

    The colour of a_i is read off its edges to b; P_B^1 and P_B^2 must partition
    b and the deficits must satisfy |a1 - P_A1| + |a2 - P_A2| + 2 <= |b|.
    """
    A = [sorted(set(a1)), sorted(set(a2))]
    B = sorted(set(b))
    PA = [_vertices(p_a1), _vertices(p_a2)]
    PB = [_vertices(p_b1), _vertices(p_b2)]
    if set(A[0]) & set(A[1]) or (set(A[0]) | set(A[1])) & set(B):
        raise PreconditionViolated("a1, a2 and b must be disjoint")
    if not A[0] or not A[1] or not B:
        raise PreconditionViolated("a1, a2 and b must be nonempty")
    cols = [c.colour(A[0][0], B[0]), c.colour(A[1][0], B[0])]
    if cols[0] == cols[1]:
        raise PreconditionViolated("a1 and a2 must join b in different colours")
    deficits = [len(A[i]) - len(set(PA[i])) for i in range(2)]
    if deficits[0] + deficits[1] + 2 > len(B):
        raise PreconditionViolated(f"deficits {deficits} too large for |b| = {len(B)}")
    if sorted(PB[0] + PB[1]) != B:
        raise PreconditionViolated("P_B^1 and P_B^2 must partition b")
    for i in range(2):
        if not PA[i]:
            raise PreconditionViolated(f"P_A{i + 1} must be nonempty")
        _require_path(c, PA[i], set(A[i]), cols[i], f"P_A{i + 1}")
        _require_path(c, PB[i], set(B), cols[i], f"P_B^{i + 1}")
        _require_complete(c, A[i], B, cols[i])

    # make both B paths nonempty by moving an end vertex across
    for i in range(2):
        if not PB[i]:
            PB[i] = [PB[1 - i].pop()]

    prefix = [PB[i][: min(len(PB[i]), len(B) - deficits[1 - i] - 1)] for i in range(2)]
    first, second = 0, 1
    if len(prefix[1]) != len(PB[1]):
        first, second = 1, 0
    p1 = prefix[first]
    if len(p1) < deficits[first] + 1:
        raise LemmaViolation(f"|P_1| = {len(p1)} below deficit + 1 = {deficits[first] + 1}")
    b1 = set(p1)
    b2 = [x for x in B if x not in b1]
    out = [None, None]
    out[first] = merge_paths_bip(c, cols[first], A[first], sorted(b1), PA[first], p1)
    out[second] = merge_paths_bip(c, cols[second], A[second], b2, PA[second], PB[second])
    return out[0], out[1]


# ================================
# ONE COLOUR SEES (ALMOST) EVERYTHING
# ================================
def _two_cycles_via_merged(
    c: EdgeColouring, alpha: ColourId, budget: Optional[OracleBudget]
) -> Tuple[Cycle, Cycle]:
    found = oracle.bt_two_cycles(c, alpha, beta_is_merged=True, budget=budget)
    if found is None:
        raise LemmaViolation(f"no alpha/beta two-cycle split found for alpha={alpha}")
    first, second = found
    if not cycle_is_coloured(c, second):
        raise LemmaViolation(f"merged-colour cycle {second.vertices} is not monochromatic")
    return first, second


def one_cover_all(
    c: EdgeColouring, alpha: ColourId, budget: Optional[OracleBudget] = None
) -> Tuple[Cycle, Cycle]:
    """Two disjoint monochromatic cycles covering V, the first in ``alpha``."""
    if c.n <= 1:
        return Cycle.of(range(c.n)), Cycle.empty()
    if not is_r_local(c, 2):
        raise PreconditionViolated("colouring is not 2-local")
    missing = [v for v in range(c.n) if alpha not in c.colours_at(v)]
    if missing:
        raise PreconditionViolated(f"colour {alpha} does not see vertices {missing}")
    return _two_cycles_via_merged(c, alpha, budget)


def one_more(
    c: EdgeColouring, alpha: ColourId, v: int, budget: Optional[OracleBudget] = None
) -> Tuple[Cycle, Cycle]:
    """As one_cover_all, but vertex ``v`` may see any number of colours."""
    if c.n == 0:
        return Cycle.empty(), Cycle.empty()
    if not 0 <= v < c.n:
        raise OutOfRange(f"vertex {v} outside 0..{c.n - 1}")
    if c.n == 1:
        return Cycle.of([0]), Cycle.empty()
    for u in range(c.n):
        if u != v and len(c.colours_at(u) - {alpha}) > 1:
            raise PreconditionViolated(f"vertex {u} sees more than one colour besides {alpha}")
    return _two_cycles_via_merged(c, alpha, budget)


def absorb_into_cycle(c: EdgeColouring, cyc: Cycle, v: int, colour: ColourId) -> Optional[Cycle]:
    """Insert ``v`` into ``cyc`` when every edge from v to the cycle has ``colour``."""
    if any(c.colour(v, u) != colour for u in cyc.vertices):
        return None
    if len(cyc) >= 2 and cyc.colour != colour:
        return None
    return Cycle.of([*cyc.vertices, v], colour)
