"""End-to-end partition algorithms.

two_local_partition and two_mean_partition always return exactly two cycles
(one may be empty); r_local_partition returns a cycle family whose size
depends on the route taken, recorded in the SolveTrace.
"""
import logging
from fractions import Fraction
from math import ceil
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import bipartite

from . import oracle
from .config import settings
from .core import classify_by_locality, is_r_local, mean_locality, verify_partition
from .errors import (
    BadParams,
    BudgetExceeded,
    EmptyGraph,
    LemmaViolation,
    MeanTooHigh,
    NotRLocal,
    NotTwoLocal,
    PreconditionViolated,
    StructureViolation,
)
from .lemmas import (
    absorb_into_cycle,
    erdos_gallai_long_cycle,
    gyarfas_two_paths,
    merge_paths_bip,
    merge_paths_tri,
    one_cover_all,
    one_more,
    patch_bipartite,
)
from .schemas import (
    ColourId,
    Cycle,
    CyclePartition,
    EdgeColouring,
    OracleBudget,
    PipelineParams,
    SolveTrace,
    StructureDecomposition,
    TriConfig,
    TriangleCycleWitness,
    VerifyOptions,
)
from .utils import bits_of, popcount

logger = logging.getLogger(__name__)

TWO_CYCLES = VerifyOptions(require_cover=True, require_distinct_colours=True, max_cycles=2)


def _lift(cyc: Cycle, vertices: Sequence[int]) -> Cycle:
    """Map a cycle of ``c.induced(vertices)`` back to the ambient ids."""
    return Cycle.of([vertices[i] for i in cyc.vertices], cyc.colour)


def _require_two_local(c: EdgeColouring) -> None:
    if not is_r_local(c, 2):
        raise NotTwoLocal("colouring is not 2-local")


# ================================
# STRUCTURE
# ================================
def largest_mono_component(c: EdgeColouring) -> Tuple[Optional[ColourId], FrozenSet[int]]:
    """Largest connected subgraph of one colour class; ties go to the smaller colour, then vertex set."""
    if c.n == 0:
        raise EmptyGraph("no components in the empty graph")
    if c.n == 1:
        return None, frozenset({0})
    best = None
    for col in sorted(c.palette):
        g = nx.Graph()
        g.add_edges_from((u, v) for u, v, k in c.edges() if k == col)
        for comp in nx.connected_components(g):
            key = (-len(comp), col, tuple(sorted(comp)))
            if best is None or key < best:
                best = key
    return best[1], frozenset(best[2])


def _check_tri_config(c: EdgeColouring, cfg: TriConfig) -> None:
    c1, c2, c3 = cfg.colours
    parts = {"V12": (cfg.v12, {c1, c2}), "V13": (cfg.v13, {c1, c3}), "V23": (cfg.v23, {c2, c3})}
    everyone = sorted(cfg.v12 + cfg.v13 + cfg.v23)
    if everyone != list(range(c.n)):
        raise StructureViolation("parts do not partition the vertex set")
    for name, (part, allowed) in parts.items():
        if not part:
            raise StructureViolation(f"{name} is empty")
        for v in part:
            if not c.colours_at(v) <= allowed:
                raise StructureViolation(f"vertex {v} of {name} sees {sorted(c.colours_at(v))}")
    for left, right, col in ((cfg.v12, cfg.v13, c1), (cfg.v12, cfg.v23, c2), (cfg.v13, cfg.v23, c3)):
        for x in left:
            for y in right:
                if c.colour(x, y) != col:
                    raise StructureViolation(f"cross edge {x}-{y} has colour {c.colour(x, y)}, expected {col}")


def structure_decompose(c: EdgeColouring) -> StructureDecomposition:
    """Either a colour seen by every vertex, or the three-part configuration."""
    if c.n == 0:
        raise EmptyGraph("nothing to decompose")
    _require_two_local(c)
    if c.n == 1:
        return StructureDecomposition(kind="all_seeing", alpha=None)
    for col in sorted(c.palette):
        if all(col in c.colours_at(v) for v in range(c.n)):
            return StructureDecomposition(kind="all_seeing", alpha=col)

    c1, s = largest_mono_component(c)
    v23 = tuple(v for v in range(c.n) if v not in s)
    x = v23[0]
    towards = sorted({c.colour(x, y) for y in s})
    if len(towards) != 2 or c1 in towards:
        raise StructureViolation(f"vertex {x} meets the largest component in colours {towards}")
    c2, c3 = towards
    cfg = TriConfig(
        v12=tuple(sorted(y for y in s if c.colour(x, y) == c2)),
        v13=tuple(sorted(y for y in s if c.colour(x, y) == c3)),
        v23=v23,
        colours=(c1, c2, c3),
    )
    _check_tri_config(c, cfg)
    return StructureDecomposition(kind="tri_config", config=cfg)


# ================================
# 2-LOCAL COLOURINGS
# ================================
PathState = Tuple[Tuple[int, ...], Tuple[int, ...]]


def _canon(x: Sequence[int], y: Sequence[int]) -> PathState:
    return min(tuple(x), tuple(reversed(x))), min(tuple(y), tuple(reversed(y)))


def _path_partitions(
    c: EdgeColouring, part: Sequence[int], a: ColourId, b: ColourId, limit: int
) -> List[PathState]:
    """Partitions of ``part`` into an a-path and a b-path.

    Seeds come from the two-path construction over rotated vertex orders; the
    rest come from moving an end vertex of one path onto an end of the other.
    """
    seen: Dict[PathState, None] = {}
    part = list(part)
    for rot in range(len(part)):
        pair = gyarfas_two_paths(c, (a, b), part[rot:] + part[:rot])
        seen.setdefault(_canon(pair.p_first.vertices, pair.p_second.vertices))
    frontier = list(seen)
    while frontier and len(seen) < limit:
        X, Y = frontier.pop(0)
        for xs in (X, X[::-1]):
            for ys in (Y, Y[::-1]):
                moves = []
                if xs and not ys:
                    moves.append((xs[:-1], (xs[-1],)))
                elif ys and not xs:
                    moves.append(((ys[-1],), ys[:-1]))
                elif xs and ys:
                    edge = c.colour(xs[-1], ys[-1])
                    if edge == b:
                        moves.append((xs[:-1], ys + (xs[-1],)))
                    if edge == a:
                        moves.append((xs + (ys[-1],), ys[:-1]))
                for nx_, ny_ in moves:
                    key = _canon(nx_, ny_)
                    if key not in seen and len(seen) < limit:
                        seen[key] = None
                        frontier.append(key)
    return list(seen)


class _TwoLocalSearch:
    """Guided search over the three-part configuration (all parts of size >= 2).

    parts[k] is the part that never sees colours[k]; edges between parts[j]
    and parts[l] all have colours[k] for {j, k, l} = {0, 1, 2}.
    """

    def __init__(self, c: EdgeColouring, cfg: TriConfig, trace: SolveTrace, budget: OracleBudget):
        self.c = c
        self.cols = cfg.colours
        self.parts = [cfg.part_missing(k) for k in range(3)]
        self.trace = trace
        self.budget = budget
        self._longest: Dict[Tuple[int, ColourId], List[int]] = {}
        self.states: Dict[int, List[PathState]] = {}
        for k in range(3):
            j, l = [i for i in range(3) if i != k]
            self.states[k] = _path_partitions(
                c, self.parts[k], self.cols[j], self.cols[l], settings.PATH_SEARCH_LIMIT
            )
            trace.record("paths", f"part missing colour {self.cols[k]}", states=len(self.states[k]))

    @staticmethod
    def _others(i: int) -> Tuple[int, int]:
        j, l = [k for k in range(3) if k != i]
        return j, l

    def longest_path(self, k: int, colour: ColourId) -> List[int]:
        """Longest ``colour`` path inside parts[k]: exact within budget, else best seen partition."""
        if (k, colour) not in self._longest:
            part = self.parts[k]
            if len(part) <= self.budget.effective_max_n:
                best = list(oracle.longest_mono_path(self.c, part, colour, self.budget).vertices)
            else:
                j, _ = self._others(k)
                slot = 0 if self.cols[j] == colour else 1
                best = list(max((s[slot] for s in self.states[k]), key=len))
            self._longest[(k, colour)] = best
        return self._longest[(k, colour)]

    def accept(self, first: Cycle, second: Cycle, route: str) -> Optional[CyclePartition]:
        p = CyclePartition(cycles=(first, second))
        report = verify_partition(self.c, p, TWO_CYCLES)
        if report.valid:
            self.trace.record("lemma", f"{route} succeeded", colours=list(report.colours_used))
            return p
        self.trace.record("reject", f"{route} rejected", reason=report.failure_reason)
        return None

    def via_tri_merge(self, i: int) -> Optional[CyclePartition]:
        """Both cycles threaded through B = parts[i]."""
        j, l = self._others(i)
        a_j, a_l = self.parts[l], self.parts[j]
        p_aj = self.longest_path(l, self.cols[j])
        p_al = self.longest_path(j, self.cols[l])
        deficit = (len(a_j) - len(p_aj)) + (len(a_l) - len(p_al))
        if deficit + 2 > len(self.parts[i]):
            self.trace.record("inequality", "tri merge blocked", b=len(self.parts[i]), deficits=deficit)
            return None
        X, Y = self.states[i][0]
        # states[i] holds (cols[j]-path, cols[l]-path)
        try:
            first, second = merge_paths_tri(self.c, a_j, a_l, self.parts[i], p_aj, p_al, X, Y)
        except PreconditionViolated as e:
            self.trace.record("reject", f"tri merge through part {i} refused: {e}")
            return None
        return self.accept(first, second, f"tri merge through part {i}")

    def via_bip_merge(self, i: int) -> Optional[CyclePartition]:
        """parts[i] closed on its own, the other two parts merged in colours[i]."""
        j, l = self._others(i)
        for span_colour in (self.cols[j], self.cols[l]):
            try:
                spanning = oracle.mono_spanning_cycle(self.c, self.parts[i], span_colour, self.budget)
            except BudgetExceeded:
                self.trace.record("budget", f"part {i} too large for a spanning-cycle check")
                return None
            if spanning is None:
                continue
            for a_idx, b_idx in ((j, l), (l, j)):
                A, B = self.parts[a_idx], self.parts[b_idx]
                la = self.longest_path(a_idx, self.cols[i])
                lb = self.longest_path(b_idx, self.cols[i])
                low = max(1, len(A) - len(B) + 1)
                high = min(len(la), len(A) - len(B) + len(lb))
                if low > high:
                    continue
                try:
                    merged = merge_paths_bip(self.c, self.cols[i], A, B, la[:low], lb)
                except PreconditionViolated as e:
                    self.trace.record("reject", f"bip merge refused: {e}")
                    continue
                found = self.accept(merged, spanning, f"bip merge with part {i} spanned")
                if found is not None:
                    return found
        return None

    def run(self) -> Optional[CyclePartition]:
        for i in range(3):
            found = self.via_tri_merge(i)
            if found is not None:
                return found
        for i in range(3):
            found = self.via_bip_merge(i)
            if found is not None:
                return found
        return None


def _singleton_part(
    c: EdgeColouring, cfg: TriConfig, k: int, trace: SolveTrace, budget: OracleBudget
) -> Optional[CyclePartition]:
    """Solve without the lone vertex of the part missing colours[k], then absorb it."""
    (v,) = cfg.part_missing(k)
    rest = [u for u in range(c.n) if u != v]
    alpha = cfg.colours[k]
    first, second = one_cover_all(c.induced(rest), alpha, budget)
    first, second = _lift(first, rest), _lift(second, rest)
    if len(second) == 0:
        grown = Cycle.of([v])
    elif len(second) == 1:
        (w,) = second.vertices
        grown = Cycle.of([w, v], c.colour(w, v))
    else:
        grown = absorb_into_cycle(c, second, v, second.colour)
    if grown is None:
        trace.record("reject", f"vertex {v} does not extend the second cycle")
        return None
    trace.record("lemma", f"singleton part {v} absorbed", alpha=alpha)
    p = CyclePartition(cycles=(first, grown))
    return p if verify_partition(c, p, TWO_CYCLES).valid else None


def two_local_partition(
    c: EdgeColouring, budget: Optional[OracleBudget] = None
) -> Tuple[CyclePartition, SolveTrace]:
    """Two disjoint monochromatic cycles of different colours covering a 2-local K_n."""
    _require_two_local(c)
    budget = budget or OracleBudget.default()
    trace = SolveTrace()
    if c.n <= 1:
        trace.record("trivial", f"n={c.n}")
        return CyclePartition(cycles=(Cycle.of(range(c.n)), Cycle.empty())), trace

    dec = structure_decompose(c)
    trace.record("decompose", dec.kind, alpha=dec.alpha)
    found: Optional[CyclePartition] = None
    if dec.kind == "all_seeing":
        first, second = one_cover_all(c, dec.alpha, budget)
        found = CyclePartition(cycles=(first, second))
    else:
        cfg = dec.config
        lone = [k for k in range(3) if len(cfg.part_missing(k)) == 1]
        if lone:
            found = _singleton_part(c, cfg, lone[0], trace, budget)
        else:
            found = _TwoLocalSearch(c, cfg, trace, budget).run()

    if found is None:
        logger.warning(f"✗ guided two-cycle search exhausted on n={c.n}, using exact search")
        trace.record("fallback", "exact two-cycle search")
        pair = oracle.two_cycle_partition(c, budget)
        if pair is None:
            raise LemmaViolation("no two-cycle partition exists for a 2-local colouring")
        found = CyclePartition(cycles=pair)

    report = verify_partition(c, found, TWO_CYCLES)
    if not report.valid:
        raise LemmaViolation(f"two-local result invalid: {report.failure_reason} ({report.detail})")
    return found, trace


# ================================
# MEAN COLOURINGS
# ================================
def two_mean_partition(
    c: EdgeColouring, budget: Optional[OracleBudget] = None
) -> Tuple[CyclePartition, SolveTrace]:
    """Two cycles of different colours when the average locality is at most 2."""
    budget = budget or OracleBudget.default()
    if c.n == 0:
        return CyclePartition(cycles=(Cycle.empty(), Cycle.empty())), SolveTrace()
    if mean_locality(c) > 2:
        raise MeanTooHigh(f"mean locality {mean_locality(c)} exceeds 2")
    classes = classify_by_locality(c)
    v1, v3 = classes[1], classes[3]
    if not v1 or not v3:
        p, trace = two_local_partition(c, budget)
        trace.record("delegate", "no vertex sees three colours")
        return p, trace
    if len(v1) < len(v3):
        raise LemmaViolation(f"|V1| = {len(v1)} < |V3| = {len(v3)} with mean <= 2")

    trace = SolveTrace()
    (alpha,) = c.colours_at(v1[0])
    v = max(v3, key=lambda u: (len(c.colours_at(u)), -u))
    hubs = [u for u in v3 if u != v]
    order: List[int] = []
    for i, x in enumerate(v1):
        order.append(x)
        if i < len(hubs):
            order.append(hubs[i])
    trace.record("classify", "V1/V2/V3", v1=len(v1), v2=len(classes[2]), v3=len(v3), alpha=alpha, v=v)

    rest = sorted(set(range(c.n)) - set(order))
    first, second = one_more(c.induced(rest), alpha, rest.index(v), budget)
    first, second = _lift(first, rest), _lift(second, rest)
    # close C1 through the other alpha cycle; both junctions touch V1
    spliced = Cycle.of(order + list(first.vertices), alpha)
    trace.record("lemma", "splice", c1=len(order), c1_prime=len(first))
    p = CyclePartition(cycles=(spliced, second))
    report = verify_partition(c, p, TWO_CYCLES)
    if not report.valid:
        raise LemmaViolation(f"mean splice invalid: {report.failure_reason} ({report.detail})")
    return p, trace


# ================================
# r-LOCAL PIPELINE
# ================================
def find_long_mono_cycle(
    c: EdgeColouring, r: int, budget: Optional[OracleBudget] = None
) -> Cycle:
    """A monochromatic cycle of length >= max(1, ceil(n / 2r))."""
    if c.n == 0:
        raise EmptyGraph("no cycle in the empty graph")
    if r < 1 or not is_r_local(c, r):
        raise NotRLocal(f"colouring is not {r}-local")
    target = max(1, ceil(c.n / (2 * r)))
    if c.n == 1:
        return Cycle.of([0])

    best = None
    for col in sorted(c.palette):
        g = nx.Graph()
        g.add_edges_from((u, v) for u, v, k in c.edges() if k == col)
        key = (Fraction(g.number_of_edges(), g.number_of_nodes()), -col)
        if best is None or key > best[0]:
            best = (key, col, g)
    _, col, g = best
    if target >= 2 and 2 * g.number_of_edges() >= target * g.number_of_nodes():
        found = erdos_gallai_long_cycle(g, target, col, budget)
    else:
        _, found = oracle.longest_mono_cycle(c, budget)
    if len(found) < target:
        raise LemmaViolation(f"cycle of length {len(found)} below {target}")
    return found


def close_triangle_cycle(witness: TriangleCycleWitness, removed: Iterable[int] = ()) -> Cycle:
    """Cycle through the triangle cycle minus any subset of its apexes."""
    removed = set(removed) & set(witness.v)
    order: List[int] = []
    for i, u in enumerate(witness.u):
        order.append(u)
        if witness.v[i] not in removed:
            order.append(witness.v[i])
    return Cycle.of(order, witness.colour)


def _apex_matching(c: EdgeColouring, col: ColourId, ring: List[int], free: int) -> Optional[List[int]]:
    k = len(ring)
    g = nx.Graph()
    slots = [("slot", i) for i in range(k)]
    g.add_nodes_from(slots)
    for i in range(k):
        common = c.neighbour_mask(ring[i], col) & c.neighbour_mask(ring[(i + 1) % k], col) & free
        for w in bits_of(common):
            g.add_edge(("slot", i), w)
    match = bipartite.maximum_matching(g, top_nodes=slots)
    if sum(1 for s in slots if s in match) < k:
        return None
    return [match[s] for s in slots]


def find_triangle_cycle(
    c: EdgeColouring,
    k_min: int = 3,
    colour: Optional[ColourId] = None,
    limit: Optional[int] = None,
) -> Optional[TriangleCycleWitness]:
    """Largest monochromatic triangle cycle with k >= k_min found within ``limit`` search steps."""
    limit = limit if limit is not None else settings.TK_SEARCH_LIMIT
    colours = sorted(c.palette) if colour is None else [colour]
    full = (1 << c.n) - 1
    steps = 0
    for k in range(c.n // 2, max(k_min, 3) - 1, -1):
        for col in colours:
            adj = c.colour_masks(col)
            ring_ok = [popcount(adj[v]) >= 4 for v in range(c.n)]
            for start in range(c.n):
                if not ring_ok[start]:
                    continue
                stack = [[start]]
                while stack:
                    path = stack.pop()
                    steps += 1
                    if steps > limit:
                        logger.debug(f"triangle-cycle search hit the step limit {limit}")
                        return None
                    last = path[-1]
                    if len(path) == k:
                        if adj[last] >> start & 1 and path[1] < path[-1]:
                            ring_mask = sum(1 << u for u in path)
                            apexes = _apex_matching(c, col, path, full & ~ring_mask)
                            if apexes is not None:
                                return TriangleCycleWitness(k=k, u=tuple(path), v=tuple(apexes), colour=col)
                        continue
                    for w in reversed(bits_of(adj[last])):
                        if w > start and ring_ok[w] and w not in path:
                            stack.append(path + [w])
    return None


def _greedy_cycles(
    c: EdgeColouring, r: int, vertices: List[int], trace: SolveTrace, budget: OracleBudget
) -> List[Cycle]:
    cycles = []
    remaining = list(vertices)
    while remaining:
        found = _lift(find_long_mono_cycle(c.induced(remaining), r, budget), remaining)
        cycles.append(found)
        trace.record("fallback", "greedy long cycle", length=len(found), left=len(remaining) - len(found))
        remaining = [u for u in remaining if u not in found.vertex_set()]
    return cycles


def r_local_partition(
    c: EdgeColouring,
    r: int,
    params: Optional[PipelineParams] = None,
    budget: Optional[OracleBudget] = None,
) -> Tuple[CyclePartition, SolveTrace]:
    """Monochromatic cycle partition of an r-local K_n.

    Route: planted triangle cycle, long-cycle removal rounds, bipartite patching
    of the remainder into the apexes, then closing what is left of the triangle
    cycle. Any stage failing hands the whole instance to greedy long cycles.
    """
    if r < 1:
        raise BadParams("r must be at least 1")
    if not is_r_local(c, r):
        raise NotRLocal(f"colouring is not {r}-local")
    params = params or PipelineParams()
    budget = budget or OracleBudget.default()
    trace = SolveTrace()
    if c.n == 0:
        return CyclePartition(), trace

    cycles = _triangle_route(c, r, params, trace, budget)
    if cycles is None:
        cycles = _greedy_cycles(c, r, list(range(c.n)), trace, budget)

    p = CyclePartition(cycles=tuple(cycles))
    report = verify_partition(c, p)
    if not report.valid:
        raise LemmaViolation(f"r-local result invalid: {report.failure_reason} ({report.detail})")
    logger.info(f"✓ r-local partition n={c.n} r={r}: {len(cycles)} cycles ({trace.summary()})")
    return p, trace


def _triangle_route(
    c: EdgeColouring, r: int, params: PipelineParams, trace: SolveTrace, budget: OracleBudget
) -> Optional[List[Cycle]]:
    witness = find_triangle_cycle(c, params.tk_min)
    if witness is None:
        trace.record("tk", "no triangle cycle found", k_min=params.tk_min)
        return None
    trace.record("tk", "triangle cycle found", k=witness.k, colour=witness.colour)

    apexes = list(witness.v)
    planted = set(witness.u) | set(witness.v)
    rest = [u for u in range(c.n) if u not in planted]
    start = len(rest)
    exponent = params.gate_exponent(r)
    removed: List[Cycle] = []
    rounds = 0
    while len(rest) * r ** exponent > len(apexes):
        if rounds >= params.max_rounds(r):
            trace.record("gate", "gate not met within the round budget", rounds=rounds, left=len(rest))
            return None
        found = _lift(find_long_mono_cycle(c.induced(rest), r, budget), rest)
        if len(found) * 2 * r < len(rest):
            raise LemmaViolation(f"removed cycle of length {len(found)} too short for {len(rest)} vertices")
        removed.append(found)
        rest = [u for u in rest if u not in found.vertex_set()]
        rounds += 1
        decay = start * (1 - 1 / (2 * r)) ** rounds
        if len(rest) > decay + 1e-9:
            raise LemmaViolation(f"remainder {len(rest)} above decay bound {decay:.2f}")
        logger.debug(f"round {rounds}: removed {len(found)}, {len(rest)} left (bound {decay:.2f})")
        trace.record("round", "long cycle removed", length=len(found), left=len(rest))

    try:
        patch = patch_bipartite(c, apexes, rest, r, ratio_exp=exponent, budget=budget)
    except PreconditionViolated as e:
        trace.record("patch", f"patching refused: {e}")
        return None
    trace.record("patch", "remainder patched", cycles=len(patch.cycles), a_used=len(patch.a_used))
    closing = close_triangle_cycle(witness, patch.a_used)
    return removed + list(patch.cycles) + [closing]
