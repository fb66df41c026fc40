"""Random and structured locally coloured instances.

Every generator is deterministic in its parameters and seed.
"""
import logging
import random
from itertools import combinations
from typing import List, Literal, Sequence, Tuple

import networkx as nx

from .core import classify_by_locality, is_r_local, max_locality, mean_locality
from .errors import (
    BadK,
    BadParams,
    BadSizes,
    EmptyGraph,
    GenerationFailed,
    InfeasibleFamily,
    LemmaViolation,
    NoAbsentColour,
)
from .schemas import ColourId, EdgeColouring, TriConfig, TriangleCycleWitness

logger = logging.getLogger(__name__)

Seed = int
IntraRule = Literal["low", "random"]
AmplifyRule = Literal["least_absent", "fresh"]

FANO_LINES: Tuple[Tuple[int, int, int], ...] = (
    (1, 3, 7),
    (2, 6, 7),
    (1, 5, 6),
    (4, 5, 7),
    (3, 4, 6),
    (2, 3, 5),
    (1, 2, 4),
)

_TYPE_ATTEMPTS = 64
_MEAN_ATTEMPTS = 50


# ================================
# RANDOM FAMILIES
# ================================
def gen_random_local(n: int, r: int, s: int, seed: Seed = 0) -> EdgeColouring:
    """Random r-local colouring of K_n over at most s colours.

    Each vertex draws an allowed colour set of size <= r meeting every set
    drawn so far; an edge takes a uniform colour from the two endpoints'
    common allowed colours.
    """
    if n < 0 or r < 1 or s < 1:
        raise InfeasibleFamily(f"no r-local family for n={n}, r={r}, s={s}")
    rng = random.Random(seed)
    types: List[frozenset] = []
    allowed: List[frozenset] = []
    for _ in range(n):
        chosen = None
        if types and rng.random() < 0.5:
            chosen = rng.choice(types)
        for _ in range(_TYPE_ATTEMPTS):
            if chosen is not None:
                break
            size = rng.randint(1, min(r, s))
            cand = frozenset(rng.sample(range(s), size))
            if all(cand & t for t in types):
                chosen = cand
        if chosen is None:
            if not types:
                raise InfeasibleFamily(f"could not sample a colour set for r={r}, s={s}")
            # any drawn set meets all the others
            chosen = rng.choice(types)
            logger.debug(f"no fresh colour set after {_TYPE_ATTEMPTS} draws, reusing {sorted(chosen)}")
        if chosen not in types:
            types.append(chosen)
        allowed.append(chosen)

    c = EdgeColouring.from_function(n, lambda u, v: rng.choice(sorted(allowed[u] & allowed[v]))).canonical()
    if not is_r_local(c, r):
        raise LemmaViolation(f"generated colouring is not {r}-local")
    logger.debug(f"gen_random_local n={n} r={r} s={s} seed={seed}: {len(types)} colour types")
    return c


def gen_random_two_coloured(n: int, seed: Seed = 0) -> EdgeColouring:
    """Uniform 2-colouring of K_n with colour ids 0 and 1."""
    if n < 0:
        raise BadParams("n must be non-negative")
    rng = random.Random(seed)
    return EdgeColouring.from_function(n, lambda u, v: rng.randint(0, 1))


def random_graph(n: int, p: float, seed: Seed = 0) -> nx.Graph:
    if n < 0 or not 0 <= p <= 1:
        raise BadParams(f"bad G(n, p) parameters n={n}, p={p}")
    return nx.gnp_random_graph(n, p, seed=seed)


# ================================
# STRUCTURED CONFIGURATIONS
# ================================
def gen_tri_config(
    sizes: Sequence[int], intra_rule: IntraRule = "low", seed: Seed = 0
) -> Tuple[EdgeColouring, TriConfig]:
    """Three-part 2-local configuration with parts V12, V13, V23 laid out in that order.

    Colours 1, 2, 3 are ids 0, 1, 2. Edges between parts take the colour the
    two parts share; edges inside V_ij take colour i or j per ``intra_rule``.
    """
    sizes = tuple(sizes)
    if len(sizes) != 3 or any(k < 1 for k in sizes):
        raise BadSizes(f"three part sizes >= 1 required, got {sizes}")
    a, b, _ = sizes
    part_colours = (frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2}))
    part_of = [0] * a + [1] * b + [2] * sizes[2]
    rng = random.Random(seed)

    def colour_of(u: int, v: int) -> ColourId:
        pu, pv = part_of[u], part_of[v]
        if pu != pv:
            (shared,) = part_colours[pu] & part_colours[pv]
            return shared
        options = sorted(part_colours[pu])
        return options[0] if intra_rule == "low" else rng.choice(options)

    c = EdgeColouring.from_function(len(part_of), colour_of)
    config = TriConfig(
        v12=tuple(range(a)),
        v13=tuple(range(a, a + b)),
        v23=tuple(range(a + b, len(part_of))),
        colours=(0, 1, 2),
    )
    return c, config


def gen_fano_config(part_sizes: Sequence[int], seed: Seed = 0) -> EdgeColouring:
    """Seven parts indexed by the lines of the Fano plane; point k is colour id k - 1."""
    part_sizes = tuple(part_sizes)
    if len(part_sizes) != 7 or any(k < 1 for k in part_sizes):
        raise BadSizes(f"seven part sizes >= 1 required, got {part_sizes}")
    rng = random.Random(seed)
    part_of = [i for i, k in enumerate(part_sizes) for _ in range(k)]
    lines = [frozenset(p - 1 for p in line) for line in FANO_LINES]

    def colour_of(u: int, v: int) -> ColourId:
        lu, lv = lines[part_of[u]], lines[part_of[v]]
        if part_of[u] != part_of[v]:
            (shared,) = lu & lv
            return shared
        return rng.choice(sorted(lu))

    c = EdgeColouring.from_function(len(part_of), colour_of)
    if not is_r_local(c, 3):
        raise LemmaViolation("Fano configuration is not 3-local")
    return c


def gen_triangle_cycle(
    k: int, colour: ColourId = 0, background: ColourId = 1
) -> Tuple[EdgeColouring, TriangleCycleWitness]:
    """Planted triangle cycle: u_i = i form the k-cycle, apex v_i = k + i sits on u_i u_{i+1}."""
    if k < 3:
        raise BadK(f"triangle cycles need k >= 3, got {k}")
    if colour == background or colour < 0 or background < 0:
        raise BadParams("colour and background must be distinct non-negative ids")
    planted = set()
    for i in range(k):
        nxt = (i + 1) % k
        planted.add(frozenset((i, nxt)))
        planted.add(frozenset((k + i, i)))
        planted.add(frozenset((k + i, nxt)))
    c = EdgeColouring.from_function(2 * k, lambda u, v: colour if frozenset((u, v)) in planted else background)
    witness = TriangleCycleWitness(k=k, u=tuple(range(k)), v=tuple(range(k, 2 * k)), colour=colour)
    return c, witness


# ================================
# COUNTEREXAMPLE AMPLIFIER
# ================================
def amplify(c: EdgeColouring, rule: AmplifyRule = "least_absent", strict: bool = False) -> EdgeColouring:
    """Add vertex u = n whose edge to each v avoids every colour v already sees."""
    if c.n < 1:
        raise EmptyGraph("amplify needs at least one vertex")
    fresh = max(c.palette, default=-1) + 1
    new_colour: List[ColourId] = []
    for v in range(c.n):
        if rule == "fresh":
            new_colour.append(fresh)
            continue
        absent = sorted(c.palette - c.colours_at(v))
        if absent:
            new_colour.append(absent[0])
        elif strict:
            raise NoAbsentColour(f"vertex {v} sees the whole palette")
        else:
            new_colour.append(fresh)

    n = c.n

    def colour_of(u: int, v: int) -> ColourId:
        return new_colour[u] if v == n else c.colour(u, v)

    return EdgeColouring.from_function(n + 1, colour_of)


# ================================
# MEAN COLOURINGS
# ================================
def gen_mean_instance(n: int, seed: Seed = 0) -> EdgeColouring:
    """Colouring with mean locality <= 2 where some vertex sees three colours.

    V1 vertices see only colour 0, V3 hubs see 0, 1, 2 and every other vertex
    sees 0 and one of 1, 2; |V1| >= |V3| keeps the mean at most 2.
    """
    if n < 4:
        raise BadParams(f"mean instances need n >= 4, got {n}")
    rng = random.Random(seed)
    for attempt in range(_MEAN_ATTEMPTS):
        k1 = rng.randint(1, n - 3)
        k3 = rng.randint(1, min(k1, n - k1 - 2))
        labels = list(range(n))
        rng.shuffle(labels)
        v1, v3, v2 = labels[:k1], labels[k1:k1 + k3], labels[k1 + k3:]
        beta = {w: (1 if i == 0 else 2 if i == 1 else rng.choice((1, 2))) for i, w in enumerate(v2)}
        role = {**{x: 1 for x in v1}, **{x: 3 for x in v3}, **{x: 2 for x in v2}}

        forced = {}
        ones = [w for w in v2 if beta[w] == 1]
        twos = [w for w in v2 if beta[w] == 2]
        for hub in v3:
            for w in (rng.choice(ones), rng.choice(twos)):
                forced[frozenset((hub, w))] = beta[w]

        colours = {}
        for u, v in combinations(range(n), 2):
            key = frozenset((u, v))
            ru, rv = role[u], role[v]
            if key in forced:
                col = forced[key]
            elif 1 in (ru, rv) or ru == rv == 3:
                col = 0
            elif ru == rv == 2:
                col = rng.choice((0, beta[u])) if beta[u] == beta[v] else 0
            else:
                w = u if ru == 2 else v
                col = rng.choice((0, beta[w]))
            colours[(u, v)] = col

        c = EdgeColouring.from_function(n, lambda u, v: colours[(u, v)])
        classes = classify_by_locality(c)
        if mean_locality(c) <= 2 and max_locality(c) == 3 and len(classes[1]) >= len(classes[3]):
            return c
        logger.debug(f"gen_mean_instance attempt {attempt} rejected")
    raise GenerationFailed(f"no mean instance for n={n} after {_MEAN_ATTEMPTS} attempts")
