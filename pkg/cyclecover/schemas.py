# Pydantic data model shared by every module
from math import ceil, log, log2
from typing import Any, Dict, Iterable, Iterator, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from .config import settings

ColourId = int

FailureReason = Literal[
    "NotDisjoint",
    "NotCovering",
    "NotMonochromatic",
    "ColourMismatch",
    "UnknownVertex",
    "TooManyCycles",
]


def pair_index(n: int, u: int, v: int) -> int:
    """Position of the unordered pair {u, v} in the row-major upper triangle."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


# ================================
# COLOURED COMPLETE GRAPH
# ================================
class EdgeColouring(BaseModel):
    """Complete graph on vertices 0..n-1 with one colour id per unordered pair.

    ``colours`` holds the upper triangle row by row: (0,1), (0,2), ..., (0,n-1),
    (1,2), ... so the pair {u, v} is looked up through ``pair_index``.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0)
    colours: Tuple[int, ...] = ()

    _palette: frozenset = PrivateAttr(default=frozenset())
    _seen: Tuple[frozenset, ...] = PrivateAttr(default=())
    _masks: Dict[int, Tuple[int, ...]] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_triangle(self):
        expected = self.n * (self.n - 1) // 2
        if len(self.colours) != expected:
            raise ValueError(f"expected {expected} pair colours for n={self.n}, got {len(self.colours)}")
        if any(c < 0 for c in self.colours):
            raise ValueError("colour ids must be non-negative")
        return self

    def model_post_init(self, __context: Any) -> None:
        n = self.n
        if len(self.colours) != n * (n - 1) // 2:
            return  # rejected by _check_triangle
        seen = [set() for _ in range(n)]
        masks: Dict[int, List[int]] = {}
        idx = 0
        for u in range(n):
            for v in range(u + 1, n):
                col = self.colours[idx]
                idx += 1
                seen[u].add(col)
                seen[v].add(col)
                rows = masks.setdefault(col, [0] * n)
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        self._palette = frozenset(self.colours)
        self._seen = tuple(frozenset(s) for s in seen)
        self._masks = {col: tuple(rows) for col, rows in masks.items()}

    # -------------------------------------------------------------
    # construction
    # -------------------------------------------------------------
    @classmethod
    def from_function(cls, n: int, colour_of) -> "EdgeColouring":
        return cls(n=n, colours=tuple(colour_of(u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def monochromatic(cls, n: int, colour: ColourId = 0) -> "EdgeColouring":
        return cls(n=n, colours=(colour,) * (n * (n - 1) // 2))

    def induced(self, vertices: Iterable[int]) -> "EdgeColouring":
        """Sub-colouring on ``vertices``; vertex i of the result is ``vertices[i]``."""
        vs = list(vertices)
        return EdgeColouring.from_function(len(vs), lambda i, j: self.colour(vs[i], vs[j]))

    def canonical(self) -> "EdgeColouring":
        """Rename the palette to 0..s-1 preserving the order of colour ids."""
        rename = {col: i for i, col in enumerate(sorted(self._palette))}
        return EdgeColouring(n=self.n, colours=tuple(rename[c] for c in self.colours))

    # -------------------------------------------------------------
    # queries
    # -------------------------------------------------------------
    def colour(self, u: int, v: int) -> ColourId:
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"no edge {{{u}, {v}}} in K_{self.n}")
        return self.colours[pair_index(self.n, u, v)]

    @property
    def palette(self) -> frozenset:
        return self._palette

    def colours_at(self, v: int) -> frozenset:
        return self._seen[v]

    def neighbour_mask(self, v: int, col: ColourId) -> int:
        rows = self._masks.get(col)
        return rows[v] if rows else 0

    def colour_masks(self, col: ColourId) -> Tuple[int, ...]:
        return self._masks.get(col, (0,) * self.n)

    def edges(self) -> Iterator[Tuple[int, int, ColourId]]:
        idx = 0
        for u in range(self.n):
            for v in range(u + 1, self.n):
                yield u, v, self.colours[idx]
                idx += 1


# ================================
# CYCLES, PATHS, PARTITIONS
# ================================
class Cycle(BaseModel):
    """Monochromatic cycle; length 0, 1 and 2 are the empty set, a vertex and an edge."""

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[int, ...] = ()
    colour: Optional[ColourId] = None

    @model_validator(mode="after")
    def _check_shape(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"cycle repeats a vertex: {self.vertices}")
        if len(self.vertices) <= 1 and self.colour is not None:
            raise ValueError("empty and singleton cycles carry no colour")
        if len(self.vertices) >= 2 and self.colour is None:
            raise ValueError("cycles with an edge need a colour")
        return self

    @classmethod
    def of(cls, vertices: Iterable[int], colour: Optional[ColourId] = None) -> "Cycle":
        vs = tuple(vertices)
        return cls(vertices=vs, colour=colour if len(vs) >= 2 else None)

    @classmethod
    def empty(cls) -> "Cycle":
        return cls()

    def __len__(self) -> int:
        return len(self.vertices)

    def edge_pairs(self) -> List[Tuple[int, int]]:
        vs = self.vertices
        if len(vs) < 2:
            return []
        if len(vs) == 2:
            return [(vs[0], vs[1])]
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)


class ColouredPath(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[int, ...] = ()
    colour: Optional[ColourId] = None

    @model_validator(mode="after")
    def _check_shape(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"path repeats a vertex: {self.vertices}")
        if len(self.vertices) <= 1 and self.colour is not None:
            raise ValueError("paths of order <= 1 carry no colour")
        if len(self.vertices) >= 2 and self.colour is None:
            raise ValueError("paths with an edge need a colour")
        return self

    @classmethod
    def of(cls, vertices: Iterable[int], colour: Optional[ColourId] = None) -> "ColouredPath":
        vs = tuple(vertices)
        return cls(vertices=vs, colour=colour if len(vs) >= 2 else None)

    def __len__(self) -> int:
        return len(self.vertices)

    def edge_pairs(self) -> List[Tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)


class CyclePartition(BaseModel):
    model_config = ConfigDict(frozen=True)

    cycles: Tuple[Cycle, ...] = ()

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def nonempty(self) -> Tuple[Cycle, ...]:
        return tuple(c for c in self.cycles if len(c) > 0)


class VerifyOptions(BaseModel):
    require_cover: bool = True
    require_distinct_colours: bool = False
    max_cycles: Optional[int] = Field(None, ge=0)


class PartitionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    failure_reason: Optional[FailureReason] = None
    cycle_count: int
    nonempty_count: int
    colours_used: Tuple[ColourId, ...] = ()
    detail: Optional[str] = None

    @model_validator(mode="after")
    def _valid_iff_no_reason(self):
        if self.valid != (self.failure_reason is None):
            raise ValueError("valid must hold exactly when no failure reason is set")
        return self


# ================================
# INSTANCE STRUCTURES
# ================================
class TriConfig(BaseModel):
    """Three-part 2-local structure; ``colours`` are the ids of colours 1, 2, 3."""

    model_config = ConfigDict(frozen=True)

    v12: Tuple[int, ...]
    v13: Tuple[int, ...]
    v23: Tuple[int, ...]
    colours: Tuple[ColourId, ColourId, ColourId]

    def part_missing(self, k: int) -> Tuple[int, ...]:
        """The part that never sees colours[k]: index 0 -> V23, 1 -> V13, 2 -> V12."""
        return (self.v23, self.v13, self.v12)[k]


class TriangleCycleWitness(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=3)
    u: Tuple[int, ...]
    v: Tuple[int, ...]
    colour: ColourId

    @model_validator(mode="after")
    def _check_sizes(self):
        if len(self.u) != self.k or len(self.v) != self.k:
            raise ValueError("triangle cycle needs k cycle vertices and k apexes")
        if len(set(self.u) | set(self.v)) != 2 * self.k:
            raise ValueError("triangle cycle vertices must be distinct")
        return self


class OracleBudget(BaseModel):
    """Envelope for exact search; ``max_n`` is clamped to ORACLE_HARD_CAP at use."""

    max_n: int = Field(default_factory=lambda: settings.ORACLE_MAX_N, ge=0)
    time_limit: Optional[float] = Field(default_factory=lambda: settings.ORACLE_TIME_LIMIT)

    @classmethod
    def default(cls) -> "OracleBudget":
        return cls()

    @property
    def effective_max_n(self) -> int:
        return min(self.max_n, settings.ORACLE_HARD_CAP)


# ================================
# LEMMA PLUMBING
# ================================
class PathPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    p_first: ColouredPath
    p_second: ColouredPath


class ShrinkState(BaseModel):
    a_sets: List[Tuple[int, ...]] = []
    b_reps: List[int] = []
    colours: List[ColourId] = []
    b_partition: Dict[ColourId, Tuple[int, ...]] = {}
    a_prime: Tuple[int, ...] = ()


class PatchResult(BaseModel):
    cycles: Tuple[Cycle, ...] = ()
    a_used: Tuple[int, ...] = ()
    state: Optional[ShrinkState] = None
    aux_edges: Dict[ColourId, Tuple[Tuple[int, int], ...]] = {}


# ================================
# SOLVER PLUMBING
# ================================
class StructureDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["all_seeing", "tri_config"]
    alpha: Optional[ColourId] = None
    config: Optional[TriConfig] = None


class PipelineParams(BaseModel):
    c_pipeline: float = Field(default_factory=lambda: settings.PIPELINE_C, gt=0)
    tk_min: int = Field(default_factory=lambda: settings.PIPELINE_TK_MIN, ge=3)
    ratio_exp: Optional[int] = Field(None, gt=0)
    fallback: Literal["greedy"] = "greedy"

    def gate_exponent(self, r: int) -> int:
        return self.ratio_exp if self.ratio_exp is not None else r + 3

    def max_rounds(self, r: int) -> int:
        return ceil(self.c_pipeline * r * r * ceil(log2(r + 1)))

    def cycle_bound(self, r: int) -> int:
        return self.max_rounds(r) + r * r + 1

    def fallback_bound(self, n: int, r: int) -> int:
        """Greedy long cycles shrink the remainder by 1/2r per round."""
        return ceil(2 * r * log(n)) + r if n > 1 else r


class TraceEvent(BaseModel):
    stage: str
    message: str
    data: Dict[str, Any] = {}


class SolveTrace(BaseModel):
    events: List[TraceEvent] = []

    def record(self, stage: str, message: str, **data: Any) -> None:
        self.events.append(TraceEvent(stage=stage, message=message, data=data))

    @property
    def fallbacks(self) -> int:
        return sum(1 for e in self.events if e.stage == "fallback")

    def stages(self) -> List[str]:
        return [e.stage for e in self.events]

    def summary(self) -> str:
        return ";".join(dict.fromkeys(self.stages()))

    def as_lines(self) -> List[str]:
        lines = []
        for e in self.events:
            extra = " ".join(f"{k}={v}" for k, v in e.data.items())
            lines.append(f"[{e.stage}] {e.message}" + (f" {extra}" if extra else ""))
        return lines
