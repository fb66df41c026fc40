import json
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from cyclecover.errors import ConfigError
from cyclecover.schemas import OracleBudget

Family = Literal[
    "random-local", "tri-sweep", "mean", "triangle-cycle", "fano", "patch", "posa", "merge-bip", "merge-tri", "amplifier"
]
SolverName = Literal["two-local", "mean", "r-local", "lemma"]
Check = Literal["oracle", "verifier"]

LEMMA_FAMILIES = ("patch", "posa", "merge-bip", "merge-tri", "amplifier")


# ================================
# EXPERIMENT CONFIG
# ================================
class ExperimentConfig(BaseModel):
    family: Family = "random-local"
    solver: SolverName = "two-local"
    count: int = Field(1, ge=1)
    n_min: int = Field(2, ge=0)
    n_max: int = Field(12, ge=0)
    r: int = Field(2, ge=1)
    s: int = Field(3, ge=1)
    sweep_max: int = Field(4, ge=1)
    seed: int = 0
    checks: List[Check] = ["verifier"]
    output: Optional[str] = None
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check_range(self):
        if self.n_min > self.n_max:
            raise ValueError(f"n_min {self.n_min} exceeds n_max {self.n_max}")
        if (self.family in LEMMA_FAMILIES) != (self.solver == "lemma"):
            raise ValueError(f"family {self.family} does not run with solver {self.solver}")
        if "oracle" in self.checks or self.family in ("posa", "amplifier"):
            cap = OracleBudget.default().effective_max_n
            largest = {"tri-sweep": 3 * self.sweep_max, "amplifier": self.n_max + 1}.get(self.family, self.n_max)
            if largest > cap:
                raise ValueError(f"instances up to n={largest} exceed the oracle cap {cap}")
        return self

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        try:
            return cls(**json.loads(Path(path).read_text(encoding="utf-8")))
        except (ValidationError, json.JSONDecodeError) as e:
            raise ConfigError(f"invalid experiment config {path}: {e}")

    @classmethod
    def build(cls, **fields) -> "ExperimentConfig":
        try:
            return cls(**fields)
        except ValidationError as e:
            raise ConfigError(str(e))


# ================================
# REPORT ROWS AND SUMMARIES
# ================================
class ExperimentRow(BaseModel):
    index: int
    family: Family
    seed: int
    n: int
    r: int
    solver: SolverName
    cycles: Optional[int] = None
    nonempty: Optional[int] = None
    oracle_min: Optional[int] = None
    valid: bool = False
    error: Optional[str] = None
    trace: str = ""
    bound: Optional[int] = None


class ExperimentSummary(BaseModel):
    output: str
    instances: int
    failures: int
    max_cycles: int
    mean_cycles: float
    max_oracle_min: Optional[int] = None


class RamseyProbeResult(BaseModel):
    r: int
    l: int
    n: int
    samples: int
    all_found: bool
    min_cycle_len_observed: int
    warning: bool = False
    saved: List[str] = []

    @model_validator(mode="after")
    def _found_means_long(self):
        if self.all_found and self.samples and self.min_cycle_len_observed < self.l:
            raise ValueError("all_found requires every sample to reach length l")
        return self
