from .schemas import (
    Cycle,
    ColouredPath,
    CyclePartition,
    EdgeColouring,
    OracleBudget,
    PartitionReport,
    PipelineParams,
    SolveTrace,
    TriConfig,
    VerifyOptions,
)

__all__ = [
    "Cycle",
    "ColouredPath",
    "CyclePartition",
    "EdgeColouring",
    "OracleBudget",
    "PartitionReport",
    "PipelineParams",
    "SolveTrace",
    "TriConfig",
    "VerifyOptions",
]
