# cyclecover/tests/test_config.py

from cyclecover.config import Settings
from cyclecover.schemas import OracleBudget, PipelineParams


def test_defaults():
    """✅ Default oracle envelope."""
    s = Settings(_env_file=None)
    assert s.ORACLE_MAX_N == 14
    assert s.ORACLE_HARD_CAP == 30
    assert s.ORACLE_TIME_LIMIT is None


def test_env_override(monkeypatch):
    """✅ CYCLECOVER_* environment variables override defaults."""
    monkeypatch.setenv("CYCLECOVER_ORACLE_MAX_N", "9")
    monkeypatch.setenv("CYCLECOVER_PIPELINE_C", "3.5")
    s = Settings(_env_file=None)
    assert s.ORACLE_MAX_N == 9
    assert s.PIPELINE_C == 3.5


def test_budget_is_clamped_to_hard_cap():
    """✅ Explicit caps above the hard cap are clamped."""
    assert OracleBudget(max_n=100).effective_max_n == 30
    assert OracleBudget(max_n=10).effective_max_n == 10


def test_pipeline_params():
    """✅ Round budget and cycle bound for r = 2 with c = 2."""
    params = PipelineParams(c_pipeline=2.0)
    assert params.max_rounds(2) == 16
    assert params.cycle_bound(2) == 21
    assert params.gate_exponent(2) == 5
    assert PipelineParams(ratio_exp=3).gate_exponent(2) == 3


def test_fallback_bound():
    """✅ ceil(2r ln n) + r, and r alone for n <= 1."""
    params = PipelineParams()
    assert params.fallback_bound(10, 2) == 12
    assert params.fallback_bound(2, 1) == 3
    assert params.fallback_bound(1, 3) == 3
