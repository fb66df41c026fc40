# cyclecover/tests/test_solvers.py

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclecover.core import cycle_is_coloured, mean_locality, verify_partition
from cyclecover.errors import BadParams, EmptyGraph, MeanTooHigh, NotRLocal, NotTwoLocal
from cyclecover.instances import gen_mean_instance, gen_random_local, gen_tri_config, gen_triangle_cycle
from cyclecover.oracle import min_cycle_partition
from cyclecover.schemas import EdgeColouring, PipelineParams, VerifyOptions
from cyclecover.solvers import (
    close_triangle_cycle,
    find_long_mono_cycle,
    find_triangle_cycle,
    largest_mono_component,
    r_local_partition,
    structure_decompose,
    two_local_partition,
    two_mean_partition,
)

from .strategies import local_colourings, rainbow

TWO_CYCLES = VerifyOptions(require_distinct_colours=True, max_cycles=2)


# ================================
# structure
# ================================
def test_largest_component_examples():
    """✅ Ties go to the smaller colour id."""
    c, _ = gen_tri_config((2, 2, 2))
    assert largest_mono_component(c) == (0, frozenset({0, 1, 2, 3}))
    assert largest_mono_component(rainbow(3)) == (0, frozenset({0, 1}))
    assert largest_mono_component(EdgeColouring(n=1)) == (None, frozenset({0}))
    with pytest.raises(EmptyGraph):
        largest_mono_component(EdgeColouring(n=0))


def test_structure_all_seeing(mono_k4):
    """✅ A colour every vertex sees is reported as alpha."""
    dec = structure_decompose(mono_k4)
    assert dec.kind == "all_seeing" and dec.alpha == 0


def test_structure_recovers_tri_config():
    """✅ The generated three-part configuration is recovered exactly."""
    c, cfg = gen_tri_config((2, 2, 2))
    dec = structure_decompose(c)
    assert dec.kind == "tri_config"
    assert dec.config.colours == (0, 1, 2)
    assert (dec.config.v12, dec.config.v13, dec.config.v23) == (cfg.v12, cfg.v13, cfg.v23)


def test_structure_rejects_three_local(rainbow_k4):
    """❌ Rainbow K_4 is not 2-local."""
    with pytest.raises(NotTwoLocal):
        structure_decompose(rainbow_k4)


# ================================
# two-local solver
# ================================
def test_two_local_monochromatic():
    """✅ Monochromatic K_6 is a Hamilton cycle plus the empty cycle."""
    p, trace = two_local_partition(EdgeColouring.monochromatic(6))
    assert len(p.cycles[0]) == 6 and len(p.cycles[1]) == 0
    assert "decompose" in trace.stages()


def test_two_local_trivial_sizes():
    """✅ n = 0 and n = 1 still return two cycles."""
    p, _ = two_local_partition(EdgeColouring(n=0))
    assert len(p.cycles) == 2 and not p.nonempty
    p, _ = two_local_partition(EdgeColouring(n=1))
    assert p.cycles[0].vertices == (0,)


@pytest.mark.parametrize("sizes", list(product(range(1, 5), repeat=3)))
def test_two_local_tri_sweep(sizes):
    """✅ Every three-part configuration with parts up to 4 splits into two cycles without the exact fallback."""
    c, _ = gen_tri_config(sizes)
    p, trace = two_local_partition(c)
    assert len(p.cycles) == 2
    assert verify_partition(c, p, TWO_CYCLES).valid
    assert trace.fallbacks == 0


@given(st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5)), st.integers(0, 2 ** 32))
def test_two_local_random_intra_colours(sizes, seed):
    c, _ = gen_tri_config(sizes, "random", seed)
    p, trace = two_local_partition(c)
    assert verify_partition(c, p, TWO_CYCLES).valid
    assert trace.fallbacks == 0


@given(local_colourings(r=2, max_n=8))
def test_two_local_random(c):
    p, trace = two_local_partition(c)
    assert verify_partition(c, p, TWO_CYCLES).valid
    assert trace.fallbacks == 0


def test_two_local_rejects_rainbow(rainbow_k4):
    """❌ 3-local input is refused."""
    with pytest.raises(NotTwoLocal):
        two_local_partition(rainbow_k4)


# ================================
# mean solver
# ================================
@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_two_mean_instances(seed):
    """✅ Mean-2 instances with a three-colour vertex split into two cycles."""
    c = gen_mean_instance(8, seed)
    p, trace = two_mean_partition(c)
    assert verify_partition(c, p, TWO_CYCLES).valid
    assert "classify" in trace.stages()
    assert min_cycle_partition(c)[0] <= 2


def test_two_mean_single_v1_vertex():
    """✅ |V1| = 1: C1 is the singleton, spliced onto the alpha cycle of the rest."""
    # 0 sees only colour 0, hub 1 sees 0, 1, 2, the rest see 0 and one more
    c = EdgeColouring.from_function(5, lambda u, v: {(1, 2): 1, (1, 3): 2, (2, 4): 1}.get((u, v), 0))
    assert mean_locality(c) == 2
    p, trace = two_mean_partition(c)
    assert verify_partition(c, p, TWO_CYCLES).valid
    classify = next(e for e in trace.events if e.stage == "classify")
    assert classify.data["v1"] == 1 and classify.data["v3"] == 1
    splice = next(e for e in trace.events if e.stage == "lemma")
    assert splice.data["c1"] == 1
    assert 0 in p.cycles[0].vertex_set()


def test_two_mean_delegates_when_two_local():
    """✅ Without three-colour vertices the 2-local solver is used."""
    c, _ = gen_tri_config((2, 1, 2))
    p, trace = two_mean_partition(c)
    assert "delegate" in trace.stages()
    assert verify_partition(c, p, TWO_CYCLES).valid


def test_two_mean_errors(rainbow_k4):
    """❌ Mean locality 3 is refused; n = 0 is two empty cycles."""
    with pytest.raises(MeanTooHigh):
        two_mean_partition(rainbow_k4)
    p, _ = two_mean_partition(EdgeColouring(n=0))
    assert len(p.cycles) == 2


# ================================
# r-local building blocks
# ================================
def test_long_cycle_monochromatic():
    """✅ r = 1 on K_8 needs length >= 4."""
    cyc = find_long_mono_cycle(EdgeColouring.monochromatic(8), 1)
    assert len(cyc) >= 4


@pytest.mark.parametrize("seed", [3, 8, 13])
def test_long_cycle_two_local(seed):
    """✅ A 2-local K_10 holds a monochromatic cycle of length >= 3."""
    c = gen_random_local(10, 2, 4, seed)
    cyc = find_long_mono_cycle(c, 2)
    assert len(cyc) >= 3
    assert cycle_is_coloured(c, cyc)


def test_long_cycle_above_the_cap():
    """✅ K_{12,12} in one colour, cliques in the other: rotation search on 24 vertices."""
    c = EdgeColouring.from_function(24, lambda u, v: (u + v) % 2)
    cyc = find_long_mono_cycle(c, 2)
    assert len(cyc) >= 6
    assert cycle_is_coloured(c, cyc)


def test_long_cycle_errors(rainbow_k4):
    """❌ Wrong locality and empty input."""
    with pytest.raises(NotRLocal):
        find_long_mono_cycle(rainbow_k4, 2)
    with pytest.raises(EmptyGraph):
        find_long_mono_cycle(EdgeColouring(n=0), 1)


def test_close_triangle_cycle():
    """✅ Dropping apexes keeps a cycle in the planted colour."""
    c, witness = gen_triangle_cycle(3, colour=0, background=1)
    full = close_triangle_cycle(witness)
    assert len(full) == 6 and cycle_is_coloured(c, full)
    short = close_triangle_cycle(witness, [witness.v[0], 99])
    assert len(short) == 5 and cycle_is_coloured(c, short)
    ring = close_triangle_cycle(witness, witness.v)
    assert ring.vertices == witness.u


def test_find_triangle_cycle():
    """✅ T_3 is found; small or sparse inputs have none."""
    c, _ = gen_triangle_cycle(3, colour=0, background=1)
    witness = find_triangle_cycle(c)
    assert witness is not None and witness.k == 3 and witness.colour == 0
    assert cycle_is_coloured(c, close_triangle_cycle(witness))
    assert find_triangle_cycle(EdgeColouring.monochromatic(5)) is None
    assert find_triangle_cycle(rainbow(6)) is None


# ================================
# r-local pipeline
# ================================
def test_r_local_monochromatic():
    """✅ Monochromatic K_10 with r = 1 ends as a single cycle."""
    c = EdgeColouring.monochromatic(10)
    p, trace = r_local_partition(c, 1)
    assert len(p.cycles) == 1
    assert "tk" in trace.stages()


def test_r_local_above_the_cap():
    """✅ Monochromatic K_20 is closed through a planted T_10."""
    p, _ = r_local_partition(EdgeColouring.monochromatic(20), 1)
    assert len(p.cycles) == 1 and len(p.cycles[0]) == 20


def test_r_local_planted_triangle_cycle():
    """✅ T_4 with r = 2 stays within the cycle bound."""
    c, _ = gen_triangle_cycle(4)
    p, _ = r_local_partition(c, 2)
    assert verify_partition(c, p).valid
    assert len(p.cycles) <= PipelineParams().cycle_bound(2)


@given(st.integers(1, 3).flatmap(lambda r: st.tuples(st.just(r), local_colourings(r=r, max_n=9))))
def test_r_local_random(case):
    r, c = case
    params = PipelineParams()
    p, trace = r_local_partition(c, r, params)
    assert verify_partition(c, p).valid
    bound = params.cycle_bound(r) if trace.fallbacks == 0 else params.fallback_bound(c.n, r)
    assert len(p.cycles) <= bound


def test_r_local_errors(rainbow_k4):
    """❌ r < 1 and non r-local inputs."""
    with pytest.raises(BadParams):
        r_local_partition(EdgeColouring.monochromatic(3), 0)
    with pytest.raises(NotRLocal):
        r_local_partition(rainbow_k4, 2)
    p, _ = r_local_partition(EdgeColouring(n=0), 2)
    assert p.cycles == ()
