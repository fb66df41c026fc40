# cyclecover/tests/test_oracle.py

from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclecover import oracle
from cyclecover.core import cycle_is_coloured, verify_partition
from cyclecover.errors import BudgetExceeded, EmptyGraph
from cyclecover.instances import amplify, gen_random_local, gen_tri_config
from cyclecover.schemas import CyclePartition, EdgeColouring, OracleBudget, VerifyOptions

from .strategies import colourings, local_colourings, rainbow, two_coloured

DISTINCT_PAIR = VerifyOptions(require_distinct_colours=True, max_cycles=2)


def _brute_force_spanning(c, vertices, col) -> bool:
    first, *rest = vertices
    for perm in permutations(rest):
        order = [first, *perm]
        if all(c.colour(order[i], order[(i + 1) % len(order)]) == col for i in range(len(order))):
            return True
    return False


# ================================
# spanning cycles
# ================================
def test_spanning_cycle_monochromatic():
    """✅ Monochromatic K_5 has a Hamilton cycle in its colour."""
    cyc = oracle.mono_spanning_cycle(EdgeColouring.monochromatic(5, 3), range(5), 3)
    assert len(cyc) == 5 and cyc.colour == 3


def test_spanning_cycle_small_sets(rainbow_k4):
    """✅ Sets of size <= 2 are decided by the edge colour alone."""
    assert oracle.mono_spanning_cycle(rainbow_k4, [2], 0).colour is None
    assert len(oracle.mono_spanning_cycle(rainbow_k4, [], 0)) == 0
    col = rainbow_k4.colour(1, 2)
    assert oracle.mono_spanning_cycle(rainbow_k4, [1, 2], col + 1) is None
    assert oracle.mono_spanning_cycle(rainbow_k4, oracle.subset_mask([1, 2]), col).vertex_set() == {1, 2}


@given(colourings(min_n=3, max_n=7, max_colours=2))
def test_spanning_cycle_matches_permutations(c):
    for col in (0, 1):
        found = oracle.mono_spanning_cycle(c, range(c.n), col)
        assert (found is not None) == _brute_force_spanning(c, list(range(c.n)), col)
        if found is not None:
            assert cycle_is_coloured(c, found) and len(found) == c.n


def test_spanning_cycle_on_tri_parts():
    """✅ V12 + V13 of the (2,2,2) configuration agree with permutation search."""
    c, cfg = gen_tri_config((2, 2, 2))
    s = list(cfg.v12 + cfg.v13)
    found = oracle.mono_spanning_cycle(c, s, 0)
    assert (found is not None) == _brute_force_spanning(c, s, 0)


# ================================
# minimum partitions
# ================================
def test_min_partition_trivial_sizes():
    """✅ n = 0 needs nothing, a single vertex needs one cycle."""
    assert oracle.min_cycle_partition(EdgeColouring(n=0))[0] == 0
    k, p = oracle.min_cycle_partition(EdgeColouring(n=1))
    assert k == 1 and p.cycles[0].vertices == (0,)


def test_min_partition_monochromatic():
    """✅ Monochromatic K_6 is one Hamilton cycle."""
    k, p = oracle.min_cycle_partition(EdgeColouring.monochromatic(6))
    assert k == 1
    assert len(p.cycles[0]) == 6


def test_min_partition_rainbow(rainbow_k4):
    """✅ Rainbow K_4 splits into two edges."""
    k, p = oracle.min_cycle_partition(rainbow_k4)
    assert k == 2
    assert verify_partition(rainbow_k4, p).valid


@given(two_coloured(max_n=9))
def test_two_colourings_need_at_most_two(c):
    k, p = oracle.min_cycle_partition(c)
    assert k <= 2
    assert len(p.nonempty) == k
    assert verify_partition(c, p).valid


@given(colourings(min_n=1, max_n=7))
def test_min_partition_witness_is_valid(c):
    k, p = oracle.min_cycle_partition(c)
    assert len(p.cycles) == k
    assert verify_partition(c, p).valid


# ================================
# two-cycle searches
# ================================
def test_bt_all_alpha():
    """✅ All-alpha K_4 returns the alpha Hamilton cycle and the empty cycle."""
    first, second = oracle.bt_two_cycles(EdgeColouring.monochromatic(4), 0)
    assert len(first) == 4 and first.colour == 0
    assert len(second) == 0


def test_bt_single_beta_edge():
    """✅ K_2 with its edge in beta gives (empty, edge)."""
    first, second = oracle.bt_two_cycles(EdgeColouring(n=2, colours=(1,)), 0)
    assert len(first) == 0
    assert second.vertex_set() == {0, 1} and second.colour == 1


@given(two_coloured(max_n=10))
def test_bt_random_two_colourings(c):
    for literal in (False, True):
        found = oracle.bt_two_cycles(c, 0, beta_is_merged=not literal)
        assert found is not None
        p = CyclePartition(cycles=found)
        assert verify_partition(c, p, DISTINCT_PAIR).valid
        assert found[0].colour in (0, None)


@given(colourings(min_n=0, max_n=7, max_colours=3))
def test_two_cycle_partition_agrees_with_minimum(c):
    found = oracle.two_cycle_partition(c)
    if found is not None:
        assert verify_partition(c, CyclePartition(cycles=found), DISTINCT_PAIR).valid
    k, _ = oracle.min_cycle_partition(c)
    if k <= 1:
        assert found is not None


# ================================
# longest cycles and paths
# ================================
def test_longest_cycle_examples(rainbow_k4):
    """✅ K_7 is one cycle; rainbow K_4's best is a single edge."""
    assert oracle.longest_mono_cycle(EdgeColouring.monochromatic(7))[0] == 7
    length, cyc = oracle.longest_mono_cycle(rainbow_k4)
    assert length == 2 and len(cyc) == 2
    assert oracle.longest_mono_cycle(EdgeColouring(n=0))[0] == 0


def test_longest_cycle_two_local_k10():
    """✅ A random 2-local K_10 holds a monochromatic cycle of length >= 3."""
    c = gen_random_local(10, 2, 4, seed=21)
    length, cyc = oracle.longest_mono_cycle(c)
    assert length >= 3
    assert cycle_is_coloured(c, cyc) and len(cyc) == length


def test_longest_path():
    """✅ Longest colour-0 path inside a vertex subset."""
    c = EdgeColouring.from_function(5, lambda u, v: 0 if v == u + 1 else 1)
    path = oracle.longest_mono_path(c, range(5), 0)
    assert path.vertices in ((0, 1, 2, 3, 4), (4, 3, 2, 1, 0))
    assert len(oracle.longest_mono_path(c, [0, 2, 4], 0)) == 1
    assert len(oracle.longest_mono_path(c, [], 0)) == 0


def test_longest_cycle_in_graph():
    """✅ Longest cycles of plain graphs, edges counting as length 2."""
    assert len(oracle.longest_cycle_in_graph(nx.cycle_graph(6))) == 6
    assert len(oracle.longest_cycle_in_graph(nx.path_graph(4))) == 2
    assert oracle.longest_cycle_in_graph(nx.empty_graph(3)) == [0]


# ================================
# independence and robustness
# ================================
def test_independence_number():
    """✅ Edgeless, complete and cycle graphs."""
    assert oracle.independence_number(nx.empty_graph(5)) == 5
    assert oracle.independence_number(nx.complete_graph(5)) == 1
    assert oracle.independence_number(nx.cycle_graph(6)) == 3


def test_robustness_check():
    """✅ Monochromatic K_4 is robust for one cycle but not for two."""
    c = EdgeColouring.monochromatic(4)
    assert oracle.robustness_check(c, 1)
    assert not oracle.robustness_check(c, 2)
    with pytest.raises(EmptyGraph):
        oracle.robustness_check(EdgeColouring(n=0), 1)


def _minimum(c: EdgeColouring) -> int:
    return oracle.min_cycle_partition(c)[0]


def _delete(c: EdgeColouring, v: int) -> EdgeColouring:
    return c.induced(u for u in range(c.n) if u != v)


@given(colourings(min_n=1, max_n=7))
def test_deleting_a_vertex_saves_at_most_one_cycle(c):
    k = _minimum(c)
    assert all(_minimum(_delete(c, v)) >= k - 1 for v in range(c.n))


@given(local_colourings(r=2, min_n=2, max_n=8))
def test_deletion_moves_two_local_minimum_by_at_most_one(c):
    k = _minimum(c)
    assert all(abs(_minimum(_delete(c, v)) - k) <= 1 for v in range(c.n))


def test_deletion_can_cost_two_cycles():
    """✅ A colour-0 Hamilton cycle with rainbow chords: deleting a vertex leaves a bare path."""
    chords = [(u, v) for u in range(6) for v in range(u + 1, 6) if (v - u) % 6 not in (1, 5)]
    c = EdgeColouring.from_function(6, lambda u, v: chords.index((u, v)) + 1 if (u, v) in chords else 0)
    assert _minimum(c) == 1
    assert _minimum(_delete(c, 0)) == 3


def test_amplified_seed_needs_one_more_cycle():
    """✅ Monochromatic K_2 is robust for one cycle; its amplification needs two."""
    c = EdgeColouring.monochromatic(2)
    assert oracle.robustness_check(c, 1)
    assert _minimum(amplify(c)) == 2


@given(colourings(min_n=2, max_n=6), st.sampled_from(["least_absent", "fresh"]))
def test_amplifier_raises_robust_minimum(c, rule):
    s = min([_minimum(c)] + [_minimum(_delete(c, v)) for v in range(c.n)])
    assert oracle.robustness_check(c, s)
    assert not oracle.robustness_check(c, s + 1)
    assert _minimum(amplify(c, rule)) >= s + 1


def test_budget_is_enforced():
    """❌ Inputs above the cap raise BudgetExceeded, also for clamped explicit caps."""
    with pytest.raises(BudgetExceeded):
        oracle.min_cycle_partition(EdgeColouring.monochromatic(6), OracleBudget(max_n=5))
    with pytest.raises(BudgetExceeded):
        oracle.longest_mono_cycle(rainbow(31), OracleBudget(max_n=100))
