# hypothesis strategies for coloured complete graphs
import networkx as nx
from hypothesis import strategies as st

from cyclecover.instances import gen_random_local, gen_random_two_coloured
from cyclecover.schemas import EdgeColouring


@st.composite
def colourings(draw, min_n: int = 0, max_n: int = 7, max_colours: int = 4) -> EdgeColouring:
    n = draw(st.integers(min_n, max_n))
    colours = draw(st.lists(st.integers(0, max_colours - 1), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return EdgeColouring(n=n, colours=tuple(colours))


@st.composite
def local_colourings(draw, r: int = 2, min_n: int = 0, max_n: int = 8, max_colours: int = 5) -> EdgeColouring:
    n = draw(st.integers(min_n, max_n))
    s = draw(st.integers(1, max_colours))
    seed = draw(st.integers(0, 2 ** 32))
    return gen_random_local(n, r, s, seed)


@st.composite
def two_coloured(draw, min_n: int = 1, max_n: int = 8) -> EdgeColouring:
    return gen_random_two_coloured(draw(st.integers(min_n, max_n)), draw(st.integers(0, 2 ** 32)))


@st.composite
def graphs(draw, max_n: int = 10) -> nx.Graph:
    n = draw(st.integers(0, max_n))
    p = draw(st.sampled_from([0.2, 0.5, 0.8]))
    return nx.gnp_random_graph(n, p, seed=draw(st.integers(0, 2 ** 32)))


def rainbow(n: int) -> EdgeColouring:
    """K_n with every edge in its own colour."""
    return EdgeColouring(n=n, colours=tuple(range(n * (n - 1) // 2)))
