import itertools

import numpy as np
import pytest

from ipstruct import (
    Graph,
    StochasticChannel,
    ValidationError,
    adjacency_graph,
    graph_to_channel,
    max_zero_error_code,
    maximum_independent_sets,
    zoo,
)


def brute_force_alpha(g: Graph) -> int:
    """Reference independence number by subset enumeration (n <= 16)."""
    best = 0
    for size in range(g.n, 0, -1):
        for subset in itertools.combinations(range(g.n), size):
            chosen = set(subset)
            if all((i, j) not in g.edges
                   for i, j in itertools.combinations(sorted(chosen), 2)):
                return size
    return best


def all_graphs(n):
    possible = list(itertools.combinations(range(n), 2))
    for bits in range(2 ** len(possible)):
        edges = [possible[k] for k in range(len(possible)) if bits >> k & 1]
        yield Graph.from_edges(n, edges)


def random_graph(n, p, rng):
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def test_graph_validation():
    with pytest.raises(ValidationError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValidationError):
        Graph.from_edges(2, [(0, 5)])
    g = Graph.from_edges(3, [(2, 0)])
    assert (0, 2) in g.edges
    assert g.neighbors(0) == {2}
    assert g.neighbors(1) == set()


def test_adjacency_graph_cyclic_four():
    g = adjacency_graph(zoo.fixture("cyclic_four"))
    assert g.n == 4
    assert g.edges == frozenset({(0, 1), (1, 2), (2, 3), (0, 3)})


def test_adjacency_graph_two_code():
    g = adjacency_graph(zoo.fixture("two_code_classical"))
    assert g.edges == frozenset({(0, 2), (0, 3), (1, 2), (1, 3)})


def test_adjacency_ignores_sub_threshold_overlap():
    m = np.array([[1.0, 0.0], [0.0, 1.0]])
    g = adjacency_graph(StochasticChannel(matrix=m))
    assert g.edges == frozenset()


def test_max_code_known_cases():
    assert max_zero_error_code(zoo.fixture("cyclic_four")) == (0, 2)
    assert len(max_zero_error_code(zoo.fixture("two_code_classical"))) == 2
    ident = StochasticChannel(matrix=np.eye(5))
    assert max_zero_error_code(ident) == (0, 1, 2, 3, 4)
    # complete confusion: any single symbol
    uniform = StochasticChannel(matrix=np.full((3, 3), 1.0 / 3.0))
    assert max_zero_error_code(uniform) == (0,)


def test_max_code_is_lexicographically_least():
    # C5 has maximum independent sets {0,2},{0,3},{1,3},{1,4},{2,4}
    m = np.zeros((5, 5))
    for k in range(5):
        m[k, k] = 0.5
        m[(k + 1) % 5, k] = 0.5
    sc = StochasticChannel(matrix=m)
    assert max_zero_error_code(sc) == (0, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_exact_solver_exhaustive_small(n):
    for g in all_graphs(n):
        sets = maximum_independent_sets(g)
        alpha = brute_force_alpha(g)
        assert all(len(s) == alpha for s in sets)
        # every reported set is independent
        for s in sets:
            assert all((i, j) not in g.edges
                       for i, j in itertools.combinations(s, 2))


def test_exact_solver_random_oracle():
    rng = np.random.default_rng(17)
    for _ in range(50):
        n = int(rng.integers(2, 11))
        g = random_graph(n, float(rng.uniform(0.1, 0.7)), rng)
        sets = maximum_independent_sets(g)
        assert len(sets[0]) == brute_force_alpha(g)


def test_maximum_independent_sets_two_code():
    g = adjacency_graph(zoo.fixture("two_code_classical"))
    assert maximum_independent_sets(g) == [(0, 1), (2, 3)]


def test_vertex_guards():
    big = Graph.from_edges(31, [])
    with pytest.raises(ValidationError):
        max_zero_error_code(graph_to_channel(big))
    medium = Graph.from_edges(21, [])
    with pytest.raises(ValidationError):
        maximum_independent_sets(medium)


def test_graph_to_channel_roundtrip_exhaustive():
    for n in (1, 2, 3, 4):
        for g in all_graphs(n):
            sc = graph_to_channel(g)
            back = adjacency_graph(sc)
            assert back.n == g.n and back.edges == g.edges


def test_graph_to_channel_roundtrip_random():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        g = random_graph(n, float(rng.uniform(0.0, 0.8)), rng)
        assert adjacency_graph(graph_to_channel(g)).edges == g.edges


def test_graph_to_channel_is_column_stochastic():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    sc = graph_to_channel(g)
    np.testing.assert_allclose(sc.matrix.sum(axis=0), 1.0, atol=1e-12)
