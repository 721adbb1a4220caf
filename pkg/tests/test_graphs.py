from math import comb
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from cvflab.errors import GenerationError, UsageError
from cvflab.graphs import (GraphSpec, generate, parse_edge_list, read_edge_list, write_edge_list, _random_regular)
from cvflab.program import CommGraph

GOLDEN = Path(__file__).parent / "golden"


def test_ring_five_is_the_cycle():
    g = generate(GraphSpec("ring", 5))
    assert g.edges() == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    assert all(g.degree(j) == 2 for j in range(5))


def test_random_regular_4_3_is_k4():
    g = generate(GraphSpec("random-regular", 4, degree=3, seed=1))
    assert g.edges() == [(u, v) for u in range(4) for v in range(u + 1, 4)]


def test_power_law_golden(tmp_path):
    g = generate(GraphSpec("power-law", 6, attach=2, seed=7))
    assert len(g.edges()) == comb(3, 2) + 2 * (6 - 3)
    degrees = [g.degree(j) for j in range(6)]
    assert max(degrees) > min(degrees)
    out = write_edge_list(g, tmp_path / "g.txt")
    assert out.read_bytes() == (GOLDEN / "power_law_n6_m2_seed7.txt").read_bytes()


@pytest.mark.parametrize("spec", [
    dict(topology="random-regular", n=4, degree=5),
    dict(topology="random-regular", n=5, degree=3),
    dict(topology="random-regular", n=6, degree=1),
    dict(topology="random-regular", n=6),
    dict(topology="power-law", n=5, attach=5),
    dict(topology="power-law", n=5, attach=0),
    dict(topology="ring", n=2),
    dict(topology="grid", n=9),
    dict(topology="ring", n=5, seed=-1),
])
def test_infeasible_specs_are_usage_errors(spec):
    with pytest.raises(UsageError):
        GraphSpec(**spec)


def test_pairing_exhaustion_is_generation_error(monkeypatch):
    import cvflab.graphs as graphs
    monkeypatch.setattr(graphs, "_pairing", lambda n, d, rng: None)
    with pytest.raises(GenerationError):
        _random_regular(8, 3, 0)


@given(st.integers(4, 24), st.integers(2, 8), st.integers(0, 2**64 - 1))
def test_random_regular_degrees_and_connectivity(n, d, seed):
    if d >= n or (n * d) % 2:
        return
    spec = GraphSpec("random-regular", n, degree=d, seed=seed)
    g = generate(spec)
    assert all(g.degree(j) == d for j in range(n))
    assert g.is_connected()
    assert generate(spec) == g


@given(st.integers(3, 30), st.integers(1, 5), st.integers(0, 2**64 - 1))
def test_power_law_invariants(n, m, seed):
    if m >= n:
        return
    g = generate(GraphSpec("power-law", n, attach=m, seed=seed))
    assert g.is_connected()
    assert len(g.edges()) == comb(m + 1, 2) + m * (n - m - 1)
    if n >= m + 3:
        degrees = [g.degree(j) for j in range(n)]
        assert max(degrees) > min(degrees)
    assert generate(GraphSpec("power-law", n, attach=m, seed=seed)) == g


def test_distinct_seeds_can_differ():
    graphs = {generate(GraphSpec("random-regular", 12, degree=3, seed=s)).edges().__repr__() for s in range(5)}
    assert len(graphs) > 1


def test_edge_list_round_trip(tmp_path):
    g = generate(GraphSpec("random-regular", 10, degree=4, seed=3))
    path = write_edge_list(g, tmp_path / "g.txt")
    text = path.read_text()
    assert text.endswith("\n") and "\r" not in text
    assert all(int(u) < int(v) for u, v in (line.split() for line in text.splitlines()))
    assert read_edge_list(path) == g


def test_edge_list_parsing_rules():
    g = parse_edge_list("# triangle\n0 1\n\n1 2  # closing\n2 0\n")
    assert g == CommGraph.ring(3)
    with pytest.raises(UsageError):
        parse_edge_list("0 1 2\n")
    with pytest.raises(UsageError):
        parse_edge_list("0 x\n")
    with pytest.raises(UsageError):
        parse_edge_list("0 1\n2 3\n")
    with pytest.raises(UsageError):
        parse_edge_list("")
    with pytest.raises(UsageError):
        parse_edge_list("1 1\n")
