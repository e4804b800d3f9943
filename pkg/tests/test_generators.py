import hashlib
import json
from collections import Counter
from pathlib import Path

import networkx as nx
import pytest

from expanderhyp import all_pairs_distances, emit, load_graph
from expanderhyp.generators import (
    KINDS,
    FamilySpec,
    GenerationError,
    Xoshiro256,
    generate,
    generate_document,
    margulis,
    random_regular,
    splitmix64,
)
from expanderhyp.hyperbolicity import delta_fourpoint_exact, delta_interval_lower, delta_thin_exact

import oracles

FIXTURES = Path(__file__).parent / "fixtures"


def test_splitmix64_reference_vector():
    state, out = 1234567, []
    for _ in range(5):
        state, z = splitmix64(state)
        out.append(z)
    assert out == [6457827717110365317, 3203168211198807973, 9817491932198370423,
                   4593380528125082431, 16408922859458223821]


def test_xoshiro_reference_vector():
    rng = Xoshiro256(0)
    rng.s = [1, 2, 3, 4]
    assert [rng.next_u64() for _ in range(4)] == [11520, 0, 1509978240, 1215971899390074240]


def test_below_is_in_range_and_roughly_uniform():
    rng = Xoshiro256(99)
    counts = Counter(rng.below(6) for _ in range(6000))
    assert set(counts) == set(range(6))
    assert all(800 < c < 1200 for c in counts.values())
    with pytest.raises(ValueError):
        rng.below(0)


def test_shuffle_is_permutation():
    rng = Xoshiro256(5)
    items = list(range(50))
    rng.shuffle(items)
    assert sorted(items) == list(range(50)) and items != list(range(50))


def test_cycle_example():
    g = generate(FamilySpec("cycle", {"n": 6}))
    assert g.n == 6 and set(g.degrees.tolist()) == {2}


@pytest.mark.parametrize("seed", [0, 1, 2, 12345])
def test_random_regular_4_3_is_k4(seed):
    g = random_regular(4, 3, seed)
    assert g.edges() == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_random_regular_errors():
    with pytest.raises(ValueError, match="odd"):
        random_regular(5, 3, 1)
    with pytest.raises(ValueError):
        random_regular(4, 4, 1)


def test_rejection_cap(monkeypatch):
    import expanderhyp.generators as gen

    monkeypatch.setattr(gen, "REGULAR_ATTEMPTS", 1)
    # a simple 5-regular matching on 6 vertices is K6, which the pairing model rarely hits
    with pytest.raises(GenerationError):
        for seed in range(20):
            random_regular(6, 5, seed)


@pytest.mark.parametrize("n, d", [(8, 3), (16, 3), (48, 3), (30, 4), (20, 5), (100, 3)])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_random_regular_simple_and_regular(n, d, seed):
    g = random_regular(n, d, seed)
    assert set(g.degrees.tolist()) == {d}
    edges = g.edges()
    assert len(edges) == len(set(edges)) == n * d // 2
    assert all(u != v for u, v in edges)
    assert nx.is_regular(nx.Graph(edges))


def test_golden_documents():
    frozen = json.loads((FIXTURES / "golden_emit.json").read_text())
    for key, digest in frozen.items():
        kind, params, seed = key.split("|")
        doc = generate_document(FamilySpec(kind, json.loads(params), int(seed)))
        assert hashlib.sha256(doc.encode()).hexdigest() == digest, key
        assert generate_document(FamilySpec(kind, json.loads(params), int(seed))) == doc


def test_different_seeds_differ():
    assert emit(random_regular(32, 3, 1)) != emit(random_regular(32, 3, 2))


@pytest.mark.parametrize("m", [2, 3, 4, 7, 10])
def test_margulis_shape(m):
    g = margulis(m)
    assert g.n == m * m
    assert set(g.degrees.tolist()) == {8}
    assert load_graph(emit(g)) == g


def test_margulis_neighbors_of_origin_neighbor():
    # (1, 2) in Z_5 x Z_5 has id 7
    g = margulis(5)
    expect = sorted([3 * 5 + 2, 4 * 5 + 2, 1 * 5 + 3, 1 * 5 + 1, 2 * 5 + 2, 0 * 5 + 2, 1 * 5 + 3,
                     1 * 5 + 1])
    assert list(g.adjacency[7]) == expect


@pytest.mark.parametrize("k", range(0, 7))
def test_hypercube_diameter(k):
    g = generate(FamilySpec("hypercube", {"n": k}))
    assert g.n == 2**k and all_pairs_distances(g).diameter == k
    if k >= 1:
        assert nx.is_isomorphic(nx.Graph(oracles.to_nx(g)), nx.hypercube_graph(k))


@pytest.mark.parametrize("n", range(3, 20))
def test_cycle_diameter(n):
    assert all_pairs_distances(generate(FamilySpec("cycle", {"n": n}))).diameter == n // 2


@pytest.mark.parametrize("b, depth", [(2, 3), (3, 2), (1, 5), (4, 1)])
def test_tree_is_zero_hyperbolic(b, depth):
    g = generate(FamilySpec("tree", {"b": b, "depth": depth}))
    assert nx.is_tree(nx.Graph(oracles.to_nx(g))) or g.n == 1
    dm = all_pairs_distances(g)
    assert delta_fourpoint_exact(dm)[0] == delta_interval_lower(dm)[0] == 0
    assert delta_thin_exact(g, dm)[0] == 0


def test_grid_and_random_tree():
    g = generate(FamilySpec("grid", {"rows": 3, "cols": 5}))
    assert nx.is_isomorphic(nx.Graph(oracles.to_nx(g)), nx.grid_2d_graph(3, 5))
    t = generate(FamilySpec("random-tree", {"n": 30}, 4))
    assert nx.is_tree(nx.Graph(oracles.to_nx(t)))


def test_spec_validation():
    with pytest.raises(ValueError, match="missing"):
        generate(FamilySpec("grid", {"rows": 3}))
    with pytest.raises(ValueError, match="unknown"):
        generate(FamilySpec("petersen", {}))
    with pytest.raises(ValueError, match="cap"):
        generate(FamilySpec("tree", {"b": 2, "depth": 20}))
    assert FamilySpec("random-regular", {"n": 64, "d": 3}, 1).label() == "d=3;n=64"
    assert "random-tree" in KINDS
