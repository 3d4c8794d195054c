from collections import Counter
from itertools import product

import numpy as np
import pytest

from conftest import tree_counts, within_sigmas
from src.arborescence.Arborescence import Arborescence
from src.arborescence.QuotientDigraph import QuotientDigraph
from src.arborescence.completion import (
    build_quotient,
    complete,
    count_arborescences,
    extract,
    forget_boundary_arcs,
    orient_tree,
    sample_quotient_arborescence,
    to_tree,
    validate_spanning_tree,
)
from src.arborescence.sampler import TreeSampler, sample_batch, sample_tree
from src.graph.Graph import VertexSubset
from src.graph.graph_utils import complete_bipartite_graph, complete_graph, grid_graph
from src.models.Errors import (
    ArborescenceError,
    DecompositionError,
    MalformedForestError,
    NotASpanningTreeError,
)
from src.oracle.matrix_tree import count_spanning_trees
from src.oracle.uniformity import total_variation, uniformity_test
from src.utils.RandomStream import RandomStream, spawn_seeds
from src.utils.settings import TV_THRESHOLD
from src.walk.PartialForest import PartialForest
from src.walk.walker import aldous_broder, simulate_shortcut


def _digraph(candidates):
    size = 1 + max(max(arc) for arc in candidates)
    return QuotientDigraph(
        roots=tuple(range(size)),
        members=tuple((x,) for x in range(size)),
        candidates={arc: tuple(edges) for arc, edges in sorted(candidates.items())},
    )


def _complete_digraph(size, multiplicity=lambda j, l: 1):
    return _digraph(
        {
            (j, l): [(100 * j + k, l) for k in range(multiplicity(j, l))]
            for j in range(size)
            for l in range(size)
            if j != l
        }
    )


def _brute_force_count(q, root=0):
    """
    Zbroj umnožaka višestrukosti po svim izborima ulaznog luka koji dosežu korijen.
    """
    nodes = [x for x in range(q.size) if x != root]
    total = 0
    for sources in product(*(q.sources(x) for x in nodes)):
        parent = dict(zip(nodes, sources))
        reaches = True
        for x in nodes:
            seen = set()
            while x != root and reaches:
                if x in seen:
                    reaches = False
                seen.add(x)
                x = parent[x]
        if reaches:
            weight = 1
            for x, y in parent.items():
                weight *= q.multiplicity(y, x)
            total += weight
    return total


def test_extract_from_transcript():
    forest = PartialForest.from_transcript(4, [2, 0, 2, 1, 3, 1])
    arborescence = extract(forest)

    assert forest.is_complete
    assert arborescence.root == 2
    assert arborescence.parent == (2, 2, -1, 1)
    assert arborescence.arcs() == [(2, 0), (2, 1), (1, 3)]


def test_extract_rejects_gaps():
    with pytest.raises(ArborescenceError):
        extract(PartialForest(3, 0, [(0, 1)], gaps=[2]))


@pytest.mark.parametrize(
    "arcs, gaps",
    [
        ([(0, 1), (2, 1)], ()),
        ([(1, 0)], ()),
        ([(0, 1)], [1]),
        ([(0, 1)], [0]),
        ([(0, 5)], ()),
    ],
)
def test_malformed_forests(arcs, gaps):
    with pytest.raises(MalformedForestError):
        PartialForest(3, 0, arcs, gaps)


def test_arborescence_rejects_cycles():
    with pytest.raises(ArborescenceError):
        Arborescence(3, 0, [-1, 2, 1])
    with pytest.raises(ArborescenceError):
        Arborescence(3, 0, [-1, 0])


def test_forget_boundary_arcs():
    forest = PartialForest(5, 0, [(0, 1), (1, 2), (2, 3), (3, 4)])
    forgotten = forget_boundary_arcs(forest, VertexSubset(n=5, ids=[0, 2, 4]))

    assert forgotten.gaps == frozenset({2, 4})
    assert forgotten.parent == {1: 0, 3: 2}


def test_quotient_on_cycle(make_cycle):
    graph = make_cycle(6)
    forest = PartialForest(6, 0, [(0, 1), (1, 2), (3, 4)], gaps=[3, 5])
    q = build_quotient(forest, graph)

    assert q.roots == (0, 3, 5)
    assert q.members == ((0, 1, 2), (3, 4), (5,))
    assert q.candidates == {
        (0, 1): ((2, 3),),
        (0, 2): ((0, 5),),
        (1, 2): ((4, 5),),
    }
    assert q.sources(2) == [0, 1]
    assert count_arborescences(q) == 2


def test_quotient_multiplicity(k4):
    forest = PartialForest(4, 0, [(0, 1), (1, 2)], gaps=[3])
    q = build_quotient(forest, k4)

    assert q.multiplicity(0, 1) == 3
    assert count_arborescences(q) == 3


def test_quotient_errors(make_cycle):
    graph = make_cycle(6)
    with pytest.raises(ArborescenceError):
        build_quotient(PartialForest.from_transcript(6, [0, 1, 2, 3, 4, 5]), graph)
    with pytest.raises(ArborescenceError):
        build_quotient(
            PartialForest(6, 0, [(0, 1), (1, 2), (3, 4)], gaps=[3, 5]),
            graph,
            boundary=VertexSubset(n=6, ids=[3]),
        )
    with pytest.raises(MalformedForestError):
        build_quotient(PartialForest(6, 0, [(0, 1)], gaps=[3]), graph)


def test_known_arborescence_counts():
    assert count_arborescences(_complete_digraph(4)) == 16
    assert count_arborescences(_digraph({(0, 1): [(0, 1)], (1, 2): [(1, 2)], (2, 0): [(2, 0)]})) == 1
    assert count_arborescences(_digraph({(1, 2): [(1, 2)], (2, 1): [(2, 1)]})) == 0


@pytest.mark.parametrize("size", [2, 3, 4, 5])
def test_counts_match_brute_force(size):
    q = _complete_digraph(size, multiplicity=lambda j, l: 1 + (j + 2 * l) % 3)

    assert count_arborescences(q) == _brute_force_count(q)
    for root in range(size):
        assert count_arborescences(q, root) == _brute_force_count(q, root)


def test_count_telescopes_over_sources():
    q = _complete_digraph(4, multiplicity=lambda j, l: 1 + j)
    total = count_arborescences(q)

    for x in (1, 2, 3):
        assert sum(count_arborescences(q, 0, {x: y}) for y in q.sources(x)) == total


def test_parallel_edges_are_chosen_evenly():
    q = _digraph({(0, 1): [(5, 1), (6, 1)]})
    rng = RandomStream(13)
    draws = 4000
    chosen = Counter(sample_quotient_arborescence(q, 0, rng)[1] for _ in range(draws))

    assert within_sigmas(chosen[(5, 1)], draws, 0.5)


def test_quotient_sampling_is_uniform():
    # 5 konkretnih arborescencija, (0, 1) ima dva paralelna brida
    q = _digraph(
        {
            (0, 1): [(10, 11), (12, 11)],
            (0, 2): [(10, 21)],
            (1, 2): [(11, 21)],
            (2, 1): [(21, 11)],
        }
    )
    assert count_arborescences(q) == 5

    rng = RandomStream(31)
    draws = 5000
    counts = Counter(
        tuple(sorted(sample_quotient_arborescence(q, 0, rng).items()))
        for _ in range(draws)
    )

    assert len(counts) == 5
    assert total_variation(counts, {key: 1 for key in counts}) <= 0.05


def test_forced_chain():
    q = _digraph({(0, 1): [(0, 1)], (1, 2): [(1, 2)], (2, 3): [(2, 3)]})
    choices = sample_quotient_arborescence(q, 0, RandomStream(0))

    assert choices == {1: (0, 1), 2: (1, 2), 3: (2, 3)}


def test_sampling_without_arborescence_fails():
    q = _digraph({(1, 2): [(1, 2)], (2, 1): [(2, 1)]})
    with pytest.raises(ArborescenceError):
        sample_quotient_arborescence(q, 0, RandomStream(0))


def test_complete_fills_gaps(make_cycle):
    graph = make_cycle(6)
    forest = PartialForest(6, 0, [(0, 1), (1, 2), (3, 4)], gaps=[3, 5])
    q = build_quotient(forest, graph)
    arborescence = complete(forest, sample_quotient_arborescence(q, 0, RandomStream(2)))

    assert arborescence.root == 0
    assert arborescence.parent[3] == 2
    assert arborescence.parent[5] in (0, 4)
    validate_spanning_tree(graph, to_tree(arborescence))


@pytest.mark.parametrize(
    "choices",
    [
        [(2, 3)],
        [(2, 3), (4, 5), (0, 5)],
        [(0, 1), (2, 3), (4, 5)],
        [(4, 3), (4, 5)],
    ],
)
def test_complete_errors(choices):
    forest = PartialForest(6, 0, [(0, 1), (1, 2), (3, 4)], gaps=[3, 5])
    with pytest.raises(ArborescenceError):
        complete(forest, choices)


def test_orient_tree_round_trip(grid33):
    rng = RandomStream(6)
    for _ in range(10):
        arborescence = aldous_broder(grid33, rng)
        assert orient_tree(grid33.n, to_tree(arborescence), arborescence.root) == arborescence


def test_orient_tree_disconnected():
    with pytest.raises(ArborescenceError):
        orient_tree(4, [(0, 1), (2, 3)], 0)


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 1), (1, 2)],
        [(0, 1), (1, 2), (0, 2)],
        [(0, 1), (1, 0), (2, 3)],
        [(0, 1), (1, 2), (2, 7)],
    ],
)
def test_validate_spanning_tree_errors(k4, edges):
    with pytest.raises(NotASpanningTreeError):
        validate_spanning_tree(k4, edges)


def test_validate_spanning_tree_canonical(k4):
    assert validate_spanning_tree(k4, [(3, 2), (1, 0), (2, 0)]) == [(0, 1), (0, 2), (2, 3)]


def test_sampler_setup(k4, k4_strong, cycle5, cycle5_weak):
    vertex = TreeSampler(k4, "shortcut-vertex", decomposition=k4_strong, eps=1e-6)
    edge = TreeSampler(cycle5, "shortcut-edge", decomposition=cycle5_weak, delta=0.1)

    assert vertex.walk_mode.value == "vertex-shortcut"
    assert vertex.tables.mode.value == "Q"
    assert len(vertex.tables) == 3
    assert edge.tables.mode.value == "P"
    assert edge.eps == pytest.approx(0.1 / 25)
    assert TreeSampler(k4, "wilson").decomposition is None

    with pytest.raises(DecompositionError):
        TreeSampler(cycle5, "shortcut-vertex", decomposition=cycle5_weak)


@pytest.mark.parametrize("algorithm", ["aldous-broder", "wilson", "shortcut-edge", "shortcut-vertex"])
def test_every_algorithm_gives_spanning_trees(grid33, algorithm):
    sampler = TreeSampler(grid33, algorithm, phi=0.25)
    rng = RandomStream(1)
    for _ in range(20):
        tree, stats = sample_tree(sampler, rng)
        assert validate_spanning_tree(grid33, tree) == tree
        assert stats.algorithm


@pytest.mark.statistical
def test_vertex_shortcut_uniform_on_k4(k4, k4_strong):
    sampler = TreeSampler(k4, "shortcut-vertex", decomposition=k4_strong, eps=1e-6)
    rng = RandomStream(42)
    samples = [sample_tree(sampler, rng)[0] for _ in range(8000)]
    report = uniformity_test(samples, k4)

    assert report.chi_square_passed
    assert report.total_variation <= 0.05


@pytest.mark.statistical
def test_vertex_shortcut_with_fallback_stays_uniform(k4, k4_strong):
    sampler = TreeSampler(
        k4, "shortcut-vertex", decomposition=k4_strong, eps=1e-6, fallback_threshold=10
    )
    rng = RandomStream(43)
    samples = [sample_tree(sampler, rng)[0] for _ in range(8000)]

    assert uniformity_test(samples, k4).chi_square_passed


@pytest.mark.statistical
def test_edge_shortcut_matches_plain_walk(cycle5, cycle5_weak):
    shortcut = TreeSampler(cycle5, "shortcut-edge", decomposition=cycle5_weak, eps=1e-6)
    plain = TreeSampler(cycle5, "aldous-broder")
    draws = 20_000
    rng = RandomStream(7)
    shortcut_counts = tree_counts(sample_tree(shortcut, rng)[0] for _ in range(draws))
    plain_counts = tree_counts(sample_tree(plain, rng)[0] for _ in range(draws))

    assert len(shortcut_counts) == 5
    assert total_variation(shortcut_counts, plain_counts) <= TV_THRESHOLD


ALGORITHMS = ["aldous-broder", "wilson", "shortcut-edge", "shortcut-vertex"]
UNIFORMITY_GRAPHS = {
    "k4": lambda: complete_graph(4),
    "grid33": lambda: grid_graph(3, 3),
    "k23": lambda: complete_bipartite_graph(2, 3),
}


@pytest.mark.statistical
@pytest.mark.parametrize("algorithm", ALGORITHMS)
@pytest.mark.parametrize("name", ["grid33", "k23"])
def test_every_algorithm_is_uniform(name, algorithm):
    graph = UNIFORMITY_GRAPHS[name]()
    sampler = TreeSampler(graph, algorithm, phi=0.5, eps=1e-6)
    samples = [tree for tree, _ in sample_batch(sampler, 2024, 6000)]
    report = uniformity_test(samples, graph)

    assert len(tree_counts(samples)) == count_spanning_trees(graph)
    assert report.chi_square_passed


def test_vertex_shortcut_quotient_is_nontrivial_on_grid(grid33):
    sampler = TreeSampler(grid33, "shortcut-vertex", phi=0.5, eps=1e-6)
    boundary = sampler.decomposition.boundary_cut_vertices
    assert set(boundary.ids) == {5, 7}

    counts = []
    for seed in range(20):
        forest, _ = simulate_shortcut(
            grid33,
            sampler.decomposition,
            sampler.tables,
            "vertex-shortcut",
            RandomStream(seed),
        )
        forest = forget_boundary_arcs(forest, boundary)
        if forest.gaps:
            counts.append(count_arborescences(build_quotient(forest, grid33, boundary)))

    assert counts
    assert max(counts) > 1


@pytest.mark.slow
@pytest.mark.parametrize("algorithm", ALGORITHMS)
@pytest.mark.parametrize("name", list(UNIFORMITY_GRAPHS))
def test_full_scale_uniformity(name, algorithm):
    graph = UNIFORMITY_GRAPHS[name]()
    sampler = TreeSampler(graph, algorithm, phi=0.5, eps=1e-6)
    passed = 0
    for master_seed in range(5):
        results = sample_batch(sampler, master_seed, 100_000, workers=4)
        passed += uniformity_test([tree for tree, _ in results], graph).passed

    assert passed >= 4


@pytest.mark.slow
@pytest.mark.parametrize("algorithm", ["shortcut-edge", "shortcut-vertex"])
def test_full_scale_fallback_stays_uniform(k4, k4_strong, algorithm):
    sampler = TreeSampler(
        k4, algorithm, decomposition=k4_strong, eps=1e-6, fallback_threshold=10
    )
    results = sample_batch(sampler, 99, 100_000, workers=4)

    assert any(stats.fallback for _, stats in results)
    assert uniformity_test([tree for tree, _ in results], k4).passed


def _random_quotient(rng):
    """
    Digraf sa 3 do 6 čvorova u kojem svaki čvor osim korijena ima luk iz nižeg čvora.
    """
    size = int(rng.integers(3, 7))
    candidates = {}
    for l in range(1, size):
        forced = int(rng.integers(0, l))
        for j in range(size):
            if j == l or (j != forced and rng.random() >= 0.3):
                continue
            multiplicity = int(rng.integers(1, 4))
            candidates[(j, l)] = [(100 * j + k, 10 * l) for k in range(multiplicity)]
    return _digraph(candidates)


def _concrete_arborescences(q, root=0):
    nodes = [x for x in range(q.size) if x != root]
    options = [
        [(y, e) for y in q.sources(x) for e in q.candidates[(y, x)]] for x in nodes
    ]
    found = []
    for combo in product(*options):
        parent = {x: y for x, (y, _) in zip(nodes, combo)}
        reaches = True
        for x in nodes:
            seen = set()
            while x != root and reaches:
                reaches = x not in seen
                seen.add(x)
                x = parent[x]
        if reaches:
            found.append(tuple(sorted((x, e) for x, (_, e) in zip(nodes, combo))))
    return found


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_random_quotient_sampling_is_uniform(seed):
    rng = np.random.default_rng(seed)
    q = _random_quotient(rng)
    concrete = _concrete_arborescences(q)
    while len(concrete) > 120:
        q = _random_quotient(rng)
        concrete = _concrete_arborescences(q)

    assert count_arborescences(q) == len(concrete)

    stream = RandomStream(seed)
    draws = 20_000
    counts = Counter(
        tuple(sorted(sample_quotient_arborescence(q, 0, stream).items()))
        for _ in range(draws)
    )

    assert set(counts) <= set(concrete)
    assert total_variation(counts, {key: 1 for key in concrete}) <= 0.05


@pytest.mark.slow
def test_vertex_shortcut_saves_steps(lollipop):
    shortcut = TreeSampler(lollipop, "shortcut-vertex")
    plain = TreeSampler(lollipop, "aldous-broder")
    shortcut_steps = []
    plain_steps = []
    fallbacks = 0

    for seed in spawn_seeds(0, 100):
        _, stats = shortcut.sample(RandomStream(seed))
        shortcut_steps.append(stats.total_steps)
        fallbacks += stats.fallback
        plain_steps.append(plain.sample(RandomStream(seed))[1].total_steps)

    assert shortcut.decomposition.k > 1
    assert shortcut.fallback_threshold is None
    assert sum(shortcut_steps) / 100 < sum(plain_steps) / 100
    assert fallbacks < 100


def test_batch_is_independent_of_workers(grid33):
    sampler = TreeSampler(grid33, "shortcut-vertex", phi=0.25)
    serial = sample_batch(sampler, 5, 12, workers=1)
    parallel = sample_batch(sampler, 5, 12, workers=2)

    assert [tree for tree, _ in serial] == [tree for tree, _ in parallel]
    assert [stats for _, stats in serial] == [stats for _, stats in parallel]
    assert sample_batch(sampler, 5, 12) == serial
