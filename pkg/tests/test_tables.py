import json

import numpy as np
import pytest

from conftest import within_sigmas
from src.decomposition.decomposer import build_decomposition
from src.graph.Graph import Graph
from src.graph.graph_utils import erdos_renyi_graph, path_graph
from src.models.Algorithms import TableModeEnum
from src.models.Errors import (
    DecompositionError,
    TableRowMissingError,
    TransitionTableError,
)
from src.oracle.absorbing import absorbing_hit_probabilities
from src.tables.TransitionTable import ExitDistribution
from src.tables.transition_tables import (
    build_table,
    build_tables,
    compute_P,
    compute_Q,
    dump_tables,
    eps_budget,
    sample_exit,
    solver_tol,
)
from src.utils.RandomStream import RandomStream

EPS = 1e-6


def _row(dist, v):
    return dict(dist.rows[v])


def test_path_exit_probabilities():
    graph = path_graph(6)
    d = build_decomposition(graph, [[1, 2, 3, 4]], 0.5, strong=True)

    p = compute_P(graph, d, 0, EPS)
    q = compute_Q(graph, d, 0, EPS)

    # Gambler's ruin: iz vrha 2 do vrha 5 prije vrha 0 sa vjerojatnošću 2/5
    assert _row(p, 2)[(4, 5)] == pytest.approx(2 / 5, abs=1e-9)
    assert _row(p, 2)[(1, 0)] == pytest.approx(3 / 5, abs=1e-9)
    assert _row(q, 2)[5] == pytest.approx(2 / 5, abs=1e-9)
    assert _row(q, 4)[5] == pytest.approx(4 / 5, abs=1e-9)
    assert [t for t, _ in p.rows[1]] == [(1, 0), (4, 5)]


def test_single_vertex_component():
    graph = path_graph(3)
    d = build_decomposition(graph, [[1]], 0.5, strong=True)

    assert _row(compute_P(graph, d, 0, EPS), 1) == pytest.approx({(1, 0): 0.5, (1, 2): 0.5})
    assert _row(compute_Q(graph, d, 0, EPS), 1) == pytest.approx({0: 0.5, 2: 0.5})


def test_cycle_exit_vertices(make_cycle):
    graph = make_cycle(8)
    d = build_decomposition(graph, [[1, 2, 3], [5, 6, 7]], 0.25, strong=True)
    q = compute_Q(graph, d, 0, EPS)

    assert _row(q, 2) == pytest.approx({0: 0.5, 4: 0.5})
    assert _row(q, 1) == pytest.approx({0: 0.75, 4: 0.25})
    assert _row(q, 3) == pytest.approx({0: 0.25, 4: 0.75})


def test_single_exit_vertex_gives_certain_exit(k4, k4_strong):
    q = compute_Q(k4, k4_strong, 0, EPS)
    p = compute_P(k4, k4_strong, 0, EPS)

    for v in (0, 1, 2):
        assert q.rows[v] == ((3, 1.0),)
    assert _row(p, 0) == pytest.approx({(0, 3): 0.5, (1, 3): 0.25, (2, 3): 0.25})


def test_tables_match_absorbing_chain(grid55_split):
    graph, d = grid55_split
    for i, comp in enumerate(d.components):
        outside = [v for v in range(graph.n) if v not in comp]
        q = compute_Q(graph, d, i, EPS)
        p = compute_P(graph, d, i, EPS)
        for u in sorted({u for row in q.rows.values() for u, _ in row}):
            reference = absorbing_hit_probabilities(graph, outside, u)
            # Svaki izlazni vrh ima točno jedan rezni brid prema komponenti
            (w,) = [w for w in graph.neighbors[u] if w in comp]
            for v in comp.ids:
                assert _row(q, v)[u] == pytest.approx(reference[v], abs=1e-8)
                assert _row(p, v)[(w, u)] == pytest.approx(reference[v], abs=1e-8)
        assert all(abs(s - 1.0) < 1e-8 for s in q.raw_sums.values())


def test_q_requires_strong_decomposition(cycle5, cycle5_weak):
    with pytest.raises(DecompositionError):
        compute_Q(cycle5, cycle5_weak, 0, EPS)


def test_q_rejects_adjacent_components(k4):
    d = build_decomposition(k4, [[0, 1], [2, 3]], 0.5, strong=True)
    with pytest.raises(DecompositionError):
        compute_Q(k4, d, 0, EPS)


def test_non_positive_eps(k4, k4_strong):
    with pytest.raises(TransitionTableError):
        compute_P(k4, k4_strong, 0, 0.0)


def test_build_table_cumulative():
    dist = ExitDistribution(
        component=0, mode=TableModeEnum.Q, rows={0: ((1, 0.2), (2, 0.3), (3, 0.5))}
    )
    table = build_table(dist)
    targets, cumulative = table.rows[0]

    assert targets == (1, 2, 3)
    assert cumulative == pytest.approx((0.2, 0.5, 1.0))
    assert cumulative[-1] == 1.0
    assert table.lookup(0, 0.0) == 1
    assert table.lookup(0, 0.2) == 2
    assert table.lookup(0, 0.999) == 3


def test_sample_exit_frequencies():
    dist = ExitDistribution(
        component=0, mode=TableModeEnum.Q, rows={0: ((1, 0.2), (2, 0.3), (3, 0.5))}
    )
    table = build_table(dist)
    rng = RandomStream(5)
    draws = 20_000
    samples = [sample_exit(table, 0, rng) for _ in range(draws)]

    for target, p in ((1, 0.2), (2, 0.3), (3, 0.5)):
        assert within_sigmas(samples.count(target), draws, p)


def test_sample_exit_missing_row():
    table = build_table(ExitDistribution(component=0, mode=TableModeEnum.Q, rows={0: ((1, 1.0),)}))
    with pytest.raises(TableRowMissingError):
        sample_exit(table, 4, RandomStream(0))


def test_eps_budget_and_tolerance():
    assert eps_budget(0.01, 10, 20, "mn") == pytest.approx(5e-5)
    assert eps_budget(0.01, 10, 20, "n5") == pytest.approx(1e-7)
    assert solver_tol(1e-4, 10) == pytest.approx(2.5e-6)
    with pytest.raises(TransitionTableError):
        eps_budget(0.0, 10, 20)
    with pytest.raises(TransitionTableError):
        eps_budget(0.01, 10, 20, "n3")


def test_build_tables_covers_components(grid55_split):
    graph, d = grid55_split
    serial = build_tables(graph, d, TableModeEnum.Q, EPS)
    threaded = build_tables(graph, d, "Q", EPS, workers=2)

    assert len(serial) == 20
    assert serial.rows == threaded.rows


def test_dump_tables(tmp_path, k4, k4_strong):
    table = build_tables(k4, k4_strong, TableModeEnum.P, EPS)
    path = tmp_path / "tables.json"
    dump_tables(table, EPS, k4.n, str(path))
    document = json.loads(path.read_text(encoding="utf-8"))

    assert document["mode"] == "P"
    assert document["tol"] == pytest.approx(EPS / 16)
    assert [row["vertex"] for row in document["rows"]] == [0, 1, 2]
    assert document["rows"][0]["targets"] == ["0-3", "1-3", "2-3"]
    assert document["rows"][0]["cumulative"] == pytest.approx([0.5, 0.75, 1.0])


@pytest.mark.parametrize("n", [4, 10, 50])
def test_gamblers_ruin(n):
    graph = path_graph(n + 1)
    d = build_decomposition(graph, [list(range(1, n))], 0.5, strong=True)
    p = compute_P(graph, d, 0, 1e-9)

    for k in range(1, n):
        assert _row(p, k)[(n - 1, n)] == pytest.approx(k / n, abs=1e-10)


def _subdivided_component(graph, comp):
    """
    D_i sa po jednim novim vrhom na svakom reznom bridu (w, u); šetnja izlazi bridom
    (w, u) točno kada prvi put dosegne njegov novi vrh.
    """
    local = {v: idx for idx, v in enumerate(comp.ids)}
    edges = [(local[a], local[b]) for a, b in graph.edges if a in local and b in local]
    midpoint = {}
    for w in comp.ids:
        for u in graph.neighbors[w]:
            if u not in local:
                midpoint[(w, u)] = len(local) + len(midpoint)
                edges.append((local[w], midpoint[(w, u)]))
    return Graph.from_edges(len(local) + len(midpoint), edges), local, midpoint


def _random_component(graph, rng):
    """
    Prvih k vrhova BFS obilaska iz slučajnog vrha, k između 3 i n / 2.
    """
    order = [int(rng.integers(graph.n))]
    size = int(rng.integers(3, graph.n // 2 + 1))
    for x in order:
        order += [w for w in graph.neighbors[x] if w not in order]
        if len(order) >= size:
            break
    return order[:size]


@pytest.mark.parametrize("seed", range(10))
def test_random_components_match_absorbing_chain(seed):
    graph = erdos_renyi_graph(30, 0.15, seed=seed)
    rng = np.random.default_rng(seed)
    d = build_decomposition(graph, [_random_component(graph, rng)], 0.5, strong=True)
    comp = d.components[0]
    outside = [v for v in range(graph.n) if v not in comp]
    eps = 1e-9

    p = compute_P(graph, d, 0, eps)
    q = compute_Q(graph, d, 0, eps)
    subdivided, local, midpoint = _subdivided_component(graph, comp)
    assert len(midpoint) == len(d.component_cut_edges[0])

    for edge, mid in midpoint.items():
        reference = absorbing_hit_probabilities(subdivided, midpoint.values(), mid)
        for v in comp.ids:
            assert _row(p, v)[edge] == pytest.approx(reference[local[v]], abs=1e-8)

    for u in sorted({u for _, u in midpoint}):
        reference = absorbing_hit_probabilities(graph, outside, u)
        for v in comp.ids:
            assert _row(q, v)[u] == pytest.approx(reference[v], abs=1e-8)
