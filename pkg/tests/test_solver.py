import numpy as np
import pytest

from src.graph.graph_utils import grid_graph
from src.models.Errors import SingularSystemError, SolverError
from src.solver.laplacian_solve import (
    WeightedGadget,
    build_laplacian,
    harmonicity_defect,
    solve_two_terminal,
)


def _path_gadget(length: int) -> WeightedGadget:
    return WeightedGadget(
        length + 1, [(v, v + 1, 1.0) for v in range(length)], source=0, sink=length
    )


def test_path_voltages_are_linear():
    voltages = solve_two_terminal(_path_gadget(4), tol=1e-10)

    assert voltages.method == "direct"
    assert voltages.values == pytest.approx([1.0, 0.75, 0.5, 0.25, 0.0], abs=1e-12)
    assert voltages.defect <= 1e-10


def test_weighted_and_parallel_edges():
    weighted = WeightedGadget(3, [(0, 1, 3.0), (1, 2, 1.0)], source=0, sink=2)
    parallel = WeightedGadget(
        3, [(0, 1, 1.0), (0, 1, 1.0), (1, 2, 2.0)], source=0, sink=2
    )

    assert solve_two_terminal(weighted, tol=1e-10)[1] == pytest.approx(0.75)
    assert solve_two_terminal(parallel, tol=1e-10)[1] == pytest.approx(0.5)


def test_laplacian_rows_sum_to_zero():
    gadget = WeightedGadget(3, [(0, 1, 1.0), (0, 1, 2.0), (1, 2, 1.0)], source=0, sink=2)
    laplacian = build_laplacian(gadget).toarray()

    assert laplacian[0, 0] == pytest.approx(3.0)
    assert laplacian[0, 1] == pytest.approx(-3.0)
    assert np.allclose(laplacian.sum(axis=1), 0.0)


def test_cg_matches_direct():
    graph = grid_graph(5, 5)
    gadget = WeightedGadget(
        graph.n, [(u, v, 1.0) for u, v in graph.edges], source=0, sink=24
    )

    direct = solve_two_terminal(gadget, tol=1e-8)
    iterative = solve_two_terminal(gadget, tol=1e-8, direct_threshold=0)

    assert iterative.method == "cg"
    assert iterative.values == pytest.approx(direct.values, abs=1e-7)
    # Simetrija rešetke oko antidijagonale
    assert direct[12] == pytest.approx(0.5, abs=1e-10)


def test_harmonicity_defect_detects_wrong_voltages():
    gadget = _path_gadget(2)
    weights = gadget.weight_matrix()

    assert harmonicity_defect(weights, np.array([1.0, 0.5, 0.0]), (0, 2)) == 0.0
    assert harmonicity_defect(weights, np.array([1.0, 0.9, 0.0]), (0, 2)) == pytest.approx(0.4)


def test_disconnected_gadget_is_singular():
    gadget = WeightedGadget(3, [(0, 1, 1.0)], source=0, sink=1)

    with pytest.raises(SingularSystemError) as exc:
        solve_two_terminal(gadget, tol=1e-8)
    assert exc.value.exit_code == 5


@pytest.mark.parametrize(
    "n, edges, source, sink",
    [
        (2, [(0, 1, 1.0)], 0, 0),
        (2, [(0, 1, 0.0)], 0, 1),
        (2, [(1, 1, 1.0)], 0, 1),
        (2, [(0, 1, 1.0)], 0, 5),
    ],
)
def test_invalid_gadgets(n, edges, source, sink):
    with pytest.raises(SolverError):
        WeightedGadget(n, edges, source=source, sink=sink)


def test_non_positive_tolerance():
    with pytest.raises(SolverError):
        solve_two_terminal(_path_gadget(2), tol=0.0)
