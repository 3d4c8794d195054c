import logging
from typing import Iterable, Union

import numpy as np

from src.graph.Graph import Graph
from src.models.Errors import OracleError
from src.solver.laplacian_solve import WeightedGadget


def absorbing_hit_probabilities(
    g: Union[Graph, WeightedGadget], absorbing: Iterable[int], target: int
) -> np.ndarray:
    """
    Vjerojatnost da šetnja iz svakog vrha dosegne target prije ostalih apsorbirajućih vrhova.

    Gusto rješenje sustava (I - P_TT) h = P_T,target nad prolaznim vrhovima T,
    neovisno o Laplaceovom solveru.

    Args:
        g (Union[Graph, WeightedGadget]): Graf ili težinski gadget.
        absorbing (Iterable[int]): Apsorbirajući vrhovi.
        target (int): Ciljni apsorbirajući vrh.

    Returns:
        np.ndarray: h[v] za svaki vrh (1 u targetu, 0 u ostalim apsorbirajućim).

    Raises:
        OracleError: Ako je skup prazan, target nije u njemu ili je sustav singularan.
    """
    absorbing_set = set(absorbing)
    absorbing = sorted(absorbing_set)
    if not absorbing or target not in absorbing:
        error_msg = f"Target {target} mora biti u nepraznom apsorbirajućem skupu {absorbing}."
        logging.error(error_msg)
        raise OracleError(error_msg)

    weights = (
        g.weight_matrix() if isinstance(g, WeightedGadget) else g.adjacency_matrix()
    ).toarray()
    n = weights.shape[0]
    degrees = weights.sum(axis=1)
    transient = np.array([v for v in range(n) if v not in absorbing_set], dtype=int)

    h = np.zeros(n)
    h[target] = 1.0
    if transient.size == 0:
        return h
    if np.any(degrees[transient] == 0):
        error_msg = "Izolirani prolazni vrh ne može doseći apsorbirajući skup."
        logging.error(error_msg)
        raise OracleError(error_msg)

    transition = weights[transient] / degrees[transient][:, None]
    a = np.eye(transient.size) - transition[:, transient]
    b = transition[:, target]
    try:
        h[transient] = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as e:
        error_msg = f"Sustav apsorpcije je singularan: {e}"
        logging.error(error_msg)
        raise OracleError(error_msg) from e

    return h
