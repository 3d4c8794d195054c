import logging
from typing import Iterable, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.sparse import coo_matrix, csr_matrix, diags
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import LinearOperator, cg

from src.models.Errors import SingularSystemError, SolverConvergenceError, SolverError
from src.utils.settings import (
    CG_MAXITER_FACTOR,
    CG_RTOL,
    DIRECT_SOLVE_THRESHOLD,
    SOLVER_TOL_FLOOR,
)

WeightedEdge = Tuple[int, int, float]


class WeightedGadget:
    """
    Težinski neusmjereni graf sa dva terminala: izvor (napon 1) i ponor (napon 0).

    Paralelni bridovi se zbrajaju po težini prilikom izgradnje Laplaceove matrice.
    """

    __slots__ = ("n", "rows", "cols", "weights", "source", "sink")

    def __init__(
        self, n: int, edges: Iterable[WeightedEdge], source: int, sink: int
    ) -> None:
        """
        Args:
            n (int): Broj vrhova gadgeta.
            edges (Iterable[WeightedEdge]): Bridovi (a, b, w), w > 0.
            source (int): Terminal sa naponom 1 (u').
            sink (int): Terminal sa naponom 0 (u*).

        Raises:
            SolverError: Ako su terminali isti, težina nije pozitivna ili postoji petlja.
        """
        if source == sink or not (0 <= source < n and 0 <= sink < n):
            error_msg = f"Neispravni terminali gadgeta: source={source}, sink={sink}, n={n}"
            logging.error(error_msg)
            raise SolverError(error_msg)

        rows, cols, weights = [], [], []
        for a, b, w in edges:
            if w <= 0 or a == b:
                error_msg = f"Neispravan brid gadgeta ({a}, {b}, {w})."
                logging.error(error_msg)
                raise SolverError(error_msg)
            rows.append(a)
            cols.append(b)
            weights.append(float(w))

        self.n: int = n
        self.rows: np.ndarray = np.array(rows, dtype=np.int64)
        self.cols: np.ndarray = np.array(cols, dtype=np.int64)
        self.weights: np.ndarray = np.array(weights, dtype=np.float64)
        self.source: int = source
        self.sink: int = sink

    def weight_matrix(self) -> csr_matrix:
        """
        Simetrična matrica težina (duplikati zbrojeni).
        """
        half = coo_matrix(
            (self.weights, (self.rows, self.cols)), shape=(self.n, self.n)
        ).tocsr()
        return (half + half.T).tocsr()

    def __repr__(self) -> str:
        return f"WeightedGadget(n={self.n}, edges={self.weights.size}, source={self.source}, sink={self.sink})"


class VoltageVector:
    """
    Potencijali vrhova gadgeta: 1 na izvoru, 0 na ponoru, harmonični drugdje.
    """

    __slots__ = ("values", "defect", "method")

    def __init__(self, values: np.ndarray, defect: float, method: str) -> None:
        self.values: np.ndarray = values
        self.defect: float = defect
        self.method: str = method

    def __getitem__(self, v: int) -> float:
        return float(self.values[v])

    def __repr__(self) -> str:
        return f"VoltageVector(n={self.values.size}, defect={self.defect:.2e}, method={self.method})"


def build_laplacian(gadget: WeightedGadget) -> csr_matrix:
    """
    Laplaceova matrica gadgeta L = D - W.

    Args:
        gadget (WeightedGadget): Gadget.

    Returns:
        csr_matrix: Simetrična, dijagonalno dominantna matrica sa nultim sumama redaka.
    """
    weights = gadget.weight_matrix()
    degrees = np.asarray(weights.sum(axis=1)).ravel()
    return (diags(degrees) - weights).tocsr()


def harmonicity_defect(
    weights: csr_matrix, values: np.ndarray, terminals: Tuple[int, int]
) -> float:
    """
    Najveće odstupanje napona od težinskog prosjeka susjeda, po neterminalnim vrhovima.
    """
    degrees = np.asarray(weights.sum(axis=1)).ravel()
    mask = np.ones(values.size, dtype=bool)
    mask[list(terminals)] = False
    mask &= degrees > 0
    if not mask.any():
        return 0.0
    averages = (weights @ values)[mask] / degrees[mask]
    return float(np.max(np.abs(values[mask] - averages)))


def _jacobi_cg(
    matrix: csr_matrix, rhs: np.ndarray, rtol: float, maxiter: int
) -> np.ndarray:
    inv_diag = 1.0 / matrix.diagonal()
    preconditioner = LinearOperator(matrix.shape, matvec=lambda r: inv_diag * r)
    x, info = cg(matrix, rhs, rtol=rtol, atol=0.0, maxiter=maxiter, M=preconditioner)
    if info != 0:
        error_msg = f"Konjugirani gradijent nije konvergirao u {maxiter} iteracija (info={info})."
        logging.error(error_msg)
        raise SolverConvergenceError(error_msg)
    return x


def solve_two_terminal(
    gadget: WeightedGadget,
    tol: float,
    direct_threshold: int = DIRECT_SOLVE_THRESHOLD,
    cg_rtol: float = CG_RTOL,
    maxiter_factor: int = CG_MAXITER_FACTOR,
) -> VoltageVector:
    """
    Napon u svakom vrhu kada je izvor na 1, a ponor na 0.

    Rješava se L v' = i_ext (+1 na izvoru, -1 na ponoru) uz uzemljen ponor
    (brisanje njegovog retka i stupca), zatim v = (v' - v'(ponor)) / (v'(izvor) - v'(ponor)).

    Args:
        gadget (WeightedGadget): Povezan gadget.
        tol (float): Dopušteno odstupanje od harmoničnosti.
        direct_threshold (int): Do ovog broja vrhova koristi se gusti Cholesky.
        cg_rtol (float): Relativni rezidual konjugiranog gradijenta.
        maxiter_factor (int): Maksimalan broj CG iteracija je maxiter_factor * n.

    Returns:
        VoltageVector: Naponi.

    Raises:
        SolverError: Ako tol nije pozitivan.
        SingularSystemError: Ako gadget nije povezan.
        SolverConvergenceError: Ako CG ne konvergira ili je odstupanje veće od tol.
    """
    if tol <= 0:
        error_msg = f"Tolerancija mora biti pozitivna, dobiveno: {tol}"
        logging.error(error_msg)
        raise SolverError(error_msg)
    tol = max(tol, SOLVER_TOL_FLOOR)

    weights = gadget.weight_matrix()
    n_components, _ = connected_components(weights, directed=False)
    if n_components > 1:
        error_msg = f"Gadget nije povezan ({n_components} komponenti), sustav je singularan."
        logging.error(error_msg)
        raise SingularSystemError(error_msg)

    laplacian = build_laplacian(gadget)
    keep = np.array([v for v in range(gadget.n) if v != gadget.sink], dtype=np.int64)
    reduced = laplacian[keep][:, keep]
    rhs = np.zeros(keep.size)
    rhs[gadget.source if gadget.source < gadget.sink else gadget.source - 1] = 1.0

    if keep.size <= direct_threshold:
        method = "direct"
        try:
            factor = cho_factor(reduced.toarray(), lower=True)
        except LinAlgError as e:
            error_msg = f"Reducirana Laplaceova matrica nije pozitivno definitna: {e}"
            logging.error(error_msg)
            raise SingularSystemError(error_msg) from e
        x = cho_solve(factor, rhs)
    else:
        method = "cg"
        x = _jacobi_cg(
            reduced, rhs, min(cg_rtol, tol), maxiter_factor * gadget.n
        )

    potentials = np.zeros(gadget.n)
    potentials[keep] = x
    values = np.clip(potentials / potentials[gadget.source], 0.0, 1.0)
    values[gadget.source] = 1.0
    values[gadget.sink] = 0.0

    defect = harmonicity_defect(weights, values, (gadget.source, gadget.sink))
    if defect > tol:
        error_msg = f"Odstupanje od harmoničnosti {defect:.3e} veće od tolerancije {tol:.3e} ({method})."
        logging.error(error_msg)
        raise SolverConvergenceError(error_msg)

    logging.debug(f"Riješen gadget n={gadget.n} ({method}), odstupanje {defect:.2e}.")

    return VoltageVector(values=values, defect=defect, method=method)
