import logging
from typing import Hashable, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from src.arborescence.completion import validate_spanning_tree
from src.graph.Graph import Graph
from src.models.Errors import OracleError
from src.oracle.matrix_tree import enumerate_spanning_trees
from src.schemas.DistributionReportDTO import DistributionReportDTO
from src.utils.settings import CHI_SQUARE_ALPHA, ENUMERATION_CAP, TV_THRESHOLD

Edge = Tuple[int, int]


def chi_square_critical(df: int, alpha: float = CHI_SQUARE_ALPHA) -> float:
    """
    Kritična vrijednost chi2 distribucije sa df stupnjeva slobode za razinu alpha.
    """
    if df <= 0:
        return 0.0
    return float(stats.chi2.ppf(1 - alpha, df))


def _as_series(counts: Mapping[Hashable, int]) -> pd.Series:
    # Ishodi su često tupleovi bridova, bez tupleize_cols bi postali MultiIndex
    index = pd.Index(list(counts.keys()), tupleize_cols=False, dtype=object)
    return pd.Series(list(counts.values()), index=index, dtype=float)


def total_variation(
    first: Mapping[Hashable, int], second: Mapping[Hashable, int]
) -> float:
    """
    Udaljenost totalne varijacije između dvije empirijske distribucije (broj pojavljivanja po ishodu).
    """
    p = _as_series(first)
    q = _as_series(second)
    if p.sum() <= 0 or q.sum() <= 0:
        error_msg = "Empirijska distribucija mora imati barem jedan uzorak."
        logging.error(error_msg)
        raise OracleError(error_msg)
    p, q = p / p.sum(), q / q.sum()
    return float(0.5 * p.sub(q, fill_value=0.0).abs().sum())


def uniformity_test(
    samples: Sequence[Sequence[Edge]],
    graph: Graph,
    alpha: float = CHI_SQUARE_ALPHA,
    cap: int = ENUMERATION_CAP,
    tv_threshold: float = TV_THRESHOLD,
) -> DistributionReportDTO:
    """
    Chi-square test i TV udaljenost uzorka stabala prema uniformnoj distribuciji nad T(G).

    Args:
        samples (Sequence[Sequence[Edge]]): Uzorkovana stabla.
        graph (Graph): Graf.
        alpha (float): Razina značajnosti.
        cap (int): Najveći broj stabala za enumeraciju.
        tv_threshold (float): Najveća dopuštena TV udaljenost do uniformne.

    Returns:
        DistributionReportDTO: Izvještaj.

    Raises:
        OracleError: Ako nema uzoraka.
        NotASpanningTreeError: Ako uzorak nije razapinjuće stablo grafa.
        EnumerationCapError: Ako graf ima previše stabala.
    """
    if not samples:
        error_msg = "Test uniformnosti zahtijeva barem jedan uzorak."
        logging.error(error_msg)
        raise OracleError(error_msg)

    trees = enumerate_spanning_trees(graph, cap)
    index = {tree: i for i, tree in enumerate(trees)}
    counts = np.zeros(len(trees), dtype=np.int64)
    for sample in samples:
        counts[index[tuple(validate_spanning_tree(graph, sample))]] += 1

    n_samples = len(samples)
    support = len(trees)
    if support > 1:
        chi_square, p_value = stats.chisquare(counts)
        chi_square, p_value = float(chi_square), float(p_value)
    else:
        chi_square, p_value = 0.0, 1.0
    tv = float(0.5 * np.abs(counts / n_samples - 1.0 / support).sum())

    report = DistributionReportDTO(
        support_size=support,
        samples=n_samples,
        counts=counts.tolist(),
        chi_square=chi_square,
        degrees_of_freedom=support - 1,
        p_value=min(max(p_value, 0.0), 1.0),
        alpha=alpha,
        critical_value=chi_square_critical(support - 1, alpha),
        total_variation=min(tv, 1.0),
        tv_threshold=tv_threshold,
    )
    logging.info(
        f"Test uniformnosti: |T(G)|={support}, N={n_samples}, chi2={chi_square:.3f} "
        f"(kritično {report.critical_value:.3f}), TV={tv:.4f} (prag {tv_threshold})"
    )
    return report
