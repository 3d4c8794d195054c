import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.arborescence.Arborescence import Arborescence
from src.arborescence.completion import (
    build_quotient,
    complete,
    extract,
    forget_boundary_arcs,
    sample_quotient_arborescence,
    to_tree,
)
from src.decomposition.Decomposition import Decomposition
from src.decomposition.decomposer import default_phi, strong_decompose, weak_decompose
from src.graph.Graph import Graph
from src.graph.graph_utils import stationary_sample
from src.models.Algorithms import (
    AlgorithmEnum,
    EpsBudgetEnum,
    TableModeEnum,
    WalkModeEnum,
)
from src.models.Errors import DecompositionError
from src.schemas.StepStatsDTO import StepStatsDTO
from src.tables.TransitionTable import TransitionTable
from src.tables.transition_tables import build_tables, eps_budget
from src.utils.RandomStream import RandomStream, spawn_seeds
from src.utils.settings import EPS_BUDGET
from src.walk.walker import simulate_shortcut, wilson

Edge = Tuple[int, int]
SHORTCUT_ALGORITHMS = (AlgorithmEnum.SHORTCUT_EDGE, AlgorithmEnum.SHORTCUT_VERTEX)


class TreeSampler:
    """
    Priprema (dekompozicija + tablice prijelaza) jednom po pokretanju, zatim
    uzorkovanje proizvoljnog broja stabala zadanim algoritmom.
    """

    def __init__(
        self,
        graph: Graph,
        algorithm: AlgorithmEnum | str,
        phi: Optional[float] = None,
        delta: float = 0.01,
        eps: Optional[float] = None,
        budget: EpsBudgetEnum | str = EPS_BUDGET,
        decomposition: Optional[Decomposition] = None,
        fallback_threshold: Optional[int] = None,
        table_workers: int = 1,
    ) -> None:
        """
        Args:
            graph (Graph): Povezan graf.
            algorithm (AlgorithmEnum | str): Algoritam uzorkovanja.
            phi (Optional[float]): Ciljani udio reznih bridova (zadano 1/sqrt(n)).
            delta (float): Dopušteno odstupanje od uniformnosti.
            eps (Optional[float]): Eksplicitna greška tablica (inače iz delte).
            budget (EpsBudgetEnum | str): Pravilo za eps iz delte.
            decomposition (Optional[Decomposition]): Gotova dekompozicija.
            fallback_threshold (Optional[int]): Prag koraka za isključivanje kraćenja.
            table_workers (int): Broj dretvi za izgradnju tablica.

        Raises:
            DecompositionError: Ako kraćenje po vrhu dobije dekompoziciju koja nije jaka.
        """
        self.graph: Graph = graph
        self.algorithm: AlgorithmEnum = AlgorithmEnum(algorithm)
        self.fallback_threshold: Optional[int] = fallback_threshold
        self.decomposition: Optional[Decomposition] = None
        self.tables: Optional[TransitionTable] = None
        self.eps: Optional[float] = None

        if self.algorithm not in SHORTCUT_ALGORITHMS:
            return

        vertex_mode = self.algorithm is AlgorithmEnum.SHORTCUT_VERTEX
        if decomposition is None:
            phi = phi if phi is not None else default_phi(graph.n)
            decompose = strong_decompose if vertex_mode else weak_decompose
            decomposition = decompose(graph, phi)
        elif vertex_mode and not decomposition.strong:
            error_msg = "Algoritam shortcut-vertex zahtijeva jaku dekompoziciju."
            logging.error(error_msg)
            raise DecompositionError(error_msg)

        self.decomposition = decomposition
        self.eps = eps if eps is not None else eps_budget(delta, graph.n, graph.m, budget)
        self.tables = build_tables(
            graph,
            decomposition,
            TableModeEnum.Q if vertex_mode else TableModeEnum.P,
            self.eps,
            workers=table_workers,
        )

    @property
    def walk_mode(self) -> WalkModeEnum:
        if self.algorithm is AlgorithmEnum.SHORTCUT_EDGE:
            return WalkModeEnum.EDGE_SHORTCUT
        if self.algorithm is AlgorithmEnum.SHORTCUT_VERTEX:
            return WalkModeEnum.VERTEX_SHORTCUT
        return WalkModeEnum.PLAIN

    def sample(self, rng: RandomStream) -> Tuple[Arborescence, StepStatsDTO]:
        """
        Jedna slučajna arborescencija i statistika koraka.
        """
        if self.algorithm is AlgorithmEnum.WILSON:
            root = stationary_sample(self.graph, rng)
            arborescence, steps = wilson(self.graph, root, rng)
            stats = StepStatsDTO(
                algorithm=self.algorithm.value,
                start=root,
                verbatim_steps=steps,
                shortcut_jumps=0,
            )
            return arborescence, stats

        forest, stats = simulate_shortcut(
            self.graph,
            self.decomposition,
            self.tables,
            self.walk_mode,
            rng,
            fallback_threshold=self.fallback_threshold,
        )
        if self.algorithm is not AlgorithmEnum.SHORTCUT_VERTEX:
            return extract(forest), stats

        boundary = self.decomposition.boundary_cut_vertices
        forest = forget_boundary_arcs(forest, boundary)
        if not forest.gaps:
            return extract(forest), stats
        quotient = build_quotient(forest, self.graph, boundary)
        choices = sample_quotient_arborescence(quotient, 0, rng)
        return complete(forest, choices), stats

    def __repr__(self) -> str:
        return (
            f"TreeSampler(algorithm={self.algorithm.value}, graph={self.graph}, "
            f"decomposition={self.decomposition}, eps={self.eps})"
        )


def sample_tree(
    sampler: TreeSampler, rng: RandomStream
) -> Tuple[List[Edge], StepStatsDTO]:
    """
    Neusmjereno razapinjuće stablo (kanonski sortirano) i statistika koraka.
    """
    arborescence, stats = sampler.sample(rng)
    return to_tree(arborescence), stats


def _sample_chunk(
    sampler: TreeSampler, seeds: Sequence[np.random.SeedSequence]
) -> List[Tuple[List[Edge], StepStatsDTO]]:
    return [sample_tree(sampler, RandomStream(seed)) for seed in seeds]


def sample_batch(
    sampler: TreeSampler, master_seed: int, count: int, workers: int = 1
) -> List[Tuple[List[Edge], StepStatsDTO]]:
    """
    count stabala, uzorak i koristi i-to dijete SeedSequence(master_seed).

    Rezultat je poredan po indeksu uzorka i ne ovisi o broju procesa.

    Args:
        sampler (TreeSampler): Pripremljeni sampler.
        master_seed (int): Glavni seed.
        count (int): Broj uzoraka.
        workers (int): Broj procesa (1 za uzorkovanje u trenutnom procesu).

    Returns:
        List[Tuple[List[Edge], StepStatsDTO]]: Stabla i statistike po uzorku.
    """
    seeds = spawn_seeds(master_seed, count)
    if workers <= 1 or count < 2:
        results = _sample_chunk(sampler, seeds)
    else:
        size = -(-count // workers)
        chunks = [seeds[i : i + size] for i in range(0, count, size)]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = [
                item
                for chunk in executor.map(_sample_chunk, repeat(sampler), chunks)
                for item in chunk
            ]

    jumps = sum(stats.shortcut_jumps for _, stats in results)
    fallbacks = sum(stats.fallback for _, stats in results)
    logging.info(
        f"Uzorkovano {count} stabala ({sampler.algorithm.value}), skokova {jumps}, fallback {fallbacks}."
    )
    return results
