import logging
from typing import Dict, List, Optional, Set, Tuple

from src.arborescence.Arborescence import Arborescence
from src.arborescence.completion import extract
from src.decomposition.Decomposition import Decomposition
from src.graph.Graph import Graph
from src.graph.graph_utils import stationary_sample
from src.models.Algorithms import TableModeEnum, WalkModeEnum
from src.models.Errors import (
    DecompositionError,
    GraphValidationError,
    TransitionTableError,
)
from src.schemas.StepStatsDTO import StepStatsDTO, WalkMeasureDTO
from src.tables.TransitionTable import TransitionTable
from src.tables.transition_tables import sample_exit
from src.utils.RandomStream import RandomStream
from src.walk.PartialForest import PartialForest


def _check_tables(
    d: Optional[Decomposition],
    tables: Optional[TransitionTable],
    mode: WalkModeEnum,
) -> None:
    if mode is WalkModeEnum.PLAIN:
        return
    expected = TableModeEnum.P if mode is WalkModeEnum.EDGE_SHORTCUT else TableModeEnum.Q
    if d is None or tables is None:
        error_msg = f"Način {mode.value} zahtijeva dekompoziciju i tablice prijelaza."
        logging.error(error_msg)
        raise TransitionTableError(error_msg)
    if tables.mode is not expected:
        error_msg = f"Način {mode.value} zahtijeva {expected.value} tablice, dobivene {tables.mode.value}."
        logging.error(error_msg)
        raise TransitionTableError(error_msg)
    if mode is WalkModeEnum.VERTEX_SHORTCUT and not d.strong:
        error_msg = "Kraćenje po izlaznom vrhu zahtijeva jaku dekompoziciju."
        logging.error(error_msg)
        raise DecompositionError(error_msg)


def simulate_shortcut(
    graph: Graph,
    d: Optional[Decomposition],
    tables: Optional[TransitionTable],
    mode: WalkModeEnum | str,
    rng: RandomStream,
    fallback_threshold: Optional[int] = None,
) -> Tuple[PartialForest, StepStatsDTO]:
    """
    Simulacija šetnje X (plain), X̃ (edge-shortcut) ili X̂ (vertex-shortcut) do pokrivanja grafa.

    Šetnja kreće iz stacionarno uzorkovanog vrha. Koraci u S i u još nepokrivenim
    komponentama simuliraju se doslovno, uz bilježenje ulaznog brida pri prvoj posjeti.
    Kada šetnja izvana uđe u komponentu čiji su svi vrhovi već posjećeni, cijeli
    blok se zamjenjuje jednim skokom:
      - X̃: izlazni brid (u, u') ~ P_v, nastavlja se u u' (luk (u, u') ako je u' nov),
      - X̂: izlazni vrh u ~ Q_v, nastavlja se u u (ako je u nov, postaje praznina).
    Nakon fallback_threshold koraka (zadano m * n) kraćenje se isključuje i
    šetnja se nastavlja doslovno.

    Args:
        graph (Graph): Povezan graf.
        d (Optional[Decomposition]): Dekompozicija (nije potrebna za plain).
        tables (Optional[TransitionTable]): P tablice za X̃, Q tablice za X̂.
        mode (WalkModeEnum | str): Način šetnje.
        rng (RandomStream): Izvor slučajnosti.
        fallback_threshold (Optional[int]): Prag koraka za isključivanje kraćenja.

    Returns:
        Tuple[PartialForest, StepStatsDTO]: Šuma ulaznih bridova i statistika koraka.

    Raises:
        TransitionTableError: Ako tablice ne odgovaraju načinu ili vrhu nedostaje redak.
        DecompositionError: Ako X̂ dobije dekompoziciju koja nije jaka.
    """
    mode = WalkModeEnum(mode)
    _check_tables(d, tables, mode)

    n = graph.n
    neighbors = graph.neighbors
    shortcut = mode is not WalkModeEnum.PLAIN
    component_of = d.component_of if shortcut else ()
    unvisited = [len(c) for c in d.components] if shortcut else []
    threshold = graph.m * n if fallback_threshold is None else fallback_threshold

    visited = bytearray(n)
    parent: Dict[int, int] = {}
    gaps: Set[int] = set()

    s = stationary_sample(graph, rng)
    visited[s] = 1
    remaining = n - 1
    if shortcut and component_of[s] >= 0:
        unvisited[component_of[s]] -= 1

    steps = jumps = 0
    fallback = False
    fallback_at: Optional[int] = None
    cur = s
    while remaining:
        if shortcut and steps + jumps >= threshold:
            shortcut = False
            fallback = True
            fallback_at = steps + jumps
            logging.warning(
                f"Prag od {threshold} koraka dosegnut, šetnja se nastavlja bez kraćenja."
            )

        row = neighbors[cur]
        nxt = row[rng.index(len(row))]
        steps += 1
        if not visited[nxt]:
            visited[nxt] = 1
            remaining -= 1
            parent[nxt] = cur
            if shortcut and component_of[nxt] >= 0:
                unvisited[component_of[nxt]] -= 1
        prev, cur = cur, nxt

        if not shortcut:
            continue

        ci = component_of[cur]
        while (
            remaining
            and steps + jumps < threshold
            and ci >= 0
            and component_of[prev] != ci
            and unvisited[ci] == 0
        ):
            target = sample_exit(tables, cur, rng)
            jumps += 1
            if mode is WalkModeEnum.EDGE_SHORTCUT:
                prev, cur = target
                if not visited[cur]:
                    visited[cur] = 1
                    remaining -= 1
                    parent[cur] = prev
                    if component_of[cur] >= 0:
                        unvisited[component_of[cur]] -= 1
            else:
                prev, cur = cur, target
                if not visited[cur]:
                    visited[cur] = 1
                    remaining -= 1
                    gaps.add(cur)
            ci = component_of[cur]

    stats = StepStatsDTO(
        algorithm=mode.value,
        start=s,
        verbatim_steps=steps,
        shortcut_jumps=jumps,
        fallback=fallback,
        fallback_at=fallback_at,
        gaps=len(gaps),
    )
    logging.debug(f"Šetnja {mode.value}: {stats}")

    return PartialForest(n, s, ((p, c) for c, p in parent.items()), gaps), stats


def aldous_broder(graph: Graph, rng: RandomStream) -> Arborescence:
    """
    Aldous-Broder: ulazni bridovi prvih posjeta obične šetnje iz stacionarnog vrha.

    Returns:
        Arborescence: Arborescencija s korijenom u početnom vrhu.
    """
    forest, _ = simulate_shortcut(graph, None, None, WalkModeEnum.PLAIN, rng)
    return extract(forest)


def wilson(
    graph: Graph, root: int, rng: RandomStream
) -> Tuple[Arborescence, int]:
    """
    Wilsonov algoritam (loop-erased random walk) prema korijenu.

    Vrhovi se obrađuju uzlazno po ID-u; next[v] je zadnji izlaz iz v prije
    ulaska u stablo, pa je (next[v], v) luk arborescencije s korijenom root.

    Args:
        graph (Graph): Povezan graf.
        root (int): Korijen.
        rng (RandomStream): Izvor slučajnosti.

    Returns:
        Tuple[Arborescence, int]: Arborescencija i ukupan broj koraka šetnji.
    """
    if not 0 <= root < graph.n:
        error_msg = f"Korijen {root} nije vrh grafa (n={graph.n})."
        logging.error(error_msg)
        raise GraphValidationError(error_msg)

    neighbors = graph.neighbors
    in_tree = bytearray(graph.n)
    in_tree[root] = 1
    nxt: List[int] = [-1] * graph.n
    steps = 0
    for start in range(graph.n):
        u = start
        while not in_tree[u]:
            row = neighbors[u]
            nxt[u] = row[rng.index(len(row))]
            u = nxt[u]
            steps += 1
        u = start
        while not in_tree[u]:
            in_tree[u] = 1
            u = nxt[u]

    return Arborescence(graph.n, root, nxt), steps


def measure_walk(graph: Graph, d: Decomposition, rng: RandomStream) -> WalkMeasureDTO:
    """
    Obična šetnja do pokrivanja uz brojanje prelazaka po klasama bridova.

    Troši slučajne brojeve istim redoslijedom kao aldous_broder, pa za isti seed
    cover_time odgovara broju koraka te šetnje.

    Args:
        graph (Graph): Graf.
        d (Decomposition): Dekompozicija za klasifikaciju bridova.
        rng (RandomStream): Izvor slučajnosti.

    Returns:
        WalkMeasureDTO: tau, Z, suma Z_i i suma Z_i*.
    """
    neighbors = graph.neighbors
    component_of = d.component_of
    unvisited = [len(c) for c in d.components]
    visited = bytearray(graph.n)

    cur = stationary_sample(graph, rng)
    visited[cur] = 1
    remaining = graph.n - 1
    if component_of[cur] >= 0:
        unvisited[component_of[cur]] -= 1

    steps = cut = inner = inner_before = 0
    while remaining:
        row = neighbors[cur]
        nxt = row[rng.index(len(row))]
        steps += 1
        ci = component_of[cur]
        if ci >= 0 and component_of[nxt] == ci:
            inner += 1
            if unvisited[ci]:
                inner_before += 1
        else:
            cut += 1
        if not visited[nxt]:
            visited[nxt] = 1
            remaining -= 1
            if component_of[nxt] >= 0:
                unvisited[component_of[nxt]] -= 1
        cur = nxt

    return WalkMeasureDTO(
        cover_time=steps,
        cut_traversals=cut,
        inner_traversals=inner,
        inner_traversals_before_cover=inner_before,
    )
