import json
import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import accumulate
from typing import Dict, List, Tuple

from src.decomposition.Decomposition import Decomposition
from src.graph.Graph import Graph
from src.models.Algorithms import EpsBudgetEnum, TableModeEnum
from src.models.Errors import (
    DecompositionError,
    SolverError,
    TableRowMissingError,
    TransitionTableError,
)
from src.schemas.TableDumpDTO import TableDumpDTO, TableRowDTO
from src.solver.laplacian_solve import WeightedGadget, solve_two_terminal
from src.tables.TransitionTable import ExitDistribution, ExitTarget, TransitionTable
from src.utils.RandomStream import RandomStream
from src.utils.settings import EPS_BUDGET, SOLVER_TOL_FLOOR

# Dopušteni drift sume retka je RENORMALIZATION_SLACK * tol * |redak|
RENORMALIZATION_SLACK = 10.0


def eps_budget(
    delta: float, n: int, m: int, budget: EpsBudgetEnum | str = EPS_BUDGET
) -> float:
    """
    Dopuštena multiplikativna greška vjerojatnosti u tablicama.

    Args:
        delta (float): Dopušteno odstupanje od uniformne distribucije.
        n (int): Broj vrhova.
        m (int): Broj bridova.
        budget (EpsBudgetEnum | str): "mn" -> delta/(m*n), "n5" -> delta/n^5.

    Returns:
        float: eps > 0.

    Raises:
        TransitionTableError: Ako delta nije pozitivan ili je budget nepoznat.
    """
    if delta <= 0:
        error_msg = f"delta mora biti pozitivan, dobiveno: {delta}"
        logging.error(error_msg)
        raise TransitionTableError(error_msg)
    try:
        budget = EpsBudgetEnum(budget)
    except ValueError as e:
        error_msg = f"Nepoznat eps budget '{budget}', dopušteno: mn, n5"
        logging.error(error_msg)
        raise TransitionTableError(error_msg) from e

    if budget is EpsBudgetEnum.N5:
        return delta / float(max(n, 1)) ** 5
    return delta / (max(m, 1) * max(n, 1))


def solver_tol(eps: float, n: int) -> float:
    return eps / (4 * max(n, 1))


def _oriented_cut_edges(
    graph: Graph, d: Decomposition, i: int
) -> List[Tuple[int, int, int]]:
    """
    Rezni bridovi komponente kao (id brida, u unutar D_i, u' izvan D_i), uzlazno po id-u.
    """
    comp = d.components[i]
    oriented = []
    for eid in d.component_cut_edges[i]:
        a, b = graph.edges[eid]
        if a in comp and b in comp:
            error_msg = f"Rezni brid ({a}, {b}) ima oba kraja u komponenti {i}."
            logging.error(error_msg)
            raise DecompositionError(error_msg)
        oriented.append((eid, a, b) if a in comp else (eid, b, a))
    return oriented


def _inner_gadget_edges(
    graph: Graph, d: Decomposition, i: int, local: Dict[int, int]
) -> List[Tuple[int, int, float]]:
    comp = d.components[i]
    return [
        (local[a], local[b], 1.0)
        for a in comp.ids
        for b in graph.neighbors[a]
        if b > a and b in comp
    ]


def _renormalize(
    mode: TableModeEnum,
    i: int,
    raw: Dict[int, List[Tuple[ExitTarget, float]]],
    tol: float,
) -> ExitDistribution:
    """
    Dijeljenje svakog retka njegovom sumom.

    Raises:
        TransitionTableError: Ako suma retka odstupa od 1 više od dopuštenog.
    """
    rows: Dict[int, Tuple[Tuple[ExitTarget, float], ...]] = {}
    raw_sums: Dict[int, float] = {}
    worst = 0.0
    for v, row in raw.items():
        total = sum(p for _, p in row)
        allowed = RENORMALIZATION_SLACK * max(tol, SOLVER_TOL_FLOOR) * len(row)
        drift = abs(total - 1.0)
        if drift > allowed or total <= 0:
            error_msg = (
                f"Suma retka vrha {v} u komponenti {i} je {total:.12f}, "
                f"dopušteno odstupanje {allowed:.3e}."
            )
            logging.error(error_msg)
            raise TransitionTableError(error_msg)
        if drift > allowed / 2:
            logging.warning(
                f"Suma retka vrha {v} u komponenti {i} blizu granice: {total:.12f} (dopušteno {allowed:.3e})."
            )
        worst = max(worst, drift)
        raw_sums[v] = total
        rows[v] = tuple((target, p / total) for target, p in row)

    logging.debug(
        f"Komponenta {i} ({mode.value}): {len(rows)} redaka, najveći drift sume {worst:.2e}."
    )
    return ExitDistribution(component=i, mode=mode, rows=rows, raw_sums=raw_sums)


def _solve_with_context(gadget: WeightedGadget, tol: float, context: str):
    try:
        return solve_two_terminal(gadget, tol)
    except SolverError as e:
        error_msg = f"Greška solvera za {context}: {e}"
        logging.error(error_msg)
        raise e.__class__(error_msg) from e


def compute_P(graph: Graph, d: Decomposition, i: int, eps: float) -> ExitDistribution:
    """
    Vjerojatnosti P_v(e) da šetnja koja uđe u D_i kroz v izađe reznim bridom e.

    Za svaki e = (u, u') iz C(D_i) gradi se gadget D_i + u' + u*: e ostaje prema u',
    svi ostali rezni bridovi preusmjereni su prema u*. P_v(e) je napon u v
    kada je u' na 1, a u* na 0.

    Args:
        graph (Graph): Graf.
        d (Decomposition): Dekompozicija.
        i (int): Indeks komponente.
        eps (float): Dopuštena greška.

    Returns:
        ExitDistribution: Normalizirani redovi, izlazi su parovi (u, u').

    Raises:
        TransitionTableError: Ako eps nije pozitivan ili suma retka previše odstupa.
        SolverError: Greška solvera, sa kontekstom komponente i brida.
    """
    if eps <= 0:
        error_msg = f"eps mora biti pozitivan, dobiveno: {eps}"
        logging.error(error_msg)
        raise TransitionTableError(error_msg)

    comp = d.components[i]
    verts = comp.ids
    local = {v: idx for idx, v in enumerate(verts)}
    cut = _oriented_cut_edges(graph, d, i)
    tol = solver_tol(eps, graph.n)

    raw: Dict[int, List[Tuple[ExitTarget, float]]] = {v: [] for v in verts}
    if len(cut) == 1:
        _, u, u_out = cut[0]
        for v in verts:
            raw[v].append(((u, u_out), 1.0))
        return _renormalize(TableModeEnum.P, i, raw, tol)

    inner = _inner_gadget_edges(graph, d, i, local)
    u_prime, u_star = len(verts), len(verts) + 1
    for eid, u, u_out in cut:
        edges = inner + [
            (local[w], u_prime if fid == eid else u_star, 1.0) for fid, w, _ in cut
        ]
        gadget = WeightedGadget(len(verts) + 2, edges, source=u_prime, sink=u_star)
        voltages = _solve_with_context(
            gadget, tol, f"komponentu {i}, rezni brid ({u}, {u_out})"
        )
        for v in verts:
            raw[v].append(((u, u_out), voltages[local[v]]))

    return _renormalize(TableModeEnum.P, i, raw, tol)


def compute_Q(graph: Graph, d: Decomposition, i: int, eps: float) -> ExitDistribution:
    """
    Vjerojatnosti Q_v(u) da je u prvi vrh izvan D_i koji posjeti šetnja koja uđe kroz v.

    Gadget je D_i + S', gdje je S' skup vrhova iz S susjednih D_i. Vrhovi iz
    S' bez u spajaju se u u*, bridovi unutar S' se ne koriste.

    Args:
        graph (Graph): Graf.
        d (Decomposition): Jaka dekompozicija.
        i (int): Indeks komponente.
        eps (float): Dopuštena greška.

    Returns:
        ExitDistribution: Normalizirani redovi, izlazi su vrhovi u iz S.

    Raises:
        DecompositionError: Ako dekompozicija nije jaka ili D_i ima susjeda izvan S.
        TransitionTableError: Ako eps nije pozitivan ili suma retka previše odstupa.
        SolverError: Greška solvera, sa kontekstom komponente i vrha.
    """
    if not d.strong:
        error_msg = "Q tablice zahtijevaju jaku dekompoziciju."
        logging.error(error_msg)
        raise DecompositionError(error_msg)
    if eps <= 0:
        error_msg = f"eps mora biti pozitivan, dobiveno: {eps}"
        logging.error(error_msg)
        raise TransitionTableError(error_msg)

    verts = d.components[i].ids
    local = {v: idx for idx, v in enumerate(verts)}
    cut = _oriented_cut_edges(graph, d, i)
    for _, w, x in cut:
        if d.component_of[x] != -1:
            error_msg = (
                f"Komponenta {i} je bridom ({w}, {x}) susjedna komponenti "
                f"{d.component_of[x]}, S nije vrhovni multiway cut."
            )
            logging.error(error_msg)
            raise DecompositionError(error_msg)

    exits = sorted({x for _, _, x in cut})
    tol = solver_tol(eps, graph.n)

    raw: Dict[int, List[Tuple[ExitTarget, float]]] = {v: [] for v in verts}
    if len(exits) == 1:
        for v in verts:
            raw[v].append((exits[0], 1.0))
        return _renormalize(TableModeEnum.Q, i, raw, tol)

    inner = _inner_gadget_edges(graph, d, i, local)
    source, sink = len(verts), len(verts) + 1
    for u in exits:
        edges = inner + [
            (local[w], source if x == u else sink, 1.0) for _, w, x in cut
        ]
        gadget = WeightedGadget(len(verts) + 2, edges, source=source, sink=sink)
        voltages = _solve_with_context(
            gadget, tol, f"komponentu {i}, rezni vrh {u}"
        )
        for v in verts:
            raw[v].append((u, voltages[local[v]]))

    return _renormalize(TableModeEnum.Q, i, raw, tol)


def build_table(dist: ExitDistribution) -> TransitionTable:
    """
    Kumulativni nizovi A_v za jednu komponentu, zadnji element je točno 1.
    """
    rows = {}
    for v, row in dist.rows.items():
        targets = tuple(target for target, _ in row)
        cumulative = list(accumulate(p for _, p in row))
        if cumulative:
            cumulative[-1] = 1.0
        rows[v] = (targets, tuple(cumulative))
    return TransitionTable(dist.mode, rows)


def sample_exit(table: TransitionTable, v: int, rng: RandomStream) -> ExitTarget:
    """
    Izlaz iz komponente za šetnju koja je ušla kroz v, binarnim pretraživanjem po A_v.

    Raises:
        TableRowMissingError: Ako v nema redak u tablici.
    """
    if v not in table.rows:
        error_msg = f"Vrh {v} nema redak u tablici prijelaza ({table.mode.value})."
        logging.error(error_msg)
        raise TableRowMissingError(error_msg)
    return table.lookup(v, rng.uniform())


def build_tables(
    graph: Graph,
    d: Decomposition,
    mode: TableModeEnum | str,
    eps: float,
    workers: int = 1,
) -> TransitionTable:
    """
    Tablice prijelaza svih komponenti dekompozicije, spojene u jednu.

    Args:
        graph (Graph): Graf.
        d (Decomposition): Dekompozicija (jaka za Q).
        mode (TableModeEnum | str): P za X̃, Q za X̂.
        eps (float): Dopuštena greška.
        workers (int): Broj dretvi za rješavanje komponenti.

    Returns:
        TransitionTable: Tablica sa retkom za svaki vrh svake komponente.
    """
    mode = TableModeEnum(mode)
    compute = compute_P if mode is TableModeEnum.P else compute_Q
    components = [i for i in range(d.k) if d.component_cut_edges[i]]

    def one(i: int) -> TransitionTable:
        return build_table(compute(graph, d, i, eps))

    if workers > 1 and len(components) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            tables = list(executor.map(one, components))
    else:
        tables = [one(i) for i in components]

    table = TransitionTable.combine(mode, tables)
    logging.info(
        f"Izgrađene {mode.value} tablice za {len(components)} komponenti "
        f"({len(table)} redaka), eps={eps:.3e}."
    )
    return table


def _target_label(target: ExitTarget) -> str:
    if isinstance(target, tuple):
        return f"{target[0]}-{target[1]}"
    return str(target)


def table_document(table: TransitionTable, eps: float, n: int) -> TableDumpDTO:
    rows = [
        TableRowDTO(
            vertex=v,
            targets=[_target_label(t) for t in targets],
            cumulative=list(cumulative),
        )
        for v, (targets, cumulative) in sorted(table.rows.items())
    ]
    return TableDumpDTO(
        mode=table.mode.value, eps=eps, tol=solver_tol(eps, n), rows=rows
    )


def dump_tables(table: TransitionTable, eps: float, n: int, path: str) -> None:
    """
    Zapis tablica u JSON datoteku (debugging).
    """
    document = table_document(table, eps, n)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document.model_dump(), f, indent=2)
    logging.info(f"Tablice prijelaza zapisane u {path}.")
