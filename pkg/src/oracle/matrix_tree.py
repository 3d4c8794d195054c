import logging
from typing import List, Sequence, Tuple

from scipy.sparse.csgraph import connected_components

from src.graph.Graph import Graph
from src.models.Errors import DisconnectedGraphError, EnumerationCapError, OracleError
from src.utils.settings import ENUMERATION_CAP

Edge = Tuple[int, int]


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """
    Egzaktna determinanta cjelobrojne matrice eliminacijom bez razlomaka (Bareiss).

    Svi međurezultati su cijeli brojevi, dijeljenje prethodnim pivotom je uvijek egzaktno.

    Args:
        matrix (Sequence[Sequence[int]]): Kvadratna matrica.

    Returns:
        int: Determinanta (1 za praznu matricu).
    """
    a: List[List[int]] = [list(row) for row in matrix]
    size = len(a)
    if size == 0:
        return 1

    sign = 1
    previous = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, size):
            row_i = a[i]
            factor = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
        previous = pivot

    return sign * a[-1][-1]


def laplacian_minor(graph: Graph, removed: int = 0) -> List[List[int]]:
    """
    Cjelobrojna Laplaceova matrica grafa bez retka i stupca vrha removed.
    """
    keep = [v for v in range(graph.n) if v != removed]
    position = {v: i for i, v in enumerate(keep)}
    minor = [[0] * len(keep) for _ in keep]
    for v in keep:
        row = minor[position[v]]
        row[position[v]] = len(graph.neighbors[v])
        for w in graph.neighbors[v]:
            if w != removed:
                row[position[w]] = -1
    return minor


def count_spanning_trees(graph: Graph) -> int:
    """
    Broj razapinjućih stabala po Kirchhoffovom teoremu, u egzaktnoj cjelobrojnoj aritmetici.

    Args:
        graph (Graph): Povezan graf.

    Returns:
        int: |T(G)|.

    Raises:
        DisconnectedGraphError: Ako graf nije povezan.
    """
    if graph.n > 1:
        n_components, _ = connected_components(graph.adjacency_matrix(), directed=False)
        if n_components > 1:
            error_msg = f"Graf ima {n_components} komponenti povezanosti, nema razapinjućih stabala."
            logging.error(error_msg)
            raise DisconnectedGraphError(error_msg)

    count = bareiss_determinant(laplacian_minor(graph))
    logging.debug(f"Broj razapinjućih stabala (n={graph.n}, m={graph.m}): {count}")
    return count


def enumerate_spanning_trees(
    graph: Graph, cap: int = ENUMERATION_CAP
) -> List[Tuple[Edge, ...]]:
    """
    Sva razapinjuća stabla grafa, leksikografski poredana (bridovi kanonski sortirani).

    Backtracking po bridovima uz union-find: brid se uzima ako spaja dvije
    komponente, a preskače samo ako preostali bridovi još mogu povezati graf.

    Args:
        graph (Graph): Povezan graf.
        cap (int): Najveći dopušteni broj stabala.

    Returns:
        List[Tuple[Edge, ...]]: Stabla kao n - 1 kanonskih bridova.

    Raises:
        EnumerationCapError: Ako broj stabala prelazi cap.
    """
    count = count_spanning_trees(graph)
    if count > cap:
        error_msg = f"Graf ima {count} razapinjućih stabala, više od dopuštenih {cap}."
        logging.error(error_msg)
        raise EnumerationCapError(error_msg)

    edges = graph.edges
    needed = graph.n - 1
    trees: List[Tuple[Edge, ...]] = []

    def find(dsu: List[int], x: int) -> int:
        while dsu[x] != x:
            dsu[x] = dsu[dsu[x]]
            x = dsu[x]
        return x

    def spannable(start: int, dsu: List[int], chosen: int) -> bool:
        trial = dsu.copy()
        merged = chosen
        for u, v in edges[start:]:
            ru, rv = find(trial, u), find(trial, v)
            if ru != rv:
                trial[ru] = rv
                merged += 1
        return merged == needed

    def extend(idx: int, chosen: List[Edge], dsu: List[int]) -> None:
        if len(chosen) == needed:
            trees.append(tuple(chosen))
            return
        if graph.m - idx < needed - len(chosen):
            return
        u, v = edges[idx]
        ru, rv = find(dsu, u), find(dsu, v)
        if ru != rv:
            child = dsu.copy()
            child[ru] = rv
            chosen.append((u, v))
            extend(idx + 1, chosen, child)
            chosen.pop()
        if spannable(idx + 1, dsu, len(chosen)):
            extend(idx + 1, chosen, dsu)

    extend(0, [], list(range(graph.n)))

    if len(trees) != count:
        error_msg = f"Enumeracija dala {len(trees)} stabala, determinanta {count}."
        logging.error(error_msg)
        raise OracleError(error_msg)

    logging.debug(f"Enumerirano {len(trees)} razapinjućih stabala.")
    return trees
