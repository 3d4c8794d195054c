import io
import logging
import re
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from scipy.sparse.csgraph import connected_components, shortest_path

from src.graph.Graph import Edge, Graph, VertexSubset
from src.models.Errors import GraphParseError, GraphValidationError
from src.utils.RandomStream import RandomStream

_VERTEX_TOKEN = re.compile(r"^\d+$")


def load_graph(text: str) -> Graph:
    """
    Učitavanje grafa iz liste bridova ("u v" po retku, '#' za komentare).

    Kanonski ID-evi vrhova 0..n-1 dodjeljuju se redoslijedom prvog pojavljivanja.

    Args:
        text (str): Sadržaj liste bridova.

    Returns:
        Graph: Validiran povezan jednostavan graf.

    Raises:
        GraphParseError: Ako ulaz nije ispravna lista parova nenegativnih cijelih brojeva.
        SelfLoopError: Ako postoji petlja.
        DuplicateEdgeError: Ako se brid ponavlja.
        DisconnectedGraphError: Ako graf nije povezan.
    """
    try:
        df = pd.read_csv(
            io.StringIO(text),
            sep=r"\s+",
            header=None,
            comment="#",
            dtype=str,
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError as e:
        error_msg = "Lista bridova je prazna."
        logging.error(error_msg)
        raise GraphParseError(error_msg) from e
    except pd.errors.ParserError as e:
        error_msg = f"Greška prilikom parsiranja liste bridova (očekivano 'u v' po retku): {e}"
        logging.error(error_msg)
        raise GraphParseError(error_msg) from e

    if df.shape[1] != 2:
        error_msg = f"Svaki redak mora imati točno 2 vrha, pronađeno stupaca: {df.shape[1]}"
        logging.error(error_msg)
        raise GraphParseError(error_msg)

    if df.isna().to_numpy().any():
        bad_row = int(np.flatnonzero(df.isna().any(axis=1).to_numpy())[0]) + 1
        error_msg = f"Brid {bad_row}: nedostaje drugi vrh."
        logging.error(error_msg)
        raise GraphParseError(error_msg)

    labels: Dict[str, int] = {}
    edges: List[Edge] = []
    for row_no, (a, b) in enumerate(df.itertuples(index=False, name=None), start=1):
        for token in (a, b):
            if not _VERTEX_TOKEN.match(token):
                error_msg = f"Brid {row_no}: '{token}' nije nenegativan cijeli broj."
                logging.error(error_msg)
                raise GraphParseError(error_msg)
            # Normalizacija '007' -> '7' kako bi ista oznaka dala isti vrh
            labels.setdefault(str(int(token)), len(labels))
        edges.append((labels[str(int(a))], labels[str(int(b))]))

    graph = Graph.from_edges(len(labels), edges, labels=list(labels))
    logging.info(f"Učitan graf: n={graph.n}, m={graph.m}.")

    return graph


def serialize_graph(graph: Graph, use_labels: bool = False) -> str:
    """
    Kanonska sortirana lista bridova ("u v" po retku).

    Zadano se ispisuju kanonski ID-evi 0..n-1, pa je izlaz za graf s proizvoljnim
    oznakama prenumeriran. Uz use_labels ispisuju se izvorne oznake iz ulaza.

    Args:
        graph (Graph): Graf.
        use_labels (bool): Ispis izvornih oznaka umjesto kanonskih ID-eva.

    Returns:
        str: Lista bridova.
    """
    if not use_labels:
        return "".join(f"{u} {v}\n" for u, v in graph.edges)
    labels = graph.labels
    return "".join(f"{labels[u]} {labels[v]}\n" for u, v in graph.edges)


def stationary_sample(graph: Graph, rng: RandomStream) -> int:
    """
    Vrh uzorkovan iz stacionarne distribucije šetnje (vjerojatnost deg(v)/2m).

    Args:
        graph (Graph): Graf.
        rng (RandomStream): Izvor slučajnosti.

    Returns:
        int: Uzorkovani vrh.
    """
    if graph.m == 0:
        return 0
    r = rng.uniform() * (2 * graph.m)
    return int(np.searchsorted(graph.indptr[1:], r, side="right"))


def induced_diameter(graph: Graph, comp: VertexSubset) -> int:
    """
    Dijametar (u broju bridova) podgrafa induciranog skupom vrhova.

    Args:
        graph (Graph): Graf.
        comp (VertexSubset): Skup vrhova koji inducira povezan podgraf.

    Returns:
        int: Najveća udaljenost najkraćeg puta unutar induciranog podgrafa.

    Raises:
        GraphValidationError: Ako je skup prazan ili inducirani podgraf nije povezan.
    """
    if len(comp) == 0:
        error_msg = "Dijametar praznog skupa vrhova nije definiran."
        logging.error(error_msg)
        raise GraphValidationError(error_msg)
    if len(comp) == 1:
        return 0

    ids = np.array(comp.ids, dtype=np.int64)
    sub = graph.adjacency_matrix()[ids][:, ids]

    n_components, _ = connected_components(sub, directed=False)
    if n_components > 1:
        error_msg = f"Inducirani podgraf ({len(comp)} vrhova) nije povezan: {n_components} komponenti."
        logging.error(error_msg)
        raise GraphValidationError(error_msg)

    distances = shortest_path(sub, directed=False, unweighted=True)

    return int(distances.max())


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    """
    Zvijezda K_{1,leaves} sa centrom u vrhu 0.
    """
    return Graph.from_edges(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    """
    Rešetka rows x cols, vrhovi numerirani po recima.
    """
    edges: List[Edge] = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def lollipop_graph(clique: int, path: int) -> Graph:
    """
    Klika K_clique (vrhovi 0..clique-1) sa putom od `path` vrhova spojenim na vrh clique-1.
    """
    edges: List[Edge] = list(combinations(range(clique), 2))
    edges += [(v, v + 1) for v in range(clique - 1, clique + path - 1)]
    return Graph.from_edges(clique + path, edges)


def erdos_renyi_graph(
    n: int, p: float, seed: int, max_attempts: int = 100
) -> Graph:
    """
    Povezan Erdős–Rényi graf G(n, p); graf se ponovno uzorkuje dok ne bude povezan.

    Args:
        n (int): Broj vrhova.
        p (float): Vjerojatnost brida.
        seed (int): Seed generatora.
        max_attempts (int): Maksimalan broj pokušaja.

    Returns:
        Graph: Povezan slučajni graf.

    Raises:
        GraphValidationError: Ako nakon max_attempts pokušaja graf nije povezan.
    """
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)

    for attempt in range(max_attempts):
        mask = rng.random(rows.size) < p
        edges: List[Tuple[int, int]] = list(
            zip(rows[mask].tolist(), cols[mask].tolist())
        )
        graph = Graph.from_edges(n, edges, require_connected=False)
        n_components, _ = connected_components(graph.adjacency_matrix(), directed=False)
        if n_components == 1:
            logging.debug(f"G({n}, {p}) povezan u pokušaju {attempt + 1}.")
            return graph

    error_msg = f"Nije pronađen povezan G({n}, {p}) nakon {max_attempts} pokušaja."
    logging.error(error_msg)
    raise GraphValidationError(error_msg)
