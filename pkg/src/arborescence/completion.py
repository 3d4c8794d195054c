import logging
from collections import defaultdict, deque
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from src.arborescence.Arborescence import Arborescence
from src.arborescence.QuotientDigraph import QuotientDigraph
from src.graph.Graph import Graph, VertexSubset
from src.models.Errors import (
    ArborescenceError,
    MalformedForestError,
    NotASpanningTreeError,
)
from src.oracle.matrix_tree import bareiss_determinant
from src.utils.RandomStream import RandomStream
from src.walk.PartialForest import PartialForest

Edge = Tuple[int, int]


def extract(pf: PartialForest) -> Arborescence:
    """
    Arborescencija T = {e_v | v != s} iz potpune šume ulaznih bridova.

    Raises:
        ArborescenceError: Ako šuma ima praznina ili nije potpuna.
    """
    if pf.gaps:
        error_msg = f"Šuma ima {len(pf.gaps)} praznina, potrebno je dopunjavanje (complete)."
        logging.error(error_msg)
        raise ArborescenceError(error_msg)

    parent = [-1] * pf.n
    for c, p in pf.parent.items():
        parent[c] = p
    return Arborescence(pf.n, pf.root, parent)


def forget_boundary_arcs(pf: PartialForest, boundary: VertexSubset) -> PartialForest:
    """
    Šuma F: zaboravljaju se lukovi u vrhove iz C(S) osim korijena, a ti vrhovi postaju praznine.

    Args:
        pf (PartialForest): Šuma iz šetnje X̂.
        boundary (VertexSubset): C(S).

    Returns:
        PartialForest: Šuma sa lukovima e_v samo za v izvan C(S) i v != s.
    """
    forgotten = {v for v in boundary.ids if v != pf.root}
    arcs = [(p, c) for c, p in pf.parent.items() if c not in forgotten]
    return PartialForest(pf.n, pf.root, arcs, pf.gaps | forgotten)


def _forest_tops(pf: PartialForest) -> List[int]:
    """
    Za svaki vrh početak njegovog stabla u šumi (korijen s ili praznina).

    Raises:
        MalformedForestError: Ako vrh nema ni luk ni oznaku praznine ili postoji ciklus.
    """
    missing = [
        v
        for v in range(pf.n)
        if v != pf.root and v not in pf.gaps and v not in pf.parent
    ]
    if missing:
        error_msg = f"Vrhovi bez luka koji nisu praznine: {missing[:10]}"
        logging.error(error_msg)
        raise MalformedForestError(error_msg)

    top = [-1] * pf.n
    for v in range(pf.n):
        path = []
        on_path = set()
        x = v
        while top[x] == -1 and x in pf.parent:
            if x in on_path:
                error_msg = f"Šuma sadrži ciklus kroz vrh {x}."
                logging.error(error_msg)
                raise MalformedForestError(error_msg)
            on_path.add(x)
            path.append(x)
            x = pf.parent[x]
        head = top[x] if top[x] != -1 else x
        top[x] = head
        for y in path:
            top[y] = head
    return top


def build_quotient(
    pf: PartialForest, graph: Graph, boundary: Optional[VertexSubset] = None
) -> QuotientDigraph:
    """
    Digraf G(F, s) nad slabo povezanim komponentama šume sa prazninama.

    Čvor 0 je komponenta korijena s, ostali su poredani po ID-u svoje praznine.
    Za svaku prazninu u (korijen H_l) i svaki brid (v, u) grafa sa v u H_j, j != l,
    dodaje se kandidat (v, u) luku (j, l).

    Args:
        pf (PartialForest): Šuma sa barem jednom prazninom.
        graph (Graph): Graf.
        boundary (Optional[VertexSubset]): C(S); ako je zadan, praznine moraju biti u njemu.

    Returns:
        QuotientDigraph: Digraf sa višestrukostima lukova.

    Raises:
        ArborescenceError: Ako šuma nema praznina ili praznina nije u C(S).
        MalformedForestError: Ako šuma nije ispravna.
    """
    if not pf.gaps:
        error_msg = "Šuma nema praznina, koristiti extract."
        logging.error(error_msg)
        raise ArborescenceError(error_msg)
    if boundary is not None:
        outside = sorted(u for u in pf.gaps if u not in boundary)
        if outside:
            error_msg = f"Praznine izvan C(S): {outside}"
            logging.error(error_msg)
            raise ArborescenceError(error_msg)

    top = _forest_tops(pf)
    roots = (pf.root,) + tuple(sorted(pf.gaps))
    node_of_root = {r: idx for idx, r in enumerate(roots)}
    node = [node_of_root[top[v]] for v in range(pf.n)]

    members: List[List[int]] = [[] for _ in roots]
    for v in range(pf.n):
        members[node[v]].append(v)

    candidates: Dict[Tuple[int, int], List[Edge]] = defaultdict(list)
    for l, u in enumerate(roots[1:], start=1):
        for v in graph.neighbors[u]:
            if node[v] != l:
                candidates[(node[v], l)].append((v, u))

    quotient = QuotientDigraph(
        roots=roots,
        members=tuple(tuple(m) for m in members),
        candidates={arc: tuple(edges) for arc, edges in sorted(candidates.items())},
    )
    logging.debug(f"Izgrađen {quotient!r}")
    return quotient


def count_arborescences(
    q: QuotientDigraph, root: int = 0, fixed: Optional[Mapping[int, int]] = None
) -> int:
    """
    Broj arborescencija digrafa s korijenom root, uz višestrukosti lukova.

    Determinanta ulazne Laplaceove matrice bez retka i stupca korijena (Bareiss).

    Args:
        q (QuotientDigraph): Digraf.
        root (int): Korijen.
        fixed (Optional[Mapping[int, int]]): Čvorovi x sa fiksiranim izvorom ulaznog luka.

    Returns:
        int: Broj arborescencija (0 ako ne postoje).
    """
    size = q.size
    matrix = [[0] * size for _ in range(size)]
    for (j, l), edges in q.candidates.items():
        if l == root or (fixed and l in fixed and fixed[l] != j):
            continue
        weight = len(edges)
        matrix[l][l] += weight
        matrix[j][l] -= weight

    keep = [x for x in range(size) if x != root]
    return bareiss_determinant([[matrix[i][j] for j in keep] for i in keep])


def sample_quotient_arborescence(
    q: QuotientDigraph, root: int, rng: RandomStream
) -> Dict[int, Edge]:
    """
    Uniformno slučajna arborescencija digrafa, uz odabir konkretnog brida po luku.

    Čvorovi se obrađuju uzlazno; za čvor x izvor y se bira s vjerojatnošću
    (broj arborescencija sa lukom (y, x)) / (trenutni broj), uz fiksiranje izbora.
    Zatim se uniformno bira jedan od konkretnih bridova luka (y, x).

    Args:
        q (QuotientDigraph): Digraf.
        root (int): Korijen.
        rng (RandomStream): Izvor slučajnosti.

    Returns:
        Dict[int, Edge]: Za svaki čvor osim korijena konkretni brid (v, u).

    Raises:
        ArborescenceError: Ako digraf nema nijednu arborescenciju.
    """
    fixed: Dict[int, int] = {}
    total = count_arborescences(q, root)
    if total == 0:
        error_msg = f"Digraf {q!r} nema arborescenciju s korijenom {root}."
        logging.error(error_msg)
        raise ArborescenceError(error_msg)

    choices: Dict[int, Edge] = {}
    for x in range(q.size):
        if x == root:
            continue
        sources = q.sources(x)
        r = rng.integer_below(total)
        acc = 0
        for idx, y in enumerate(sources):
            if idx == len(sources) - 1:
                count = total - acc
            else:
                count = count_arborescences(q, root, {**fixed, x: y})
            if r < acc + count:
                break
            acc += count
        fixed[x] = y
        total = count
        edges = q.candidates[(y, x)]
        choices[x] = edges[rng.integer_below(len(edges))]

    return choices


def complete(pf: PartialForest, choices: Iterable[Edge] | Mapping[int, Edge]) -> Arborescence:
    """
    Arborescencija H' ∪ F: šumi se dodaju odabrani bridovi u praznine.

    Raises:
        ArborescenceError: Ako izbori ne pokrivaju točno sve praznine ili rezultat nije arborescencija.
    """
    edges = list(choices.values()) if isinstance(choices, Mapping) else list(choices)
    parent = [-1] * pf.n
    for c, p in pf.parent.items():
        parent[c] = p

    filled = set()
    for v, u in edges:
        if u not in pf.gaps or u in filled:
            error_msg = f"Brid ({v}, {u}) ne popunjava slobodnu prazninu."
            logging.error(error_msg)
            raise ArborescenceError(error_msg)
        parent[u] = v
        filled.add(u)
    if filled != pf.gaps:
        error_msg = f"Nepopunjene praznine: {sorted(pf.gaps - filled)}"
        logging.error(error_msg)
        raise ArborescenceError(error_msg)

    return Arborescence(pf.n, pf.root, parent)


def to_tree(a: Arborescence) -> List[Edge]:
    """
    Neusmjereno razapinjuće stablo, kanonski sortirani bridovi (u < v).
    """
    return sorted((min(p, v), max(p, v)) for p, v in a.arcs())


def orient_tree(n: int, edges: Iterable[Edge], root: int) -> Arborescence:
    """
    Orijentacija stabla od korijena (BFS).

    Raises:
        ArborescenceError: Ako bridovi ne čine razapinjuće stablo.
    """
    adjacency: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)

    parent = [-2] * n
    parent[root] = -1
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(adjacency[u]):
            if parent[w] == -2:
                parent[w] = u
                queue.append(w)

    if -2 in parent:
        error_msg = f"Bridovi ne povezuju sve vrhove iz korijena {root}."
        logging.error(error_msg)
        raise ArborescenceError(error_msg)
    return Arborescence(n, root, parent)


def validate_spanning_tree(graph: Graph, edges: Iterable[Edge]) -> List[Edge]:
    """
    Provjera da su bridovi razapinjuće stablo grafa.

    n - 1 različitih bridova grafa čini stablo točno onda kada povezuju sve vrhove.

    Returns:
        List[Edge]: Kanonski sortirani bridovi.

    Raises:
        NotASpanningTreeError: Ako brid nije u grafu, ponavlja se, zatvara ciklus ili ih nema n - 1.
    """
    canonical = sorted((min(u, v), max(u, v)) for u, v in edges)
    if len(canonical) != graph.n - 1:
        error_msg = f"Stablo mora imati {graph.n - 1} bridova, ima {len(canonical)}."
        logging.error(error_msg)
        raise NotASpanningTreeError(error_msg)

    for i, (u, v) in enumerate(canonical):
        if not (0 <= u < graph.n and 0 <= v < graph.n) or not graph.has_edge(u, v):
            error_msg = f"Brid ({u}, {v}) nije brid grafa."
            logging.error(error_msg)
            raise NotASpanningTreeError(error_msg)
        if i and canonical[i - 1] == (u, v):
            error_msg = f"Brid ({u}, {v}) se ponavlja."
            logging.error(error_msg)
            raise NotASpanningTreeError(error_msg)

    if graph.n > 1:
        rows, cols = zip(*canonical)
        matrix = csr_matrix(
            (np.ones(len(canonical)), (rows, cols)), shape=(graph.n, graph.n)
        )
        n_components, _ = connected_components(matrix, directed=False)
        if n_components > 1:
            error_msg = f"Bridovi zatvaraju ciklus: pronađeno {n_components} komponenti."
            logging.error(error_msg)
            raise NotASpanningTreeError(error_msg)

    return canonical
