import logging
import math
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.decomposition.Decomposition import Decomposition
from src.graph.Graph import Graph, VertexSubset
from src.graph.graph_utils import induced_diameter
from src.models.Errors import DecompositionError, GraphValidationError
from src.schemas.DecompositionDTO import (
    ClauseResultDTO,
    DecompositionDTO,
    VerificationReportDTO,
)


def _check_phi(phi: float) -> None:
    if not 0 < phi < 1:
        error_msg = f"phi mora biti u intervalu (0, 1), dobiveno: {phi}"
        logging.error(error_msg)
        raise DecompositionError(error_msg)


def gamma_bound(phi: float, m: int) -> float:
    """
    Gornja granica dijametra komponente: 6 * (1 + ln m / ln(1 + t)), t = phi / (1 - phi).

    Za m < 2 uzima se ln m = 0.

    Args:
        phi (float): Ciljani udio reznih bridova.
        m (int): Broj bridova grafa.

    Returns:
        float: Granica dijametra.
    """
    t = phi / (1 - phi)
    return 6 * (1 + math.log(max(m, 1)) / math.log1p(t))


def default_phi(n: int) -> float:
    """
    Zadani phi = 1/sqrt(n); za n < 2 uzima se n = 2 kako bi phi ostao manji od 1.
    """
    return 1 / math.sqrt(max(n, 2))


def build_decomposition(
    graph: Graph,
    components: Sequence[Sequence[int]],
    phi: float,
    strong: bool,
    cut_vertices: Optional[Sequence[int]] = None,
    cut_edges: Optional[Sequence[int]] = None,
) -> Decomposition:
    """
    Izgradnja dekompozicije iz liste komponenti; S, C i rubni skupovi se izvode iz grafa.

    Ako su cut_vertices/cut_edges proslijeđeni (npr. iz dokumenta), koriste se kakvi jesu,
    a njihovu ispravnost provjerava verify_decomposition.

    Args:
        graph (Graph): Graf.
        components (Sequence[Sequence[int]]): Vrhovi svake komponente D_i.
        phi (float): Ciljani udio reznih bridova.
        strong (bool): Oznaka jake dekompozicije.
        cut_vertices (Optional[Sequence[int]]): Eksplicitni S.
        cut_edges (Optional[Sequence[int]]): Eksplicitni C (ID-evi bridova).

    Returns:
        Decomposition: Dekompozicija.

    Raises:
        DecompositionError: Ako je phi izvan (0, 1) ili se komponente preklapaju.
    """
    _check_phi(phi)

    component_of = [-1] * graph.n
    for i, comp in enumerate(components):
        for v in comp:
            if component_of[v] != -1:
                error_msg = f"Vrh {v} pripada komponentama {component_of[v]} i {i}."
                logging.error(error_msg)
                raise DecompositionError(error_msg)
            component_of[v] = i

    if cut_vertices is None:
        cut_vertices = [v for v in range(graph.n) if component_of[v] == -1]
    if cut_edges is None:
        cut_edges = [
            eid
            for eid, (u, v) in enumerate(graph.edges)
            if component_of[u] == -1 or component_of[u] != component_of[v]
        ]

    cut_edge_set = set(cut_edges)
    comp_cut_edges: List[List[int]] = [[] for _ in components]
    boundary: List[Set[int]] = [set() for _ in components]
    boundary_cut: Set[int] = set()

    for eid in sorted(cut_edge_set):
        u, v = graph.edges[eid]
        for a, b in ((u, v), (v, u)):
            ca = component_of[a]
            if ca >= 0:
                if not comp_cut_edges[ca] or comp_cut_edges[ca][-1] != eid:
                    comp_cut_edges[ca].append(eid)
                boundary[ca].add(a)
                if component_of[b] == -1:
                    boundary_cut.add(b)

    return Decomposition(
        n=graph.n,
        m=graph.m,
        phi=phi,
        strong=strong,
        components=tuple(
            VertexSubset(n=graph.n, ids=tuple(sorted(c))) for c in components
        ),
        cut_vertices=VertexSubset(n=graph.n, ids=tuple(sorted(cut_vertices))),
        cut_edges=tuple(sorted(cut_edge_set)),
        boundary_vertices=tuple(tuple(sorted(b)) for b in boundary),
        component_cut_edges=tuple(tuple(c) for c in comp_cut_edges),
        boundary_cut_vertices=VertexSubset(n=graph.n, ids=tuple(sorted(boundary_cut))),
    )


def trivial_decomposition(graph: Graph, phi: float = 0.5) -> Decomposition:
    """
    Dekompozicija bez komponenti (svi vrhovi u S): šetnja se nikad ne krati.
    """
    return build_decomposition(graph, [], phi, strong=True)


def _grow_ball(
    graph: Graph, v: int, removed: bytearray, t: float
) -> Tuple[List[int], List[int]]:
    """
    Rast kugle oko v u preostalom grafu H dok vrijedi neki od tri uvjeta rasta.

    Args:
        graph (Graph): Graf.
        v (int): Centar kugle.
        removed (bytearray): Oznake vrhova uklonjenih iz H.
        t (float): phi / (1 - phi).

    Returns:
        Tuple[List[int], List[int]]: Vrhovi kugle B_H(v, j) i ljuske R_H(v, j + 1).
    """
    dist: Dict[int, int] = {v: 0}
    layers: List[List[int]] = [[v]]
    # edges_into[k]: bridovi iz H sa jednim krajem u sloju k, a drugim u sloju k-1 ili k
    edges_into: List[int] = [0]

    def extend() -> None:
        k = len(layers)
        nxt: List[int] = []
        for x in layers[-1]:
            for w in graph.neighbors[x]:
                if not removed[w] and w not in dist:
                    dist[w] = k
                    nxt.append(w)
        count = 0
        for x in nxt:
            for w in graph.neighbors[x]:
                if removed[w]:
                    continue
                dw = dist.get(w)
                if dw == k - 1 or (dw == k and w > x):
                    count += 1
        layers.append(nxt)
        edges_into.append(count)

    j = 0
    ball_vertices = 1
    ball_edges = 0
    while True:
        while len(layers) < j + 3:
            extend()
        shell = len(layers[j + 1])
        r_minus = edges_into[j + 1]
        r_plus = edges_into[j + 2]
        if (
            shell > t * ball_vertices
            or r_plus > t * ball_edges
            or r_minus > t * ball_edges
        ):
            j += 1
            ball_vertices += shell
            ball_edges += r_minus
        else:
            break

    ball = [x for layer in layers[: j + 1] for x in layer]

    return ball, layers[j + 1]


def _decompose(graph: Graph, phi: float, strong: bool) -> Decomposition:
    _check_phi(phi)
    t = phi / (1 - phi)

    removed = bytearray(graph.n)
    balls: List[List[int]] = []
    next_vertex = 0

    while True:
        while next_vertex < graph.n and removed[next_vertex]:
            next_vertex += 1
        if next_vertex == graph.n:
            break
        ball, shell = _grow_ball(graph, next_vertex, removed, t)
        for x in ball:
            removed[x] = 1
        for x in shell:
            removed[x] = 1
        balls.append(ball)

    preliminary = build_decomposition(graph, balls, phi, strong)

    # Komponente sa manje unutarnjih nego reznih bridova prelaze u S
    kept: List[List[int]] = []
    for i, comp in enumerate(preliminary.components):
        inner = _inner_edge_count(graph, comp)
        if inner < len(preliminary.component_cut_edges[i]):
            logging.debug(
                f"Komponenta {i} raspuštena: |E(D_i)|={inner} < |C(D_i)|={len(preliminary.component_cut_edges[i])}"
            )
            continue
        kept.append(list(comp.ids))

    decomposition = build_decomposition(graph, kept, phi, strong)

    logging.info(f"Dekompozicija: {decomposition}")

    return decomposition


def strong_decompose(graph: Graph, phi: float) -> Decomposition:
    """
    Jaka (phi, gamma)-dekompozicija postupkom rasta kugli.

    Uvijek se bira preostali vrh najmanjeg ID-a, pa je rezultat deterministički.
    Komponente sa |E(D_i)| < |C(D_i)| se na kraju raspuštaju u S.

    Args:
        graph (Graph): Povezan graf.
        phi (float): Ciljani udio reznih bridova, 0 < phi < 1.

    Returns:
        Decomposition: Dekompozicija sa strong=True.

    Raises:
        DecompositionError: Ako phi nije u (0, 1).
    """
    return _decompose(graph, phi, strong=True)


def weak_decompose(graph: Graph, phi: float) -> Decomposition:
    """
    (phi, gamma)-dekompozicija: isti postupak kao strong_decompose, bez oznake strong.
    """
    return _decompose(graph, phi, strong=False)


def _inner_edge_count(graph: Graph, comp: VertexSubset) -> int:
    return sum(1 for v in comp.ids for w in graph.neighbors[v] if w > v and w in comp)


def verify_decomposition(graph: Graph, d: Decomposition) -> VerificationReportDTO:
    """
    Provjera svih klauzula definicije (jake) dekompozicije, sa svjedocima povreda.

    Args:
        graph (Graph): Graf.
        d (Decomposition): Dekompozicija nad ID-evima grafa.

    Returns:
        VerificationReportDTO: Rezultat po klauzuli.
    """
    clauses: List[ClauseResultDTO] = []

    # Particija: komponente i S pokrivaju V točno jednom
    owner: Dict[int, str] = {}
    partition_witness: Optional[str] = None
    for label, ids in [(f"D_{i}", c.ids) for i, c in enumerate(d.components)] + [
        ("S", d.cut_vertices.ids)
    ]:
        for v in ids:
            if v in owner and partition_witness is None:
                partition_witness = f"vrh {v} u {owner[v]} i {label}"
            owner.setdefault(v, label)
    if partition_witness is None and len(owner) != graph.n:
        missing = next(v for v in range(graph.n) if v not in owner)
        partition_witness = f"vrh {missing} nije pokriven"
    clauses.append(ClauseResultDTO(name="partition", passed=partition_witness is None, witness=partition_witness))

    # C = E \ unutarnji bridovi komponenti
    component_of = d.component_of
    expected_cut = {
        eid
        for eid, (u, v) in enumerate(graph.edges)
        if component_of[u] == -1 or component_of[u] != component_of[v]
    }
    actual_cut = set(d.cut_edges)
    diff = sorted(expected_cut.symmetric_difference(actual_cut))
    clauses.append(
        ClauseResultDTO(
            name="cut-edges",
            passed=not diff,
            witness=f"brid {graph.edges[diff[0]]}" if diff else None,
        )
    )

    budget = 3 * d.phi * graph.m
    clauses.append(
        ClauseResultDTO(
            name="cut-budget",
            passed=len(d.cut_edges) <= budget,
            witness=None if len(d.cut_edges) <= budget else f"|C|={len(d.cut_edges)} > {budget:.3f}",
        )
    )

    # |C(D_i)| <= |E(D_i)|, računato iz grafa
    boundary_witness: Optional[str] = None
    for i, comp in enumerate(d.components):
        inner = _inner_edge_count(graph, comp)
        cut = sum(
            1
            for eid in actual_cut
            if graph.edges[eid][0] in comp or graph.edges[eid][1] in comp
        )
        if cut > inner:
            boundary_witness = f"komponenta {i}: |C(D_i)|={cut} > |E(D_i)|={inner}"
            break
    clauses.append(ClauseResultDTO(name="component-boundary", passed=boundary_witness is None, witness=boundary_witness))

    bound = gamma_bound(d.phi, graph.m)
    diameter_witness: Optional[str] = None
    for i, comp in enumerate(d.components):
        try:
            diameter = induced_diameter(graph, comp)
        except GraphValidationError:
            diameter_witness = f"komponenta {i}: inducirani podgraf nije povezan"
            break
        if diameter > bound:
            diameter_witness = f"komponenta {i}: dijametar {diameter} > {bound:.3f}"
            break
    clauses.append(ClauseResultDTO(name="diameter", passed=diameter_witness is None, witness=diameter_witness))

    if d.strong:
        multiway_witness: Optional[str] = None
        for u, v in graph.edges:
            cu, cv = component_of[u], component_of[v]
            if cu >= 0 and cv >= 0 and cu != cv:
                multiway_witness = f"brid {(u, v)} spaja D_{cu} i D_{cv}"
                break
        clauses.append(ClauseResultDTO(name="multiway-cut", passed=multiway_witness is None, witness=multiway_witness))

        boundary_cut = {
            v
            for v in d.cut_vertices.ids
            if any(component_of[w] >= 0 for w in graph.neighbors[v])
        }
        # Prazan C(S) (npr. klika bez S) trivijalno prolazi
        vertex_budget = d.phi * graph.n
        clauses.append(
            ClauseResultDTO(
                name="cut-vertex-budget",
                passed=len(boundary_cut) <= vertex_budget,
                witness=None
                if len(boundary_cut) <= vertex_budget
                else f"|C(S)|={len(boundary_cut)} > {vertex_budget:.3f}",
            )
        )

    report = VerificationReportDTO(strong=d.strong, clauses=clauses)
    for failure in report.failures():
        logging.warning(f"Klauzula {failure.name} nije zadovoljena: {failure.witness}")

    return report


def decomposition_document(graph: Graph, d: Decomposition) -> DecompositionDTO:
    """
    Dokument dekompozicije: komponente kao liste ID-eva, C kao parovi vrhova.
    """
    return DecompositionDTO(
        n=d.n,
        m=d.m,
        phi=d.phi,
        strong=d.strong,
        gamma_bound=gamma_bound(d.phi, graph.m),
        components=[list(c.ids) for c in d.components],
        cut_vertices=list(d.cut_vertices.ids),
        cut_edges=[graph.edges[eid] for eid in d.cut_edges],
        boundary_cut_vertices=list(d.boundary_cut_vertices.ids),
    )


def decomposition_from_document(graph: Graph, doc: DecompositionDTO) -> Decomposition:
    """
    Rekonstrukcija dekompozicije iz dokumenta; S i C se preuzimaju kakvi jesu.

    Raises:
        DecompositionError: Ako dokument ne odgovara grafu (n, m, nepostojeći brid).
    """
    if doc.n != graph.n or doc.m != graph.m:
        error_msg = f"Dokument (n={doc.n}, m={doc.m}) ne odgovara grafu (n={graph.n}, m={graph.m})."
        logging.error(error_msg)
        raise DecompositionError(error_msg)
    try:
        cut_edges = [graph.edge_id(u, v) for u, v in doc.cut_edges]
    except KeyError as e:
        error_msg = f"Rezni brid {e} ne postoji u grafu."
        logging.error(error_msg)
        raise DecompositionError(error_msg) from e

    return build_decomposition(
        graph,
        doc.components,
        doc.phi,
        doc.strong,
        cut_vertices=doc.cut_vertices,
        cut_edges=cut_edges,
    )
