import logging
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from src.models.Errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    GraphValidationError,
    SelfLoopError,
)

Edge = Tuple[int, int]


class Graph:
    """
    Nepromjenjivi neusmjereni jednostavni graf u komprimiranom (CSR) obliku.

    Vrhovi su 0..n-1, svaki neusmjereni brid (u, v), u < v, ima kanonski ID
    jednak svojoj poziciji u sortiranoj listi bridova.
    """

    __slots__ = (
        "n",
        "m",
        "edges",
        "labels",
        "indptr",
        "indices",
        "neighbors",
        "degrees",
        "_edge_index",
    )

    def __init__(
        self, n: int, edges: Sequence[Edge], labels: Sequence[str] = ()
    ) -> None:
        """
        Inicijalizacija grafa iz već validiranih kanonskih bridova.

        Za validaciju ulaza koristiti Graph.from_edges.

        Args:
            n (int): Broj vrhova.
            edges (Sequence[Edge]): Kanonski bridovi (u < v), bez duplikata.
            labels (Sequence[str]): Originalne oznake vrhova iz ulazne datoteke.
        """
        canonical = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        self.n: int = n
        self.m: int = len(canonical)
        self.edges: Tuple[Edge, ...] = canonical
        self.labels: Tuple[str, ...] = (
            tuple(labels) if labels else tuple(str(v) for v in range(n))
        )
        self._edge_index: Dict[Edge, int] = {e: i for i, e in enumerate(canonical)}

        adjacency: List[List[int]] = [[] for _ in range(n)]
        for u, v in canonical:
            adjacency[u].append(v)
            adjacency[v].append(u)

        self.neighbors: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(sorted(a)) for a in adjacency
        )
        self.degrees: np.ndarray = np.array([len(a) for a in adjacency], dtype=np.int64)
        self.indptr: np.ndarray = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=self.indptr[1:])
        self.indices: np.ndarray = np.fromiter(
            (w for a in self.neighbors for w in a), dtype=np.int64, count=2 * self.m
        )

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Edge],
        labels: Sequence[str] = (),
        require_connected: bool = True,
    ) -> "Graph":
        """
        Kreira graf uz validaciju svih invarijanti jednostavnog povezanog grafa.

        Args:
            n (int): Broj vrhova.
            edges (Iterable[Edge]): Neusmjereni bridovi.
            labels (Sequence[str]): Originalne oznake vrhova.
            require_connected (bool): Da li se zahtijeva povezanost.

        Returns:
            Graph: Validiran graf.

        Raises:
            GraphValidationError: Ako je ID vrha izvan raspona.
            SelfLoopError: Ako postoji petlja (u, u).
            DuplicateEdgeError: Ako se neusmjereni brid pojavljuje više puta.
            DisconnectedGraphError: Ako graf nije povezan.
        """
        if n < 1:
            error_msg = "Graf mora imati barem jedan vrh."
            logging.error(error_msg)
            raise GraphValidationError(error_msg)

        seen: Dict[Edge, int] = {}
        for line_no, (u, v) in enumerate(edges, start=1):
            if not (0 <= u < n and 0 <= v < n):
                error_msg = f"Brid {line_no}: vrh izvan raspona 0..{n - 1}: ({u}, {v})"
                logging.error(error_msg)
                raise GraphValidationError(error_msg)
            if u == v:
                error_msg = f"Brid {line_no}: petlja na vrhu {u} nije dozvoljena."
                logging.error(error_msg)
                raise SelfLoopError(error_msg)
            key = (min(u, v), max(u, v))
            if key in seen:
                error_msg = (
                    f"Brid {line_no}: duplikat brida {key} (prvi put na retku {seen[key]})."
                )
                logging.error(error_msg)
                raise DuplicateEdgeError(error_msg)
            seen[key] = line_no

        graph = cls(n, list(seen), labels)

        if require_connected and n > 1:
            n_components, _ = connected_components(
                graph.adjacency_matrix(), directed=False
            )
            if n_components > 1:
                error_msg = f"Graf nije povezan: pronađeno {n_components} komponenti."
                logging.error(error_msg)
                raise DisconnectedGraphError(error_msg)

        return graph

    def edge_id(self, u: int, v: int) -> int:
        """
        Kanonski ID neusmjerenog brida (u, v).

        Raises:
            KeyError: Ako brid ne postoji u grafu.
        """
        return self._edge_index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_index

    def adjacency_matrix(self) -> csr_matrix:
        """
        Matrica susjedstva kao scipy CSR matrica (jedinične težine).
        """
        data = np.ones(2 * self.m, dtype=np.float64)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, edges={list(self.edges[:8])}{'...' if self.m > 8 else ''})"


class VertexSubset(BaseModel):
    """
    Uređeni podskup vrhova grafa s bitmapom pripadnosti.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", strict=True)

    n: int = Field(ge=0, description="Broj vrhova grafa")
    ids: Tuple[int, ...] = Field(default=(), description="ID-evi vrhova u podskupu")

    _bitmap: bytes = PrivateAttr(default=b"")

    @field_validator("ids", mode="before")
    @classmethod
    def validate_ids(cls, value: Iterable[int]) -> Tuple[int, ...]:
        """
        Validacija ID-eva: jedinstveni, cijeli brojevi.

        Args:
            value (Iterable[int]): ID-evi vrhova.

        Returns:
            Tuple[int, ...]: ID-evi kao tuple.

        Raises:
            ValueError: Ako se neki ID ponavlja.
        """
        ids = tuple(int(v) for v in value)
        if len(set(ids)) != len(ids):
            error_msg = f"ID-evi vrhova moraju biti jedinstveni: {ids}"
            logging.error(error_msg)
            raise ValueError(error_msg)
        return ids

    def model_post_init(self, __context: object) -> None:
        bitmap = bytearray(self.n)
        for v in self.ids:
            if v < 0 or v >= self.n:
                error_msg = f"ID vrha {v} je izvan raspona 0..{self.n - 1}."
                logging.error(error_msg)
                raise ValueError(error_msg)
            bitmap[v] = 1
        self._bitmap = bytes(bitmap)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and self._bitmap[v] == 1

    def __len__(self) -> int:
        return len(self.ids)
