import logging
from typing import Dict, FrozenSet, Iterable, Sequence, Tuple

from src.models.Errors import MalformedForestError

Arc = Tuple[int, int]


class PartialForest:
    """
    Ulazni bridovi e_v = (roditelj, v) zabilježeni tijekom šetnje iz korijena s.

    Vrhovi u gaps su posjećeni, ali im ulazni brid nije poznat.
    """

    __slots__ = ("n", "root", "parent", "gaps")

    def __init__(
        self, n: int, root: int, arcs: Iterable[Arc], gaps: Iterable[int] = ()
    ) -> None:
        """
        Args:
            n (int): Broj vrhova grafa.
            root (int): Korijen s.
            arcs (Iterable[Arc]): Lukovi (roditelj, dijete).
            gaps (Iterable[int]): Vrhovi bez poznatog luka.

        Raises:
            MalformedForestError: Ako vrh ima dva luka, luk ulazi u korijen
                ili je vrh istovremeno praznina i ima luk.
        """
        parent: Dict[int, int] = {}
        for p, c in arcs:
            if c == root or c in parent or not (0 <= c < n and 0 <= p < n):
                error_msg = f"Neispravan luk ({p}, {c}) u šumi s korijenom {root}."
                logging.error(error_msg)
                raise MalformedForestError(error_msg)
            parent[c] = p

        gap_set = frozenset(gaps)
        if root in gap_set or gap_set & parent.keys():
            error_msg = f"Praznine {sorted(gap_set)} se preklapaju s korijenom ili lukovima."
            logging.error(error_msg)
            raise MalformedForestError(error_msg)

        self.n: int = n
        self.root: int = root
        self.parent: Dict[int, int] = parent
        self.gaps: FrozenSet[int] = gap_set

    @classmethod
    def from_transcript(cls, n: int, transcript: Sequence[int]) -> "PartialForest":
        """
        Šuma ulaznih bridova iz niza posjećenih vrhova (prvi element je korijen).
        """
        root = transcript[0]
        seen = {root}
        arcs = []
        for prev, cur in zip(transcript, transcript[1:]):
            if cur not in seen:
                seen.add(cur)
                arcs.append((prev, cur))
        return cls(n, root, arcs)

    @property
    def is_complete(self) -> bool:
        return not self.gaps and len(self.parent) == self.n - 1

    def arcs(self) -> Tuple[Arc, ...]:
        return tuple((p, c) for c, p in sorted(self.parent.items()))

    def __repr__(self) -> str:
        return f"PartialForest(root={self.root}, arcs={len(self.parent)}, gaps={sorted(self.gaps)})"
