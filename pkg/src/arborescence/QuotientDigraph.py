from typing import Dict, List, Tuple

Arc = Tuple[int, int]


class QuotientDigraph:
    """
    Digraf G(F, s): čvor po slabo povezanoj komponenti H_j šume F, h_0 sadrži s.

    Luk (j, l) ima višestrukost jednaku broju bridova (v, u) grafa G za koje je
    v u H_j, a u korijen (praznina) komponente H_l. Za svaki luk čuvaju se i
    konkretni bridovi, orijentirani prema u.
    """

    __slots__ = ("roots", "members", "candidates")

    def __init__(
        self,
        roots: Tuple[int, ...],
        members: Tuple[Tuple[int, ...], ...],
        candidates: Dict[Arc, Tuple[Arc, ...]],
    ) -> None:
        self.roots: Tuple[int, ...] = roots
        self.members: Tuple[Tuple[int, ...], ...] = members
        self.candidates: Dict[Arc, Tuple[Arc, ...]] = candidates

    @property
    def size(self) -> int:
        return len(self.roots)

    def multiplicity(self, j: int, l: int) -> int:
        return len(self.candidates.get((j, l), ()))

    def sources(self, l: int) -> List[int]:
        """
        Čvorovi j sa lukom (j, l), uzlazno.
        """
        return sorted(j for j, target in self.candidates if target == l)

    def __repr__(self) -> str:
        arcs = sum(len(c) for c in self.candidates.values())
        return f"QuotientDigraph(nodes={self.size}, arc_classes={len(self.candidates)}, edges={arcs})"
