import logging
from typing import List, Sequence, Tuple

from src.models.Errors import ArborescenceError


class Arborescence:
    """
    Usmjereno razapinjuće stablo s korijenom: svaki vrh osim korijena ima točno jedan ulazni luk.

    parent[v] je početak luka e_T(v), parent[root] = -1.
    """

    __slots__ = ("n", "root", "parent")

    def __init__(self, n: int, root: int, parent: Sequence[int]) -> None:
        """
        Raises:
            ArborescenceError: Ako broj lukova nije n - 1 ili postoji usmjereni ciklus.
        """
        parent = tuple(parent)
        if len(parent) != n or not 0 <= root < n or parent[root] != -1:
            error_msg = f"Neispravan niz roditelja za arborescenciju s korijenom {root} (n={n})."
            logging.error(error_msg)
            raise ArborescenceError(error_msg)

        missing = [v for v in range(n) if v != root and not 0 <= parent[v] < n]
        if missing:
            error_msg = f"Vrhovi bez ulaznog luka: {missing[:10]}"
            logging.error(error_msg)
            raise ArborescenceError(error_msg)

        # 0 neobrađen, 1 na trenutnom putu, 2 dolazi do korijena
        state = bytearray(n)
        state[root] = 2
        for v in range(n):
            path = []
            x = v
            while state[x] == 0:
                state[x] = 1
                path.append(x)
                x = parent[x]
            if state[x] == 1:
                error_msg = f"Usmjereni ciklus kroz vrh {x}."
                logging.error(error_msg)
                raise ArborescenceError(error_msg)
            for y in path:
                state[y] = 2

        self.n: int = n
        self.root: int = root
        self.parent: Tuple[int, ...] = parent

    def arcs(self) -> List[Tuple[int, int]]:
        """
        Lukovi (roditelj, dijete), sortirani po djetetu.
        """
        return [(p, v) for v, p in enumerate(self.parent) if v != self.root]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Arborescence):
            return NotImplemented
        return self.root == other.root and self.parent == other.parent

    def __hash__(self) -> int:
        return hash((self.root, self.parent))

    def __repr__(self) -> str:
        return f"Arborescence(n={self.n}, root={self.root})"
