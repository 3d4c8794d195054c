from bisect import bisect_right
from typing import Dict, Iterable, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from src.models.Algorithms import TableModeEnum

# P-mod: orijentirani rezni brid (u, u'), u unutar komponente; Q-mod: rezni vrh u
ExitTarget = Union[int, Tuple[int, int]]


class ExitDistribution(BaseModel):
    """
    Izlazna distribucija jedne komponente: za svaki ulazni vrh v lista (izlaz, vjerojatnost).

    U P-modu izlazi su rezni bridovi iz C(D_i), u Q-modu rezni vrhovi u iz S sa |C_i(u)| > 0.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    component: int = Field(ge=0, description="Indeks komponente D_i")
    mode: TableModeEnum = Field(description="P (izlazni brid) ili Q (izlazni vrh)")
    rows: Dict[int, Tuple[Tuple[ExitTarget, float], ...]] = Field(
        description="Normalizirani redovi po vrhu komponente"
    )
    raw_sums: Dict[int, float] = Field(
        default_factory=dict, description="Sume redaka prije renormalizacije"
    )


class TransitionTable:
    """
    Kumulativni nizovi A_v po ulaznom vrhu, za uzorkovanje izlaza binarnim pretraživanjem.
    """

    __slots__ = ("mode", "rows")

    def __init__(
        self,
        mode: TableModeEnum,
        rows: Dict[int, Tuple[Tuple[ExitTarget, ...], Tuple[float, ...]]],
    ) -> None:
        self.mode: TableModeEnum = mode
        self.rows: Dict[int, Tuple[Tuple[ExitTarget, ...], Tuple[float, ...]]] = rows

    @classmethod
    def combine(
        cls, mode: TableModeEnum, tables: Iterable["TransitionTable"]
    ) -> "TransitionTable":
        """
        Spajanje tablica po komponentama u jednu (svaki vrh pripada jednoj komponenti).
        """
        rows: Dict[int, Tuple[Tuple[ExitTarget, ...], Tuple[float, ...]]] = {}
        for table in tables:
            rows.update(table.rows)
        return cls(mode, rows)

    def lookup(self, v: int, r: float) -> ExitTarget:
        targets, cumulative = self.rows[v]
        idx = bisect_right(cumulative, r)
        return targets[idx if idx < len(targets) else len(targets) - 1]

    def __len__(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        size = sum(len(t) for t, _ in self.rows.values())
        return f"TransitionTable(mode={self.mode.value}, rows={len(self.rows)}, entries={size})"
