from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from src.graph.Graph import VertexSubset


class Decomposition(BaseModel):
    """
    Particija (D_1..D_k, S, C) grafa sa rubnim skupovima po komponenti.

    Komponente su indeksirane od 0; vrhovi iz S imaju komponentu -1.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", validate_default=True)

    n: int = Field(ge=1, description="Broj vrhova grafa")
    m: int = Field(ge=0, description="Broj bridova grafa")
    phi: float = Field(gt=0, lt=1, description="Ciljani udio reznih bridova")
    strong: bool = Field(description="Da li je dekompozicija jaka (vrhovni multiway cut)")
    components: Tuple[VertexSubset, ...] = Field(description="Komponente D_i")
    cut_vertices: VertexSubset = Field(description="Rezni vrhovi S")
    cut_edges: Tuple[int, ...] = Field(description="ID-evi reznih bridova C")
    boundary_vertices: Tuple[Tuple[int, ...], ...] = Field(
        description="U(D_i): vrhovi iz D_i incidentni reznom bridu"
    )
    component_cut_edges: Tuple[Tuple[int, ...], ...] = Field(
        description="C(D_i): rezni bridovi incidentni sa D_i"
    )
    boundary_cut_vertices: VertexSubset = Field(
        description="C(S): vrhovi iz S susjedni nekoj komponenti"
    )

    _component_of: Tuple[int, ...] = PrivateAttr(default=())

    def model_post_init(self, __context: object) -> None:
        component_of = [-1] * self.n
        for i, comp in enumerate(self.components):
            for v in comp.ids:
                component_of[v] = i
        self._component_of = tuple(component_of)

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def component_of(self) -> Tuple[int, ...]:
        """
        Komponenta svakog vrha (-1 za vrhove iz S).
        """
        return self._component_of

    def __str__(self) -> str:
        return (
            f"Decomposition(k={self.k}, |S|={len(self.cut_vertices)}, |C|={len(self.cut_edges)}, "
            f"|C(S)|={len(self.boundary_cut_vertices)}, phi={self.phi:.4f}, strong={self.strong})"
        )
