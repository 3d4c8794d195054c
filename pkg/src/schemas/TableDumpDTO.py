from typing import List

from pydantic import BaseModel, ConfigDict, Field


class TableRowDTO(BaseModel):
    """
    Jedan redak tablice prijelaza za ispis (debugging).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    vertex: int = Field(ge=0, description="Ulazni vrh v")
    targets: List[str] = Field(description="Izlazi ('u-u2' za brid, 'u' za vrh)")
    cumulative: List[float] = Field(description="Kumulativni niz A_v")


class TableDumpDTO(BaseModel):
    """
    Ispis svih tablica prijelaza jednog pokretanja.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: str = Field(description="P ili Q")
    eps: float = Field(gt=0, description="Dopuštena greška vjerojatnosti")
    tol: float = Field(gt=0, description="Tolerancija solvera")
    rows: List[TableRowDTO] = Field(description="Redci sortirani po vrhu")
