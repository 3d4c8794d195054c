from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class StepStatsDTO(BaseModel):
    """
    Statistika jedne simulacije šetnje (ispisuje se kao key=value).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    algorithm: str = Field(description="Algoritam ili način šetnje")
    start: int = Field(ge=0, description="Početni vrh s")
    verbatim_steps: int = Field(ge=0, description="Doslovno simulirani koraci")
    shortcut_jumps: int = Field(ge=0, description="Skokovi preko pokrivenih komponenti")
    fallback: bool = Field(default=False, description="Prijelaz na doslovnu simulaciju nakon praga")
    fallback_at: Optional[int] = Field(
        default=None, ge=0, description="Ukupan broj koraka i skokova u trenutku prijelaza"
    )
    gaps: int = Field(default=0, ge=0, description="Broj vrhova bez poznatog ulaznog brida")

    @property
    def total_steps(self) -> int:
        return self.verbatim_steps + self.shortcut_jumps


class WalkMeasureDTO(BaseModel):
    """
    Mjerenja obične šetnje do pokrivanja grafa, po klasama bridova dekompozicije.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    cover_time: int = Field(ge=0, description="tau: broj koraka do posjete svih vrhova")
    cut_traversals: int = Field(ge=0, description="Z: prelasci reznih bridova")
    inner_traversals: int = Field(ge=0, description="Suma Z_i: prelasci bridova unutar komponenti")
    inner_traversals_before_cover: int = Field(
        ge=0, description="Suma Z_i*: prelasci unutar D_i prije pokrivanja D_i"
    )
