from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.models.Algorithms import AlgorithmEnum, EpsBudgetEnum, OutputFormatEnum
from src.utils.settings import DEFAULT_SEED, EPS_BUDGET


class RunConfigDTO(BaseModel):
    """
    Parametri jednog pokretanja naredbe sample / bench.

    phi = None znači 1/sqrt(n), određuje se nakon učitavanja grafa.
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    algorithm: AlgorithmEnum = Field(
        default=AlgorithmEnum.SHORTCUT_VERTEX, description="Algoritam uzorkovanja"
    )
    phi: Optional[float] = Field(default=None, description="Ciljani udio reznih bridova")
    delta: float = Field(default=0.01, description="Dopušteno odstupanje od uniformnosti")
    eps: Optional[float] = Field(default=None, description="Eksplicitna greška tablica")
    eps_budget: EpsBudgetEnum = Field(
        default=EpsBudgetEnum(EPS_BUDGET), description="Pravilo eps iz delte"
    )
    seed: int = Field(default=DEFAULT_SEED, description="Glavni seed")
    samples: int = Field(default=1, description="Broj uzoraka")
    input_path: Optional[str] = Field(default=None, description="Ulazna datoteka, None za stdin")
    output_format: OutputFormatEnum = Field(
        default=OutputFormatEnum.EDGES, description="Format ispisa"
    )
    workers: int = Field(default=1, ge=1, description="Broj procesa za uzorkovanje")
    fallback_threshold: Optional[int] = Field(
        default=None, ge=0, description="Prag koraka za isključivanje kraćenja (zadano m*n)"
    )

    @field_validator("phi")
    @classmethod
    def validate_phi(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not 0 < value < 1:
            raise ValueError(f"phi mora biti u intervalu (0, 1), dobiveno: {value}")
        return value

    @field_validator("delta")
    @classmethod
    def validate_delta(cls, value: float) -> float:
        if value <= 0:
            raise ValueError(f"delta mora biti pozitivan, dobiveno: {value}")
        return value

    @field_validator("eps")
    @classmethod
    def validate_eps(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= 0:
            raise ValueError(f"eps mora biti pozitivan, dobiveno: {value}")
        return value

    @field_validator("samples")
    @classmethod
    def validate_samples(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"Broj uzoraka mora biti barem 1, dobiveno: {value}")
        return value
