from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.utils.settings import TV_MAX_SUPPORT, TV_THRESHOLD


class DistributionReportDTO(BaseModel):
    """
    Izvještaj testa uniformnosti uzorka stabala nad svim razapinjućim stablima grafa.

    Uzorak prolazi ako je chi-square ispod kritične vrijednosti i, za nosače
    do tv_max_support stabala, TV udaljenost nije veća od tv_threshold.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    support_size: int = Field(ge=1, description="|T(G)|")
    samples: int = Field(ge=1, description="Broj uzoraka N")
    counts: List[int] = Field(description="Broj pojavljivanja po stablu (kanonski poredak)")
    chi_square: float = Field(ge=0, description="Chi-square statistika prema uniformnoj")
    degrees_of_freedom: int = Field(ge=0, description="|T(G)| - 1")
    p_value: float = Field(ge=0, le=1, description="p-vrijednost chi-square testa")
    alpha: float = Field(gt=0, lt=1, description="Razina značajnosti")
    critical_value: float = Field(ge=0, description="Kritična vrijednost chi2(df) za 1 - alpha")
    total_variation: float = Field(ge=0, le=1, description="TV udaljenost do uniformne")
    tv_threshold: float = Field(default=TV_THRESHOLD, ge=0, le=1, description="Najveća dopuštena TV udaljenost")
    tv_max_support: int = Field(default=TV_MAX_SUPPORT, ge=1, description="Najveći nosač na kojem se provjerava TV")

    @model_validator(mode="after")
    def validate_counts(self) -> "DistributionReportDTO":
        if len(self.counts) != self.support_size:
            raise ValueError(
                f"Broj ishoda {len(self.counts)} različit od support_size {self.support_size}"
            )
        if sum(self.counts) != self.samples:
            raise ValueError(
                f"Suma pojavljivanja {sum(self.counts)} različita od broja uzoraka {self.samples}"
            )
        return self

    @property
    def chi_square_passed(self) -> bool:
        return self.chi_square <= self.critical_value

    @property
    def tv_passed(self) -> bool:
        if self.support_size > self.tv_max_support:
            return True
        return self.total_variation <= self.tv_threshold

    @property
    def passed(self) -> bool:
        return self.chi_square_passed and self.tv_passed
