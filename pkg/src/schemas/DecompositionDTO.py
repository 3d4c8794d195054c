from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class DecompositionDTO(BaseModel):
    """
    Pydantic model za JSON dokument dekompozicije (ispis naredbe decompose, ulaz naredbe verify).
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    n: int = Field(ge=1, description="Broj vrhova grafa")
    m: int = Field(ge=0, description="Broj bridova grafa")
    phi: float = Field(gt=0, lt=1, description="Ciljani udio reznih bridova")
    strong: bool = Field(description="Jaka dekompozicija")
    gamma_bound: float = Field(ge=0, description="Gornja granica dijametra komponenti")
    components: List[List[int]] = Field(description="Komponente kao liste ID-eva")
    cut_vertices: List[int] = Field(description="Rezni vrhovi S")
    cut_edges: List[Tuple[int, int]] = Field(description="Rezni bridovi C kao parovi")
    boundary_cut_vertices: List[int] = Field(description="C(S)")


class ClauseResultDTO(BaseModel):
    """
    Rezultat provjere jedne klauzule definicije dekompozicije.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(min_length=1, description="Naziv klauzule")
    passed: bool = Field(description="Da li je klauzula zadovoljena")
    witness: Optional[str] = Field(
        default=None, description="Svjedok povrede (brid, komponenta, brojevi)"
    )


class VerificationReportDTO(BaseModel):
    """
    Izvještaj provjere dekompozicije, po klauzuli.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    strong: bool = Field(description="Da li su provjerene i klauzule jake dekompozicije")
    clauses: List[ClauseResultDTO] = Field(description="Rezultati po klauzuli")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def clause(self, name: str) -> ClauseResultDTO:
        """
        Dohvat rezultata klauzule po nazivu.

        Raises:
            KeyError: Ako klauzula nije provjeravana.
        """
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> List[ClauseResultDTO]:
        return [c for c in self.clauses if not c.passed]
