class SrstError(Exception):
    """
    Bazna iznimka projekta. Svaka podklasa nosi izlazni kod koji CLI vraća.
    """

    exit_code: int = 1


class GraphParseError(SrstError):
    """
    Ulazni tekst nije ispravna lista bridova ("u v" parovi cijelih brojeva).
    """

    exit_code = 3


class GraphValidationError(SrstError):
    """
    Graf je sintaktički ispravan, ali ne zadovoljava invarijante (jednostavan, povezan).
    """

    exit_code = 4


class SelfLoopError(GraphValidationError):
    pass


class DuplicateEdgeError(GraphValidationError):
    pass


class DisconnectedGraphError(GraphValidationError):
    pass


class DecompositionError(SrstError):
    """
    Neispravni parametri dekompozicije ili dekompozicija ne odgovara grafu/tablicama.
    """

    exit_code = 4


class SolverError(SrstError):
    """
    Greška prilikom rješavanja Laplaceovog sustava.
    """

    exit_code = 5


class SolverConvergenceError(SolverError):
    pass


class SingularSystemError(SolverError):
    pass


class TransitionTableError(SrstError):
    """
    Greška prilikom izgradnje ili korištenja tablica prijelaza.
    """

    exit_code = 5


class TableRowMissingError(TransitionTableError):
    pass


class ArborescenceError(SrstError):
    """
    Povrijeđena invarijanta arborescencije ili djelomične šume.
    """

    exit_code = 4


class MalformedForestError(ArborescenceError):
    pass


class OracleError(SrstError):
    """
    Greška u egzaktnim referentnim izračunima.
    """

    exit_code = 4


class EnumerationCapError(OracleError):
    pass


class NotASpanningTreeError(OracleError):
    pass


class StatisticalTestError(SrstError):
    """
    Uzorak ne prolazi test uniformnosti.
    """

    exit_code = 6
