from enum import Enum


class AlgorithmEnum(str, Enum):
    """
    Enumeracija algoritama za generiranje slučajnih razapinjućih stabala.
    """

    ALDOUS_BRODER = "aldous-broder"
    WILSON = "wilson"
    SHORTCUT_EDGE = "shortcut-edge"
    SHORTCUT_VERTEX = "shortcut-vertex"

    def __str__(self) -> str:
        """
        Vrijednost enuma kao string (koristi se u CLI ispisu).
        """
        return self.value


class WalkModeEnum(str, Enum):
    """
    Način simulacije šetnje: obična šetnja, kraćenje po izlaznom bridu
    ili kraćenje po izlaznom vrhu.
    """

    PLAIN = "plain"
    EDGE_SHORTCUT = "edge-shortcut"
    VERTEX_SHORTCUT = "vertex-shortcut"


class TableModeEnum(str, Enum):
    """
    Vrsta izlazne distribucije u tablici prijelaza.

    P - izlaz kroz rezni brid, Q - prvi dosegnuti rezni vrh.
    """

    P = "P"
    Q = "Q"


class OutputFormatEnum(str, Enum):
    """
    Format ispisa naredbe sample.
    """

    EDGES = "edges"
    STATS = "stats"


class EpsBudgetEnum(str, Enum):
    """
    Pravilo za izračun dopuštene greške tablica iz delte.
    """

    MN = "mn"
    N5 = "n5"
