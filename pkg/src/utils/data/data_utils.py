import logging
import os
import sys
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from src.models.Errors import GraphParseError

Edge = Tuple[int, int]


def read_input_text(file_path: Optional[str]) -> str:
    """
    Čitanje ulaza (lista bridova, stabla ili JSON dokument) sa diska ili stdin-a.

    Args:
        file_path (Optional[str]): Putanja datoteke; None ili "-" znači stdin.

    Returns:
        str: Sadržaj ulaza.

    Raises:
        GraphParseError: Ako datoteka ne postoji, nije čitljiva ili nije UTF-8.
    """
    if file_path is None or file_path == "-":
        return sys.stdin.read()

    path = Path(file_path)
    try:
        if not path.exists():
            raise FileNotFoundError(f"Datoteka {path} ne postoji.")
        if not os.access(path, os.R_OK):
            raise PermissionError(f"Nema prava za čitanje datoteke: {path}.")
        return path.read_text(encoding="utf-8")
    except (FileNotFoundError, PermissionError) as e:
        error_msg = str(e)
        logging.error(error_msg)
        raise GraphParseError(error_msg) from e
    except UnicodeDecodeError as e:
        error_msg = f"Greška u encodingu za {path}: {e}"
        logging.error(error_msg)
        raise GraphParseError(error_msg) from e
    except MemoryError as e:
        error_msg = f"Datoteka {path} je prevelika za učitavanje u memoriju!"
        logging.error(error_msg)
        raise GraphParseError(error_msg) from e


def create_folders(file_path: str) -> None:
    """
    Kreiranje foldera za izlazne datoteke ako ne postoji na lokalnom disku.

    Args:
        file_path (str): Putanja foldera.
    """
    try:
        if file_path and not os.path.exists(file_path):
            os.makedirs(file_path)
    except Exception as e:
        logging.error(f"Dogodila se greška prilikom kreiranja foldera: {file_path}: {e}")


def format_key_values(values: Mapping[str, Any]) -> str:
    """
    Redovi "key=value" (bool kao 0/1, float sa 6 značajnih znamenki).
    """
    lines = []
    for key, value in values.items():
        if isinstance(value, bool):
            value = int(value)
        elif isinstance(value, float):
            value = f"{value:.6g}"
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def format_trees(trees: Iterable[Sequence[Edge]]) -> str:
    """
    Stabla kao sortirani "u v" redovi, odvojena praznim redom.
    """
    blocks = ["".join(f"{u} {v}\n" for u, v in sorted(tree)) for tree in trees]
    return "\n".join(blocks)


def parse_trees(text: str) -> List[List[Edge]]:
    """
    Čitanje stabala iz teksta u formatu format_trees.

    Stablo sa jednim vrhom nema bridova pa se ne može zapisati; prazan blok se ignorira.

    Raises:
        GraphParseError: Ako red nije par cijelih brojeva.
    """
    trees: List[List[Edge]] = []
    current: List[Edge] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()
        if not tokens:
            if current:
                trees.append(current)
                current = []
            continue
        try:
            if len(tokens) != 2:
                raise ValueError(line)
            current.append((int(tokens[0]), int(tokens[1])))
        except ValueError as e:
            error_msg = f"Red {line_no}: očekivan par cijelih brojeva, dobiveno '{line.strip()}'"
            logging.error(error_msg)
            raise GraphParseError(error_msg) from e
    if current:
        trees.append(current)
    return trees


def summarize(records: Sequence[Mapping[str, Any]], group_by: str) -> pd.DataFrame:
    """
    Srednje vrijednosti numeričkih stupaca po grupi (npr. algoritmu) za bench ispis.
    """
    df = pd.DataFrame.from_records(records)
    numeric = df.select_dtypes(include="number").columns.drop(group_by, errors="ignore")
    summary = df.groupby(group_by, sort=False)[list(numeric)].mean()
    logging.info(f"Sažetak po '{group_by}':\n{summary}")
    return summary
