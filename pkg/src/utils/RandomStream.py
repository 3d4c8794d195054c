from typing import List, Optional

import numpy as np

from src.utils.settings import RANDOM_BUFFER_SIZE


class RandomStream:
    """
    Baferirani izvor slučajnih brojeva nad numpy PCG64 generatorom.

    Svi sampleri troše brojeve istim redoslijedom (uniform/index), pa isti seed
    daje korak-po-korak iste šetnje neovisno o načinu simulacije.
    """

    def __init__(
        self,
        seed: Optional[object] = None,
        generator: Optional[np.random.Generator] = None,
        buffer_size: int = RANDOM_BUFFER_SIZE,
    ) -> None:
        """
        Args:
            seed (Optional[object]): Seed (int ili numpy SeedSequence).
            generator (Optional[np.random.Generator]): Postojeći generator (ima prednost pred seedom).
            buffer_size (int): Broj uniformnih brojeva koji se generiraju odjednom.
        """
        self._rng: np.random.Generator = (
            generator
            if generator is not None
            else np.random.Generator(np.random.PCG64(seed))
        )
        self._buffer_size: int = buffer_size
        self._buffer: List[float] = []
        self._pos: int = 0

    def uniform(self) -> float:
        """
        Sljedeći uniformni broj iz [0, 1).
        """
        if self._pos >= len(self._buffer):
            self._buffer = self._rng.random(self._buffer_size).tolist()
            self._pos = 0
        u = self._buffer[self._pos]
        self._pos += 1
        return u

    def index(self, k: int) -> int:
        """
        Uniformni indeks iz {0, ..., k-1}.
        """
        i = int(self.uniform() * k)
        return i if i < k else k - 1

    def integer_below(self, bound: int) -> int:
        """
        Egzaktno uniformni cijeli broj iz [0, bound) za proizvoljno velike bound
        (rejection sampling nad slučajnim bajtovima).

        Raises:
            ValueError: Ako bound nije pozitivan.
        """
        if bound <= 0:
            raise ValueError(f"Gornja granica mora biti pozitivna, dobiveno: {bound}")
        if bound == 1:
            return 0
        n_bits = (bound - 1).bit_length()
        n_bytes = (n_bits + 7) // 8
        excess = 8 * n_bytes - n_bits
        while True:
            value = int.from_bytes(self._rng.bytes(n_bytes), "big") >> excess
            if value < bound:
                return value


def spawn_seeds(master_seed: int, count: int) -> List[np.random.SeedSequence]:
    """
    Pravilo dijeljenja seeda: SeedSequence(master).spawn(count), dijete i pokreće uzorak i.

    Args:
        master_seed (int): Glavni seed.
        count (int): Broj uzoraka.

    Returns:
        List[np.random.SeedSequence]: Seedovi po uzorku.
    """
    return np.random.SeedSequence(master_seed).spawn(count)
