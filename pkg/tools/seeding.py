"""
Semillas por elemento. Cada enunciado recibe su propia semilla derivada de
(semilla del corpus, índice), así el resultado no depende del orden de ejecución.
"""

import hashlib
import random


def derive_seed(seed: int, index: int) -> int:
    """Primeros 8 bytes de BLAKE2b("{seed}:{index}") como entero sin signo."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode("utf-8")).digest()[:8]
    return int.from_bytes(digest, "big")


def item_rng(seed: int, index: int) -> random.Random:
    return random.Random(derive_seed(seed, index))
