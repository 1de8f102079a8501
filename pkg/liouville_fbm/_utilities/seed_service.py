import hashlib
from typing import Union

import numpy as np

StreamKey = Union[int, str]


class SeedService:
    @staticmethod
    def hash_bytes(value: bytes) -> str:
        """Lowercase hex SHA-256 of raw bytes."""
        return hashlib.sha256(value).hexdigest()

    @staticmethod
    def derive_seed(master_seed: int, *stream: StreamKey) -> int:
        """
        64-bit seed for the stream identified by ``(master_seed, *stream)``.

        The mix is SHA-256 over a canonical text key, so a replicate's state
        depends only on its identity and never on generation order.
        """
        key = ":".join([str(int(master_seed))] + [str(part) for part in stream])
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little")

    @staticmethod
    def generator(master_seed: int, *stream: StreamKey) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(SeedService.derive_seed(master_seed, *stream)))

    @staticmethod
    def standard_normals(master_seed: int, n_rows: int, n_cols: int, *stream: StreamKey) -> np.ndarray:
        """Row ``r`` holds ``n_cols`` normals drawn from stream ``(*stream, r)``."""
        out = np.empty((n_rows, n_cols))
        for r in range(n_rows):
            out[r] = SeedService.generator(master_seed, *stream, r).standard_normal(n_cols)
        return out
