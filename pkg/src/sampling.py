"""
Seeded, splittable random sampling.

Samples are drawn in fixed-size chunks, each from its own child of one
SeedSequence, so sample i always comes from the same generator no matter how
chunks are scheduled.
"""

from typing import Iterator

import numpy as np

from src.settings import SAMPLE_CHUNK


def chunked_generators(seed: int, samples: int, chunk: int = SAMPLE_CHUNK) -> Iterator[tuple[int, np.random.Generator]]:
    """Yield (count, generator) pairs covering `samples` draws."""
    if samples <= 0:
        return
    n_chunks = -(-samples // chunk)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    remaining = samples
    for child in children:
        count = min(chunk, remaining)
        remaining -= count
        yield count, np.random.default_rng(child)


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """A generator for an auxiliary stream that never collides with chunked draws."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(10_000 + stream,)))


def random_orthonormal_pairs(rng: np.random.Generator, count: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Draw `count` Euclidean-orthonormal pairs in R^dim.

    Returns two (count, dim) arrays from batched QR of Gaussian samples.
    """
    raw = rng.standard_normal((count, dim, 2))
    q, r = np.linalg.qr(raw)
    # QR fixes the span; make the first vector follow the sampled direction
    signs = np.sign(np.diagonal(r, axis1=1, axis2=2))
    signs[signs == 0] = 1.0
    q = q * signs[:, None, :]
    return q[:, :, 0], q[:, :, 1]


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    raw = rng.standard_normal((count, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)
