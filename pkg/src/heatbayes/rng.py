"""Deterministic random-stream construction.

Every random quantity in the package is drawn from a Philox (counter-based)
generator keyed by ``(seed, *path)`` through numpy's SeedSequence.  Streams
for distinct paths are independent, and a computation partitioned across
workers by replication or block index produces bit-identical results in any
execution order.
"""

from __future__ import annotations

import numpy as np

# Draw-block size for Monte Carlo loops; fixed so that the blocked stream
# layout (and hence every sampled value) is independent of worker count.
BLOCK = 65536


def _encode(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFFFFFFFFFF
    if isinstance(part, str):
        # stable 64-bit FNV-1a; hash() is salted per process, unusable here
        h = 0xCBF29CE484222325
        for b in part.encode("utf-8"):
            h = ((h ^ b) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
        return h
    raise TypeError(f"stream path parts must be int or str, got {part!r}")


def substream(seed: int, *path) -> np.random.Generator:
    """Generator for the stream keyed by (seed, *path)."""
    entropy = [_encode(seed)] + [_encode(p) for p in path]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def normal_matrix(seed: int, path: tuple, n_rows: int, n_cols: int) -> np.ndarray:
    """(n_rows, n_cols) standard normals; row r comes from stream (*path, r).

    Rows are independent streams, so any subset of rows can be regenerated
    in isolation (parallel replications merge deterministically).
    """
    out = np.empty((n_rows, n_cols))
    for r in range(n_rows):
        out[r] = substream(seed, *path, r).standard_normal(n_cols)
    return out
