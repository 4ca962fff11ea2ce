"""Counter-based random draws for reproducible, order-independent sampling.

The uniform variate used for fault ``f`` in shot ``s`` is a pure function of
``(seed, s, f)``: shots are grouped in blocks of :data:`BLOCK_SHOTS`, and
block ``b`` reads the Philox stream keyed by ``seed`` starting at counter
``(0, b, 0, 0)``. Any partition of the shots into whole blocks therefore
sees exactly the same numbers, whatever the worker count or order.
"""

from __future__ import annotations

import numpy as np

BLOCK_SHOTS = 1024
_MASK64 = (1 << 64) - 1


def block_uniforms(seed: int, block: int, fault_count: int,
                   shots: int = BLOCK_SHOTS) -> np.ndarray:
    """Uniforms in [0, 1) of shape ``(shots, fault_count)`` for one block.

    ``shots`` may be smaller than :data:`BLOCK_SHOTS` for a final partial
    block; the rows returned are then a prefix of the full block.
    """
    if not 0 <= shots <= BLOCK_SHOTS:
        raise ValueError(f"a block holds at most {BLOCK_SHOTS} shots")
    bitgen = np.random.Philox(key=seed & _MASK64, counter=[0, block, 0, 0])
    gen = np.random.Generator(bitgen)
    return gen.random((shots, fault_count))


def shot_uniforms(seed: int, shot: int, fault_count: int) -> np.ndarray:
    """The uniforms of a single shot (the matching row of its block)."""
    block, row = divmod(shot, BLOCK_SHOTS)
    return block_uniforms(seed, block, fault_count, row + 1)[row]


def block_faults(seed: int, block: int, probabilities: np.ndarray,
                 shots: int = BLOCK_SHOTS) -> np.ndarray:
    """Boolean ``(shots, m)`` matrix: fault ``f`` occurs in a shot when its
    uniform is below ``probabilities[f]``."""
    u = block_uniforms(seed, block, len(probabilities), shots)
    return u < probabilities[None, :]
