"""Shared work partitioning for the transform and coverage kernels.

Both kernels walk the same curve family: for a block of shifts ``q`` and
the full curvature list they need the integer row index every curve
passes through in every column.  Keeping the block construction in one
place guarantees the two stay in lockstep, and fixing the block
boundaries independently of the worker count is what makes results
bitwise reproducible under any parallel schedule: each block is computed
by exactly one thread with exactly the same arithmetic as in the serial
case, and blocks never share output cells.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

# Cap on nc * block * m, chosen so the float64 temporaries stay around
# 16 MB per block.
_BLOCK_ELEMS = 2_000_000


def q_blocks(n_q: int, n_c: int, m: int) -> list[tuple[int, int]]:
    """Fixed [start, end) column ranges partitioning the q axis."""
    block = max(1, _BLOCK_ELEMS // max(1, n_c * m))
    return [(s, min(s + block, n_q)) for s in range(0, n_q, block)]


def block_row_indices(
    c_values: np.ndarray, q_block: np.ndarray, m: int
) -> np.ndarray:
    """Clamped integer row index per (curvature, shift, column).

    Returns an int64 array of shape ``(len(c_values), len(q_block), m)``
    whose entries match ``trace_curve`` exactly: the sigmoid is evaluated
    with the same primitive, rounded half-to-even and clamped to the row
    range.
    """
    p = np.arange(m, dtype=np.float64)
    t = c_values[:, None, None] * (p[None, None, :] - q_block[None, :, None])
    z = np.rint(m * expit(t))
    np.clip(z, 0, m - 1, out=z)
    return z.astype(np.int64)
