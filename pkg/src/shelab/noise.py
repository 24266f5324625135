"""Counter-based noise lineage: reproducible, jumpable, order-independent.

Every stream is a Philox generator keyed by (base seed, replicate index).
The 256-bit Philox counter is partitioned as

    counter = domain * 2**192 + block_index * 2**96

so that distinct purposes (finite-difference slabs, spectral synthesis) and
distinct step blocks never overlap, and any block can be regenerated without
replaying the stream from the start.  Draws therefore depend only on
(base seed, replicate, domain, block) -- never on scheduling order, worker
count, or where a simulation was paused.

Finite-difference noise is drawn as float32 standard normals (promoted to
float64 inside the steppers): the 2**-24 quantization is statistically
invisible at desk tolerances and more than triples generator throughput,
which dominates the cost of large ensembles.
"""

from __future__ import annotations

import numpy as np

#: Steps per noise block.  Part of the lineage definition: changing it
#: changes which draws feed which time step.
BLOCK_STEPS = 128

DOMAIN_FD = 0
DOMAIN_SPECTRAL = 1

_MASK64 = (1 << 64) - 1


def philox_generator(base_seed: int, replicate: int, domain: int,
                     block: int = 0) -> np.random.Generator:
    key = [base_seed & _MASK64, replicate & _MASK64]
    counter = (domain << 192) + (block << 96)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


class ReplicateNoise:
    """Per-step standard-normal draws for one replicate's space-time slab.

    ``fill_block(block, out)`` writes rows for steps
    [block*BLOCK_STEPS, block*BLOCK_STEPS + out.shape[0]) into ``out``
    (float32, shape (rows, nx)).  Row j of block b is the noise for global
    step b*BLOCK_STEPS + j.
    """

    def __init__(self, base_seed: int, replicate: int, nx: int):
        self.base_seed = int(base_seed)
        self.replicate = int(replicate)
        self.nx = int(nx)

    def fill_block(self, block: int, out: np.ndarray) -> None:
        if out.dtype != np.float32 or out.shape[1] != self.nx:
            raise ValueError("out must be float32 with nx columns")
        gen = philox_generator(self.base_seed, self.replicate, DOMAIN_FD, block)
        gen.standard_normal(out=out, dtype=np.float32)

    def step_normals(self, step: int) -> np.ndarray:
        """Draws for a single step (regenerates the containing block)."""
        block, row = divmod(step, BLOCK_STEPS)
        buf = np.empty((row + 1, self.nx), dtype=np.float32)
        self.fill_block(block, buf)
        return buf[row]

    def slab(self, nt: int) -> np.ndarray:
        """All rows for steps 0..nt-1, shape (nt, nx) float32."""
        out = np.empty((nt, self.nx), dtype=np.float32)
        for block in range(0, (nt + BLOCK_STEPS - 1) // BLOCK_STEPS):
            lo = block * BLOCK_STEPS
            hi = min(lo + BLOCK_STEPS, nt)
            self.fill_block(block, out[lo:hi])
        return out


def spectral_generator(base_seed: int, replicate: int) -> np.random.Generator:
    """Stream used by the exact Gaussian sampler (separate counter domain)."""
    return philox_generator(base_seed, replicate, DOMAIN_SPECTRAL)
