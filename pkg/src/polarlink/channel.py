"""BPSK over a block-fading channel with coherent detection.

Received samples are ``y = |h| sqrt(gamma) x + n`` with ``x`` in {+1, -1}
and ``n ~ N(0, 1)``, the same normalization as the capacity integrals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity import FadingDistribution, SnrPoint
from .sc_decoder import LLR_CLAMP


def modulate(bits) -> np.ndarray:
    """Map 0 -> +1.0 and 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


def hard_bits(symbols) -> np.ndarray:
    return (np.asarray(symbols) < 0).astype(np.uint8)


@dataclass
class ChannelRealization:
    h_abs: np.ndarray
    blocks_remaining: int


def draw_fading(N: int, dist: FadingDistribution, n_blocks: int,
                rng: np.random.Generator) -> ChannelRealization:
    """Fresh i.i.d. gains for ``N`` symbols, valid for ``n_blocks`` codewords."""
    if N < 1 or n_blocks < 1:
        raise ValueError("need N >= 1 and n_blocks >= 1")
    return ChannelRealization(dist.sample(rng, N), n_blocks)


class BlockFading:
    """Hands out per-codeword gains, redrawing every ``n_blocks`` codewords."""

    def __init__(self, N: int, dist: FadingDistribution, n_blocks: int,
                 rng: np.random.Generator):
        self.N = N
        self.dist = dist
        self.n_blocks = n_blocks
        self.rng = rng
        self._current: ChannelRealization | None = None

    def next(self) -> np.ndarray:
        if self._current is None or self._current.blocks_remaining == 0:
            self._current = draw_fading(self.N, self.dist, self.n_blocks, self.rng)
        self._current.blocks_remaining -= 1
        return self._current.h_abs

    def batch(self, B: int) -> np.ndarray:
        """Gains for the next ``B`` codewords as a ``(B, N)`` array."""
        if self.dist.kind == "fixedmu":
            return np.full((B, self.N), self.dist.mu)
        return np.stack([self.next() for _ in range(B)])


def _gains(ch, shape):
    if ch is None:
        return np.ones(shape)
    h = ch.h_abs if isinstance(ch, ChannelRealization) else np.asarray(ch, dtype=float)
    if h.shape[-1:] != tuple(shape[-1:]):
        raise ValueError(f"gain length {h.shape[-1:]} does not match block length {shape[-1]}")
    return np.broadcast_to(h, shape)


def transmit(symbols, ch, snr: SnrPoint, rng: np.random.Generator | None,
             noiseless: bool = False) -> np.ndarray:
    """Scale by ``|h| sqrt(gamma)`` and add unit-variance Gaussian noise.

    ``ch`` may be a :class:`ChannelRealization`, an array of gains, or None
    for a non-fading channel.
    """
    symbols = np.asarray(symbols, dtype=float)
    h = _gains(ch, symbols.shape)
    y = h * snr.amplitude * symbols
    if not noiseless:
        y = y + rng.standard_normal(symbols.shape)
    return y


def demap_llr(y, ch, snr: SnrPoint) -> np.ndarray:
    """Coherent LLRs ``2 |h| sqrt(gamma) y``, clamped to +-40."""
    y = np.asarray(y, dtype=float)
    h = _gains(ch, y.shape)
    return np.clip(2.0 * h * snr.amplitude * y, -LLR_CLAMP, LLR_CLAMP)
