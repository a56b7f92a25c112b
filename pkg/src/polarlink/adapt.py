"""Rate adaptation for block fading: freeze extra bit channels when the
receiver sees gains below its estimation-reliability threshold ``alpha``.

Given one gain realization, count the unreliable gains at the information
positions, cap the count at ``M``, scale it by the channel capacity ``c``
(the information those observations would have carried) and move that many
of the least reliable information channels into the frozen set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .capacity import (FadingDistribution, SnrPoint, biawgn_capacity,
                       capacity_upper_bound, equivalent_fading_snr)
from .construction import ReliabilityOrder
from .gf2 import CodeConfig


@dataclass(frozen=True)
class AdaptConfig:
    alpha: float
    M: int
    snr: SnrPoint
    dist: FadingDistribution
    fixed_offset: bool = False

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.M < 0:
            raise ValueError("M must be non-negative")

    @cached_property
    def capacity(self) -> float:
        """``c``: ``C(E{|h|} sqrt(gamma))``, or ``C(sqrt(gamma_h))`` with the
        fixed -8 dB conversion in fixed-offset mode."""
        if self.fixed_offset:
            conv = equivalent_fading_snr(self.snr, self.dist, fixed_offset=True)
            return float(biawgn_capacity(conv.amplitude))
        return capacity_upper_bound(self.snr, self.dist)


@dataclass(frozen=True)
class AdaptedIndexSets:
    coding_idx: np.ndarray
    frozen_idx: np.ndarray
    num_dropped: int
    rm_num: int


def unreliable_fraction(alpha: float, dist: FadingDistribution) -> float:
    """``p = Pr{|h| <= alpha}``."""
    return dist.cdf(alpha)


def info_count(N: int, rate: float) -> int:
    # floor(N R), tolerant of N*R landing a hair below an integer
    return int(math.floor(N * rate + 1e-9))


def num_dropped(rm_num, M: int, capacity: float):
    """``floor(min(rm_num, M) * c)``; vectorized over ``rm_num``."""
    mi = np.minimum(np.asarray(rm_num), M)
    return np.floor(mi * capacity + 1e-12).astype(np.int64)


def count_unreliable(h_abs, positions, alpha: float):
    """Number of gains below ``alpha`` at ``positions`` (per row for a batch)."""
    h = np.asarray(h_abs, dtype=float)
    return (h[..., positions] < alpha).sum(axis=-1)


def adapt_indices(h_abs, cfg: AdaptConfig, rate: float,
                  qs: ReliabilityOrder) -> AdaptedIndexSets:
    h_abs = np.asarray(h_abs, dtype=float)
    N = qs.N
    if h_abs.shape != (N,):
        raise ValueError(f"expected {N} channel gains, got shape {h_abs.shape}")
    if cfg.M > N:
        raise ValueError("M cannot exceed N")
    n_info = info_count(N, rate)
    # gains are read at the information positions of the unadapted code
    coding = np.sort(qs.order[:n_info])
    rm_num = int(count_unreliable(h_abs, coding, cfg.alpha))
    num = int(num_dropped(rm_num, cfg.M, cfg.capacity))
    num = min(num, n_info)
    keep = n_info - num
    return AdaptedIndexSets(np.sort(qs.order[:keep]), np.sort(qs.order[keep:]),
                            num, rm_num)


def adapted_code_config(base: CodeConfig, sets: AdaptedIndexSets) -> CodeConfig:
    if base.N != sets.coding_idx.size + sets.frozen_idx.size:
        raise ValueError("index sets do not match the code length")
    # previously frozen positions keep their values, newly frozen ones get 0
    u = base.frozen_u.copy()
    u[sets.coding_idx] = 0
    return CodeConfig(base.N, sets.coding_idx, u[sets.frozen_idx])
