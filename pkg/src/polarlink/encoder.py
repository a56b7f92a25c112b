"""Non-systematic and systematic polar encoders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import CodeConfig, gf2_matmul, kron_transform


@dataclass(frozen=True)
class Codeword:
    x: np.ndarray
    u: np.ndarray
    A: np.ndarray

    @property
    def x_A(self) -> np.ndarray:
        return self.x[..., self.A]

    @property
    def u_A(self) -> np.ndarray:
        return self.u[..., self.A]


def _check_info(cfg: CodeConfig, info) -> np.ndarray:
    if cfg.K == 0:
        raise ValueError("cannot encode with an all-frozen code (K = 0)")
    info = np.asarray(info, dtype=np.uint8)
    if info.shape[-1] != cfg.K:
        raise ValueError(f"expected {cfg.K} info bits, got {info.shape[-1]}")
    return info


def _scatter(cfg: CodeConfig, u_A: np.ndarray) -> np.ndarray:
    u = np.broadcast_to(cfg.frozen_u, u_A.shape[:-1] + (cfg.N,)).copy()
    u[..., cfg.A] = u_A
    return u


def encode_nonsystematic(cfg: CodeConfig, info) -> Codeword:
    """``x = u_A G_A + u_{A^c} G_{A^c}``; accepts one message or a (B, K) batch."""
    info = _check_info(cfg, info)
    u = _scatter(cfg, info)
    return Codeword(kron_transform(u), u, cfg.A)


def encode_systematic(cfg: CodeConfig, info) -> Codeword:
    """Encode so that ``x_A`` equals ``info``.

    ``u_A = (info + u_{A^c} G_{A^c A}) (G_AA)^{-1}`` with addition being XOR.
    """
    info = _check_info(cfg, info)
    rhs = info ^ cfg.systematic_offset
    u_A = gf2_matmul(rhs, cfg.systematic_inverse)
    u = _scatter(cfg, u_A)
    return Codeword(kron_transform(u), u, cfg.A)


def extract_systematic_info(cfg: CodeConfig, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint8)
    if x.shape[-1] != cfg.N:
        raise ValueError(f"expected a length-{cfg.N} codeword, got {x.shape[-1]}")
    return x[..., cfg.A]
