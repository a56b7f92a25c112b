"""GF(2) linear algebra for polar codes.

The generator is ``G = F^{(x)n}`` with the lower-triangular kernel
``F = [[1, 0], [1, 1]]`` and no bit-reversal, so ``G[i, j] = 1`` exactly
when the binary digits of ``j`` are a subset of those of ``i``.
Indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class SingularMatrixError(ValueError):
    """Raised when a GF(2) matrix has no inverse."""


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def log2_int(N: int) -> int:
    if not is_power_of_two(N):
        raise ValueError(f"length must be a power of two, got {N}")
    return N.bit_length() - 1


def kron_transform(u) -> np.ndarray:
    """Compute ``x = u . F^{(x)n}`` over GF(2) along the last axis.

    Works on a single vector or on a batch of shape ``(B, N)``; runs the
    in-place butterfly in O(N log N).
    """
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    n = log2_int(N)
    lead = x.shape[:-1]
    for s in range(n):
        # pairs (lo, hi) at distance 2**s; x[lo] ^= x[hi]
        v = x.reshape(*lead, N >> (s + 1), 2, 1 << s)
        v[..., 0, :] ^= v[..., 1, :]
    return x


def generator_entry(i: int, j: int) -> int:
    return int((j & ~i) == 0)


def dense_generator(n: int) -> np.ndarray:
    """Explicit ``F^{(x)n}``; only meant for small n (tests, oracles)."""
    F = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    G = np.ones((1, 1), dtype=np.uint8)
    for _ in range(n):
        G = np.kron(G, F)
    return G


def submatrix(n: int, rows, cols) -> np.ndarray:
    """Entries ``G[i, j]`` for ``i`` in ``rows`` and ``j`` in ``cols``.

    The full N x N generator is never allocated.
    """
    N = 1 << n
    r = np.asarray(rows, dtype=np.int64).reshape(-1)
    c = np.asarray(cols, dtype=np.int64).reshape(-1)
    for name, idx in (("row", r), ("column", c)):
        if idx.size and (idx.min() < 0 or idx.max() >= N):
            raise ValueError(f"{name} index out of range [0, {N})")
    return ((c[None, :] & ~r[:, None]) == 0).astype(np.uint8)


def gf2_matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return (a @ b & 1).astype(np.uint8)


def gf2_invert(m) -> np.ndarray:
    """Invert a square GF(2) matrix by Gauss-Jordan elimination."""
    m = np.asarray(m, dtype=np.uint8)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    k = m.shape[0]
    aug = np.concatenate([m.astype(bool), np.eye(k, dtype=bool)], axis=1)
    for col in range(k):
        pivots = np.flatnonzero(aug[col:, col])
        if pivots.size == 0:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {col})")
        p = col + pivots[0]
        if p != col:
            aug[[col, p]] = aug[[p, col]]
        hit = aug[:, col].copy()
        hit[col] = False
        aug[hit] ^= aug[col]
    return aug[:, k:].astype(np.uint8)


@dataclass(frozen=True, eq=False)
class CodeConfig:
    """A polar code ``(N, K, A, u_{A^c})``.

    ``A`` is stored ascending. ``K = 0`` is allowed so that rate adaptation
    can describe a fully frozen code; the encoders refuse to use one.
    """

    N: int
    A: np.ndarray
    frozen_values: np.ndarray = field(default=None)

    def __post_init__(self):
        n = log2_int(int(self.N))
        A = np.asarray(self.A, dtype=np.int64).reshape(-1)
        if A.size and (np.any(np.diff(A) <= 0) or A[0] < 0 or A[-1] >= self.N):
            raise ValueError("A must be strictly increasing indices in [0, N)")
        fv = self.frozen_values
        if fv is None:
            fv = np.zeros(self.N - A.size, dtype=np.uint8)
        fv = np.asarray(fv, dtype=np.uint8).reshape(-1)
        if fv.size != self.N - A.size:
            raise ValueError(f"need {self.N - A.size} frozen values, got {fv.size}")
        if np.any(fv > 1):
            raise ValueError("frozen values must be bits")
        A.setflags(write=False)
        fv.setflags(write=False)
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "frozen_values", fv)
        object.__setattr__(self, "n", n)

    @property
    def K(self) -> int:
        return int(self.A.size)

    @property
    def rate(self) -> float:
        return self.K / self.N

    @cached_property
    def info_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[self.A] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def Ac(self) -> np.ndarray:
        return np.flatnonzero(~self.info_mask)

    @cached_property
    def frozen_u(self) -> np.ndarray:
        """Length-N vector holding frozen values at A^c and zeros at A."""
        u = np.zeros(self.N, dtype=np.uint8)
        u[self.Ac] = self.frozen_values
        return u

    @cached_property
    def systematic_inverse(self) -> np.ndarray:
        """``(G_AA)^{-1}``, computed once per config."""
        return gf2_invert(submatrix(self.n, self.A, self.A))

    @cached_property
    def systematic_offset(self) -> np.ndarray:
        """``u_{A^c} . G_{A^c A}``, the frozen contribution to ``x_A``."""
        return kron_transform(self.frozen_u)[self.A]

    def __eq__(self, other):
        if not isinstance(other, CodeConfig):
            return NotImplemented
        return (self.N == other.N and np.array_equal(self.A, other.A)
                and np.array_equal(self.frozen_values, other.frozen_values))

    def __hash__(self):
        return hash((self.N, self.A.tobytes(), self.frozen_values.tobytes()))

    def __repr__(self):
        return f"CodeConfig(N={self.N}, K={self.K})"
