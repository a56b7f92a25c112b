"""Successive-cancellation decoding in the LLR domain.

LLRs are ``log P(bit = 0) / P(bit = 1)`` in nats. The check-node rule is
the exact tanh rule (written in a form that cannot overflow) or min-sum;
the variable-node rule is ``b + (1 - 2 s) a``. Decisions map LLR >= 0 to 0.

:class:`SCDecoder` decodes a whole batch ``(B, N)`` at once. The frozen
pattern may be shared or given per row, which lets rate-adapted blocks with
different information sets share one pass.
"""

from __future__ import annotations

import numpy as np

from .gf2 import CodeConfig, kron_transform, log2_int

LLR_CLAMP = 40.0
_F_SWITCH = 15.0
_T_MAX = 1.0 - 1e-15


def clamp_llr(llr):
    return np.clip(llr, -LLR_CLAMP, LLR_CLAMP)


def llr_f(a, b, min_sum: bool = False):
    """Check-node update ``2 atanh(tanh(a/2) tanh(b/2))``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m = np.minimum(np.abs(a), np.abs(b))
    if min_sum:
        return np.sign(a) * np.sign(b) * m
    # tanh form is accurate for small inputs, the log-sum form for large ones
    t = np.tanh(0.5 * a) * np.tanh(0.5 * b)
    out = 2.0 * np.arctanh(np.clip(t, -_T_MAX, _T_MAX))
    big = m >= _F_SWITCH
    if np.any(big):
        ab, bb = np.broadcast_to(a, big.shape)[big], np.broadcast_to(b, big.shape)[big]
        out = np.array(out, dtype=float, copy=True)
        out[big] = (np.sign(ab) * np.sign(bb) * m[big]
                    + np.log1p(np.exp(-np.abs(ab + bb)))
                    - np.log1p(np.exp(-np.abs(ab - bb))))
    return out


def llr_g(a, b, partial_bit):
    a = np.asarray(a, dtype=float)
    return b + (1.0 - 2.0 * np.asarray(partial_bit, dtype=float)) * a


class SCDecoder:
    """Batch SC decoder for block length ``N``.

    With ``fast=True`` subtrees that are entirely frozen, entirely
    information, or a repetition pattern are resolved in one step; all three
    shortcuts give the same decisions as plain SC (up to exact LLR ties).
    """

    def __init__(self, N: int, min_sum: bool = False, fast: bool = True):
        self.N = N
        self.n = log2_int(N)
        self.min_sum = min_sum
        self.fast = fast

    def decode(self, llr, frozen_mask, frozen_u=None):
        """Return ``(u_hat, x_hat)``, both ``(B, N)`` uint8.

        ``frozen_mask`` is ``(N,)`` or ``(B, N)`` with True at frozen
        positions; ``frozen_u`` holds the frozen bit values (zeros if None).
        """
        llr = np.asarray(llr, dtype=float)
        single = llr.ndim == 1
        llr = np.atleast_2d(llr)
        B, N = llr.shape
        if N != self.N:
            raise ValueError(f"expected {self.N} LLRs per block, got {N}")
        mask = np.atleast_2d(np.asarray(frozen_mask, dtype=bool))
        if mask.shape[1] != N or mask.shape[0] not in (1, B):
            raise ValueError("frozen mask shape does not match the LLRs")
        if frozen_u is None:
            fu = np.zeros_like(mask, dtype=np.uint8)
            zero_frozen = True
        else:
            fu = np.atleast_2d(np.asarray(frozen_u, dtype=np.uint8)) & mask
            zero_frozen = not fu.any()
        self._mask = mask
        self._fu = fu
        self._zero_frozen = zero_frozen
        self._kinds = self._node_kinds(mask, zero_frozen) if self.fast else None
        self._u = np.zeros((B, N), dtype=np.uint8)
        x = self._node(llr, 0, N)
        u = self._u
        del self._u, self._mask, self._fu, self._kinds
        if single:
            return u[0], x[0]
        return u, x

    def _node_kinds(self, mask, zero_frozen):
        kinds = {}
        for s in range(self.n + 1):
            size = 1 << s
            m = mask.reshape(mask.shape[0], -1, size)
            rate0 = m.all(axis=2).all(axis=0)
            rate1 = (~m).all(axis=2).all(axis=0)
            if zero_frozen and size > 1:
                rep = (m[:, :, :-1].all(axis=2) & ~m[:, :, -1]).all(axis=0)
            else:
                rep = np.zeros_like(rate0)
            kinds[size] = (rate0, rate1, rep)
        return kinds

    def _node(self, llr, lo, size):
        B = llr.shape[0]
        if self.fast:
            rate0, rate1, rep = self._kinds[size]
            k = lo // size
            if rate0[k]:
                if self._zero_frozen:
                    return np.zeros((B, size), dtype=np.uint8)
                u = np.broadcast_to(self._fu[:, lo:lo + size], (B, size))
                self._u[:, lo:lo + size] = u
                return kron_transform(u)
            if rate1[k]:
                x = (llr < 0).astype(np.uint8)
                self._u[:, lo:lo + size] = kron_transform(x)
                return x
            if rep[k]:
                bit = (llr.sum(axis=1) < 0).astype(np.uint8)
                self._u[:, lo + size - 1] = bit
                return np.repeat(bit[:, None], size, axis=1)
        if size == 1:
            m = self._mask[:, lo]
            hard = (llr[:, 0] < 0).astype(np.uint8)
            bit = np.where(m, self._fu[:, lo], hard).astype(np.uint8)
            self._u[:, lo] = bit
            return bit[:, None]
        h = size // 2
        a = llr[:, :h]
        b = llr[:, h:]
        v = self._node(llr_f(a, b, self.min_sum), lo, h)
        w = self._node(llr_g(a, b, v), lo + h, h)
        return np.concatenate([v ^ w, w], axis=1)


def sc_decode(cfg: CodeConfig, llrs, min_sum: bool = False):
    """SC-decode one block (or a ``(B, N)`` batch); returns ``(u_hat, info_hat)``."""
    llrs = np.asarray(llrs, dtype=float)
    if llrs.shape[-1] != cfg.N:
        raise ValueError(f"expected {cfg.N} LLRs, got {llrs.shape[-1]}")
    dec = SCDecoder(cfg.N, min_sum=min_sum)
    u_hat, _ = dec.decode(llrs, ~cfg.info_mask, cfg.frozen_u)
    return u_hat, u_hat[..., cfg.A]


def sc_decode_systematic(cfg: CodeConfig, llrs, min_sum: bool = False):
    """Decode, re-encode and read the information bits off ``x_hat_A``."""
    llrs = np.asarray(llrs, dtype=float)
    if llrs.shape[-1] != cfg.N:
        raise ValueError(f"expected {cfg.N} LLRs, got {llrs.shape[-1]}")
    dec = SCDecoder(cfg.N, min_sum=min_sum)
    _, x_hat = dec.decode(llrs, ~cfg.info_mask, cfg.frozen_u)
    return x_hat[..., cfg.A]


def genie_decision_llrs(llr, min_sum: bool = False):
    """Decision LLRs of every bit channel when all earlier bits are known to be 0.

    This is genie-aided SC for the all-zero codeword: every partial sum is
    zero, so the tree can be evaluated stage by stage without recursion.
    Returns an array of the same shape as ``llr`` indexed by bit channel.
    """
    L = np.atleast_2d(np.asarray(llr, dtype=float))
    B, N = L.shape
    n = log2_int(N)
    for s in range(n):
        groups = 1 << s
        half = N >> (s + 1)
        v = L.reshape(B, groups, 2, half)
        a = v[:, :, 0, :]
        b = v[:, :, 1, :]
        L = np.stack([llr_f(a, b, min_sum), a + b], axis=2).reshape(B, N)
    return L if np.ndim(llr) > 1 else L[0]
