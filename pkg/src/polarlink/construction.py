"""Bit-channel reliability ordering (construction) of polar codes.

Two engines produce the ordering, best channel first:

* ``ga``: Gaussian-approximation density evolution of the mean decision LLR.
* ``mc``: genie-aided SC over Monte-Carlo all-zero transmissions, ranking
  channels by their error counts. Slow but assumption-free; used as the
  reference the GA engine is checked against.

Ties are broken by ascending index in both engines.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .capacity import AWGN, FadingDistribution, SnrPoint, q_func
from .channel import demap_llr, transmit
from .gf2 import log2_int
from .sc_decoder import genie_decision_llrs

MEAN_LLR_SATURATION = 1e4
_PHI_SWITCH = 10.0
_BISECT_STEPS = 80


@dataclass(frozen=True, eq=False)
class ReliabilityOrder:
    order: np.ndarray
    snr_db: float = float("nan")
    engine: str = "ga"
    seed: int | None = None

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64).reshape(-1)
        N = order.size
        log2_int(N)
        if not np.array_equal(np.sort(order), np.arange(N)):
            raise ValueError("order is not a permutation of 0..N-1")
        order.setflags(write=False)
        object.__setattr__(self, "order", order)

    @property
    def N(self) -> int:
        return int(self.order.size)

    def __eq__(self, other):
        if not isinstance(other, ReliabilityOrder):
            return NotImplemented
        same_snr = (self.snr_db == other.snr_db
                    or (math.isnan(self.snr_db) and math.isnan(other.snr_db)))
        return (np.array_equal(self.order, other.order) and same_snr
                and self.engine == other.engine and self.seed == other.seed)


_EXACT_BELOW = 1.0
_SERIES_BELOW = 1e-4
_GH_Z, _GH_W = np.polynomial.hermite_e.hermegauss(80)
_GH_W = _GH_W / math.sqrt(2.0 * math.pi)
_LOG_SAT = math.log(MEAN_LLR_SATURATION)
_LOG2 = math.log(2.0)


def _psi_exact(x):
    """``1 - phi(x) = E[tanh(u / 2)]`` with ``u ~ N(x, 2x)``, for small ``x``."""
    x = np.asarray(x, dtype=float)
    u = x[..., None] + np.sqrt(2.0 * x)[..., None] * _GH_Z
    quad = np.tanh(0.5 * u) @ _GH_W
    return np.where(x < _SERIES_BELOW, 0.5 * x - 0.25 * x * x, quad)


def phi_parts(x):
    """``(log phi(x), log(1 - phi(x)))`` for the GA ``phi`` function.

    ``x >= 1`` uses the usual two-piece fit (switching at 10); below 1 that
    fit is poor and even exceeds 1, so ``phi`` is evaluated by quadrature.
    """
    x = np.asarray(x, dtype=float)
    xs = np.minimum(x, _PHI_SWITCH)
    xl = np.maximum(x, _PHI_SWITCH)
    fit = np.where(x < _PHI_SWITCH,
                   -0.4527 * np.power(xs, 0.86) + 0.0218,
                   0.5 * np.log(np.pi / xl) - 0.25 * xl + np.log1p(-10.0 / (7.0 * xl)))
    log_phi = np.minimum(fit, -1e-300)
    log_psi = np.log(-np.expm1(log_phi))
    small = x < _EXACT_BELOW
    if np.any(small):
        with np.errstate(divide="ignore"):
            psi = _psi_exact(x[small])
            log_phi[small] = np.log1p(-psi)
            log_psi[small] = np.log(psi)
    return log_phi, log_psi


def log_phi(x):
    return phi_parts(x)[0]


def _invert_phi(log_phi_t, log_psi_t, lo, hi):
    """Bisection for ``x`` in ``[lo, hi]`` with ``phi(x)`` equal to the target."""
    use_psi = log_psi_t <= math.log(0.5)
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        lp, lq = phi_parts(mid)
        too_small = np.where(use_psi, lq < log_psi_t, lp > log_phi_t)
        lo = np.where(too_small, mid, lo)
        hi = np.where(too_small, hi, mid)
    return 0.5 * (lo + hi)


def ga_check_update_log(log_m):
    """Check-node mean update ``phi^{-1}(1 - (1 - phi(m))^2)`` on ``log m``."""
    log_m = np.asarray(log_m, dtype=float)
    out = np.empty_like(log_m)
    m = np.exp(np.minimum(log_m, _LOG_SAT))

    tiny = log_m < math.log(_SERIES_BELOW)
    # psi(x) ~ x/2 - x^2/4, so psi_out = psi^2 gives m' ~ m^2 / 2
    out[tiny] = 2.0 * log_m[tiny] - _LOG2 + 2.0 * np.log1p(-0.5 * m[tiny])

    rest = ~tiny
    if np.any(rest):
        lp, lq = phi_parts(m[rest])
        # 1 - (1 - phi)^2 = phi (1 + psi); its complement is psi^2
        lp_t = lp + np.log1p(np.exp(lq))
        lq_t = 2.0 * lq
        psi_t = np.exp(lq_t)
        res = np.empty_like(lp_t)
        low = psi_t < 0.5 * _SERIES_BELOW - 0.25 * _SERIES_BELOW**2
        # invert the quadratic series exactly: x = 4 psi / (1 + sqrt(1 - 4 psi))
        res[low] = np.log(4.0 * psi_t[low]) - np.log1p(np.sqrt(1.0 - 4.0 * psi_t[low]))
        hi_idx = ~low
        if np.any(hi_idx):
            x = _invert_phi(lp_t[hi_idx], lq_t[hi_idx],
                            np.full(hi_idx.sum(), _SERIES_BELOW), m[rest][hi_idx])
            res[hi_idx] = np.log(x)
        out[rest] = res
    out = np.where(log_m >= _LOG_SAT, _LOG_SAT, out)
    return np.where(np.isneginf(log_m), -np.inf, out)


def ga_check_update(m):
    with np.errstate(divide="ignore"):
        return np.minimum(np.exp(ga_check_update_log(np.log(np.asarray(m, dtype=float)))),
                          MEAN_LLR_SATURATION)


def ga_log_mean_llrs(N: int, snr: SnrPoint) -> np.ndarray:
    """Log of the mean decision LLR of every bit channel (GA density evolution).

    Means are carried as logs: at low SNR the check-node chain shrinks them
    roughly as ``m^2 / 2`` per stage, far below the double range, and their
    relative order still matters.
    """
    n = log2_int(N)
    m0 = min(2.0 * snr.gamma_linear, MEAN_LLR_SATURATION)  # 2 / sigma^2
    lm = np.array([math.log(m0)])
    for _ in range(n):
        lm = np.stack([ga_check_update_log(lm),
                       np.minimum(lm + _LOG2, _LOG_SAT)], axis=1).reshape(-1)
    return lm


def ga_mean_llrs(N: int, snr: SnrPoint) -> np.ndarray:
    return np.exp(ga_log_mean_llrs(N, snr))


def ga_error_proxy(means):
    """Bit-channel error probability estimate ``Q(sqrt(m / 2))``."""
    return q_func(np.sqrt(np.asarray(means) / 2.0))


def ga_construct(N: int, snr: SnrPoint) -> ReliabilityOrder:
    if not math.isfinite(snr.gamma_db):
        raise ValueError("construction SNR must be finite")
    order = np.argsort(-ga_log_mean_llrs(N, snr), kind="stable")
    return ReliabilityOrder(order, snr_db=snr.gamma_db, engine="ga")


def mc_error_counts(N: int, snr: SnrPoint, dist: FadingDistribution = AWGN,
                    iters: int = 10_000, seed: int = 0, shards: int = 1,
                    batch: int = 1024) -> np.ndarray:
    """Genie-aided SC first-error counts per bit channel.

    Each shard draws from its own stream spawned from ``seed``, so the result
    is reproducible for a fixed ``(seed, shards)``.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    log2_int(N)
    counts = np.zeros(N, dtype=np.int64)
    per_shard = [iters // shards + (k < iters % shards) for k in range(shards)]
    for ss, todo in zip(np.random.SeedSequence(seed).spawn(shards), per_shard):
        rng = np.random.default_rng(ss)
        while todo > 0:
            B = min(batch, todo)
            h_abs = dist.sample(rng, (B, N))
            y = transmit(np.ones((B, N)), h_abs, snr, rng)
            dec = genie_decision_llrs(demap_llr(y, h_abs, snr))
            counts += (dec < 0).sum(axis=0)
            todo -= B
    return counts


def mc_construct(N: int, snr: SnrPoint, dist: FadingDistribution = AWGN,
                 iters: int = 10_000, seed: int = 0, shards: int = 1) -> ReliabilityOrder:
    counts = mc_error_counts(N, snr, dist, iters, seed, shards)
    order = np.argsort(counts, kind="stable")
    return ReliabilityOrder(order, snr_db=snr.gamma_db, engine="mc", seed=seed)


def select_info_set(qs: ReliabilityOrder, K: int) -> np.ndarray:
    """The ``K`` most reliable indices, ascending."""
    if not 0 <= K <= qs.N:
        raise ValueError(f"K must lie in [0, {qs.N}], got {K}")
    return np.sort(qs.order[:K])


class QsParseError(ValueError):
    pass


_MAGIC = "polar-qs v1"
_META_RE = re.compile(
    r"^N=(\d+) snr_db=(\S+) engine=(ga|mc) seed=(-?\d+|-)$")


def save_order(qs: ReliabilityOrder, path) -> None:
    seed = "-" if qs.seed is None else str(qs.seed)
    lines = [_MAGIC, f"N={qs.N} snr_db={qs.snr_db!r} engine={qs.engine} seed={seed}"]
    lines += [str(i) for i in qs.order]
    Path(path).write_text("\n".join(lines) + "\n")


def load_order(path) -> ReliabilityOrder:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != _MAGIC:
        raise QsParseError(f"{path}:1: expected header {_MAGIC!r}")
    if len(lines) < 2:
        raise QsParseError(f"{path}:2: missing metadata line")
    m = _META_RE.match(lines[1].strip())
    if m is None:
        raise QsParseError(f"{path}:2: malformed metadata {lines[1]!r}")
    N = int(m.group(1))
    try:
        snr_db = float(m.group(2))
    except ValueError:
        raise QsParseError(f"{path}:2: bad snr_db {m.group(2)!r}") from None
    seed = None if m.group(4) == "-" else int(m.group(4))
    body = lines[2:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != N:
        raise QsParseError(f"{path}:{2 + len(body)}: header says N={N} but file has {len(body)} indices")
    seen = set()
    order = []
    for lineno, text in enumerate(body, start=3):
        try:
            idx = int(text.strip())
        except ValueError:
            raise QsParseError(f"{path}:{lineno}: not an integer: {text!r}") from None
        if not 0 <= idx < N:
            raise QsParseError(f"{path}:{lineno}: index {idx} out of range [0, {N})")
        if idx in seen:
            raise QsParseError(f"{path}:{lineno}: duplicate index {idx}")
        seen.add(idx)
        order.append(idx)
    try:
        return ReliabilityOrder(np.array(order), snr_db=snr_db, engine=m.group(3), seed=seed)
    except ValueError as exc:
        raise QsParseError(f"{path}: {exc}") from None
