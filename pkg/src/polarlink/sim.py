"""Monte-Carlo BER sweeps over AWGN and block-fading channels.

Blocks are simulated in fixed-size chunks. Chunk ``c`` of SNR point ``i``
draws everything (info bits, gains, noise) from its own stream spawned from
``(seed, i, c)``, so results depend only on the config, not on how many
workers ran the chunks or in which order they finished.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import adapt
from .capacity import (AWGN, FadingDistribution, SnrPoint, design_snr,
                       equivalent_fading_snr)
from .channel import BlockFading, demap_llr, modulate, transmit
from .construction import (ReliabilityOrder, ga_construct, load_order,
                           mc_construct, select_info_set)
from .encoder import encode_nonsystematic, encode_systematic
from .gf2 import CodeConfig, is_power_of_two
from .sc_decoder import SCDecoder

log = logging.getLogger(__name__)

BER_EXPERIMENTS = ("awgn-ber", "fading-ber", "adapt-ber")
EXPERIMENTS = BER_EXPERIMENTS + ("construct", "design-snr", "asymptotic")
CSV_HEADER = "snr_db,blocks,bit_errors,ber,block_errors,bler,effective_rate"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str = "awgn-ber"
    N: int = 1024
    rate: float = 0.36
    snr_start: float = -2.0
    snr_stop: float = 8.0
    snr_step: float = 1.0
    # design-snr | point | converted | file:<path>
    construction: str = "design-snr"
    engine: str = "ga"
    mc_iters: int = 100_000
    systematic: bool = False
    decoder: str = "exact"
    dist: str = "halfnormal"
    n_blocks_fading: int = 1
    fixed_offset: bool = False
    # capacity c used by rate adaptation: bound = C(E|h| sqrt(gamma)),
    # offset = C(sqrt(gamma - 8 dB))
    adapt_capacity: str = "bound"
    alpha: float = 0.2
    cap_m: int = 64
    blocks: int = 100_000
    max_bit_errors: int = 100
    chunk: int = 1000
    workers: int = 1
    seed: int = 7
    out: str | None = None
    qs_out: str | None = None

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not is_power_of_two(self.N) or self.N < 2:
            raise ConfigError(f"block length must be a power of two >= 2, got {self.N}")
        if not 0.0 < self.rate < 1.0:
            raise ConfigError(f"rate must lie in (0, 1), got {self.rate}")
        if not self.snr_step > 0:
            raise ConfigError("snr_step must be positive")
        if self.snr_stop < self.snr_start:
            raise ConfigError("snr_stop is below snr_start")
        if self.blocks < 1 or self.chunk < 1 or self.workers < 1 or self.n_blocks_fading < 1:
            raise ConfigError("blocks, chunk, workers and n_blocks_fading must be >= 1")
        if self.max_bit_errors < 1:
            raise ConfigError("max_bit_errors must be >= 1")
        if self.decoder not in ("exact", "minsum"):
            raise ConfigError(f"decoder must be exact or minsum, got {self.decoder!r}")
        if self.adapt_capacity not in ("bound", "offset"):
            raise ConfigError(f"adapt_capacity must be bound or offset, got {self.adapt_capacity!r}")
        if self.engine not in ("ga", "mc"):
            raise ConfigError(f"engine must be ga or mc, got {self.engine!r}")
        mode = self.construction
        if mode not in ("design-snr", "point", "converted") and not mode.startswith("file:"):
            raise ConfigError(f"unknown construction mode {mode!r}")
        if self.alpha < 0 or self.cap_m < 0:
            raise ConfigError("need alpha >= 0 and cap_m >= 0")
        if self.experiment == "adapt-ber" and self.cap_m > self.N:
            raise ConfigError(f"cap_m={self.cap_m} exceeds N={self.N}")
        try:
            FadingDistribution.parse(self.dist)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if adapt.info_count(self.N, self.rate) < 1:
            raise ConfigError("rate too low: no information bits")
        return self

    @property
    def fading(self) -> FadingDistribution:
        if self.experiment == "awgn-ber":
            return AWGN
        return FadingDistribution.parse(self.dist)

    @property
    def snr_grid(self) -> list[float]:
        count = int(math.floor((self.snr_stop - self.snr_start) / self.snr_step + 1e-9)) + 1
        return [round(self.snr_start + i * self.snr_step, 10) for i in range(count)]

    @property
    def chunk_blocks(self) -> int:
        # a fading realization never straddles two chunks
        nb = self.n_blocks_fading
        return max(nb, (self.chunk // nb) * nb)


def _coerce(f, raw):
    kind = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
    if isinstance(raw, str):
        raw = raw.strip()
    if kind == "bool":
        if isinstance(raw, bool):
            return raw
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{f.name}: expected a boolean, got {raw!r}")
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{f.name}: cannot parse {raw!r} as {kind}") from None
    if "None" in kind and raw in ("", "-", None):
        return None
    return str(raw)


_ALIASES = {"n": "N", "cap-m": "cap_m", "m": "cap_m", "nb": "n_blocks_fading"}


def config_from_mapping(values: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    base = base or ExperimentConfig()
    by_name = {f.name: f for f in fields(ExperimentConfig)}
    updates = {}
    for key, raw in values.items():
        name = _ALIASES.get(key, key.replace("-", "_"))
        if name not in by_name:
            raise ConfigError(f"unknown config key {key!r}")
        updates[name] = _coerce(by_name[name], raw)
    return replace(base, **updates)


def parse_config_file(path) -> dict:
    """Read a flat ``key=value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


@dataclass
class SweepPoint:
    snr_db: float
    blocks: int = 0
    bit_errors: int = 0
    block_errors: int = 0
    info_bits: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.info_bits if self.info_bits else 0.0

    @property
    def bler(self) -> float:
        return self.block_errors / self.blocks if self.blocks else 0.0

    def effective_rate(self, N: int) -> float:
        return self.info_bits / (self.blocks * N) if self.blocks else 0.0


@dataclass
class SweepResult:
    N: int
    points: list[SweepPoint] = field(default_factory=list)

    def ber(self) -> np.ndarray:
        return np.array([p.ber for p in self.points])

    def snr_db(self) -> np.ndarray:
        return np.array([p.snr_db for p in self.points])


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def format_csv(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    for p in result.points:
        lines.append(",".join([_fmt(p.snr_db), str(p.blocks), str(p.bit_errors), _fmt(p.ber),
                               str(p.block_errors), _fmt(p.bler),
                               _fmt(p.effective_rate(result.N))]))
    return "\n".join(lines) + "\n"


def emit_csv(result: SweepResult, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_csv(result))


def construction_snr(cfg: ExperimentConfig, snr: SnrPoint) -> SnrPoint:
    if cfg.construction == "design-snr":
        return design_snr(cfg.rate)
    if cfg.construction == "point":
        return snr
    if cfg.construction == "converted":
        return equivalent_fading_snr(snr, cfg.fading, fixed_offset=cfg.fixed_offset)
    raise ValueError(f"construction mode {cfg.construction!r} has no SNR")


def build_order(cfg: ExperimentConfig, snr: SnrPoint) -> ReliabilityOrder:
    """Reliability order for one operating point (AWGN surrogate channel)."""
    if cfg.construction.startswith("file:"):
        qs = load_order(cfg.construction[5:])
        if qs.N != cfg.N:
            raise ConfigError(f"Q_s file has N={qs.N}, config has N={cfg.N}")
        return qs
    at = construction_snr(cfg, snr)
    if cfg.engine == "mc":
        return mc_construct(cfg.N, at, AWGN, cfg.mc_iters, cfg.seed)
    return ga_construct(cfg.N, at)


@dataclass(frozen=True)
class _PointJob:
    N: int
    order: np.ndarray
    n_info: int
    snr_db: float
    point_index: int
    seed: int
    fading: FadingDistribution | None
    n_blocks_fading: int
    systematic: bool
    min_sum: bool
    adapt: adapt.AdaptConfig | None


_config_cache: dict = {}


def _code_for(N: int, order: np.ndarray, K: int) -> CodeConfig:
    key = (N, order.tobytes(), K)
    cfg = _config_cache.get(key)
    if cfg is None:
        if len(_config_cache) > 256:
            _config_cache.clear()
        cfg = CodeConfig(N, np.sort(order[:K]))
        _config_cache[key] = cfg
    return cfg


def simulate_chunk(job: _PointJob, chunk_index: int, B: int) -> tuple[int, int, int]:
    """Simulate ``B`` blocks; return ``(bit_errors, block_errors, info_bits)``."""
    N = job.N
    ss = np.random.SeedSequence(job.seed, spawn_key=(job.point_index, chunk_index))
    rng = np.random.default_rng(ss)
    snr = SnrPoint(job.snr_db)

    bits = rng.integers(0, 2, size=(B, N), dtype=np.uint8)
    h_abs = None
    if job.fading is not None:
        h_abs = BlockFading(N, job.fading, job.n_blocks_fading, rng).batch(B)

    base = _code_for(N, job.order, job.n_info)
    if job.adapt is not None:
        rm = adapt.count_unreliable(h_abs, base.A, job.adapt.alpha)
        K_row = job.n_info - np.minimum(adapt.num_dropped(rm, job.adapt.M, job.adapt.capacity),
                                        job.n_info)
    else:
        K_row = np.full(B, job.n_info)

    encode = encode_systematic if job.systematic else encode_nonsystematic
    x = np.empty((B, N), dtype=np.uint8)
    u = np.empty((B, N), dtype=np.uint8)
    info_mask = np.empty((B, N), dtype=bool)
    for K in np.unique(K_row):
        rows = np.flatnonzero(K_row == K)
        if K == 0:
            x[rows] = 0
            u[rows] = 0
            info_mask[rows] = False
            continue
        code = _code_for(N, job.order, int(K))
        cw = encode(code, bits[rows, :K])
        x[rows] = cw.x
        u[rows] = cw.u
        info_mask[rows] = code.info_mask

    y = transmit(modulate(x), h_abs, snr, rng)
    llr = demap_llr(y, h_abs, snr)
    decoder = SCDecoder(N, min_sum=job.min_sum)
    frozen = ~info_mask if job.adapt is not None else ~base.info_mask
    u_hat, x_hat = decoder.decode(llr, frozen)
    wrong = (x_hat ^ x) if job.systematic else (u_hat ^ u)
    wrong = wrong.astype(bool) & info_mask
    per_block = wrong.sum(axis=1)
    return int(per_block.sum()), int(np.count_nonzero(per_block)), int(K_row.sum())


def _run_chunk(args):
    return simulate_chunk(*args)


def _point_job(cfg: ExperimentConfig, index: int, snr_db: float) -> _PointJob:
    snr = SnrPoint(snr_db)
    qs = build_order(cfg, snr)
    fading = None if cfg.experiment == "awgn-ber" else cfg.fading
    adapt_cfg = None
    if cfg.experiment == "adapt-ber":
        adapt_cfg = adapt.AdaptConfig(cfg.alpha, cfg.cap_m, snr, cfg.fading,
                                      fixed_offset=cfg.adapt_capacity == "offset")
    return _PointJob(cfg.N, qs.order, adapt.info_count(cfg.N, cfg.rate), snr_db, index,
                     cfg.seed, fading, cfg.n_blocks_fading, cfg.systematic,
                     cfg.decoder == "minsum", adapt_cfg)


def run_experiment(cfg: ExperimentConfig) -> SweepResult:
    """Run a BER sweep; stops each point at ``blocks`` or ``max_bit_errors``."""
    cfg.validate()
    if cfg.experiment not in BER_EXPERIMENTS:
        raise ConfigError(f"{cfg.experiment} is not a BER sweep")
    result = SweepResult(cfg.N)
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for index, snr_db in enumerate(cfg.snr_grid):
            job = _point_job(cfg, index, snr_db)
            result.points.append(_run_point(cfg, job, pool))
            p = result.points[-1]
            log.info("%s snr=%.3f dB blocks=%d bit_errors=%d ber=%.3g",
                     cfg.experiment, snr_db, p.blocks, p.bit_errors, p.ber)
    finally:
        if pool is not None:
            pool.shutdown()
    return result


def _run_point(cfg: ExperimentConfig, job: _PointJob, pool) -> SweepPoint:
    point = SweepPoint(job.snr_db)
    size = cfg.chunk_blocks
    n_chunks = -(-cfg.blocks // size)
    wave = 1 if pool is None else 2 * cfg.workers
    c = 0
    while c < n_chunks:
        batch = [(job, k, min(size, cfg.blocks - k * size))
                 for k in range(c, min(c + wave, n_chunks))]
        outputs = map(_run_chunk, batch) if pool is None else pool.map(_run_chunk, batch)
        for (_, _, B), (bit_err, blk_err, info_bits) in zip(batch, outputs):
            point.blocks += B
            point.bit_errors += bit_err
            point.block_errors += blk_err
            point.info_bits += info_bits
            c += 1
            if point.bit_errors >= cfg.max_bit_errors:
                return point
    return point


def run_construct(cfg: ExperimentConfig) -> ReliabilityOrder:
    """Build ``Q_s`` at ``snr_start`` under the configured construction mode."""
    cfg.validate()
    return build_order(cfg, SnrPoint(cfg.snr_start))


ASYMPTOTIC_HEADER = "snr_db,rate,capacity,log2_neg_log2_pe,pe"


def run_asymptotic(cfg: ExperimentConfig, rates=None) -> list[tuple]:
    """Asymptotic block error rate over a rate grid at each swept SNR.

    Capacity is the ``C(E{|h|} sqrt(gamma))`` upper bound for ``cfg.dist``.
    """
    from .capacity import asymptotic_exponent, asymptotic_pe, capacity_upper_bound

    cfg.validate()
    n = cfg.N.bit_length() - 1
    if rates is None:
        rates = [round(0.05 * k, 10) for k in range(1, 20)]
    rows = []
    for snr_db in cfg.snr_grid:
        cap = capacity_upper_bound(SnrPoint(snr_db), cfg.fading)
        for r in rates:
            expo = float(asymptotic_exponent(n, r, cap))
            rows.append((snr_db, r, cap, expo, float(asymptotic_pe(n, r, cap))))
    return rows


def format_asymptotic_csv(rows) -> str:
    lines = [ASYMPTOTIC_HEADER]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"
