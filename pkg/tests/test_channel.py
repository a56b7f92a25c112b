import numpy as np
import pytest

from polarlink.capacity import AWGN, FadingDistribution, SnrPoint, q_func
from polarlink.channel import (BlockFading, ChannelRealization, demap_llr, draw_fading,
                               hard_bits, modulate, transmit)
from polarlink.construction import ga_construct, select_info_set
from polarlink.encoder import encode_nonsystematic
from polarlink.gf2 import CodeConfig
from polarlink.sc_decoder import sc_decode

HALFNORMAL = FadingDistribution("halfnormal")


def test_modulate_examples():
    assert list(modulate([0, 1, 0])) == [1.0, -1.0, 1.0]
    assert np.all(modulate(np.zeros(16, dtype=np.uint8)) == 1.0)
    bits = np.random.default_rng(0).integers(0, 2, 100)
    assert np.array_equal(hard_bits(modulate(bits)), bits)


def test_fixed_mu_one_is_all_ones(rng):
    assert np.all(draw_fading(64, FadingDistribution("fixedmu", 1.0), 1, rng).h_abs == 1.0)


def test_halfnormal_mean(rng):
    h = draw_fading(10 ** 6, HALFNORMAL, 1, rng).h_abs
    assert np.all(h >= 0)
    assert abs(h.mean() - 0.7979) <= 0.003


def test_block_sharing():
    bf = BlockFading(32, HALFNORMAL, 2, np.random.default_rng(5))
    h1, h2, h3 = bf.next().copy(), bf.next().copy(), bf.next().copy()
    assert np.array_equal(h1, h2)
    assert not np.array_equal(h2, h3)
    b = BlockFading(32, HALFNORMAL, 2, np.random.default_rng(5)).batch(3)
    assert np.array_equal(b, np.stack([h1, h2, h3]))


def test_draw_fading_validation(rng):
    with pytest.raises(ValueError):
        draw_fading(0, HALFNORMAL, 1, rng)
    with pytest.raises(ValueError):
        draw_fading(4, HALFNORMAL, 0, rng)


def test_transmit_noiseless_examples():
    x = modulate([0, 1, 1, 0])
    assert np.array_equal(transmit(x, None, SnrPoint(0.0), None, noiseless=True), x)
    y = transmit(modulate([0, 1]), np.array([2.0, 0.5]), SnrPoint.from_linear(4.0), None,
                 noiseless=True)
    assert np.allclose(y, [4.0, -1.0])
    with pytest.raises(ValueError):
        transmit(np.ones(3), np.ones(4), SnrPoint(0.0), None, noiseless=True)


def test_transmit_noise_variance(rng):
    N = 10 ** 6
    h = HALFNORMAL.sample(rng, N)
    x = modulate(rng.integers(0, 2, N))
    snr = SnrPoint(3.0)
    n = transmit(x, ChannelRealization(h, 1), snr, rng) - h * snr.amplitude * x
    assert abs(n.var() - 1.0) <= 0.01


def test_demap_examples():
    assert demap_llr(np.zeros(4), None, SnrPoint(5.0)).tolist() == [0.0] * 4
    assert demap_llr(np.array([3.0]), np.array([1.0]), SnrPoint(0.0))[0] == pytest.approx(6.0)
    assert np.all(demap_llr(np.array([5.0, -7.0]), np.zeros(2), SnrPoint(10.0)) == 0.0)
    assert demap_llr(np.array([100.0]), None, SnrPoint(10.0))[0] == 40.0
    with pytest.raises(ValueError):
        demap_llr(np.zeros(3), np.ones(2), SnrPoint(0.0))


def test_llr_sign_statistics(rng):
    # per-symbol crossover probability Q(|h| sqrt(gamma)) for the all-zero word
    N, trials = 16, 50_000
    h = np.linspace(0.05, 1.6, N)
    snr = SnrPoint(0.0)
    y = transmit(np.ones((trials, N)), h, snr, rng)
    frac = (demap_llr(y, h, snr) < 0).mean(axis=0)
    p = q_func(h * snr.amplitude)
    se = np.sqrt(p * (1 - p) / trials)
    assert np.all(np.abs(frac - p) <= 3 * se + 1e-12)


def _pipeline(dist, seed, N=64, B=200):
    rng = np.random.default_rng(seed)
    cfg = CodeConfig(N, select_info_set(ga_construct(N, SnrPoint(1.0)), 23))
    info = rng.integers(0, 2, (B, cfg.K), dtype=np.uint8)
    h = BlockFading(N, dist, 1, rng).batch(B)
    x = modulate(encode_nonsystematic(cfg, info).x)
    y = transmit(x, h, SnrPoint(1.0), rng)
    return sc_decode(cfg, demap_llr(y, h, SnrPoint(1.0)))[1]


def test_fixed_mu_one_matches_awgn_bit_for_bit():
    a = _pipeline(FadingDistribution("fixedmu", 1.0), 17)
    b = _pipeline(AWGN, 17)
    assert np.array_equal(a, b)


def test_high_snr_end_to_end(rng):
    N, B = 256, 10_000
    cfg = CodeConfig(N, select_info_set(ga_construct(N, SnrPoint(20.0)), int(0.36 * N)))
    snr = SnrPoint(20.0)
    errors = 0
    for _ in range(B // 1000):
        info = rng.integers(0, 2, (1000, cfg.K), dtype=np.uint8)
        y = transmit(modulate(encode_nonsystematic(cfg, info).x), None, snr, rng)
        errors += int((sc_decode(cfg, demap_llr(y, None, snr))[1] != info).sum())
    assert errors / (B * cfg.K) < 1e-5
