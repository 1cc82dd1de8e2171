import numpy as np
import pytest

from gdsbp.codes import rotated_toric
from gdsbp.matrices import gds_repeated, gds_with_readout
from gdsbp.noise import (
    NoiseModel,
    Outcome,
    TrialSample,
    classify_residual,
    exact_posterior_oracle,
    rng_for,
    sample_paulis,
    sample_trial,
    sample_weight_exact,
    syndromes_for_decoding,
)
from gdsbp.matrices import GdsCheckMatrix


def test_noise_model_ranges():
    for bad in ((0.75, 0.0, 1), (0.1, 0.5, 1), (0.1, 0.1, 0)):
        with pytest.raises(ValueError):
            NoiseModel(*bad)


def test_zero_noise(toric4):
    s = sample_trial(toric4, NoiseModel(0.0, 0.0, 3), False, rng_for(1, 0))
    assert not s.data_errors.any() and not s.observed_syndromes.any()


def test_uniform_limit_frequencies():
    draws = sample_paulis(rng_for(5, 0), 100_000, 0.75 - 1e-15)
    counts = np.bincount(draws, minlength=4)
    p = 0.25
    sigma = np.sqrt(100_000 * p * (1 - p))
    assert np.all(np.abs(counts - 25_000) < 3 * sigma)


def test_readout_round_counts(toric4):
    s = sample_trial(toric4, NoiseModel(0.1, 0.1, 3), True, rng_for(0, 0))
    assert s.data_errors.shape == (4, 16)
    assert s.syndrome_flips.shape == (3, 16)
    assert s.observed_syndromes.shape == (4, 16)
    assert s.readout


def test_reproducible(toric4):
    a = sample_trial(toric4, NoiseModel(0.2, 0.1, 2), True, rng_for(9, 4, 1))
    b = sample_trial(toric4, NoiseModel(0.2, 0.1, 2), True, rng_for(9, 4, 1))
    assert np.array_equal(a.data_errors, b.data_errors)
    assert np.array_equal(a.syndrome_flips, b.syndrome_flips)
    c = sample_trial(toric4, NoiseModel(0.2, 0.1, 2), True, rng_for(9, 4, 2))
    assert not np.array_equal(a.data_errors, c.data_errors)


def test_transformed_syndromes(toric4):
    assert not syndromes_for_decoding(
        sample_trial(toric4, NoiseModel(0, 0, 2), False, rng_for(0, 0)), 16
    ).any()
    for t in range(20):
        for readout in (False, True):
            s = sample_trial(toric4, NoiseModel(0.1, 0.1, 3), readout, rng_for(3, t))
            g = gds_with_readout(toric4.h, 3) if readout else gds_repeated(toric4.h, 3)
            got = syndromes_for_decoding(s, 16)
            want = g.syndrome(s.data_errors.reshape(-1), s.syndrome_flips.reshape(-1))
            assert np.array_equal(got, want)
            # the untransformed syndromes follow the cumulative error
            direct = toric4.h.syndrome(s.cumulative)
            direct[:3] ^= s.syndrome_flips
            assert np.array_equal(direct, s.observed_syndromes)


def test_equal_rounds_cancel(toric4):
    s = TrialSample(np.zeros((2, 16), np.uint8), np.zeros((2, 16), np.uint8), np.ones((2, 16), np.uint8))
    out = syndromes_for_decoding(s, 16)
    assert out[:16].all() and not out[16:].any()


def test_carry_is_folded(toric4):
    carry = np.zeros(16, np.uint8)
    carry[3] = 2
    s = sample_trial(toric4, NoiseModel(0, 0, 2), False, rng_for(0, 0), carry=carry)
    assert s.data_errors[0, 3] == 2 and s.observed_syndromes[1].any()


def test_text_roundtrip(toric4):
    s = sample_trial(toric4, NoiseModel(0.2, 0.2, 2), True, rng_for(2, 0))
    text = s.to_text()
    assert text.splitlines()[-1].endswith(" -")
    back = TrialSample.from_text(text, toric4.h)
    assert np.array_equal(back.observed_syndromes, s.observed_syndromes)


def test_classify(toric4):
    e = sample_paulis(rng_for(1, 1), 16, 0.3)
    assert classify_residual(toric4, e, e) is Outcome.SUCCESS
    assert classify_residual(toric4, e, e ^ toric4.h.codes[2]) is Outcome.SUCCESS
    logical = np.zeros(16, np.uint8)
    logical[[0, 1, 2, 3]] = 1
    if toric4.h.syndrome(logical).any():
        logical[[0, 1, 2, 3]] = 2
    assert not toric4.h.syndrome(logical).any()
    assert classify_residual(toric4, logical, np.zeros(16, np.uint8)) is Outcome.LOGICAL_FAILURE


def test_classify_stabilizer_injection(rng):
    code = rotated_toric(2)
    # every residual with zero syndrome is either in the row space or a logical, by brute force
    for _ in range(30):
        e = rng.integers(0, 4, 4).astype(np.uint8)
        est = rng.integers(0, 4, 4).astype(np.uint8)
        base = classify_residual(code, e, est)
        mask = rng.integers(0, 2, code.h.m)
        stab = np.bitwise_xor.reduce(code.h.codes[mask.astype(bool)], axis=0) if mask.any() else 0
        assert classify_residual(code, e, est ^ stab) is base


def test_weight_exact_sampler():
    rng = rng_for(0, 0)
    for w in (0, 1, 3, 7):
        p, b = sample_weight_exact(10, 5, w, rng)
        assert np.count_nonzero(p) + b.sum() == w
    with pytest.raises(ValueError):
        sample_weight_exact(2, 2, 5, rng)
    # weight one: a Pauli position is 3x as likely as a bit position
    hits = sum(np.count_nonzero(sample_weight_exact(1, 1, 1, rng)[0]) for _ in range(4000))
    assert abs(hits / 4000 - 0.75) < 0.03


def test_oracle_examples():
    g = GdsCheckMatrix.from_dense([[1]], [[1]])
    res = exact_posterior_oracle(g, [0], noise=NoiseModel(0.1, 0.1))
    # s = 0: candidates (I,0), (X,0), (Z,1), (Y,1)
    assert str(res.best) == "I 0"
    # an unconstrained variable keeps its prior
    g2 = GdsCheckMatrix.from_dense([[1, 0]], [[1]])
    res2 = exact_posterior_oracle(g2, [1], noise=NoiseModel(0.1, 0.1))
    assert np.allclose(res2.quaternary_llrs[1], np.log(0.9 / (0.1 / 3)))


def test_oracle_limits():
    g = GdsCheckMatrix.from_dense(np.ones((1, 13), np.uint8), np.zeros((1, 0), np.uint8))
    with pytest.raises(ValueError):
        exact_posterior_oracle(g, [0], noise=NoiseModel(0.1))
    g = GdsCheckMatrix.from_dense([[1]], np.zeros((1, 0), np.uint8))
    with pytest.raises(ValueError):
        exact_posterior_oracle(g, [1], noise=NoiseModel(0.0))
