import itertools
import math

import mpmath as mp
import numpy as np
import pytest

from gdsbp.codes import rotated_toric
from gdsbp.decoder import (
    DecoderConfig,
    GdsDecoder,
    LlrInit,
    alpha_sweep,
    boxplus,
    decode_ambp,
    decode_mbp,
    init_from_rates,
    lambda_w,
)
from gdsbp.matrices import GdsCheckMatrix, ds_matrix, gds_repeated
from gdsbp.noise import NoiseModel, exact_posterior_oracle

mp.mp.dps = 40


def prob_lambda(w, g):
    """Probability-domain reference: ln Pr(commute with w) / Pr(anticommute)."""
    p = {0: mp.mpf(1), 1: mp.e ** (-mp.mpf(g[0])), 3: mp.e ** (-mp.mpf(g[1])), 2: mp.e ** (-mp.mpf(g[2]))}
    comm = p[0] + p[w]
    anti = sum(v for k, v in p.items() if k not in (0, w))
    return mp.log(comm / anti)


def test_lambda_depolarizing_example():
    lam = math.log(0.9 / (0.1 / 3))
    assert lam == pytest.approx(3.295836866, abs=1e-9)
    assert lambda_w("X", (lam, lam, lam)) == pytest.approx(math.log(14), rel=1e-14)


def test_lambda_symmetric_input():
    vals = {lambda_w(w, (1.7, 1.7, 1.7)) for w in "XYZ"}
    assert max(vals) - min(vals) == 0.0


def test_lambda_sign_matches_oracle(rng):
    for _ in range(100):
        g = rng.uniform(-6, 6, 3)
        w = int(rng.choice([1, 2, 3]))
        ref = prob_lambda(w, g)
        got = lambda_w(w, g)
        assert (got > 0) == (ref > 0)
        assert abs(got - float(ref)) <= 1e-12 * abs(float(ref))


def test_lambda_rejects_identity():
    with pytest.raises(ValueError):
        lambda_w(0, (1, 1, 1))


def test_boxplus_examples():
    assert boxplus([3.0, 0.0]) == 0.0
    ref = 2 * mp.atanh(mp.tanh(1) ** 2)
    assert boxplus([2.0, 2.0]) == pytest.approx(float(ref), rel=1e-14)
    assert float(ref) == pytest.approx(1.3250, abs=1e-4)
    for a in (-5.0, -0.3, 0.7, 4.0):
        assert boxplus([a, 30.0]) == pytest.approx(a, abs=1e-6)
    assert boxplus([-1.0, 2.0]) == -boxplus([1.0, 2.0])
    with pytest.raises(ValueError):
        boxplus([])


def test_boxplus_composition_matches_candidate_sums(rng):
    """A check over quaternary leaves: boxplus of scalarized leaves is the parity log-ratio."""
    for _ in range(50):
        k = int(rng.integers(1, 4))
        leaves = rng.uniform(-3, 5, size=(k, 3))
        syms = rng.choice([1, 2, 3], size=k)
        probs = []
        for g in leaves:
            p = np.array([1.0, math.exp(-g[0]), math.exp(-g[2]), math.exp(-g[1])])
            probs.append(p / p.sum())
        even = odd = 0.0
        from gdsbp.pauli import COMMUTE

        for combo in itertools.product(range(4), repeat=k):
            pr = math.prod(probs[t][c] for t, c in enumerate(combo))
            par = sum(int(COMMUTE[c, s]) for c, s in zip(combo, syms)) & 1
            if par:
                odd += pr
            else:
                even += pr
        got = boxplus([lambda_w(int(s), g) for s, g in zip(syms, leaves)])
        assert got == pytest.approx(math.log(even / odd), abs=1e-9)


def test_init_from_rates():
    init = init_from_rates(3, 2, 0.1, 0.2)
    assert np.allclose(init.quaternary, math.log(27))
    assert np.allclose(init.binary, math.log(4))
    assert init_from_rates(1, 1, 0.75 - 1e-12, 0.5 - 1e-12).quaternary[0, 0] == pytest.approx(0, abs=1e-10)
    zero = init_from_rates(1, 1, 0.0, 0.0)
    assert zero.quaternary[0, 0] == 30.0 and zero.binary[0] == 30.0
    for bad in ((0.75, 0.1), (-0.1, 0.1), (0.1, 0.5)):
        with pytest.raises(ValueError):
            init_from_rates(1, 1, *bad)


def test_config_validation():
    with pytest.raises(ValueError):
        DecoderConfig(t_max=0)
    with pytest.raises(ValueError):
        DecoderConfig(alpha=(1.0, 1.0))
    with pytest.raises(ValueError):
        DecoderConfig(alpha=())
    with pytest.raises(ValueError):
        DecoderConfig(schedule="layered")
    assert DecoderConfig(alpha=[1.2, 1.0]).adaptive


def test_alpha_sweeps():
    toric = alpha_sweep(1.20, 0.30)
    assert len(toric) == 91 and toric[0] == 1.2 and toric[-1] == 0.3 and toric[1] == 1.19
    gb = alpha_sweep(1.4, 0.4)
    assert len(gb) == 101 and gb[-1] == 0.4


def test_zero_syndrome_converges_immediately(toric4):
    g = gds_repeated(toric4.h, 2)
    init = init_from_rates(g.n_quaternary, g.m_binary, 0.05, 0.05)
    out = decode_mbp(g, np.zeros(g.m_prime, np.uint8), init, DecoderConfig(alpha=1.0))
    assert out.converged and out.iterations_used == 1
    assert out.estimate.weight() == 0
    amb = decode_ambp(g, np.zeros(g.m_prime, np.uint8), init, DecoderConfig(alpha=alpha_sweep(1.2, 0.3)))
    assert amb.alpha_star == 1.2


def test_single_check_matches_map_candidate():
    # [X | 1], s = 1, cheap binary variable
    g = GdsCheckMatrix.from_dense([[1]], [[1]])
    init = LlrInit([[5.0, 5.0, 5.0]], [1.0])
    out = decode_mbp(g, [1], init, DecoderConfig(alpha=1.0, t_max=5))
    orc = exact_posterior_oracle(g, [1], priors=init)
    assert out.converged
    assert out.estimate == orc.best
    assert list(out.estimate.bit_part) == [1]
    # and when the flip is expensive the Pauli side takes it
    init = LlrInit([[0.5, 5.0, 4.0]], [6.0])
    out = decode_mbp(g, [1], init, DecoderConfig(alpha=1.0, t_max=5))
    orc = exact_posterior_oracle(g, [1], priors=init)
    assert out.estimate == orc.best
    assert str(out.estimate.pauli_part) == "Z"


@pytest.mark.parametrize("schedule", ["parallel", "serial"])
def test_weight_one_errors_on_small_toric(schedule):
    code = rotated_toric(2)
    g = ds_matrix(code.h)
    cfg = DecoderConfig(t_max=30, alpha=alpha_sweep(1.2, 0.3), schedule=schedule)
    dec = GdsDecoder(g, cfg)
    init = init_from_rates(g.n_quaternary, g.m_binary, 0.02, 0.02)
    for j in range(g.n_vars):
        for sym in ((1, 2, 3) if j < g.n_quaternary else (1,)):
            e = np.zeros(g.n_quaternary, np.uint8)
            b = np.zeros(g.m_binary, np.uint8)
            if j < g.n_quaternary:
                e[j] = sym
            else:
                b[j - g.n_quaternary] = 1
            s = g.syndrome(e, b)
            out = dec.decode(s, init)
            assert out.converged
            assert np.array_equal(g.syndrome(out.estimate), s)


def test_ambp_first_alpha_shortcut(toric4):
    g = ds_matrix(toric4.h)
    init = init_from_rates(16, 16, 0.02, 0.02)
    e = np.zeros(16, np.uint8)
    e[5] = 1
    s = g.syndrome(e, np.zeros(16, np.uint8))
    a = decode_ambp(g, s, init, DecoderConfig(alpha=(1.1, 0.9, 0.5)))
    b = decode_mbp(g, s, init, DecoderConfig(alpha=1.1))
    assert a.converged and a.alpha_star == 1.1
    assert a.estimate == b.estimate and a.iterations_used == b.iterations_used


def test_convergence_implies_syndrome_match_and_determinism(rng, toric4):
    g = gds_repeated(toric4.h, 3)
    init = init_from_rates(g.n_quaternary, g.m_binary, 0.03, 0.03)
    for schedule in ("parallel", "serial"):
        dec = GdsDecoder(g, DecoderConfig(t_max=40, alpha=alpha_sweep(1.2, 0.6, 0.1), schedule=schedule))
        for _ in range(40):
            e = np.where(rng.random(g.n_quaternary) < 0.04, rng.integers(1, 4, g.n_quaternary), 0).astype(np.uint8)
            b = (rng.random(g.m_binary) < 0.04).astype(np.uint8)
            s = g.syndrome(e, b)
            out = dec.decode(s, init)
            again = dec.decode(s, init)
            assert out == again
            if out.converged:
                assert np.array_equal(g.syndrome(out.estimate), s)


def test_dimension_errors(toric4):
    g = ds_matrix(toric4.h)
    dec = GdsDecoder(g, DecoderConfig())
    with pytest.raises(ValueError):
        dec.decode(np.zeros(3, np.uint8), init_from_rates(16, 16, 0.1, 0.1))
    with pytest.raises(ValueError):
        dec.decode(np.zeros(16, np.uint8), init_from_rates(16, 3, 0.1, 0.1))


def test_fixed_initialization():
    cfg = DecoderConfig(fixed_init=0.001)
    init = cfg.priors(2, 2, 0.05, 0.05)
    assert init.quaternary[0, 0] == pytest.approx(math.log(0.999 / (0.001 / 3)))
    assert init.binary[0] == pytest.approx(math.log(0.999 / 0.001))


def test_tree_posterior_after_convergence(rng):
    # a path X-check tree: E0 - c0 - E1 - c1 - e0
    g = GdsCheckMatrix.from_dense([[1, 2], [0, 3]], [[0], [1]])
    init = LlrInit(rng.uniform(0.5, 3, (2, 3)), rng.uniform(0.5, 3, 1))
    s = [1, 0]
    orc = exact_posterior_oracle(g, s, priors=init)
    out = decode_mbp(g, s, init, DecoderConfig(alpha=1.0, t_max=6, halt_on_converge=False))
    assert np.allclose(out.final_llrs.quaternary, orc.quaternary_llrs, atol=1e-12)
    assert np.allclose(out.final_llrs.binary, orc.binary_llrs, atol=1e-12)
    # uniform-noise oracle agrees with explicit uniform priors
    nm = NoiseModel(0.1, 0.05)
    a = exact_posterior_oracle(g, s, noise=nm)
    b = exact_posterior_oracle(g, s, priors=init_from_rates(2, 1, 0.1, 0.05))
    assert np.allclose(a.quaternary_llrs, b.quaternary_llrs)
