
import mpmath as mp
import numpy as np
import pytest

from gdsbp.codes import rotated_toric
from gdsbp.decoder import DecoderConfig, alpha_sweep
from gdsbp.experiments import (
    CSV_HEADER,
    ExperimentRecord,
    LifetimeConfig,
    SingleShotConfig,
    SingleShotSimulator,
    ansatz_fit,
    bdd_rate,
    memory_run,
    read_records,
    records_to_csv,
    single_shot_run,
    sustain_time,
    write_config_sidecar,
)
from gdsbp.matrices import single_shot_matrix
from gdsbp.noise import NoiseModel

FAST = DecoderConfig(t_max=20, alpha=alpha_sweep(1.2, 0.8, 0.1), schedule="serial")


def mp_bdd(n, t, eps):
    mp.mp.dps = 60
    e = mp.mpf(eps)
    return 1 - mp.fsum(mp.binomial(n, j) * e**j * (1 - e) ** (n - j) for j in range(t + 1))


def test_bdd_edge_cases():
    assert bdd_rate(126, 0, 0.01) == pytest.approx(1 - 0.99**126, rel=1e-13)
    assert bdd_rate(126, 126, 0.3) == 0.0
    assert bdd_rate(10, 2, 0.0) == 0.0
    with pytest.raises(ValueError):
        bdd_rate(5, 6, 0.1)
    with pytest.raises(ValueError):
        bdd_rate(5, 1, 1.5)


@pytest.mark.parametrize("n,t,eps", [(126, 4, 0.01), (262, 12, 0.05), (126, 4, 1e-4), (30, 29, 0.2)])
def test_bdd_against_extended_precision(n, t, eps):
    ref = mp_bdd(n, t, eps)
    assert abs(bdd_rate(n, t, eps) - float(ref)) <= 1e-12 * float(ref)


def test_bdd_monotone():
    eps = np.linspace(0.001, 0.2, 40)
    for t in (0, 3, 8):
        vals = [bdd_rate(126, t, e) for e in eps]
        assert all(a < b for a, b in zip(vals, vals[1:]))
    for e in (0.01, 0.1):
        vals = [bdd_rate(126, t, e) for t in range(10)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def planted(nu, tau, coef=(0.2, 1.5, 4.0)):
    pts = []
    for d in (4, 6, 8, 10):
        for eps in np.linspace(0.025, 0.045, 6):
            x = d ** (1 / nu) * (eps - tau)
            pts.append((d, eps, coef[0] + coef[1] * x + coef[2] * x * x))
    return pts


def test_ansatz_recovers_planted():
    fit = ansatz_fit(planted(1.30, 0.030))
    assert abs(fit.nu - 1.30) <= 0.01 + 1e-12
    assert abs(fit.tau - 0.030) <= 1e-4 + 1e-12
    assert fit.mse < 1e-20


def test_ansatz_order_invariant():
    pts = planted(1.55, 0.0321)
    a = ansatz_fit(pts)
    b = ansatz_fit(pts[::-1])
    assert (a.nu, a.tau) == (b.nu, b.tau)
    assert a.mse == pytest.approx(b.mse, abs=1e-18)


def test_ansatz_constant_tie_break():
    pts = [(d, e, 0.1) for d in (4, 6) for e in (0.02, 0.03)]
    fit = ansatz_fit(pts)
    assert fit.tau == 0.02 and fit.nu == 1.0


def test_ansatz_degenerate():
    with pytest.raises(ValueError):
        ansatz_fit([(4, 0.03, 0.1), (4, 0.03, 0.2), (6, 0.03, 0.1)])


def test_lifetime_zero_noise_is_censored():
    cfg = LifetimeConfig(rotated_toric(4), NoiseModel(0.0, 0.0, 3), d0=FAST, max_cycles=5)
    res = sustain_time(cfg, 0)
    assert res.censored and not res.failed
    assert res.value == 1 + 5 * 3


def test_lifetime_immediate_failure():
    cfg = LifetimeConfig(rotated_toric(4), NoiseModel(0.6, 0.4, 1), d0=FAST, max_cycles=1000)
    values = [sustain_time(cfg, t).value for t in range(5)]
    assert 1 in values
    assert all(v % 1 == 0 and (v - 1) % 1 == 0 for v in values)


def test_memory_run_determinism_and_stopping():
    cfg = LifetimeConfig(rotated_toric(4), NoiseModel(0.05, 0.05, 2), d0=FAST, seed=11)
    rec1, agg1 = memory_run(cfg, 200, failure_target=7, workers=1)
    rec2, agg2 = memory_run(cfg, 200, failure_target=7, workers=2)
    assert rec1 == rec2
    assert rec1.failures == 7 and rec1.trials == 7
    assert rec1.metric == pytest.approx(rec1.trials / agg1.value_sum)


def test_single_shot_plain_path(toric4):
    pair = single_shot_matrix(toric4.h, np.array([[1, 1] + [0] * 14], np.uint8))
    cfg = SingleShotConfig(toric4, pair, 0.02, 0.0, FAST, seed=2)
    sim = SingleShotSimulator(cfg)
    assert sim.dec.h.m_binary == 0 and sim.dec.h.m_prime == 16
    e = np.zeros(16, np.uint8)
    e[0] = 1
    assert np.array_equal(sim.decoding_syndrome(e, np.ones(17, np.uint8)), toric4.h.syndrome(e))
    rec, _ = single_shot_run(cfg, 50, failure_target=None)
    assert rec.trials == 50 and 0 <= rec.metric <= 1


def test_single_shot_flip_only(toric4):
    pair = single_shot_matrix(toric4.h, np.array([[1, 1] + [0] * 14], np.uint8))
    cfg = SingleShotConfig(toric4, pair, 0.0, 0.05, FAST, seed=3)
    sim = SingleShotSimulator(cfg)
    for i in range(30):
        res = sim.trial(i)
        # with no data error, a converged decode cannot leave a logical residual
        assert res.failed == (res.stats.converged == 0)


def test_csv_roundtrip(tmp_path):
    rec = ExperimentRecord("toric4", 4, 3, 0.01, 0.01, 120, 100, 0.0062, 1.5, 1.19, 0, 0)
    text = records_to_csv([rec])
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    p = tmp_path / "r.csv"
    p.write_text(text)
    assert read_records(p) == [rec]
    side = write_config_sidecar(p, {"seed": 1, "code": "toric:4"})
    assert side.read_text() == "code=toric:4\nseed=1\n"
    with pytest.raises(ValueError):
        ExperimentRecord("x", 1, 1, 0.1, 0.1, 1, 2, 0.5, 0, 0)
