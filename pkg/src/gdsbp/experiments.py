"""Memory lifetime, single-shot block error rates, BDD reference curves and threshold fits."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .codes import StabilizerCode
from .decoder import DecoderConfig, GdsDecoder, LlrInit
from .matrices import GdsCheckMatrix, QuaternaryCheckMatrix, SingleShotPair, gds_repeated, gds_with_readout, r_transform_syndrome
from .noise import (
    NoiseModel,
    Outcome,
    classify_residual,
    residual,
    rng_for,
    sample_bits,
    sample_paulis,
    sample_trial,
    sample_weight_exact,
)

CSV_HEADER = (
    "code",
    "d",
    "r",
    "epsilon",
    "epsilon_b",
    "trials",
    "failures",
    "metric",
    "mean_iters",
    "mean_alpha_star",
    "censored",
    "wall_ms",
)

DEFAULT_FAILURES = 100
DEFAULT_MAX_CYCLES = 10**6


# ---------------------------------------------------------------------------
# per-trial statistics


@dataclass
class DecodeStats:
    decodes: int = 0
    iterations: int = 0
    converged: int = 0
    alpha_sum: float = 0.0

    def add(self, ok: bool, iters: int, alpha: float) -> None:
        self.decodes += 1
        self.iterations += iters
        if ok:
            self.converged += 1
            self.alpha_sum += alpha

    def merge(self, other: "DecodeStats") -> None:
        self.decodes += other.decodes
        self.iterations += other.iterations
        self.converged += other.converged
        self.alpha_sum += other.alpha_sum


class TrialResult(NamedTuple):
    """One Monte Carlo trial: ``value`` is rounds survived (memory) or 0/1 failure (block)."""

    value: int
    failed: bool
    censored: bool
    stats: DecodeStats
    archive: str | None = None


class _Decoding:
    """Decoder plus priors for one matrix, dropping binary columns when flips are absent."""

    def __init__(self, h: GdsCheckMatrix, cfg: DecoderConfig, epsilon: float, epsilon_b: float):
        self.keep_binary = epsilon_b > 0
        self.h = h if self.keep_binary else h.drop_binary()
        self.decoder = GdsDecoder(self.h, cfg)
        self.init: LlrInit = cfg.priors(self.h.n_quaternary, self.h.m_binary, epsilon, epsilon_b)
        self.alphas = cfg.alphas

    def run(self, syndrome, stats: DecodeStats):
        ok, est_q, est_b, iters, a_idx, _, _ = self.decoder.decode_raw(syndrome, self.init)
        stats.add(ok, iters, self.alphas[a_idx])
        return ok, est_q, est_b


# ---------------------------------------------------------------------------
# memory lifetime


@dataclass(frozen=True)
class LifetimeConfig:
    """Repeated-cycle memory experiment.

    D0 decodes the r-round matrix, D1 the r-round matrix with a perfect readout round.
    ``d1`` defaults to ``d0``.
    """

    code: StabilizerCode
    noise: NoiseModel
    d0: DecoderConfig = field(default_factory=DecoderConfig.toric_default)
    d1: DecoderConfig | None = None
    max_cycles: int = DEFAULT_MAX_CYCLES
    seed: int = 0
    archive: bool = False

    @property
    def rounds(self) -> int:
        return self.noise.rounds

    @property
    def d1_cfg(self) -> DecoderConfig:
        return self.d1 if self.d1 is not None else self.d0


class LifetimeSimulator:
    """Runs the sustain-time loop for individual trials of one configuration."""

    def __init__(self, cfg: LifetimeConfig):
        self.cfg = cfg
        h, r, nz = cfg.code.h, cfg.rounds, cfg.noise
        self.dec0 = _Decoding(gds_repeated(h, r), cfg.d0, nz.epsilon, nz.epsilon_b)
        self.dec1 = _Decoding(gds_with_readout(h, r), cfg.d1_cfg, nz.epsilon, nz.epsilon_b)

    def sustain_time(self, trial: int) -> TrialResult:
        """Rounds survived by trial ``trial``; cycle ``c`` draws from stream ``(seed, trial, c)``."""
        cfg = self.cfg
        code, r = cfg.code, cfg.rounds
        n, m = code.n, code.h.m
        stats = DecodeStats()
        carry = np.zeros(n, dtype=np.uint8)
        rounds = 1
        for cycle in range(cfg.max_cycles):
            sample = sample_trial(code, cfg.noise, True, rng_for(cfg.seed, trial, cycle), carry=carry)
            s = sample.observed_syndromes.reshape(-1)
            # D1: r rounds plus the perfect readout round
            _, est_q, _ = self.dec1.run(r_transform_syndrome(s, r, m), stats)
            if classify_residual(code, sample.data_errors, est_q.reshape(r + 1, n)) is Outcome.LOGICAL_FAILURE:
                archive = sample.to_text() if cfg.archive else None
                return TrialResult(rounds, True, False, stats, archive)
            # D0: the first r rounds only
            _, est_q, _ = self.dec0.run(r_transform_syndrome(s[: r * m], r, m), stats)
            carry = residual(sample.data_errors[:r], est_q.reshape(r, n))
            rounds += r
        return TrialResult(rounds, False, True, stats)


def sustain_time(cfg: LifetimeConfig, trial: int = 0) -> TrialResult:
    return LifetimeSimulator(cfg).sustain_time(trial)


# ---------------------------------------------------------------------------
# single shot


@dataclass(frozen=True)
class SingleShotConfig:
    """``perfect_h`` is the matrix decoded when ``epsilon_b = 0`` (defaults to ``code.h``)."""

    code: StabilizerCode
    pair: SingleShotPair
    epsilon: float
    epsilon_b: float
    decoder: DecoderConfig = field(default_factory=DecoderConfig.gb_default)
    seed: int = 0
    perfect_h: QuaternaryCheckMatrix | None = None


class SingleShotSimulator:
    """One noisy extraction with redundant checks, decoded after the row transform.

    With ``epsilon_b = 0`` the plain (or ``perfect_h``) check matrix is decoded on the
    perfect syndrome. A trial fails if the decoder does not converge or the data residual is a logical error.
    """

    def __init__(self, cfg: SingleShotConfig):
        self.cfg = cfg
        self.m = cfg.code.h.m
        if cfg.epsilon_b > 0:
            self.dec = _Decoding(cfg.pair.decoding, cfg.decoder, cfg.epsilon, cfg.epsilon_b)
        else:
            self.plain = cfg.perfect_h if cfg.perfect_h is not None else cfg.code.h
            if self.plain.n != cfg.code.n:
                raise ValueError("perfect-syndrome matrix has the wrong length")
            self.dec = _Decoding(self.plain.as_gds(), cfg.decoder, cfg.epsilon, 0.0)
        self._ops = cfg.pair.row_ops.astype(np.int64)

    def decoding_syndrome(self, pauli: np.ndarray, flips: np.ndarray) -> np.ndarray:
        if not self.dec.keep_binary:
            return self.plain.syndrome(pauli)
        meas = self.cfg.pair.measurement.syndrome(pauli, flips)
        return (self._ops @ meas.astype(np.int64) & 1).astype(np.uint8)

    def decode_error(self, pauli: np.ndarray, flips: np.ndarray, stats: DecodeStats) -> bool:
        """True on success."""
        ok, est_q, _ = self.dec.run(self.decoding_syndrome(pauli, flips), stats)
        return ok and classify_residual(self.cfg.code, pauli, est_q) is Outcome.SUCCESS

    def trial(self, index: int) -> TrialResult:
        cfg = self.cfg
        rng = rng_for(cfg.seed, index)
        pauli = sample_paulis(rng, cfg.code.n, cfg.epsilon)
        flips = sample_bits(rng, cfg.pair.measurement.m_binary, cfg.epsilon_b)
        stats = DecodeStats()
        good = self.decode_error(pauli, flips, stats)
        return TrialResult(int(not good), not good, False, stats)

    def weight_trial(self, index: int, weight: int, include_flips: bool = True) -> bool:
        """Success of a uniformly drawn error of exactly ``weight`` (data plus flips)."""
        rng = rng_for(self.cfg.seed, index)
        m_b = self.cfg.pair.measurement.m_binary if include_flips else 0
        pauli, flips = sample_weight_exact(self.cfg.code.n, m_b, weight, rng)
        if not include_flips:
            flips = np.zeros(self.cfg.pair.measurement.m_binary, dtype=np.uint8)
        return self.decode_error(pauli, flips, DecodeStats())


# ---------------------------------------------------------------------------
# deterministic campaign driver


class Aggregate(NamedTuple):
    trials: int
    failures: int
    censored: int
    value_sum: int
    stats: DecodeStats
    archives: list


def _run_batch(factory, args, start: int, stop: int) -> list[TrialResult]:
    sim = factory(*args)
    return [sim(i) for i in range(start, stop)]


def _lifetime_factory(cfg: LifetimeConfig):
    return LifetimeSimulator(cfg).sustain_time


def _single_shot_factory(cfg: SingleShotConfig):
    return SingleShotSimulator(cfg).trial


def run_until(
    factory: Callable,
    args: tuple,
    max_trials: int,
    failure_target: int | None = DEFAULT_FAILURES,
    workers: int = 1,
    batch: int = 16,
) -> Aggregate:
    """Run trials ``0, 1, ...`` until ``failure_target`` failures or ``max_trials``.

    Results are truncated at the exact trial that reaches the target, so the
    aggregate does not depend on ``workers`` or ``batch``.
    """
    if max_trials < 1:
        raise ValueError("need at least one trial")
    results: list[TrialResult] = []

    def done() -> bool:
        return failure_target is not None and sum(t.failed for t in results) >= failure_target

    starts = list(range(0, max_trials, batch))
    if workers <= 1:
        sim = factory(*args)
        for i in range(max_trials):
            results.append(sim(i))
            if done():
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pending = {}
            k = 0
            while k < len(starts) or pending:
                while k < len(starts) and len(pending) < 2 * workers and not done():
                    s = starts[k]
                    pending[s] = pool.submit(_run_batch, factory, args, s, min(s + batch, max_trials))
                    k += 1
                if not pending:
                    break
                first = min(pending)
                results.extend(pending.pop(first).result())
                if done():
                    for f in pending.values():
                        f.cancel()
                    break
    # truncate at the trial that reached the target
    if failure_target is not None:
        count = 0
        for idx, t in enumerate(results):
            count += t.failed
            if count >= failure_target:
                results = results[: idx + 1]
                break
    stats = DecodeStats()
    for t in results:
        stats.merge(t.stats)
    return Aggregate(
        trials=len(results),
        failures=sum(t.failed for t in results),
        censored=sum(t.censored for t in results),
        value_sum=sum(t.value for t in results),
        stats=stats,
        archives=[t.archive for t in results if t.archive],
    )


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class ExperimentRecord:
    code: str
    d: int
    r: int
    epsilon: float
    epsilon_b: float
    trials: int
    failures: int
    metric: float
    mean_iters: float
    mean_alpha_star: float
    censored: int = 0
    wall_ms: int = 0

    def __post_init__(self):
        if self.failures > self.trials:
            raise ValueError("more failures than trials")
        if not 0.0 <= self.metric <= 1.0:
            raise ValueError(f"rate {self.metric} outside [0, 1]")

    def row(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append(format(v, ".10g") if isinstance(v, float) else str(v))
        return out


def _record(code: StabilizerCode, r: int, eps: float, eps_b: float, agg: Aggregate, metric: float, wall_ms: int):
    st = agg.stats
    return ExperimentRecord(
        code=code.name,
        d=code.d if code.d is not None else 0,
        r=r,
        epsilon=float(eps),
        epsilon_b=float(eps_b),
        trials=agg.trials,
        failures=agg.failures,
        metric=float(metric),
        mean_iters=st.iterations / st.decodes if st.decodes else 0.0,
        mean_alpha_star=st.alpha_sum / st.converged if st.converged else 0.0,
        censored=agg.censored,
        wall_ms=wall_ms,
    )


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.row())
    return buf.getvalue()


def read_records(path) -> list[ExperimentRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header")
        out = []
        for row in reader:
            out.append(
                ExperimentRecord(
                    code=row["code"],
                    d=int(row["d"]),
                    r=int(row["r"]),
                    epsilon=float(row["epsilon"]),
                    epsilon_b=float(row["epsilon_b"]),
                    trials=int(row["trials"]),
                    failures=int(row["failures"]),
                    metric=float(row["metric"]),
                    mean_iters=float(row["mean_iters"]),
                    mean_alpha_star=float(row["mean_alpha_star"]),
                    censored=int(row["censored"]),
                    wall_ms=int(row["wall_ms"]),
                )
            )
        return out


def write_config_sidecar(path, values: dict) -> Path:
    """Write ``key=value`` lines next to a results file; returns the sidecar path."""
    path = Path(path)
    side = path.with_name(path.name + ".config")
    side.write_text("".join(f"{k}={values[k]}\n" for k in sorted(values)))
    return side


# ---------------------------------------------------------------------------
# campaigns


def memory_run(
    cfg: LifetimeConfig,
    max_trials: int,
    failure_target: int | None = DEFAULT_FAILURES,
    workers: int = 1,
    record_time: bool = False,
) -> tuple[ExperimentRecord, Aggregate]:
    """Memory logical error rate ``1 / mean lifetime``; censored trials count their lower bound."""
    t0 = time.perf_counter()
    agg = run_until(_lifetime_factory, (cfg,), max_trials, failure_target, workers)
    lifetime = agg.value_sum / agg.trials
    wall = int(round(1000 * (time.perf_counter() - t0))) if record_time else 0
    rec = _record(cfg.code, cfg.rounds, cfg.noise.epsilon, cfg.noise.epsilon_b, agg, 1.0 / lifetime, wall)
    return rec, agg


def single_shot_run(
    cfg: SingleShotConfig,
    max_trials: int,
    failure_target: int | None = DEFAULT_FAILURES,
    workers: int = 1,
    record_time: bool = False,
) -> tuple[ExperimentRecord, Aggregate]:
    """Block logical error rate of single-shot decoding."""
    t0 = time.perf_counter()
    agg = run_until(_single_shot_factory, (cfg,), max_trials, failure_target, workers)
    wall = int(round(1000 * (time.perf_counter() - t0))) if record_time else 0
    rec = _record(cfg.code, 1, cfg.epsilon, cfg.epsilon_b, agg, agg.failures / agg.trials, wall)
    return rec, agg


# ---------------------------------------------------------------------------
# analysis


def _log_binom_term(n: int, j: int, eps: float) -> float:
    logc = math.log(math.comb(n, j))
    a = j * math.log(eps) if j else 0.0
    b = (n - j) * math.log1p(-eps) if n - j else 0.0
    return logc + a + b


def bdd_rate(N: int, t: int, eps: float) -> float:
    """Probability of more than ``t`` errors among ``N`` independent sites.

    Summed directly over the upper tail in log space, so small rates keep full
    relative precision.
    """
    if N < 0 or not 0 <= t <= N:
        raise ValueError("need 0 <= t <= N")
    if not 0.0 <= eps <= 1.0:
        raise ValueError("rate must lie in [0, 1]")
    if t == N or eps == 0.0:
        return 0.0
    if eps == 1.0:
        return 1.0
    logs = np.array([_log_binom_term(N, j, eps) for j in range(t + 1, N + 1)])
    top = logs.max()
    return float(min(1.0, math.exp(top) * math.fsum(np.exp(logs - top))))


class AnsatzFit(NamedTuple):
    nu: float
    tau: float
    coefficients: tuple  # (c0, c1, c2) of c0 + c1 x + c2 x^2
    mse: float


NU_GRID = np.round(np.arange(101) * 0.01 + 1.0, 10)
TAU_GRID = np.round(np.arange(201) * 1e-4 + 0.02, 10)


def ansatz_fit(points, nu_grid=NU_GRID, tau_grid=TAU_GRID, tie_tol: float = 1e-9) -> AnsatzFit:
    """Grid search over ``(nu, tau)`` fitting rates to a quadratic in ``d^(1/nu) (eps - tau)``.

    Near-ties (within ``tie_tol * mean(rate^2)``) go to the smallest tau, then the
    smallest nu.
    """
    pts = np.asarray([(float(d), float(e), float(y)) for d, e, y in points], dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise ValueError("need at least three points")
    if len({(d, e) for d, e, _ in pts}) < 3:
        raise ValueError("degenerate fit: fewer than three distinct (d, eps) points")
    d, eps, y = pts.T
    nu_grid = np.asarray(nu_grid, dtype=np.float64)
    tau_grid = np.asarray(tau_grid, dtype=np.float64)
    mse = np.empty((nu_grid.size, tau_grid.size))
    coef = np.empty((nu_grid.size, tau_grid.size, 3))
    for a, nu in enumerate(nu_grid):
        x = d[None, :] ** (1.0 / nu) * (eps[None, :] - tau_grid[:, None])  # (T, P)
        design = np.stack([np.ones_like(x), x, x * x], axis=-1)  # (T, P, 3)
        c = np.einsum("tkp,p->tk", np.linalg.pinv(design), y)
        res = np.einsum("tpk,tk->tp", design, c) - y[None, :]
        mse[a] = np.mean(res * res, axis=1)
        coef[a] = c
    best = mse.min()
    tol = tie_tol * float(np.mean(y * y))
    cand = np.argwhere(mse <= best + tol)
    # smallest tau first, then smallest nu
    a, b = min(cand.tolist(), key=lambda ab: (ab[1], ab[0]))
    return AnsatzFit(float(nu_grid[a]), float(tau_grid[b]), tuple(float(v) for v in coef[a, b]), float(mse[a, b]))
