"""Phenomenological noise sampling, residual classification and a brute-force posterior."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .codes import StabilizerCode
from .matrices import GdsCheckMatrix, r_transform_syndrome
from .pauli import MixedVector, PauliVector, codes_from_string, codes_to_string, pack

ORACLE_LIMIT = 1 << 24


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Counter-based stream for ``(seed, *key)``; independent of execution order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))))


@dataclass(frozen=True)
class NoiseModel:
    epsilon: float
    epsilon_b: float = 0.0
    rounds: int = 1

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 0.75:
            raise ValueError(f"epsilon must lie in [0, 3/4), got {self.epsilon}")
        if not 0.0 <= self.epsilon_b < 0.5:
            raise ValueError(f"epsilon_b must lie in [0, 1/2), got {self.epsilon_b}")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")


@dataclass(frozen=True, eq=False)
class TrialSample:
    """Errors of one repeated-extraction block.

    ``data_errors[l]`` is ``E^(l+1)`` as a code array, ``syndrome_flips[l]`` is ``e^(l+1)``
    and ``observed_syndromes[l] = F^(l+1) * H + e^(l+1)`` (no flip in a readout round).
    """

    data_errors: np.ndarray
    syndrome_flips: np.ndarray
    observed_syndromes: np.ndarray

    @property
    def rounds(self) -> int:
        return self.syndrome_flips.shape[0]

    @property
    def readout(self) -> bool:
        return self.data_errors.shape[0] == self.rounds + 1

    @property
    def cumulative(self) -> np.ndarray:
        """``F^(l) = E^(1) ... E^(l)`` for every round."""
        return np.bitwise_xor.accumulate(self.data_errors, axis=0)

    def to_text(self) -> str:
        lines = []
        for k, e in enumerate(self.data_errors):
            bits = "".join(map(str, self.syndrome_flips[k])) if k < self.rounds else "-"
            lines.append(f"{codes_to_string(e)} {bits}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, h) -> "TrialSample":
        data, flips = [], []
        for ln in text.splitlines():
            if not ln.strip():
                continue
            parts = ln.split()
            b = parts[1] if len(parts) > 1 else "-"
            data.append(codes_from_string(parts[0]))
            if b != "-":
                flips.append([int(c) for c in b])
        data = np.array(data, dtype=np.uint8)
        flips = np.array(flips, dtype=np.uint8).reshape(len(flips), h.m)
        return _with_syndromes(h, data, flips)


def _with_syndromes(h, data: np.ndarray, flips: np.ndarray) -> TrialSample:
    cum = np.bitwise_xor.accumulate(data, axis=0)
    synd = h.syndrome(cum)
    synd[: flips.shape[0]] ^= flips
    return TrialSample(data, flips, synd)


def sample_paulis(rng: np.random.Generator, shape, epsilon: float) -> np.ndarray:
    """I with probability ``1 - epsilon``, else uniform over X, Y, Z."""
    hit = rng.random(shape) < epsilon
    sym = rng.integers(1, 4, size=shape, dtype=np.uint8)
    return np.where(hit, sym, 0).astype(np.uint8)


def sample_bits(rng: np.random.Generator, shape, p: float) -> np.ndarray:
    return (rng.random(shape) < p).astype(np.uint8)


def sample_trial(
    code: StabilizerCode,
    noise: NoiseModel,
    readout: bool,
    rng: np.random.Generator,
    carry=None,
) -> TrialSample:
    """Sample ``r`` (or ``r + 1`` with readout) data rounds and ``r`` flip rounds.

    ``carry`` (a residual from earlier rounds) is multiplied into ``E^(1)``.
    Draw order: all data errors, then all flips.
    """
    r = noise.rounds
    n, m = code.n, code.h.m
    data = sample_paulis(rng, (r + int(readout), n), noise.epsilon)
    flips = sample_bits(rng, (r, m), noise.epsilon_b)
    if carry is not None:
        data[0] ^= np.asarray(carry.codes if isinstance(carry, PauliVector) else carry, dtype=np.uint8)
    return _with_syndromes(code.h, data, flips)


def syndromes_for_decoding(sample: TrialSample, m: int) -> np.ndarray:
    """Blockwise differences of the observed syndromes (the transformed syndrome)."""
    s = np.asarray(sample.observed_syndromes, dtype=np.uint8)
    if s.ndim != 2 or s.shape[1] != m:
        raise ValueError(f"observed syndromes are not blocks of size {m}")
    return r_transform_syndrome(s.reshape(-1), sample.rounds, m)


def sample_weight_exact(
    n_quaternary: int,
    m_binary: int,
    weight: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform draw among all mixed vectors of total weight ``weight``.

    A vector with q non-identity Pauli entries has ``3^q`` variants per support, so
    the split ``q`` is drawn with weight ``C(N, q) C(M, w - q) 3^q`` first.
    """
    if not 0 <= weight <= n_quaternary + m_binary:
        raise ValueError("weight out of range")
    qs = np.arange(max(0, weight - m_binary), min(weight, n_quaternary) + 1)
    logw = np.array(
        [
            math.lgamma(n_quaternary + 1) - math.lgamma(q + 1) - math.lgamma(n_quaternary - q + 1)
            + math.lgamma(m_binary + 1) - math.lgamma(weight - q + 1) - math.lgamma(m_binary - weight + q + 1)
            + q * math.log(3)
            for q in qs
        ]
    )
    p = np.exp(logw - logw.max())
    q = int(qs[rng.choice(qs.size, p=p / p.sum())])
    pauli = np.zeros(n_quaternary, dtype=np.uint8)
    bits = np.zeros(m_binary, dtype=np.uint8)
    if q:
        pauli[rng.choice(n_quaternary, size=q, replace=False)] = rng.integers(1, 4, size=q, dtype=np.uint8)
    if weight - q:
        bits[rng.choice(m_binary, size=weight - q, replace=False)] = 1
    return pauli, bits


class Outcome(Enum):
    SUCCESS = "success"
    LOGICAL_FAILURE = "logical_failure"


def residual(true_errors, estimate) -> np.ndarray:
    """Product over rounds of truth times estimate, as one code array."""
    t = np.asarray(true_errors, dtype=np.uint8)
    e = np.asarray(estimate, dtype=np.uint8)
    if t.size != e.size:
        raise ValueError(f"round counts differ: {t.shape} vs {e.shape}")
    n = t.shape[-1]
    return np.bitwise_xor.reduce((t ^ e.reshape(t.shape)).reshape(-1, n), axis=0)


def classify_residual(code: StabilizerCode, true_errors, estimate) -> Outcome:
    """SUCCESS iff the accumulated residual lies in the stabilizer row space."""
    res = residual(
        true_errors.codes if isinstance(true_errors, PauliVector) else true_errors,
        estimate.codes if isinstance(estimate, PauliVector) else estimate,
    )
    if res.size != code.n:
        raise ValueError("residual length does not match the code")
    if code.stabilizer_row_space.reduce(pack(res)) == 0:
        return Outcome.SUCCESS
    return Outcome.LOGICAL_FAILURE


# ---------------------------------------------------------------------------
# exhaustive oracle


class OracleResult(NamedTuple):
    quaternary_llrs: np.ndarray  # (N, 3): ln Pr(I|s)/Pr(W|s), W in X, Y, Z order
    binary_llrs: np.ndarray  # (M,): ln Pr(0|s)/Pr(1|s)
    best: MixedVector
    log_evidence: float


def _prior_logs(h: GdsCheckMatrix, noise: NoiseModel | None, priors) -> tuple[np.ndarray, np.ndarray]:
    """Per-variable log-probabilities indexed by Pauli code (I, X, Z, Y) and bit."""
    n, m = h.n_quaternary, h.m_binary
    if priors is not None:
        lam_q = np.asarray(priors.quaternary, dtype=np.float64).reshape(n, 3)
        lam_b = np.asarray(priors.binary, dtype=np.float64).reshape(m)
        # unnormalized: log p_I = 0, log p_W = -Lambda^W
        lq = np.column_stack([np.zeros(n), -lam_q[:, 0], -lam_q[:, 2], -lam_q[:, 1]])
        lb = np.column_stack([np.zeros(m), -lam_b])
    else:
        if noise is None:
            raise ValueError("need a noise model or explicit priors")
        with np.errstate(divide="ignore"):
            pw = math.log(noise.epsilon / 3) if noise.epsilon else -np.inf
            pb = math.log(noise.epsilon_b) if noise.epsilon_b else -np.inf
            lq = np.tile([math.log1p(-noise.epsilon), pw, pw, pw], (n, 1))
            lb = np.tile([math.log1p(-noise.epsilon_b), pb], (m, 1))
    lq = lq - np.logaddexp.reduce(lq, axis=1, keepdims=True)
    lb = lb - np.logaddexp.reduce(lb, axis=1, keepdims=True) if m else lb.reshape(0, 2)
    return lq, lb


def _packed_syndromes(h: GdsCheckMatrix, cand_q: np.ndarray, cand_b: np.ndarray):
    weights = 1 << np.arange(h.m_prime, dtype=np.int64)
    sq = h.syndrome(cand_q).astype(np.int64) @ weights if h.n_quaternary else np.zeros(cand_q.shape[0], np.int64)
    if h.m_binary:
        sb = (cand_b.astype(np.int64) @ h.binary.T.astype(np.int64) & 1) @ weights
    else:
        sb = np.zeros(cand_b.shape[0], np.int64)
    return sq, sb


def exact_posterior_oracle(
    h: GdsCheckMatrix,
    s,
    noise: NoiseModel | None = None,
    priors=None,
) -> OracleResult:
    """Exact conditional marginals by enumerating all ``4^N 2^M`` candidates.

    Priors come from ``noise`` (uniform product prior) or ``priors`` (an LlrInit whose
    LLRs define per-variable distributions). Raises ValueError above ``2^24`` candidates.
    """
    n, m = h.n_quaternary, h.m_binary
    if 4**n * 2**m > ORACLE_LIMIT:
        raise ValueError(f"instance too large for exhaustive enumeration: 4^{n} * 2^{m}")
    if h.m_prime > 62:
        raise ValueError("too many checks for packed syndromes")
    s = np.asarray(s, dtype=np.int64).reshape(-1)
    if s.size != h.m_prime:
        raise ValueError(f"syndrome length {s.size} != {h.m_prime}")
    target = int(s @ (1 << np.arange(h.m_prime, dtype=np.int64)))
    lq, lb = _prior_logs(h, noise, priors)

    cand_q = np.array(list(itertools.product(range(4), repeat=n)), dtype=np.uint8).reshape(4**n, n)
    cand_b = np.array(list(itertools.product(range(2), repeat=m)), dtype=np.uint8).reshape(2**m, m)
    sq, sb = _packed_syndromes(h, cand_q, cand_b)
    logp_q = lq[np.arange(n), cand_q].sum(axis=1) if n else np.zeros(1)
    logp_b = lb[np.arange(m), cand_b].sum(axis=1) if m else np.zeros(1)

    # joint table over (quaternary candidate, binary candidate)
    match = (sq[:, None] ^ sb[None, :]) == target
    with np.errstate(invalid="ignore"):
        joint = np.where(match, logp_q[:, None] + logp_b[None, :], -np.inf)
    evidence = np.logaddexp.reduce(joint, axis=None)
    if evidence == -np.inf:
        raise ValueError("syndrome has zero probability under the prior")
    post = joint - evidence
    mq = np.logaddexp.reduce(post, axis=1)  # marginal over binary part
    mb = np.logaddexp.reduce(post, axis=0)

    llr_q = np.zeros((n, 3))
    for j in range(n):
        lp = [np.logaddexp.reduce(mq[cand_q[:, j] == c]) for c in range(4)]
        for w, c in enumerate((1, 3, 2)):
            llr_q[j, w] = lp[0] - lp[c]
    llr_b = np.zeros(m)
    for j in range(m):
        llr_b[j] = np.logaddexp.reduce(mb[cand_b[:, j] == 0]) - np.logaddexp.reduce(mb[cand_b[:, j] == 1])

    a, b = np.unravel_index(int(np.argmax(joint)), joint.shape)
    best = MixedVector(PauliVector(cand_q[a]), cand_b[b])
    return OracleResult(llr_q, llr_b, best, float(evidence))
