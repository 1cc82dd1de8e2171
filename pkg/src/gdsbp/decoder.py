"""GDS-MBP and adaptive GDS-AMBP decoding over mixed quaternary/binary Tanner graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels as K
from .matrices import GdsCheckMatrix
from .pauli import MixedVector, PauliSymbol, PauliVector

DEFAULT_CLAMP = 30.0

PARALLEL = "parallel"
SERIAL = "serial"


def lambda_w(w, g) -> float:
    """Commute/anticommute LLR of a Pauli LLR triple ``g = (gX, gY, gZ)`` against ``w``."""
    w = PauliSymbol(int(w)) if not isinstance(w, str) else PauliSymbol.from_char(w)
    if w == PauliSymbol.I:
        raise ValueError("lambda_w is undefined for the identity")
    gx, gy, gz = (float(v) for v in g)
    return K.lambda_code(int(w), gx, gy, gz)


def boxplus(values: Sequence[float], clamp: float = DEFAULT_CLAMP) -> float:
    """``2 atanh(prod tanh(a/2))`` with inputs clamped to ``+-clamp``."""
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise ValueError("boxplus needs at least one value")
    return K.boxplus_array(arr, float(clamp))


@dataclass(frozen=True)
class LlrInit:
    """Prior LLRs: ``quaternary[j] = (X, Y, Z)`` and ``binary[j]``."""

    quaternary: np.ndarray
    binary: np.ndarray

    def __post_init__(self):
        q = np.array(self.quaternary, dtype=np.float64).reshape(-1, 3)
        b = np.array(self.binary, dtype=np.float64).reshape(-1)
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(b))):
            raise ValueError("initial LLRs must be finite")
        object.__setattr__(self, "quaternary", q)
        object.__setattr__(self, "binary", b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.quaternary.shape[0], self.binary.size


def _rate_llr(num: float, den: float, clamp: float) -> float:
    if den == 0.0:
        return clamp
    return min(math.log(num / den), clamp)


def init_from_rates(
    n_quaternary: int,
    m_binary: int,
    epsilon: float,
    epsilon_b: float = 0.0,
    clamp: float = DEFAULT_CLAMP,
) -> LlrInit:
    """Uniform depolarizing / bit-flip priors; zero rates map to the clamp value."""
    if not 0.0 <= epsilon < 0.75:
        raise ValueError(f"epsilon must lie in [0, 3/4), got {epsilon}")
    if not 0.0 <= epsilon_b < 0.5:
        raise ValueError(f"epsilon_b must lie in [0, 1/2), got {epsilon_b}")
    lq = _rate_llr(1.0 - epsilon, epsilon / 3.0, clamp)
    lb = _rate_llr(1.0 - epsilon_b, epsilon_b, clamp)
    return LlrInit(np.full((n_quaternary, 3), lq), np.full(m_binary, lb))


def alpha_sweep(start: float, end: float, step: float = 0.01) -> tuple[float, ...]:
    """Descending grid ``start, start - step, ..., end`` (rounded to the step's decimals)."""
    if step <= 0 or start < end or end <= 0:
        raise ValueError("need start >= end > 0 and step > 0")
    n = int(round((start - end) / step))
    digits = max(0, -int(math.floor(math.log10(step))) + 2)
    return tuple(round(start - k * step, digits) for k in range(n + 1))


@dataclass(frozen=True)
class DecoderConfig:
    """Decoder settings. A tuple ``alpha`` selects the adaptive sweep.

    ``fixed_init`` replaces the noise rate by a fixed value when priors are built
    from rates. ``halt_on_converge=False`` keeps iterating to ``t_max`` (used for
    exactness tests on trees).
    """

    t_max: int = 50
    alpha: float | tuple = 1.0
    schedule: str = PARALLEL
    llr_clamp: float = DEFAULT_CLAMP
    fixed_init: float | None = None
    halt_on_converge: bool = True

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.schedule not in (PARALLEL, SERIAL):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.llr_clamp <= 0:
            raise ValueError("llr_clamp must be positive")
        if isinstance(self.alpha, (list, tuple, np.ndarray)):
            seq = tuple(float(a) for a in self.alpha)
            if not seq:
                raise ValueError("empty alpha sequence")
            if any(a <= 0 for a in seq) or any(b >= a for a, b in zip(seq, seq[1:])):
                raise ValueError("alpha sequence must be strictly decreasing and positive")
            object.__setattr__(self, "alpha", seq)
        elif float(self.alpha) <= 0:
            raise ValueError("alpha must be positive")
        else:
            object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def adaptive(self) -> bool:
        return isinstance(self.alpha, tuple)

    @property
    def alphas(self) -> tuple[float, ...]:
        return self.alpha if self.adaptive else (self.alpha,)

    @classmethod
    def toric_default(cls) -> "DecoderConfig":
        return cls(t_max=150, alpha=alpha_sweep(1.20, 0.30), schedule=SERIAL)

    @classmethod
    def gb_default(cls) -> "DecoderConfig":
        return cls(t_max=50, alpha=alpha_sweep(1.4, 0.4), schedule=PARALLEL)

    def priors(self, n: int, m: int, epsilon: float, epsilon_b: float) -> LlrInit:
        eps = epsilon if self.fixed_init is None else self.fixed_init
        eps_b = epsilon_b if self.fixed_init is None or epsilon_b == 0 else self.fixed_init
        return init_from_rates(n, m, eps, eps_b, self.llr_clamp)


class FinalLlrs(NamedTuple):
    quaternary: np.ndarray
    binary: np.ndarray


@dataclass(frozen=True)
class DecodeOutcome:
    converged: bool
    estimate: MixedVector
    iterations_used: int
    alpha_star: float | None = None
    final_llrs: FinalLlrs | None = field(default=None, compare=False)


class GdsDecoder:
    """A decoder bound to one matrix; caches the graph arrays for repeated use."""

    def __init__(self, h: GdsCheckMatrix, cfg: DecoderConfig):
        self.h = h
        self.cfg = cfg
        chk_ptr, var, sym = h.edges
        self._chk_ptr = chk_ptr
        self._var = var
        self._sym = sym
        order = np.argsort(var, kind="stable")
        counts = np.bincount(var, minlength=h.n_vars)
        self._var_ptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self._var_edges = order.astype(np.int64)
        self._alphas = np.array(cfg.alphas, dtype=np.float64)

    def decode_raw(self, syndrome, init: LlrInit):
        """Run the configured decoder. Returns ``(converged, est_q, est_b, iters, alpha_index, post_q, post_b)``."""
        h = self.h
        s = np.ascontiguousarray(np.asarray(syndrome, dtype=np.int64).reshape(-1) & 1)
        if s.size != h.m_prime:
            raise ValueError(f"syndrome length {s.size} != {h.m_prime}")
        if init.shape != (h.n_quaternary, h.m_binary):
            raise ValueError(f"prior shape {init.shape} != {(h.n_quaternary, h.m_binary)}")
        n, m = h.n_quaternary, h.m_binary
        post_q = init.quaternary.copy()
        post_b = init.binary.copy()
        est_q = np.zeros(n, dtype=np.uint8)
        est_b = np.zeros(m, dtype=np.uint8)
        lim = float(self.cfg.llr_clamp)
        lam_q = np.clip(init.quaternary, -lim, lim)
        lam_b = np.clip(init.binary, -lim, lim)
        ok, iters, a_idx = K.ambp_run(
            self._chk_ptr, self._var, self._sym, self._var_ptr, self._var_edges, n,
            s, lam_q, lam_b, self._alphas, int(self.cfg.t_max),
            self.cfg.schedule == SERIAL, bool(self.cfg.halt_on_converge), lim,
            post_q, post_b, est_q, est_b,
        )
        return bool(ok), est_q, est_b, int(iters), int(a_idx), post_q, post_b

    def decode(self, syndrome, init: LlrInit) -> DecodeOutcome:
        ok, est_q, est_b, iters, a_idx, post_q, post_b = self.decode_raw(syndrome, init)
        estimate = MixedVector(PauliVector(est_q), est_b)
        if ok:
            got = self.h.syndrome(est_q, est_b)
            if not np.array_equal(got, np.asarray(syndrome, dtype=np.uint8).reshape(-1)):
                raise AssertionError("converged estimate does not reproduce the syndrome")
        return DecodeOutcome(
            converged=ok,
            estimate=estimate,
            iterations_used=iters,
            alpha_star=self.cfg.alphas[a_idx] if ok else None,
            final_llrs=FinalLlrs(post_q, post_b),
        )


def decode_mbp(h: GdsCheckMatrix, s, init: LlrInit, cfg: DecoderConfig) -> DecodeOutcome:
    """Single-alpha run; a sequence-valued ``cfg.alpha`` uses its first entry."""
    if cfg.adaptive:
        cfg = DecoderConfig(cfg.t_max, cfg.alpha[0], cfg.schedule, cfg.llr_clamp, cfg.fixed_init, cfg.halt_on_converge)
    out = GdsDecoder(h, cfg).decode(s, init)
    if out.converged:
        return out
    return DecodeOutcome(False, out.estimate, out.iterations_used, None, out.final_llrs)


def decode_ambp(h: GdsCheckMatrix, s, init: LlrInit, cfg: DecoderConfig) -> DecodeOutcome:
    """Sweep ``cfg.alpha`` in order; the first converging value is reported as ``alpha_star``."""
    return GdsDecoder(h, cfg).decode(s, init)
