"""Concrete stabilizer codes and quasi-cyclic redundancy matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from . import gf2
from .matrices import (
    FormatError,
    QuaternaryCheckMatrix,
    TannerGraph,
    dumps_chk,
    girth,
    loads_chk,
)
from .pauli import PauliSymbol, SymplecticMatrix


@dataclass(frozen=True)
class StabilizerCode:
    """An ``[[n, k, d]]`` code given by a (possibly redundant) check matrix.

    ``d`` is declared metadata and never verified.
    """

    h: QuaternaryCheckMatrix
    k: int
    d: int | None = None
    name: str = "code"

    def __post_init__(self):
        r = self.stabilizer_row_space.rank
        if r != self.n - self.k:
            raise ValueError(f"{self.name}: check-matrix rank {r} does not match n-k = {self.n - self.k}")

    @property
    def n(self) -> int:
        return self.h.n

    @cached_property
    def stabilizer_row_space(self) -> SymplecticMatrix:
        return self.h.symplectic()

    def __hash__(self) -> int:
        return hash((self.h, self.k, self.d, self.name))


def rotated_toric(L: int) -> StabilizerCode:
    """The ``[[L^2, 2, L]]`` rotated toric code on an L x L torus.

    Qubit ``(row, col)`` has index ``row * L + col``. Plaquette ``(a, b)`` acts on
    qubits ``(a, b), (a, b+1), (a+1, b), (a+1, b+1)`` (indices mod L) and is X-type
    when ``a + b`` is even, Z-type otherwise. Rows follow plaquette row-major order.
    """
    if not isinstance(L, (int, np.integer)) or L < 2 or L % 2:
        raise ValueError(f"L must be an even integer >= 2, got {L!r}")
    codes = np.zeros((L * L, L * L), dtype=np.uint8)
    for a in range(L):
        for b in range(L):
            sym = PauliSymbol.X if (a + b) % 2 == 0 else PauliSymbol.Z
            for da in (0, 1):
                for db in (0, 1):
                    codes[a * L + b, ((a + da) % L) * L + (b + db) % L] = sym
    h = QuaternaryCheckMatrix.from_codes(codes)
    return StabilizerCode(h, k=2, d=L, name=f"toric{L}")


# ---------------------------------------------------------------------------
# quasi-cyclic matrices


@dataclass(frozen=True)
class QuasiCyclicSpec:
    gamma: int
    rho: int
    c: int
    base: tuple = field(default=())

    def __post_init__(self):
        base = tuple(tuple(int(v) for v in row) for row in self.base)
        object.__setattr__(self, "base", base)
        if self.c < 1:
            raise ValueError("circulant size must be positive")
        if len(base) != self.gamma or any(len(row) != self.rho for row in base):
            raise ValueError(f"base matrix must be {self.gamma}x{self.rho}")
        for row in base:
            for v in row:
                if not -1 <= v <= self.c - 1:
                    raise ValueError(f"base entry {v} outside [-1, {self.c - 1}]")

    @classmethod
    def from_base(cls, base, c: int) -> "QuasiCyclicSpec":
        base = np.atleast_2d(np.asarray(base, dtype=int))
        return cls(base.shape[0], base.shape[1], c, tuple(map(tuple, base)))

    def to_text(self) -> str:
        rows = "\n".join(" ".join(str(v) for v in row) for row in self.base)
        return f"QC {self.gamma} {self.rho} {self.c}\n{rows}\n"

    @classmethod
    def from_text(cls, text: str) -> "QuasiCyclicSpec":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines:
            raise FormatError("empty QC block")
        head = lines[0].split()
        if len(head) != 4 or head[0] != "QC":
            raise FormatError(f"expected 'QC gamma rho c', got {lines[0]!r}")
        try:
            gamma, rho, c = (int(v) for v in head[1:])
            base = [[int(v) for v in ln.split()] for ln in lines[1:]]
            return cls(gamma, rho, c, base)
        except ValueError as exc:
            raise FormatError(str(exc)) from exc


def circulant_permutation(c: int, p: int) -> np.ndarray:
    """``I_c`` with every row right-shifted by ``p``; ``p = -1`` gives the zero block."""
    if p == -1:
        return np.zeros((c, c), dtype=np.uint8)
    return np.roll(np.eye(c, dtype=np.uint8), p, axis=1)


def quasi_cyclic(spec: QuasiCyclicSpec) -> np.ndarray:
    return np.block([[circulant_permutation(spec.c, p) for p in row] for row in spec.base]).astype(np.uint8)


def qc_girth(spec: QuasiCyclicSpec, with_identity: bool = True) -> float:
    """Girth of the Tanner graph of ``[A | I]`` (or ``A``)."""
    a = quasi_cyclic(spec)
    if with_identity:
        a = np.hstack([a, np.eye(a.shape[0], dtype=np.uint8)])
    # block-cyclic shifts are automorphisms, so one root check per block row suffices
    roots = [blk * spec.c for blk in range(spec.gamma)]
    return girth(TannerGraph.from_binary(a), check_roots=roots)


def random_qc_search(
    gamma: int,
    rho: int,
    c: int,
    girth_target: int,
    attempts: int,
    seed: int = 0,
    zero_blocks: int = 0,
) -> QuasiCyclicSpec | None:
    """Random search for a base matrix whose ``[A | I]`` graph has girth >= target.

    Attempt ``t`` draws from its own stream keyed ``(seed, t)``. ``zero_blocks`` places
    that many ``-1`` entries per attempt (irregular blocks). Returns None when the
    budget is exhausted.
    """
    if attempts < 1:
        raise ValueError("need at least one attempt")
    if zero_blocks > gamma * rho:
        raise ValueError("more zero blocks than base entries")
    for t in range(attempts):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(t,))))
        base = rng.integers(0, c, size=(gamma, rho))
        if zero_blocks:
            base.flat[rng.choice(gamma * rho, size=zero_blocks, replace=False)] = -1
        spec = QuasiCyclicSpec.from_base(base, c)
        if qc_girth(spec) >= girth_target:
            return spec
    return None


#: Base matrix of the girth-8 redundancy block used with the GB code.
GB_CASE1_BASE = ((5, 3, 13, 10, 0, 16), (9, 1, 10, 10, 6, 0))
GB_CASE1_SPEC = QuasiCyclicSpec(2, 6, 17, GB_CASE1_BASE)


# ---------------------------------------------------------------------------
# generalized bicycle fixture


def _circulant_poly(ell: int, exponents: Sequence[int]) -> np.ndarray:
    out = np.zeros((ell, ell), dtype=np.uint8)
    for e in exponents:
        out ^= np.roll(np.eye(ell, dtype=np.uint8), e, axis=1)
    return out


def gb126_check_matrix() -> QuaternaryCheckMatrix:
    """The 126-row check matrix of the [[126,28,8]] GB code, X and Z rows interleaved.

    ``a(x) = 1 + x + x^14 + x^16 + x^22``, ``b(x) = 1 + x^3 + x^13 + x^20 + x^42``,
    ``ell = 63``; ``H_X = [A | B]``, ``H_Z = [B^T | A^T]``. Row ``2i`` is the i-th X check
    and row ``2i + 1`` the i-th Z check.
    """
    ell = 63
    a = _circulant_poly(ell, (0, 1, 14, 16, 22))
    b = _circulant_poly(ell, (0, 3, 13, 20, 42))
    hx = np.hstack([a, b])
    hz = np.hstack([b.T, a.T])
    codes = np.zeros((2 * ell, 2 * ell), dtype=np.uint8)
    codes[0::2] = hx * PauliSymbol.X
    codes[1::2] = hz * PauliSymbol.Z
    return QuaternaryCheckMatrix.from_codes(codes)


def _data_path(name: str) -> Path:
    return Path(str(resources.files("gdsbp") / "data" / name))


GB126_FULL = "gb126_full.chk"
GB126_M102 = "gb126_m102.chk"


def load_code(path, k: int, d: int | None = None, name: str | None = None) -> StabilizerCode:
    """Read a CHK file and validate it against the declared ``k``."""
    h = loads_chk(Path(path).read_text())
    return StabilizerCode(h, k=k, d=d, name=name or Path(path).stem)


def load_gb_code(path=None, full: bool = False) -> StabilizerCode:
    """The shipped [[126,28,8]] GB fixture (102-row truncation unless ``full``)."""
    if path is None:
        path = _data_path(GB126_FULL if full else GB126_M102)
    return load_code(path, k=28, d=8, name="gb126")


def write_gb_fixtures(directory) -> None:
    """Regenerate the shipped GB fixtures."""
    directory = Path(directory)
    full = gb126_check_matrix()
    note = [
        "[[126,28,8]] generalized bicycle code, ell=63",
        "a(x) = 1 + x + x^14 + x^16 + x^22, b(x) = 1 + x^3 + x^13 + x^20 + x^42",
        "H_X = [A | B], H_Z = [B^T | A^T]; row 2i = X check i, row 2i+1 = Z check i",
    ]
    (directory / GB126_FULL).write_text(dumps_chk(full, note + ["all 126 checks, rank 98"]))
    trunc = full.take_rows(range(102))
    (directory / GB126_M102).write_text(
        dumps_chk(
            trunc,
            note + ["first 102 checks of the 126-row matrix (last 24 rows dropped), rank 98"],
        )
    )


def gb_single_shot_a() -> np.ndarray:
    return quasi_cyclic(GB_CASE1_SPEC)


def code_from_spec(spec: str) -> StabilizerCode:
    """Resolve ``toric:L``, ``gb126``, ``gb126-full`` or a CHK path with ``:k`` suffix."""
    if spec.startswith("toric:"):
        try:
            L = int(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad toric size in {spec!r}") from None
        return rotated_toric(L)
    if spec == "gb126":
        return load_gb_code()
    if spec == "gb126-full":
        return load_gb_code(full=True)
    path, _, k = spec.rpartition(":")
    if path and k.isdigit():
        return load_code(path, int(k))
    h = loads_chk(Path(spec).read_text())
    return StabilizerCode(h, k=h.n - gf2.rank(np.hstack([h.codes & 1, h.codes >> 1])), name=Path(spec).stem)
