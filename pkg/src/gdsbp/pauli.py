"""Phase-free Pauli algebra.

A Pauli symbol is stored as the 2-bit code ``x | (z << 1)``::

    I = 0, X = 1, Z = 2, Y = 3

so the product of two symbols is the XOR of their codes. Character order for
serialization and tie-breaking is ``I < X < Y < Z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class PauliSymbol(IntEnum):
    I = 0
    X = 1
    Z = 2
    Y = 3

    @property
    def x_bit(self) -> int:
        return int(self) & 1

    @property
    def z_bit(self) -> int:
        return int(self) >> 1

    @classmethod
    def from_char(cls, ch: str) -> "PauliSymbol":
        try:
            return cls[ch.upper()]
        except KeyError:
            raise ValueError(f"not a Pauli character: {ch!r}") from None

    @classmethod
    def from_bits(cls, x: int, z: int) -> "PauliSymbol":
        return cls((x & 1) | ((z & 1) << 1))

    def __str__(self) -> str:
        return self.name


#: Symbol codes in the canonical X < Y < Z order used for LLR triples.
XYZ = (PauliSymbol.X, PauliSymbol.Y, PauliSymbol.Z)

_CHARS = np.array(["I", "X", "Z", "Y"])
_LOOKUP = {"I": 0, "X": 1, "Z": 2, "Y": 3}

#: ``COMMUTE[a, b]`` is the bilinear form of two single-qubit codes.
COMMUTE = np.array(
    [[((a & 1) & (b >> 1)) ^ ((a >> 1) & (b & 1)) for b in range(4)] for a in range(4)],
    dtype=np.uint8,
)


def codes_from_string(text: str) -> np.ndarray:
    try:
        return np.array([_LOOKUP[c] for c in text.strip().upper()], dtype=np.uint8)
    except KeyError as exc:
        raise ValueError(f"not a Pauli string: {text!r}") from exc


def codes_to_string(codes) -> str:
    return "".join(_CHARS[np.asarray(codes, dtype=np.uint8)])


@dataclass(frozen=True, eq=False)
class PauliVector:
    """A length-n phase-free Pauli string, backed by a read-only code array."""

    codes: np.ndarray

    def __post_init__(self):
        arr = np.array(self.codes, dtype=np.uint8).reshape(-1)
        if arr.size and arr.max() > 3:
            raise ValueError("Pauli codes must lie in 0..3")
        arr.setflags(write=False)
        object.__setattr__(self, "codes", arr)

    @classmethod
    def from_string(cls, text: str) -> "PauliVector":
        return cls(codes_from_string(text))

    @classmethod
    def from_symbols(cls, symbols: Iterable) -> "PauliVector":
        return cls([int(PauliSymbol.from_char(s) if isinstance(s, str) else s) for s in symbols])

    @classmethod
    def from_xz(cls, x, z) -> "PauliVector":
        x = np.asarray(x, dtype=np.uint8) & 1
        z = np.asarray(z, dtype=np.uint8) & 1
        return cls(x | (z << 1))

    @classmethod
    def identity(cls, n: int) -> "PauliVector":
        return cls(np.zeros(n, dtype=np.uint8))

    @property
    def x(self) -> np.ndarray:
        return self.codes & 1

    @property
    def z(self) -> np.ndarray:
        return self.codes >> 1

    @property
    def symbols(self) -> tuple[PauliSymbol, ...]:
        return tuple(PauliSymbol(int(c)) for c in self.codes)

    def weight(self) -> int:
        return int(np.count_nonzero(self.codes))

    def symplectic(self) -> np.ndarray:
        """The 2n-bit image ``(x | z)``."""
        return np.concatenate([self.x, self.z])

    def __len__(self) -> int:
        return self.codes.size

    def __getitem__(self, j) -> PauliSymbol:
        return PauliSymbol(int(self.codes[j]))

    def __mul__(self, other: "PauliVector") -> "PauliVector":
        return pauli_product(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliVector) and np.array_equal(self.codes, other.codes)

    def __hash__(self) -> int:
        return hash(self.codes.tobytes())

    def __str__(self) -> str:
        return codes_to_string(self.codes)

    def __repr__(self) -> str:
        return f"PauliVector({str(self)!r})"


def _check_lengths(a, b):
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} != {len(b)}")


def pauli_product(a: PauliVector, b: PauliVector) -> PauliVector:
    _check_lengths(a, b)
    return PauliVector(a.codes ^ b.codes)


def bilinear_form(a: PauliVector, b: PauliVector) -> int:
    """1 if the two operators anticommute, else 0."""
    _check_lengths(a, b)
    return int(COMMUTE[a.codes, b.codes].sum() & 1)


@dataclass(frozen=True, eq=False)
class MixedVector:
    """An error candidate ``(E, e)`` over ``{I,X,Y,Z}^N x {0,1}^M``."""

    pauli_part: PauliVector
    bit_part: np.ndarray

    def __post_init__(self):
        if not isinstance(self.pauli_part, PauliVector):
            object.__setattr__(self, "pauli_part", PauliVector(self.pauli_part))
        bits = np.array(self.bit_part, dtype=np.uint8).reshape(-1)
        if bits.size and bits.max() > 1:
            raise ValueError("bit part must be 0/1")
        bits.setflags(write=False)
        object.__setattr__(self, "bit_part", bits)

    @classmethod
    def zeros(cls, n: int, m: int) -> "MixedVector":
        return cls(PauliVector.identity(n), np.zeros(m, dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.pauli_part), self.bit_part.size

    def weight(self) -> int:
        return self.pauli_part.weight() + int(self.bit_part.sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MixedVector)
            and self.pauli_part == other.pauli_part
            and np.array_equal(self.bit_part, other.bit_part)
        )

    def __hash__(self) -> int:
        return hash((self.pauli_part, self.bit_part.tobytes()))

    def __str__(self) -> str:
        return f"{self.pauli_part} {''.join(map(str, self.bit_part))}"


def mixed_bilinear_form(a: MixedVector, b: MixedVector) -> int:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} != {b.shape}")
    dot = int(np.dot(a.bit_part.astype(np.int64), b.bit_part.astype(np.int64)))
    return (bilinear_form(a.pauli_part, b.pauli_part) + dot) & 1


class SymplecticMatrix:
    """GF(2) matrix of width 2n whose rows are symplectic Pauli images.

    Rows are bit-packed into Python ints (bit j = x_j, bit n+j = z_j), which keeps
    rank and membership tests fast for the few-hundred-qubit codes used here.
    """

    def __init__(self, n: int, rows: Sequence[int] = ()):
        self.n = n
        self.rows = tuple(int(r) for r in rows)
        limit = 1 << (2 * n)
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError("row wider than 2n bits")

    @classmethod
    def from_paulis(cls, vectors: Sequence[PauliVector], n: int | None = None) -> "SymplecticMatrix":
        if n is None:
            if not vectors:
                raise ValueError("need n for an empty matrix")
            n = len(vectors[0])
        return cls(n, [pack(v.codes) for v in vectors])

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "SymplecticMatrix":
        codes = np.asarray(codes, dtype=np.uint8)
        return cls(codes.shape[1], [pack(row) for row in codes])

    def __len__(self) -> int:
        return len(self.rows)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((len(self.rows), 2 * self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            bits = np.frombuffer(r.to_bytes((2 * self.n + 7) // 8 or 1, "little"), dtype=np.uint8)
            out[i] = np.unpackbits(bits, bitorder="little")[: 2 * self.n]
        return out

    @cached_property
    def _basis(self) -> tuple[int, ...]:
        # xor basis with distinct leading bits, sorted by leading bit descending
        basis: list[int] = []
        for r in self.rows:
            for b in basis:
                r = min(r, r ^ b)
            if r:
                basis.append(r)
                basis.sort(reverse=True)
        return tuple(basis)

    @property
    def rank(self) -> int:
        return len(self._basis)

    def reduce(self, v: int) -> int:
        for b in self._basis:
            v = min(v, v ^ b)
        return v

    def contains(self, v) -> bool:
        if isinstance(v, PauliVector):
            if len(v) != self.n:
                raise ValueError("vector length does not match the matrix")
            v = pack(v.codes)
        return self.reduce(int(v)) == 0


def pack(codes) -> int:
    """Pack a code array into the ``x | z << n`` integer form."""
    codes = np.asarray(codes, dtype=np.uint8)
    n = codes.size
    bits = np.concatenate([codes & 1, codes >> 1])
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little") if n else 0


def symplectic_rank(m: SymplecticMatrix) -> int:
    return m.rank


def in_row_space(m: SymplecticMatrix, v: PauliVector) -> bool:
    return m.contains(v)
