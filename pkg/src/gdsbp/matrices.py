"""Mixed-alphabet check matrices and their Tanner graphs.

Both matrix classes are stored sparse and row-major: each row is a tuple of
``(column, symbol_code)`` pairs for the quaternary block and, for the generalized
matrices, a tuple of binary column indices. Dense views are derived lazily.

Text formats (0-based column indices, tokens ascending)::

    CHK m n                      GDS N M MPRIME
    0:X 1:Y                      0:X 1:Y b0
    0:Z 1:Z 2:Y                  0:Z 1:Z 2:Y b1

Lines starting with ``#`` before the header are comments.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import gf2
from .pauli import (
    MixedVector,
    PauliSymbol,
    PauliVector,
    SymplecticMatrix,
    codes_from_string,
)

_SYM_CHAR = {1: "X", 2: "Z", 3: "Y"}
_CHAR_SYM = {"X": 1, "Z": 2, "Y": 3}


class FormatError(ValueError):
    """A CHK/GDS/QC text block could not be parsed."""


def _rows_from_codes(codes: np.ndarray) -> tuple:
    return tuple(
        tuple((int(c), int(row[c])) for c in np.flatnonzero(row)) for row in np.asarray(codes, np.uint8)
    )


def _normalize_qrows(rows, n: int) -> tuple:
    out = []
    for row in rows:
        entries = []
        for col, sym in row:
            sym = int(PauliSymbol.from_char(sym)) if isinstance(sym, str) else int(sym)
            if sym == 0:
                continue
            if not 0 <= col < n or sym > 3:
                raise ValueError(f"bad quaternary entry ({col}, {sym}) for width {n}")
            entries.append((int(col), sym))
        entries.sort()
        if any(a[0] == b[0] for a, b in zip(entries, entries[1:])):
            raise ValueError("duplicate column in a row")
        out.append(tuple(entries))
    return tuple(out)


def _normalize_brows(rows, m: int) -> tuple:
    out = []
    for row in rows:
        cols = sorted(int(c) for c in row)
        if any(not 0 <= c < m for c in cols):
            raise ValueError(f"binary column out of range for width {m}")
        if len(set(cols)) != len(cols):
            raise ValueError("duplicate binary column in a row")
        out.append(tuple(cols))
    return tuple(out)


class QuaternaryCheckMatrix:
    """An ``m x n`` check matrix over ``{I,X,Y,Z}`` whose rows are stabilizers."""

    def __init__(self, n: int, rows: Sequence, validate: bool = True):
        self.n = int(n)
        self.rows = _normalize_qrows(rows, self.n)
        if validate:
            self.check_commutation()

    @classmethod
    def from_codes(cls, codes, validate: bool = True) -> "QuaternaryCheckMatrix":
        codes = np.asarray(codes, dtype=np.uint8)
        if codes.ndim != 2:
            raise ValueError("expected a 2-D code array")
        return cls(codes.shape[1], _rows_from_codes(codes), validate=validate)

    @classmethod
    def from_strings(cls, rows: Sequence[str], validate: bool = True) -> "QuaternaryCheckMatrix":
        if not rows:
            raise ValueError("need at least one row to infer n")
        return cls.from_codes(np.array([codes_from_string(r) for r in rows]), validate=validate)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    @cached_property
    def codes(self) -> np.ndarray:
        out = np.zeros((self.m, self.n), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for c, s in row:
                out[i, c] = s
        out.setflags(write=False)
        return out

    @cached_property
    def _hx_hz(self) -> tuple[np.ndarray, np.ndarray]:
        return (self.codes & 1).astype(np.int32), (self.codes >> 1).astype(np.int32)

    def check_commutation(self) -> None:
        hx, hz = self._hx_hz
        gram = (hx @ hz.T + hz @ hx.T) & 1
        bad = np.argwhere(gram)
        if bad.size:
            i, j = bad[0]
            raise ValueError(f"rows {i} and {j} do not commute")

    def syndrome(self, error) -> np.ndarray:
        """``E * H`` for one error (length n) or a stack of errors (k x n)."""
        e = error.codes if isinstance(error, PauliVector) else np.asarray(error, dtype=np.uint8)
        hx, hz = self._hx_hz
        ex = (e & 1).astype(np.int32)
        ez = (e >> 1).astype(np.int32)
        return ((ez @ hx.T + ex @ hz.T) & 1).astype(np.uint8)

    def row_vectors(self) -> list[PauliVector]:
        return [PauliVector(r) for r in self.codes]

    def symplectic(self) -> SymplecticMatrix:
        return SymplecticMatrix.from_codes(self.codes)

    def take_rows(self, idx) -> "QuaternaryCheckMatrix":
        return QuaternaryCheckMatrix(self.n, [self.rows[i] for i in idx], validate=False)

    def as_gds(self) -> "GdsCheckMatrix":
        """The same checks with no binary columns (perfect-syndrome decoding)."""
        return GdsCheckMatrix(self.n, 0, self.rows, [()] * self.m)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuaternaryCheckMatrix) and (self.n, self.rows) == (other.n, other.rows)

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"QuaternaryCheckMatrix(m={self.m}, n={self.n})"


class GdsCheckMatrix:
    """An ``M' x (N + M)`` check matrix: N quaternary columns then M binary columns."""

    def __init__(self, n_quaternary: int, m_binary: int, quaternary_rows: Sequence, binary_rows: Sequence):
        if len(quaternary_rows) != len(binary_rows):
            raise ValueError("quaternary and binary row counts differ")
        self.n_quaternary = int(n_quaternary)
        self.m_binary = int(m_binary)
        self.quaternary_rows = _normalize_qrows(quaternary_rows, self.n_quaternary)
        self.binary_rows = _normalize_brows(binary_rows, self.m_binary)

    @classmethod
    def from_dense(cls, codes, binary) -> "GdsCheckMatrix":
        codes = np.asarray(codes, dtype=np.uint8)
        binary = np.asarray(binary, dtype=np.uint8)
        if codes.shape[0] != binary.shape[0]:
            raise ValueError("block row counts differ")
        brows = [tuple(np.flatnonzero(r)) for r in binary]
        return cls(codes.shape[1], binary.shape[1], _rows_from_codes(codes), brows)

    @property
    def m_prime(self) -> int:
        return len(self.quaternary_rows)

    @property
    def shape(self) -> tuple[int, int, int]:
        """``(M', N, M)``"""
        return self.m_prime, self.n_quaternary, self.m_binary

    @property
    def n_vars(self) -> int:
        return self.n_quaternary + self.m_binary

    @cached_property
    def codes(self) -> np.ndarray:
        out = np.zeros((self.m_prime, self.n_quaternary), dtype=np.uint8)
        for i, row in enumerate(self.quaternary_rows):
            for c, s in row:
                out[i, c] = s
        out.setflags(write=False)
        return out

    @cached_property
    def binary(self) -> np.ndarray:
        out = np.zeros((self.m_prime, self.m_binary), dtype=np.uint8)
        for i, row in enumerate(self.binary_rows):
            out[i, list(row)] = 1
        out.setflags(write=False)
        return out

    @cached_property
    def _dense_int(self):
        c = self.codes
        return (c & 1).astype(np.int32), (c >> 1).astype(np.int32), self.binary.astype(np.int32)

    def syndrome(self, pauli, bits=None) -> np.ndarray:
        """``(E, e) * H~``. Accepts a MixedVector, or code/bit arrays (optionally stacked)."""
        if isinstance(pauli, MixedVector):
            pauli, bits = pauli.pauli_part.codes, pauli.bit_part
        elif isinstance(pauli, PauliVector):
            pauli = pauli.codes
        e = np.asarray(pauli, dtype=np.uint8)
        hx, hz, b = self._dense_int
        s = (e >> 1).astype(np.int32) @ hx.T + (e & 1).astype(np.int32) @ hz.T
        if bits is not None and self.m_binary:
            s = s + np.asarray(bits, dtype=np.int32) @ b.T
        return (s & 1).astype(np.uint8)

    def row(self, i: int) -> MixedVector:
        return MixedVector(PauliVector(self.codes[i]), self.binary[i])

    @cached_property
    def edges(self):
        """Edge arrays sorted by (check, variable): ``(chk_ptr, var, sym)``.

        Binary variables are numbered ``N + col`` and carry symbol code 0.
        """
        ptr = [0]
        var: list[int] = []
        sym: list[int] = []
        for q, b in zip(self.quaternary_rows, self.binary_rows):
            for c, s in q:
                var.append(c)
                sym.append(s)
            for c in b:
                var.append(self.n_quaternary + c)
                sym.append(0)
            ptr.append(len(var))
        return (
            np.array(ptr, dtype=np.int64),
            np.array(var, dtype=np.int64),
            np.array(sym, dtype=np.uint8),
        )

    @cached_property
    def tanner_graph(self) -> "TannerGraph":
        return TannerGraph.from_matrix(self)

    def drop_binary(self) -> "GdsCheckMatrix":
        return GdsCheckMatrix(self.n_quaternary, 0, self.quaternary_rows, [()] * self.m_prime)

    def __eq__(self, other) -> bool:
        return isinstance(other, GdsCheckMatrix) and (
            self.n_quaternary,
            self.m_binary,
            self.quaternary_rows,
            self.binary_rows,
        ) == (other.n_quaternary, other.m_binary, other.quaternary_rows, other.binary_rows)

    def __hash__(self) -> int:
        return hash((self.n_quaternary, self.m_binary, self.quaternary_rows, self.binary_rows))

    def __repr__(self) -> str:
        return f"GdsCheckMatrix(M'={self.m_prime}, N={self.n_quaternary}, M={self.m_binary})"

    def __str__(self) -> str:
        chars = np.array(["I", "X", "Z", "Y"])
        lines = []
        for i in range(self.m_prime):
            q = " ".join(chars[self.codes[i]])
            b = " ".join(str(v) for v in self.binary[i])
            lines.append(f"{q} | {b}".rstrip())
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# constructions


def ds_matrix(h: QuaternaryCheckMatrix) -> GdsCheckMatrix:
    """``[H | I_m]``"""
    return GdsCheckMatrix(h.n, h.m, h.rows, [(i,) for i in range(h.m)])


def _shift(row, offset):
    return tuple((c + offset, s) for c, s in row)


def gds_repeated(h: QuaternaryCheckMatrix, r: int) -> GdsCheckMatrix:
    """Block-diagonal H (r copies) beside the bidiagonal identity block."""
    if r < 1:
        raise ValueError("need at least one round")
    n, m = h.n, h.m
    qrows, brows = [], []
    for blk in range(r):
        for i, row in enumerate(h.rows):
            qrows.append(_shift(row, blk * n))
            brows.append(((blk - 1) * m + i, blk * m + i) if blk else (i,))
    return GdsCheckMatrix(r * n, r * m, qrows, brows)


def gds_with_readout(h: QuaternaryCheckMatrix, r: int) -> GdsCheckMatrix:
    """:func:`gds_repeated` plus a final perfect round: N=(r+1)n, M=rm, M'=(r+1)m."""
    if r < 1:
        raise ValueError("need at least one round")
    base = gds_repeated(h, r)
    n, m = h.n, h.m
    qrows = list(base.quaternary_rows) + [_shift(row, r * n) for row in h.rows]
    brows = list(base.binary_rows) + [((r - 1) * m + i,) for i in range(m)]
    return GdsCheckMatrix((r + 1) * n, r * m, qrows, brows)


def gds_per_round(h_seq: Sequence[QuaternaryCheckMatrix], a_seq: Sequence) -> GdsCheckMatrix:
    """Per-round check matrices ``H^(l)`` with transitions ``A^(l)`` on the binary subdiagonal."""
    r = len(h_seq)
    if r < 1:
        raise ValueError("need at least one round")
    if len(a_seq) != r - 1:
        raise ValueError(f"expected {r - 1} transition matrices, got {len(a_seq)}")
    n = h_seq[0].n
    if any(h.n != n for h in h_seq):
        raise ValueError("all rounds must act on the same qubits")
    ms = [h.m for h in h_seq]
    offs = np.concatenate([[0], np.cumsum(ms)]).astype(int)
    mats = [gf2.as_gf2(a) if np.size(a) else np.zeros((ms[k + 1], ms[k]), np.uint8) for k, a in enumerate(a_seq)]
    for k, a in enumerate(mats):
        if a.shape != (ms[k + 1], ms[k]):
            raise ValueError(f"A^({k + 2}) must be {ms[k + 1]}x{ms[k]}, got {a.shape}")
    qrows, brows = [], []
    for blk, h in enumerate(h_seq):
        for i, row in enumerate(h.rows):
            qrows.append(_shift(row, blk * n))
            cols = [offs[blk] + i]
            if blk:
                cols += [offs[blk - 1] + int(c) for c in np.flatnonzero(mats[blk - 1][i])]
            brows.append(cols)
    return GdsCheckMatrix(r * n, int(offs[-1]), qrows, brows)


def transition_matrix(h_prev: QuaternaryCheckMatrix, h_next: QuaternaryCheckMatrix) -> np.ndarray:
    """A reduced solution ``A`` of ``H_next = A H_prev`` (free variables set to zero)."""
    src = np.hstack([h_prev.codes & 1, h_prev.codes >> 1])
    dst = np.hstack([h_next.codes & 1, h_next.codes >> 1])
    return gf2.solve_left(src, dst)


class SingleShotPair(NamedTuple):
    measurement: GdsCheckMatrix
    decoding: GdsCheckMatrix
    row_ops: np.ndarray


def _mixed_dense(g: GdsCheckMatrix) -> np.ndarray:
    """GF(2) image ``[x | z | bits]`` of every row."""
    return np.hstack([g.codes & 1, g.codes >> 1, g.binary]).astype(np.uint8)


def single_shot_matrix(h: QuaternaryCheckMatrix, a) -> SingleShotPair:
    """Measurement matrix ``[H I; AH I]``, decoding matrix ``[H I 0; 0 A I]`` and the
    GF(2) row operations mapping measured syndromes to decoding syndromes."""
    a = np.asarray(a, dtype=np.uint8).reshape(-1, h.m) & 1 if np.size(a) else np.zeros((0, h.m), np.uint8)
    ell, m, n = a.shape[0], h.m, h.n
    redundant = gf2.matmul(a, np.hstack([h.codes & 1, h.codes >> 1]))
    ah = (redundant[:, :n] | (redundant[:, n:] << 1)).astype(np.uint8)
    meas = GdsCheckMatrix.from_dense(
        np.vstack([h.codes, ah]), np.eye(m + ell, dtype=np.uint8)
    )
    bin_dec = np.zeros((m + ell, m + ell), dtype=np.uint8)
    bin_dec[:m, :m] = np.eye(m, dtype=np.uint8)
    bin_dec[m:, :m] = a
    bin_dec[m:, m:] = np.eye(ell, dtype=np.uint8)
    dec = GdsCheckMatrix.from_dense(np.vstack([h.codes, np.zeros((ell, n), np.uint8)]), bin_dec)
    row_ops = gf2.solve_left(_mixed_dense(meas), _mixed_dense(dec))
    return SingleShotPair(meas, dec, row_ops)


def r_transform_syndrome(s, r: int, m: int) -> np.ndarray:
    """``(s1, s1+s2, ..., s_{k-1}+s_k)`` blockwise, for ``k = r`` or ``r + 1`` blocks."""
    s = np.asarray(s, dtype=np.uint8)
    if m <= 0 or s.size % m:
        raise ValueError(f"syndrome length {s.size} is not a multiple of m={m}")
    blocks = s.size // m
    if blocks not in (r, r + 1):
        raise ValueError(f"expected {r} or {r + 1} blocks, got {blocks}")
    b = s.reshape(blocks, m)
    out = b.copy()
    out[1:] ^= b[:-1]
    return out.reshape(-1)


def r_inverse_syndrome(s, m: int) -> np.ndarray:
    """Blockwise prefix sums mod 2; inverts :func:`r_transform_syndrome`."""
    s = np.asarray(s, dtype=np.uint8)
    if m <= 0 or s.size % m:
        raise ValueError(f"syndrome length {s.size} is not a multiple of m={m}")
    return (np.bitwise_xor.accumulate(s.reshape(-1, m), axis=0)).reshape(-1)


def per_round_transform_syndrome(s_blocks: Sequence, a_seq: Sequence) -> np.ndarray:
    """``s'_l = s_l + A^(l) s_{l-1}`` for the per-round construction."""
    out = [np.asarray(s_blocks[0], dtype=np.uint8)]
    for prev, cur, a in zip(s_blocks, s_blocks[1:], a_seq):
        out.append(np.asarray(cur, np.uint8) ^ gf2.matmul(a, np.asarray(prev, np.uint8)))
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# Tanner graph


@dataclass(frozen=True)
class TannerGraph:
    n_checks: int
    n_quaternary: int
    n_binary: int
    check_adj: tuple  # N(i)
    var_adj: tuple  # M(j)
    labels: dict  # (i, j) -> "X" | "Y" | "Z" | "1"

    @classmethod
    def from_matrix(cls, g: GdsCheckMatrix) -> "TannerGraph":
        n_vars = g.n_vars
        check_adj, labels = [], {}
        var_adj: list[list[int]] = [[] for _ in range(n_vars)]
        for i, (q, b) in enumerate(zip(g.quaternary_rows, g.binary_rows)):
            nbrs = []
            for c, s in q:
                nbrs.append(c)
                labels[(i, c)] = _SYM_CHAR[s]
            for c in b:
                j = g.n_quaternary + c
                nbrs.append(j)
                labels[(i, j)] = "1"
            check_adj.append(tuple(nbrs))
            for j in nbrs:
                var_adj[j].append(i)
        return cls(g.m_prime, g.n_quaternary, g.m_binary, tuple(check_adj), tuple(map(tuple, var_adj)), labels)

    @classmethod
    def from_binary(cls, mat) -> "TannerGraph":
        mat = gf2.as_gf2(mat)
        return cls.from_matrix(GdsCheckMatrix.from_dense(np.zeros((mat.shape[0], 0), np.uint8), mat))

    @property
    def n_vars(self) -> int:
        return self.n_quaternary + self.n_binary

    @property
    def n_edges(self) -> int:
        return len(self.labels)


def girth(g: TannerGraph, check_roots: Sequence[int] | None = None) -> float:
    """Length of a shortest cycle (``math.inf`` for a forest).

    ``check_roots`` restricts the BFS roots to the given checks; this is exact
    whenever every cycle passes through a check equivalent (under a graph
    automorphism) to one of the roots, e.g. one check per circulant block.
    """
    nc = g.n_checks
    # nodes: checks 0..nc-1, variables nc..nc+nv-1
    adj = [tuple(nc + j for j in nb) for nb in g.check_adj] + [tuple(ms) for ms in g.var_adj]
    roots = range(nc + g.n_vars) if check_roots is None else check_roots
    best = math.inf
    for root in roots:
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def export_dot(g: TannerGraph, name: str = "tanner") -> str:
    """Deterministic Graphviz text: variables are circles, checks are boxes."""
    lines = [f"graph {name} {{"]
    for j in range(g.n_vars):
        if j < g.n_quaternary:
            lines.append(f'  v{j} [shape=circle, label="E{j + 1}"];')
        else:
            lines.append(f'  v{j} [shape=circle, label="e{j - g.n_quaternary + 1}"];')
    for i in range(g.n_checks):
        lines.append(f'  c{i} [shape=box, label=""];')
    for i, nbrs in enumerate(g.check_adj):
        for j in nbrs:
            lines.append(f'  c{i} -- v{j} [label="{g.labels[(i, j)]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# text formats


def _split_header(text: str) -> tuple[list[str], list[str]]:
    lines = text.splitlines()
    k = 0
    comments = []
    while k < len(lines) and (lines[k].startswith("#") or not lines[k].strip()):
        if lines[k].startswith("#"):
            comments.append(lines[k][1:].strip())
        k += 1
    if k == len(lines):
        raise FormatError("missing header line")
    return comments, lines[k:]


def _parse_qtoken(tok: str, n: int) -> tuple[int, int]:
    try:
        col, sym = tok.split(":")
        col = int(col)
        s = _CHAR_SYM[sym]
    except (ValueError, KeyError):
        raise FormatError(f"bad token {tok!r}") from None
    if not 0 <= col < n:
        raise FormatError(f"column {col} out of range")
    return col, s


def _check_ascending(cols, what):
    if any(a >= b for a, b in zip(cols, cols[1:])):
        raise FormatError(f"{what} tokens must be strictly ascending")


def dumps_chk(h: QuaternaryCheckMatrix, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"CHK {h.m} {h.n}")
    for row in h.rows:
        out.append(" ".join(f"{c}:{_SYM_CHAR[s]}" for c, s in row))
    return "\n".join(out) + "\n"


def loads_chk(text: str, validate: bool = True) -> QuaternaryCheckMatrix:
    _, lines = _split_header(text)
    head = lines[0].split()
    if len(head) != 3 or head[0] != "CHK":
        raise FormatError(f"expected 'CHK m n', got {lines[0]!r}")
    try:
        m, n = int(head[1]), int(head[2])
    except ValueError:
        raise FormatError("non-integer dimensions") from None
    body = lines[1:]
    while len(body) > m and not body[-1].strip():
        body.pop()
    if len(body) != m:
        raise FormatError(f"expected {m} rows, found {len(body)}")
    rows = []
    for line in body:
        row = [_parse_qtoken(t, n) for t in line.split()]
        _check_ascending([c for c, _ in row], "quaternary")
        rows.append(row)
    try:
        return QuaternaryCheckMatrix(n, rows, validate=validate)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def dumps_gds(g: GdsCheckMatrix, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"GDS {g.n_quaternary} {g.m_binary} {g.m_prime}")
    for q, b in zip(g.quaternary_rows, g.binary_rows):
        toks = [f"{c}:{_SYM_CHAR[s]}" for c, s in q] + [f"b{c}" for c in b]
        out.append(" ".join(toks))
    return "\n".join(out) + "\n"


def loads_gds(text: str) -> GdsCheckMatrix:
    _, lines = _split_header(text)
    head = lines[0].split()
    if len(head) != 4 or head[0] != "GDS":
        raise FormatError(f"expected 'GDS N M MPRIME', got {lines[0]!r}")
    try:
        n, m, mp = (int(v) for v in head[1:])
    except ValueError:
        raise FormatError("non-integer dimensions") from None
    body = lines[1:]
    while len(body) > mp and not body[-1].strip():
        body.pop()
    if len(body) != mp:
        raise FormatError(f"expected {mp} rows, found {len(body)}")
    qrows, brows = [], []
    for line in body:
        q, b = [], []
        for tok in line.split():
            if tok.startswith("b"):
                try:
                    col = int(tok[1:])
                except ValueError:
                    raise FormatError(f"bad token {tok!r}") from None
                if not 0 <= col < m:
                    raise FormatError(f"binary column {col} out of range")
                b.append(col)
            else:
                if b:
                    raise FormatError("quaternary tokens must precede binary tokens")
                q.append(_parse_qtoken(tok, n))
        _check_ascending([c for c, _ in q], "quaternary")
        _check_ascending(b, "binary")
        qrows.append(q)
        brows.append(b)
    return GdsCheckMatrix(n, m, qrows, brows)


def read_matrix(path) -> QuaternaryCheckMatrix | GdsCheckMatrix:
    """Load either format, dispatching on the header keyword."""
    text = Path(path).read_text()
    _, lines = _split_header(text)
    key = lines[0].split()[0] if lines[0].split() else ""
    if key == "CHK":
        return loads_chk(text)
    if key == "GDS":
        return loads_gds(text)
    raise FormatError(f"unknown header {lines[0]!r}")


def read_comments(path) -> list[str]:
    return _split_header(Path(path).read_text())[0]
