"""Dense bit-packed linear algebra over GF(2).

Matrices are stored row-major, each row packed LSB-first into 64-bit words:
entry ``(r, c)`` is bit ``c % 64`` of word ``c // 64`` of row ``r``. Padding
bits past ``n_cols`` are always zero, so equality and hashing are plain
comparisons of the word arrays.

All values are immutable. Nothing here is constant-time; exponents are
processed bit by bit with data-dependent branches.
"""

from __future__ import annotations

import functools
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels

WORD_BITS = 64
_WORD_MAX = np.iinfo(np.uint64).max


def n_words(n_cols: int) -> int:
    return (n_cols + WORD_BITS - 1) // WORD_BITS


def _pad_mask(n_cols: int) -> np.uint64:
    rem = n_cols % WORD_BITS
    return np.uint64(_WORD_MAX if rem == 0 else (1 << rem) - 1)


def _frozen(words: np.ndarray) -> np.ndarray:
    words.flags.writeable = False
    return words


class BitVector:
    """Packed bit vector of fixed length (LSB-first)."""

    __slots__ = ("length", "_words")

    def __init__(self, words: np.ndarray, length: int):
        words = np.array(words, dtype=np.uint64).reshape(-1)
        if words.shape[0] != n_words(length):
            raise ValueError(f"expected {n_words(length)} words for length {length}")
        if length and words[-1] & ~_pad_mask(length):
            raise ValueError("padding bits must be zero")
        self.length = length
        self._words = _frozen(words)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        bits = [int(b) & 1 for b in bits]
        value = sum(b << i for i, b in enumerate(bits))
        return cls.from_int(value, len(bits))

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitVector":
        if value < 0 or value >> length:
            raise ValueError("value does not fit in the vector length")
        words = [(value >> (WORD_BITS * k)) & _WORD_MAX for k in range(n_words(length))]
        return cls(np.array(words, dtype=np.uint64), length)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def to_int(self) -> int:
        return sum(int(w) << (WORD_BITS * k) for k, w in enumerate(self._words))

    def bits(self) -> list[int]:
        value = self.to_int()
        return [(value >> i) & 1 for i in range(self.length)]

    def to_bytes(self) -> bytes:
        return self.to_int().to_bytes((self.length + 7) // 8, "little")

    def hex(self) -> str:
        return self.to_bytes().hex()

    def weight(self) -> int:
        return self.to_int().bit_count()

    def is_zero(self) -> bool:
        return not self._words.any()

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self.length, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitVector({''.join(map(str, self.bits()))})"


class BitMatrix:
    """Dense ``n_rows x n_cols`` matrix over GF(2).

    ``+`` is entrywise XOR, ``@`` is the matrix product and ``**`` raises a
    square matrix to a nonnegative integer power.
    """

    __slots__ = ("n_rows", "n_cols", "_words")

    def __init__(self, words: np.ndarray, n_cols: int):
        words = np.array(words, dtype=np.uint64)
        if words.ndim != 2 or words.shape[1] != n_words(n_cols):
            raise ValueError(f"expected a 2-d word array with {n_words(n_cols)} columns")
        if words.shape[0] and n_cols and (words[:, -1] & ~_pad_mask(n_cols)).any():
            raise ValueError("padding bits must be zero")
        self.n_rows = words.shape[0]
        self.n_cols = n_cols
        self._words = _frozen(words)

    @classmethod
    def _wrap(cls, words: np.ndarray, n_cols: int) -> "BitMatrix":
        # Trusted construction from kernel output: no copy, no checks.
        obj = cls.__new__(cls)
        obj.n_rows = words.shape[0]
        obj.n_cols = n_cols
        obj._words = _frozen(words)
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else 0
        if any(len(r) != n_cols for r in rows):
            raise ValueError("ragged rows")
        return cls.from_int_rows(
            [sum((int(b) & 1) << c for c, b in enumerate(r)) for r in rows], n_cols
        )

    @classmethod
    def from_int_rows(cls, rows: Sequence[int], n_cols: int) -> "BitMatrix":
        """Build from one Python int per row (bit ``c`` = column ``c``)."""
        width = n_words(n_cols)
        words = np.zeros((len(rows), width), dtype=np.uint64)
        for r, value in enumerate(rows):
            if value < 0 or value >> n_cols:
                raise ValueError(f"row {r} has bits beyond column {n_cols - 1}")
            for k in range(width):
                words[r, k] = (value >> (WORD_BITS * k)) & _WORD_MAX
        return cls._wrap(words, n_cols)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> "BitMatrix":
        n_cols = n_rows if n_cols is None else n_cols
        return cls._wrap(np.zeros((n_rows, n_words(n_cols)), dtype=np.uint64), n_cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    @property
    def words(self) -> np.ndarray:
        """Read-only ``(n_rows, n_words)`` uint64 view of the packed rows."""
        return self._words

    def int_rows(self) -> list[int]:
        return [
            sum(int(w) << (WORD_BITS * k) for k, w in enumerate(row)) for row in self._words
        ]

    def to_list(self) -> list[list[int]]:
        return [[(v >> c) & 1 for c in range(self.n_cols)] for v in self.int_rows()]

    def to_array(self) -> np.ndarray:
        """Unpacked ``uint8`` array of shape ``(n_rows, n_cols)``."""
        raw = self._words.astype("<u8").view(np.uint8)
        bits = np.unpackbits(raw, axis=1, bitorder="little")
        return bits[:, : self.n_cols]

    def __getitem__(self, index: tuple[int, int]) -> int:
        r, c = index
        if not (0 <= r < self.n_rows and 0 <= c < self.n_cols):
            raise IndexError(index)
        return int(self._words[r, c // WORD_BITS] >> np.uint64(c % WORD_BITS)) & 1

    def is_zero(self) -> bool:
        return not self._words.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self.shape, self._words.tobytes()))

    def key(self) -> bytes:
        """Compact hashable fingerprint (shape is not included)."""
        return self._words.tobytes()

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        return add(self, other)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mul(self, other)

    def __pow__(self, k: int) -> "BitMatrix":
        return power(self, k)

    def __repr__(self) -> str:
        if self.n_rows * self.n_cols > 256:
            return f"BitMatrix({self.n_rows}x{self.n_cols})"
        body = ";".join("".join(map(str, row)) for row in self.to_list())
        return f"BitMatrix([{body}])"


class GaussResult(NamedTuple):
    rank: int
    inverse: BitMatrix | None
    det: int


@functools.lru_cache(maxsize=64)
def identity(n: int) -> BitMatrix:
    if n < 1:
        raise ValueError("n must be >= 1")
    words = np.zeros((n, n_words(n)), dtype=np.uint64)
    idx = np.arange(n)
    words[idx, idx // WORD_BITS] = np.left_shift(np.uint64(1), (idx % WORD_BITS).astype(np.uint64))
    return BitMatrix._wrap(words, n)


def add(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} + {b.shape}")
    return BitMatrix._wrap(np.bitwise_xor(a.words, b.words), a.n_cols)


def mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.n_cols != b.n_rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return BitMatrix._wrap(_kernels.mul(a.words, b.words), b.n_cols)


def _exponent_bits(k: int) -> np.ndarray:
    return np.frombuffer(format(k, "b").encode(), dtype=np.uint8) - ord("0")


def power(a: BitMatrix, k: int) -> BitMatrix:
    """``a**k`` by left-to-right square-and-multiply; ``power(a, 0)`` is I."""
    if not a.is_square:
        raise ValueError(f"power needs a square matrix, got {a.shape}")
    k = int(k)
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    ident = identity(a.n_rows)
    if k == 0:
        return ident
    return BitMatrix._wrap(_kernels.power(a.words, _exponent_bits(k), ident.words), a.n_cols)


def gaussian_elim(a: BitMatrix) -> GaussResult:
    """Rank, inverse (when nonsingular) and determinant of a square matrix.

    Singularity is reported through ``det == 0`` and ``inverse is None``.
    """
    if not a.is_square:
        raise ValueError(f"gaussian_elim needs a square matrix, got {a.shape}")
    r, inv = _kernels.eliminate(a.words, a.n_cols, True)
    if r == a.n_rows:
        return GaussResult(r, BitMatrix._wrap(inv, a.n_cols), 1)
    return GaussResult(r, None, 0)


def rank(a: BitMatrix) -> int:
    """Row rank of an arbitrary (possibly rectangular) matrix."""
    if a.n_rows == 0 or a.n_cols == 0:
        return 0
    r, _ = _kernels.eliminate(a.words, a.n_cols, False)
    return int(r)


def det(a: BitMatrix) -> int:
    return gaussian_elim(a).det


def inverse(a: BitMatrix) -> BitMatrix:
    inv = gaussian_elim(a).inverse
    if inv is None:
        raise ValueError("matrix is singular")
    return inv


def vstack(*mats: BitMatrix) -> BitMatrix:
    cols = {m.n_cols for m in mats}
    if len(cols) != 1:
        raise ValueError("vstack needs equal column counts")
    return BitMatrix._wrap(np.vstack([m.words for m in mats]), cols.pop())


def column(a: BitMatrix, j: int) -> BitVector:
    if not 0 <= j < a.n_cols:
        raise IndexError(f"column {j} out of range for {a.n_cols} columns")
    bits = (a.words[:, j // WORD_BITS] >> np.uint64(j % WORD_BITS)) & np.uint64(1)
    value = 0
    for r in np.flatnonzero(bits):
        value |= 1 << int(r)
    return BitVector.from_int(value, a.n_rows)


def zero_columns(a: BitMatrix) -> list[int]:
    """Indices of the all-zero columns, ascending."""
    used = np.bitwise_or.reduce(a.words, axis=0) if a.n_rows else np.zeros(n_words(a.n_cols), np.uint64)
    out = []
    for k, word in enumerate(used):
        word = int(word)
        for bit in range(min(WORD_BITS, a.n_cols - k * WORD_BITS)):
            if not (word >> bit) & 1:
                out.append(k * WORD_BITS + bit)
    return out


def column_weights(a: BitMatrix) -> np.ndarray:
    """Number of ones in each column."""
    return a.to_array().sum(axis=0, dtype=np.int64)


def permute_rows(a: BitMatrix, order: Sequence[int]) -> BitMatrix:
    """Row ``i`` of the result is row ``order[i]`` of ``a``."""
    order = np.asarray(order, dtype=np.intp)
    if sorted(order.tolist()) != list(range(a.n_rows)):
        raise ValueError("order must be a permutation of the row indices")
    return BitMatrix._wrap(a.words[order].copy(), a.n_cols)


def block_diag(*blocks: BitMatrix) -> BitMatrix:
    n_rows = sum(b.n_rows for b in blocks)
    n_cols = sum(b.n_cols for b in blocks)
    rows: list[int] = []
    offset = 0
    for b in blocks:
        rows.extend(v << offset for v in b.int_rows())
        offset += b.n_cols
    out = BitMatrix.from_int_rows(rows, n_cols)
    assert out.n_rows == n_rows
    return out


def random_matrix(n: int, rng: np.random.Generator, n_cols: int | None = None) -> BitMatrix:
    """Matrix with i.i.d. uniform entries drawn from ``rng``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    n_cols = n if n_cols is None else n_cols
    words = rng.integers(0, _WORD_MAX, size=(n, n_words(n_cols)), dtype=np.uint64, endpoint=True)
    words[:, -1] &= _pad_mask(n_cols)
    return BitMatrix._wrap(words, n_cols)
