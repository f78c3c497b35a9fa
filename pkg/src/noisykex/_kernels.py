"""Numba kernels over bit-packed GF(2) rows.

Rows are ``uint64`` word arrays, LSB-first: bit ``c`` of a row lives in word
``c >> 6`` at position ``c & 63``. Every kernel assumes padding bits are zero
on input and preserves that on output.
"""

import numba
import numpy as np

_ONE = np.uint64(1)

# Below this many inner-dimension bits the table build of the Four-Russians
# kernel costs more than it saves.
_M4R_THRESHOLD = 96


@numba.njit(cache=True)
def _mul_scan(a, b):
    n = a.shape[0]
    width = b.shape[1]
    inner = b.shape[0]
    out = np.zeros((n, width), dtype=np.uint64)
    for i in range(n):
        for w in range(a.shape[1]):
            word = a[i, w]
            k = w * 64
            while word != 0 and k < inner:
                if word & _ONE:
                    for c in range(width):
                        out[i, c] ^= b[k, c]
                word >>= _ONE
                k += 1
    return out


@numba.njit(cache=True)
def _mul_m4r(a, b):
    n = a.shape[0]
    width = b.shape[1]
    inner = b.shape[0]
    out = np.zeros((n, width), dtype=np.uint64)
    table = np.zeros((256, width), dtype=np.uint64)
    for k0 in range(0, inner, 8):
        chunk = min(8, inner - k0)
        size = 1 << chunk
        # table[t] = XOR of the b-rows selected by the bits of t (Gray-free
        # incremental build: strip the lowest set bit).
        for t in range(1, size):
            low = t & -t
            bit = 0
            while (1 << bit) != low:
                bit += 1
            prev = t ^ low
            for c in range(width):
                table[t, c] = table[prev, c] ^ b[k0 + bit, c]
        w = k0 >> 6
        shift = np.uint64(k0 & 63)
        mask = np.uint64(size - 1)
        for i in range(n):
            idx = (a[i, w] >> shift) & mask
            if idx != 0:
                for c in range(width):
                    out[i, c] ^= table[idx, c]
    return out


@numba.njit(cache=True)
def mul(a, b):
    if b.shape[0] >= _M4R_THRESHOLD:
        return _mul_m4r(a, b)
    return _mul_scan(a, b)


@numba.njit(cache=True)
def power(a, bits, ident):
    """Left-to-right square-and-multiply; ``bits`` is the exponent MSB-first."""
    acc = ident.copy()
    for i in range(bits.shape[0]):
        acc = mul(acc, acc)
        if bits[i]:
            acc = mul(acc, a)
    return acc


@numba.njit(cache=True)
def eliminate(a, n_cols, want_inverse):
    """Gauss-Jordan elimination.

    Returns ``(rank, inverse)``. ``inverse`` is only meaningful when the input
    is square, ``want_inverse`` is set and ``rank == n_cols``.
    """
    work = a.copy()
    n_rows = work.shape[0]
    width = work.shape[1]
    inv = np.zeros((n_rows, width), dtype=np.uint64)
    if want_inverse:
        for i in range(n_rows):
            inv[i, i >> 6] = _ONE << np.uint64(i & 63)
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        w = col >> 6
        bit = _ONE << np.uint64(col & 63)
        pivot = -1
        for r in range(rank, n_rows):
            if work[r, w] & bit:
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for c in range(width):
                tmp = work[pivot, c]
                work[pivot, c] = work[rank, c]
                work[rank, c] = tmp
                tmp = inv[pivot, c]
                inv[pivot, c] = inv[rank, c]
                inv[rank, c] = tmp
        for r in range(n_rows):
            if r != rank and (work[r, w] & bit):
                for c in range(width):
                    work[r, c] ^= work[rank, c]
                    inv[r, c] ^= inv[rank, c]
        rank += 1
    return rank, inv
