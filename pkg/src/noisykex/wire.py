"""Bit-exact frame format for parameters and protocol messages.

Frame layout (all integers little-endian)::

    magic    4 bytes  b"NQKX"
    version  1 byte   0x01
    type     1 byte   MsgType
    n, l, j  3 x u32  (j = 0xFFFFFFFF when unset)
    payload  per type

Matrices are ``n`` rows of ``ceil(n/8)`` bytes, bit ``c`` of a row at byte
``c // 8``, position ``c % 8``. Integers are a u32 byte count followed by the
minimal little-endian magnitude. Every valid frame has exactly one encoding;
decoders reject anything else.
"""

from __future__ import annotations

import enum
import struct
from typing import Union

import numpy as np

from .errors import ProtocolAbort, WireFormatError
from .gf2 import BitMatrix, n_words
from .params import PolySpec, SystemParams
from .protocols import DhweInitMsg, DhweReplyMsg, RsarInitMsg, RsarReplyMsg

MAGIC = b"NQKX"
VERSION = 0x01
NO_J = 0xFFFFFFFF
HEADER = struct.Struct("<4sBBIII")
_U32 = struct.Struct("<I")
MAX_N = 4096
MAX_INT_BYTES = 1 << 16


class MsgType(enum.IntEnum):
    DHWE_INIT = 0x01
    DHWE_REPLY = 0x02
    RSAR_INIT = 0x03
    RSAR_REPLY = 0x04
    PARAMS = 0x10


Message = Union[DhweInitMsg, DhweReplyMsg, RsarInitMsg, RsarReplyMsg, SystemParams]

_MATRIX_COUNT = {
    MsgType.DHWE_INIT: 3,
    MsgType.DHWE_REPLY: 1,
    MsgType.RSAR_INIT: 2,
    MsgType.RSAR_REPLY: 1,
    MsgType.PARAMS: 0,
}


def row_bytes(n: int) -> int:
    return (n + 7) // 8


# -- primitives ------------------------------------------------------------------------

def encode_matrix(a: BitMatrix) -> bytes:
    """Rows in order, each ``ceil(n_cols/8)`` bytes, LSB-first."""
    raw = a.words.astype("<u8").view(np.uint8).reshape(a.n_rows, -1)
    return raw[:, : row_bytes(a.n_cols)].tobytes()


def decode_matrix(data: bytes, n: int) -> BitMatrix:
    """Inverse of :func:`encode_matrix` for an ``n x n`` matrix."""
    rb = row_bytes(n)
    if len(data) != n * rb:
        raise WireFormatError(f"matrix needs {n * rb} bytes, got {len(data)}")
    rows = np.frombuffer(data, dtype=np.uint8).reshape(n, rb)
    if n % 8 and (rows[:, -1] >> (n % 8)).any():
        raise WireFormatError("nonzero padding bits in matrix row")
    padded = np.zeros((n, n_words(n) * 8), dtype=np.uint8)
    padded[:, :rb] = rows
    words = padded.view("<u8").astype(np.uint64)
    return BitMatrix(words, n)


def encode_int(value: int) -> bytes:
    if value < 0:
        raise ValueError("only nonnegative integers are encodable")
    body = value.to_bytes((value.bit_length() + 7) // 8, "little")
    return _U32.pack(len(body)) + body


def decode_int(data: bytes, offset: int = 0) -> tuple[int, int]:
    """Returns ``(value, offset_after)``."""
    if len(data) < offset + 4:
        raise WireFormatError("truncated integer length")
    (length,) = _U32.unpack_from(data, offset)
    end = offset + 4 + length
    if len(data) < end:
        raise WireFormatError("truncated integer body")
    body = data[offset + 4 : end]
    if length and body[-1] == 0:
        raise WireFormatError("non-minimal integer encoding")
    return int.from_bytes(body, "little"), end


# -- frames ----------------------------------------------------------------------------

def _header(kind: MsgType, n: int, l: int, j: int | None) -> bytes:
    return HEADER.pack(MAGIC, VERSION, int(kind), n, l, NO_J if j is None else j)


def encode_message(msg: Message) -> bytes:
    if isinstance(msg, DhweInitMsg):
        head = _header(MsgType.DHWE_INIT, msg.n, msg.l, msg.j)
        return head + encode_matrix(msg.A) + encode_matrix(msg.B) + encode_matrix(msg.S)
    if isinstance(msg, DhweReplyMsg):
        return _header(MsgType.DHWE_REPLY, msg.Y.n_rows, msg.l, msg.j) + encode_matrix(msg.Y)
    if isinstance(msg, RsarInitMsg):
        head = _header(MsgType.RSAR_INIT, msg.n, msg.l, msg.j)
        return head + encode_matrix(msg.A) + encode_matrix(msg.B) + encode_int(msg.e)
    if isinstance(msg, RsarReplyMsg):
        return _header(MsgType.RSAR_REPLY, msg.Y.n_rows, msg.l, msg.j) + encode_matrix(msg.Y)
    if isinstance(msg, SystemParams):
        body = _U32.pack(len(msg.polys))
        for p in msg.polys:
            body += encode_int(p.mask) + encode_int(p.known_order or 0)
        return _header(MsgType.PARAMS, msg.n, msg.l, msg.j) + body
    raise TypeError(f"{type(msg).__name__} is not a wire message")


def _check_prefix(buf: bytes) -> None:
    """Reject a malformed header as early as the bytes allow."""
    head = bytes(buf[:4])
    if head != MAGIC[: len(head)]:
        raise WireFormatError(f"bad magic {head!r}")
    if len(buf) > 4 and buf[4] != VERSION:
        raise WireFormatError(f"unsupported version {buf[4]}")
    if len(buf) > 5 and buf[5] not in _MATRIX_COUNT:
        raise WireFormatError(f"unknown message type 0x{buf[5]:02x}")


def _parse_header(data: bytes) -> tuple[MsgType, int, int, int | None]:
    _check_prefix(data)
    if len(data) < HEADER.size:
        raise WireFormatError("truncated header")
    _, _, kind, n, l, j = HEADER.unpack_from(data, 0)
    if not 2 < n <= MAX_N:
        raise WireFormatError(f"dimension n = {n} outside (2, {MAX_N}]")
    if l % 2 or not 2 <= l < n:
        raise WireFormatError(f"bad l = {l} for n = {n}")
    if j == NO_J:
        j = None
    elif j >= n:
        raise WireFormatError(f"j = {j} out of range for n = {n}")
    return MsgType(kind), n, l, j


def _length_field(buf: bytes, pos: int) -> int | None:
    if len(buf) < pos + 4:
        return None
    (length,) = _U32.unpack_from(buf, pos)
    if length > MAX_INT_BYTES:
        raise WireFormatError(f"integer field of {length} bytes exceeds {MAX_INT_BYTES}")
    return length


def frame_length(buf: bytes) -> int | None:
    """Total length of the frame at the start of ``buf``, or None if more
    bytes are needed to tell. Raises as soon as the prefix is malformed."""
    if len(buf) < HEADER.size:
        _check_prefix(buf)
        return None
    kind, n, _, _ = _parse_header(buf)
    pos = HEADER.size + _MATRIX_COUNT[kind] * n * row_bytes(n)
    n_ints = 1 if kind is MsgType.RSAR_INIT else 0
    if kind is MsgType.PARAMS:
        if len(buf) < pos + 4:
            return None
        (count,) = _U32.unpack_from(buf, pos)
        if count > n:
            raise WireFormatError(f"{count} polynomials for n = {n}")
        pos += 4
        n_ints = 2 * count
    for _ in range(n_ints):
        length = _length_field(buf, pos)
        if length is None:
            return None
        pos += 4 + length
    return pos


def decode_message(data: bytes) -> Message:
    """Parse exactly one frame; trailing or missing bytes are an error."""
    data = bytes(data)
    kind, n, l, j = _parse_header(data)
    need = frame_length(data)
    if need is None or len(data) < need:
        raise WireFormatError("truncated frame")
    if len(data) > need:
        raise WireFormatError(f"{len(data) - need} trailing bytes after frame")
    mat_len = n * row_bytes(n)
    pos = HEADER.size
    mats = []
    for _ in range(_MATRIX_COUNT[kind]):
        mats.append(decode_matrix(data[pos : pos + mat_len], n))
        pos += mat_len
    try:
        if kind is MsgType.PARAMS:
            (count,) = _U32.unpack_from(data, pos)
            pos += 4
            polys = []
            for _ in range(count):
                mask, pos = decode_int(data, pos)
                order, pos = decode_int(data, pos)
                polys.append(PolySpec(mask, order or None))
            return SystemParams(n, l, tuple(polys), j)
        if j is None:
            raise WireFormatError("protocol frames must carry j")
        if kind is MsgType.DHWE_INIT:
            msg = DhweInitMsg(*mats, l)
            msg.check()
            if msg.j != j:
                raise WireFormatError(f"header j = {j} but S has its zero column at {msg.j}")
            return msg
        if kind is MsgType.RSAR_INIT:
            e, pos = decode_int(data, pos)
            msg = RsarInitMsg(mats[0], mats[1], e, j, l)
            msg.check()
            return msg
        if kind is MsgType.DHWE_REPLY:
            return DhweReplyMsg(mats[0], l, j)
        return RsarReplyMsg(mats[0], l, j)
    except WireFormatError:
        raise
    except (ProtocolAbort, ValueError) as exc:
        raise WireFormatError(str(exc)) from exc


class FrameReader:
    """Incremental splitter for a byte stream carrying back-to-back frames."""

    def __init__(self) -> None:
        self._buf = bytearray()

    def feed(self, data: bytes) -> list[Message]:
        self._buf.extend(data)
        out = []
        while True:
            need = frame_length(bytes(self._buf))
            if need is None or len(self._buf) < need:
                return out
            frame = bytes(self._buf[:need])
            del self._buf[:need]
            out.append(decode_message(frame))

    @property
    def pending(self) -> int:
        return len(self._buf)

    def drain(self) -> bytes:
        """Hand back unparsed bytes and clear the buffer."""
        out = bytes(self._buf)
        self._buf.clear()
        return out
