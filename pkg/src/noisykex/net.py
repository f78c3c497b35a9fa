"""Framed TCP transport running one live handshake per connection.

The server plays Alice and decides the protocol; the client plays Bob and
follows whichever init frame arrives. With ``confirm`` enabled on both ends
the server sends the first 8 bytes of its key after the final message so the
client can check agreement. That leaks key material and exists for tests.
"""

from __future__ import annotations

import socket
import socketserver
import threading
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from . import protocols as proto
from .errors import ProtocolAbort
from .gf2 import BitVector
from .params import SecretParams
from .rand import make_rng, spawn
from .wire import FrameReader, Message, encode_message

Protocol = Literal["dhwe", "rsar"]
CONFIRM_BYTES = 8
DEFAULT_TIMEOUT = 30.0


def parse_address(text: str) -> tuple[str, int]:
    """``"host:port"`` (IPv6 hosts in brackets) to a socket address."""
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"expected host:port, got {text!r}")
    host = host.strip("[]") or "127.0.0.1"
    return host, int(port)


class Channel:
    """Message-level view of a connected socket."""

    def __init__(self, sock: socket.socket):
        self.sock = sock
        self._reader = FrameReader()
        self._queue: list[Message] = []

    def send(self, msg: Message) -> None:
        self.sock.sendall(encode_message(msg))

    def recv(self) -> Message:
        while not self._queue:
            chunk = self.sock.recv(65536)
            if not chunk:
                raise ProtocolAbort("peer closed the connection mid-handshake")
            self._queue.extend(self._reader.feed(chunk))
        return self._queue.pop(0)

    def recv_exact(self, count: int) -> bytes:
        # Raw bytes after the last frame; nothing else may be buffered.
        if self._queue:
            raise ProtocolAbort("unexpected extra frame")
        buf = bytearray(self._reader.drain())
        while len(buf) < count:
            chunk = self.sock.recv(count - len(buf))
            if not chunk:
                raise ProtocolAbort("peer closed before key confirmation")
            buf.extend(chunk)
        if len(buf) != count:
            raise ProtocolAbort("trailing bytes after key confirmation")
        return bytes(buf)


def _expect(msg: Message, kind: type):
    if not isinstance(msg, kind):
        raise ProtocolAbort(f"expected {kind.__name__}, got {type(msg).__name__}")
    return msg


def confirmation(key: BitVector) -> bytes:
    return key.to_bytes()[:CONFIRM_BYTES]


def run_alice(chan: Channel, sp: SecretParams, protocol: Protocol, rng: np.random.Generator,
              confirm: bool = False) -> BitVector:
    if protocol == "dhwe":
        state, init = proto.dhwe_alice_init(sp, rng)
        chan.send(init)
        key = proto.dhwe_alice_finish(state, _expect(chan.recv(), proto.DhweReplyMsg))
    elif protocol == "rsar":
        state, init = proto.rsar_alice_init(sp, rng)
        chan.send(init)
        key = proto.rsar_alice_finish(state, _expect(chan.recv(), proto.RsarReplyMsg))
    else:
        raise ValueError(f"unknown protocol {protocol!r}")
    if confirm:
        chan.sock.sendall(confirmation(key))
    return key


@dataclass(frozen=True)
class BobOutcome:
    protocol: Protocol
    key: BitVector
    confirmed: bool | None  # None when confirmation was not requested


def run_bob(chan: Channel, rng: np.random.Generator, confirm: bool = False) -> BobOutcome:
    init = chan.recv()
    if isinstance(init, proto.DhweInitMsg):
        protocol: Protocol = "dhwe"
        _, reply, key = proto.dhwe_bob_respond(init, rng)
    elif isinstance(init, proto.RsarInitMsg):
        protocol = "rsar"
        _, reply, key = proto.rsar_bob_respond(init, rng)
    else:
        raise ProtocolAbort(f"expected an init message, got {type(init).__name__}")
    chan.send(reply)
    confirmed = None
    if confirm:
        expected = confirmation(key)
        confirmed = chan.recv_exact(len(expected)) == expected
        if not confirmed:
            raise ProtocolAbort("key confirmation mismatch")
    return BobOutcome(protocol, key, confirmed)


class _AliceHandler(socketserver.BaseRequestHandler):
    server: "HandshakeServer"

    def handle(self) -> None:
        srv = self.server
        self.request.settimeout(srv.timeout_s)
        try:
            key = run_alice(Channel(self.request), srv.secret, srv.protocol, srv.next_rng(), srv.confirm)
        except (ProtocolAbort, OSError) as exc:
            srv.report(self.client_address, None, exc)
            return
        srv.report(self.client_address, key, None)


class HandshakeServer(socketserver.ThreadingTCPServer):
    """Threaded server; each accepted connection runs one Alice session."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        secret: SecretParams,
        protocol: Protocol,
        *,
        rng: np.random.Generator | None = None,
        confirm: bool = False,
        on_result: Callable[[tuple, BitVector | None, Exception | None], None] | None = None,
        timeout_s: float = DEFAULT_TIMEOUT,
    ):
        if protocol not in ("dhwe", "rsar"):
            raise ValueError(f"unknown protocol {protocol!r}")
        self.secret = secret
        self.protocol = protocol
        self.confirm = confirm
        self.timeout_s = timeout_s
        self._rng = rng if rng is not None else make_rng()
        self._rng_lock = threading.Lock()
        self._on_result = on_result
        super().__init__(address, _AliceHandler)

    @property
    def address(self) -> tuple[str, int]:
        return self.server_address[:2]

    def next_rng(self) -> np.random.Generator:
        with self._rng_lock:
            return spawn(self._rng, 1)[0]

    def report(self, peer, key, error) -> None:
        if self._on_result is not None:
            self._on_result(peer, key, error)


def connect(
    address: tuple[str, int],
    *,
    rng: np.random.Generator | None = None,
    confirm: bool = False,
    timeout_s: float = DEFAULT_TIMEOUT,
) -> BobOutcome:
    """Open a connection, run Bob's side, close."""
    rng = rng if rng is not None else make_rng()
    with socket.create_connection(address, timeout=timeout_s) as sock:
        return run_bob(Channel(sock), rng, confirm)
