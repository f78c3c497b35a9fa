"""DH-WE and RSA-Resemble key agreement as two-party state machines.

Each protocol is a single round trip. Alice holds :class:`SecretParams`;
Bob holds nothing long-lived. Transitions are plain functions::

    alice, init = dhwe_alice_init(sp, rng)
    bob, reply, k_b = dhwe_bob_respond(init, rng)
    k_a = dhwe_alice_finish(alice, reply)

Session states refuse to be pickled or copied so secrets cannot leak through
generic serialization; the message dataclasses carry public data only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import GenerationError, NotCoprimeError, PhaseError, ProtocolAbort
from .gf2 import BitMatrix, BitVector
from .params import DEFAULT_MAX_TRIES, SecretParams
from .rand import randint

SharedKey = BitVector


def mod_inverse(e: int, phi: int) -> int:
    """``d`` with ``e*d = 1 (mod phi)`` and ``0 < d < phi``."""
    if phi < 2:
        raise ValueError("modulus must be >= 2")
    if math.gcd(e, phi) != 1:
        raise NotCoprimeError(f"gcd({e}, {phi}) != 1")
    return pow(e, -1, phi)


@dataclass(frozen=True)
class Pins:
    """Fixed exponents for reproducible or boundary-case runs.

    In-range values are always accepted. Values outside the protocol ranges
    (``alpha = 1``, ``theta = 0`` ...) need ``relax_ranges=True``, which is a
    test-only switch.
    """

    alpha: int | None = None
    beta: int | None = None
    theta: int | None = None
    vartheta: int | None = None
    e: int | None = None
    relax_ranges: bool = False


def _pick(rng, pinned: int | None, low: int, high: int, name: str, relax: bool) -> int:
    if pinned is None:
        return randint(rng, low, high)
    if not relax and not low <= pinned <= high:
        raise ValueError(f"pinned {name}={pinned} outside [{low}, {high}]; set relax_ranges")
    if pinned < 0:
        raise ValueError(f"{name} must be nonnegative")
    return pinned


# -- messages -------------------------------------------------------------------

def _check_square(name: str, a: BitMatrix, n: int) -> None:
    if a.shape != (n, n):
        raise ProtocolAbort(f"{name} has shape {a.shape}, expected {(n, n)}")


@dataclass(frozen=True)
class DhweInitMsg:
    A: BitMatrix
    B: BitMatrix
    S: BitMatrix
    l: int

    @property
    def n(self) -> int:
        return self.A.n_rows

    @property
    def j(self) -> int:
        """Position of the single zero column of ``S``."""
        zeros = gf2.zero_columns(self.S)
        if len(zeros) != 1:
            raise ProtocolAbort(f"S must have exactly one zero column, found {len(zeros)}")
        return zeros[0]

    def check(self) -> None:
        for name in ("A", "B", "S"):
            _check_square(name, getattr(self, name), self.n)
        _ = self.j
        if not gf2.det(self.A):
            raise ProtocolAbort("A must be nonsingular")


@dataclass(frozen=True)
class DhweReplyMsg:
    Y: BitMatrix
    l: int
    j: int


@dataclass(frozen=True)
class RsarInitMsg:
    A: BitMatrix
    B: BitMatrix
    e: int
    j: int
    l: int

    @property
    def n(self) -> int:
        return self.A.n_rows

    def check(self, allow_degenerate_e: bool = False) -> None:
        _check_square("A", self.A, self.n)
        _check_square("B", self.B, self.n)
        if allow_degenerate_e:
            if self.e < 1:
                raise ProtocolAbort(f"e must be positive, got {self.e}")
        elif self.e < 3 or self.e % 2 == 0:
            raise ProtocolAbort(f"e must be odd and >= 3, got {self.e}")
        if not 0 <= self.j < self.n:
            raise ProtocolAbort(f"j = {self.j} out of range")
        if gf2.det(self.B):
            raise ProtocolAbort("B must be singular")


@dataclass(frozen=True)
class RsarReplyMsg:
    Y: BitMatrix
    l: int
    j: int


# -- session states --------------------------------------------------------------

class Phase(enum.Enum):
    CREATED = "created"
    SENT = "sent"
    RECEIVED = "received"
    KEYED = "keyed"


class _Session:
    """Phase bookkeeping shared by all four roles."""

    def __init__(self) -> None:
        self.phase = Phase.CREATED
        self._key: SharedKey | None = None

    def _advance(self, expected: Phase, new: Phase) -> None:
        if self.phase is not expected:
            raise PhaseError(f"{type(self).__name__}: expected phase {expected.value}, in {self.phase.value}")
        self.phase = new

    def _set_key(self, key: SharedKey) -> SharedKey:
        self._key = key
        self.phase = Phase.KEYED
        return key

    @property
    def key(self) -> SharedKey:
        if self.phase is not Phase.KEYED or self._key is None:
            raise PhaseError("key is only available once the session is keyed")
        return self._key

    def __reduce__(self):
        raise TypeError("session state holds secrets and cannot be serialized")

    def __copy__(self):
        raise TypeError("session state cannot be copied")

    def __deepcopy__(self, memo):
        raise TypeError("session state cannot be copied")

    def __repr__(self) -> str:
        return f"{type(self).__name__}(phase={self.phase.value})"


class AliceDhweState(_Session):
    def __init__(self, secret: SecretParams, alpha: int):
        super().__init__()
        self.secret = secret
        self.alpha = alpha


class BobDhweState(_Session):
    def __init__(self, beta: int, R2: BitMatrix, j: int):
        super().__init__()
        self.beta = beta
        self.R2 = R2
        self.j = j


class AliceRsarState(_Session):
    def __init__(self, secret: SecretParams, alpha: int, e: int, d: int):
        super().__init__()
        self.secret = secret
        self.alpha = alpha
        self.e = e
        self.d = d


class BobRsarState(_Session):
    def __init__(self, theta: int, vartheta: int, X: BitMatrix, j: int):
        super().__init__()
        self.theta = theta
        self.vartheta = vartheta
        self.X = X
        self.j = j


# -- helpers -----------------------------------------------------------------------

def noise(sp: SecretParams, rng: np.random.Generator) -> BitMatrix:
    """``R Q`` for a fresh uniform ``R``: a member of the error distribution."""
    return gf2.mul(gf2.random_matrix(sp.n, rng), sp.Q)


def _sample_s(sp: SecretParams, rng, max_tries: int) -> BitMatrix:
    for _ in range(max_tries):
        S = noise(sp, rng)
        if gf2.zero_columns(S) == [sp.j]:
            return S
    raise GenerationError("S kept extra zero columns")


def _alpha(sp: SecretParams, rng, pins: Pins) -> int:
    if sp.r < 3 and pins.alpha is None:
        raise ValueError("r must be >= 3 to sample 1 < alpha < r")
    return _pick(rng, pins.alpha, 2, sp.r - 1, "alpha", pins.relax_ranges)


# -- DH-WE -------------------------------------------------------------------------

def dhwe_alice_init(
    sp: SecretParams,
    rng: np.random.Generator,
    pins: Pins | None = None,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> tuple[AliceDhweState, DhweInitMsg]:
    """``A = M + R0 Q`` (nonsingular), ``B = M^alpha + R1 Q``, ``S = R Q``."""
    pins = pins or Pins()
    alpha = _alpha(sp, rng, pins)
    for _ in range(max_tries):
        A = gf2.add(sp.M, noise(sp, rng))
        if gf2.det(A):
            break
    else:
        raise GenerationError("no nonsingular A found")
    B = gf2.add(gf2.power(sp.M, alpha), noise(sp, rng))
    S = _sample_s(sp, rng, max_tries)
    state = AliceDhweState(sp, alpha)
    state._advance(Phase.CREATED, Phase.SENT)
    return state, DhweInitMsg(A, B, S, sp.params.l)


def dhwe_bob_respond(
    msg: DhweInitMsg, rng: np.random.Generator, pins: Pins | None = None
) -> tuple[BobDhweState, DhweReplyMsg, SharedKey]:
    """``k_B = (B^beta)_j`` and ``Y = A^beta + R2 S``; ``j`` is read off ``S``."""
    pins = pins or Pins()
    msg.check()
    n, j = msg.n, msg.j
    beta = _pick(rng, pins.beta, 2, (1 << n) - 2, "beta", pins.relax_ranges)
    R2 = gf2.random_matrix(n, rng)
    key = gf2.column(gf2.power(msg.B, beta), j)
    Y = gf2.add(gf2.power(msg.A, beta), gf2.mul(R2, msg.S))
    state = BobDhweState(beta, R2, j)
    state._advance(Phase.CREATED, Phase.RECEIVED)
    state._set_key(key)
    return state, DhweReplyMsg(Y, msg.l, j), key


def dhwe_alice_finish(state: AliceDhweState, msg: DhweReplyMsg) -> SharedKey:
    """``k_A = (Y^alpha)_j``."""
    state._advance(Phase.SENT, Phase.RECEIVED)
    sp = state.secret
    _check_square("Y", msg.Y, sp.n)
    if msg.j != sp.j:
        raise ProtocolAbort(f"reply names column {msg.j}, expected {sp.j}")
    return state._set_key(gf2.column(gf2.power(msg.Y, state.alpha), sp.j))


# -- RSA-Resemble ------------------------------------------------------------------

def _sample_e(sp: SecretParams, rng) -> int:
    if sp.phi <= 4:
        raise ValueError("phi too small to pick e")
    while True:
        e = randint(rng, 3, sp.phi - 1)
        if e % 2 and math.gcd(e, sp.phi) == 1:
            return e


def rsar_alice_init(
    sp: SecretParams,
    rng: np.random.Generator,
    pins: Pins | None = None,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> tuple[AliceRsarState, RsarInitMsg]:
    """Random ``e`` in ``Z*_phi`` with ``d = e^-1 mod phi``; ``A = M + R0 Q`` and
    singular ``B = M^alpha + R1 Q``."""
    pins = pins or Pins()
    if pins.e is None:
        e = _sample_e(sp, rng)
    else:
        e = pins.e
        if not pins.relax_ranges and (e < 3 or e % 2 == 0 or e >= sp.phi):
            raise ValueError(f"pinned e={e} outside the odd range [3, phi)")
    d = mod_inverse(e, sp.phi)
    alpha = _alpha(sp, rng, pins)
    A = gf2.add(sp.M, noise(sp, rng))
    m_alpha = gf2.power(sp.M, alpha)
    for _ in range(max_tries):
        B = gf2.add(m_alpha, noise(sp, rng))
        if not gf2.det(B):
            break
    else:
        raise GenerationError("no singular B found")
    state = AliceRsarState(sp, alpha, e, d)
    state._advance(Phase.CREATED, Phase.SENT)
    return state, RsarInitMsg(A, B, e, sp.j, sp.params.l)


def rsar_bob_respond(
    msg: RsarInitMsg, rng: np.random.Generator, pins: Pins | None = None
) -> tuple[BobRsarState, RsarReplyMsg, SharedKey]:
    """``X = A^theta B^vartheta``, ``k_B = X_j``, ``Y = X^e``."""
    pins = pins or Pins()
    msg.check(allow_degenerate_e=pins.relax_ranges)
    half = 1 << (msg.n // 2)
    theta = _pick(rng, pins.theta, 0, half, "theta", pins.relax_ranges)
    vartheta = _pick(rng, pins.vartheta, 0, half, "vartheta", pins.relax_ranges)
    X = gf2.mul(gf2.power(msg.A, theta), gf2.power(msg.B, vartheta))
    key = gf2.column(X, msg.j)
    Y = gf2.power(X, msg.e)
    state = BobRsarState(theta, vartheta, X, msg.j)
    state._advance(Phase.CREATED, Phase.RECEIVED)
    state._set_key(key)
    return state, RsarReplyMsg(Y, msg.l, msg.j), key


def rsar_alice_finish(state: AliceRsarState, msg: RsarReplyMsg) -> SharedKey:
    """``k_A = (Y^d)_j``."""
    state._advance(Phase.SENT, Phase.RECEIVED)
    sp = state.secret
    _check_square("Y", msg.Y, sp.n)
    if msg.j != sp.j:
        raise ProtocolAbort(f"reply names column {msg.j}, expected {sp.j}")
    return state._set_key(gf2.column(gf2.power(msg.Y, state.d), sp.j))


# -- in-process runs -----------------------------------------------------------------

@dataclass(frozen=True)
class HandshakeResult:
    alice_key: SharedKey
    bob_key: SharedKey
    alice: _Session
    bob: _Session

    @property
    def matched(self) -> bool:
        return self.alice_key == self.bob_key


def run_dhwe(sp: SecretParams, rng: np.random.Generator, alice_pins: Pins | None = None,
             bob_pins: Pins | None = None) -> HandshakeResult:
    alice, init = dhwe_alice_init(sp, rng, alice_pins)
    bob, reply, k_b = dhwe_bob_respond(init, rng, bob_pins)
    k_a = dhwe_alice_finish(alice, reply)
    return HandshakeResult(k_a, k_b, alice, bob)


def run_rsar(sp: SecretParams, rng: np.random.Generator, alice_pins: Pins | None = None,
             bob_pins: Pins | None = None) -> HandshakeResult:
    alice, init = rsar_alice_init(sp, rng, alice_pins)
    bob, reply, k_b = rsar_bob_respond(init, rng, bob_pins)
    k_a = rsar_alice_finish(alice, reply)
    return HandshakeResult(k_a, k_b, alice, bob)
