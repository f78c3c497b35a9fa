"""Experiments around the noisy-power assumptions, at desk scale.

Sample generators for the DH-WE and RSA-R decision problems, a distinguisher
harness scoring adversary strategies, exhaustive-search attacks, and the
tail-pair experiment on powers of singular matrices.

Nothing here says anything about real security. The attacks are brute force
and only meaningful for n <= 12 or so.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Union

import numpy as np

from . import gf2
from .errors import GenerationError
from .gf2 import BitMatrix, BitVector
from .params import DEFAULT_MAX_TRIES, PRESETS, SecretParams, SystemParams, generate
from .protocols import Pins, _sample_e, _sample_s, mod_inverse, noise
from .rand import make_rng, randbelow, randint, spawn

_Z95 = statistics.NormalDist().inv_cdf(0.975)


# -- reporting -------------------------------------------------------------------------

@dataclass(frozen=True)
class Proportion:
    """``hits`` out of ``trials`` with a 95% Wilson score interval."""

    trials: int
    hits: int

    def __post_init__(self):
        if not 0 <= self.hits <= self.trials:
            raise ValueError("hits must lie in [0, trials]")

    @property
    def rate(self) -> float:
        return self.hits / self.trials if self.trials else float("nan")

    def wilson(self, z: float = _Z95) -> tuple[float, float]:
        if not self.trials:
            return 0.0, 1.0
        n, p = self.trials, self.rate
        denom = 1 + z * z / n
        centre = (p + z * z / (2 * n)) / denom
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
        lo = 0.0 if self.hits == 0 else max(0.0, centre - half)
        hi = 1.0 if self.hits == self.trials else min(1.0, centre + half)
        return lo, hi

    def as_dict(self) -> dict:
        lo, hi = self.wilson()
        return {"trials": self.trials, "hits": self.hits, "rate": self.rate, "ci_low": lo, "ci_high": hi}


@dataclass(frozen=True)
class ExperimentReport:
    """Outcome of a distinguishing experiment; ``advantage = |1 - 2 P[b' = b]|``."""

    name: str
    trials: int
    successes: int

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise ValueError("successes must lie in [0, trials]")

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def advantage(self) -> float:
        return abs(1 - 2 * self.success_rate)

    @property
    def sigma(self) -> float:
        """Standard deviation of the advantage estimate under ``P[b' = b] = 1/2``."""
        return 1 / math.sqrt(self.trials)

    @property
    def half_width(self) -> float:
        # adv = |1 - 2p|, so a Wilson interval on p of width w maps to 2w on adv.
        lo, hi = Proportion(self.trials, self.successes).wilson()
        return hi - lo

    def merge(self, other: "ExperimentReport") -> "ExperimentReport":
        return ExperimentReport(self.name, self.trials + other.trials, self.successes + other.successes)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "successes": self.successes,
            "advantage": self.advantage,
            "half_width": self.half_width,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def write_csv(rows: Iterable[dict], path) -> None:
    rows = list(rows)
    if not rows:
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


# -- samples ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Witness:
    secret: SecretParams
    alpha: int
    beta: int
    delta: int
    e: int | None = None
    d: int | None = None


@dataclass(frozen=True)
class DhweView:
    A: BitMatrix
    B: BitMatrix
    S: BitMatrix
    Y: BitMatrix
    v: BitVector


@dataclass(frozen=True)
class RsarView:
    A: BitMatrix
    B: BitMatrix
    e: int
    Y: BitMatrix
    v: BitVector


@dataclass(frozen=True)
class DhweSample:
    A: BitMatrix
    B: BitMatrix
    S: BitMatrix
    Y: BitMatrix
    v: BitVector
    hidden_bit: int = field(repr=False)
    witness: _Witness = field(repr=False, compare=False)

    @property
    def params(self) -> SystemParams:
        return self.witness.secret.params

    def view(self) -> DhweView:
        return DhweView(self.A, self.B, self.S, self.Y, self.v)


@dataclass(frozen=True)
class RsarSample:
    A: BitMatrix
    B: BitMatrix
    e: int
    Y: BitMatrix
    v: BitVector
    hidden_bit: int = field(repr=False)
    witness: _Witness = field(repr=False, compare=False)

    @property
    def params(self) -> SystemParams:
        return self.witness.secret.params

    def view(self) -> RsarView:
        return RsarView(self.A, self.B, self.e, self.Y, self.v)


def _noisy(sp: SecretParams, base: BitMatrix, rng, noiseless: bool) -> BitMatrix:
    return base if noiseless else gf2.add(base, noise(sp, rng))


def _other_than(rng, phi: int, avoid: int, max_tries: int) -> int:
    for _ in range(max_tries):
        gamma = randbelow(rng, phi)
        if gamma != avoid:
            return gamma
    raise GenerationError("could not draw gamma")


def gen_dhwe_sample(
    params: SystemParams,
    b: int,
    rng: np.random.Generator,
    *,
    secret: SecretParams | None = None,
    pins: Pins | None = None,
    noiseless: bool = False,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> DhweSample:
    """One draw of ``(A, B, S, Y, v)`` with ``v = (M^delta)_j``.

    ``delta = alpha*beta mod phi`` when ``b = 1``, otherwise a uniform
    ``gamma != alpha*beta mod phi``. A fresh secret is generated per call
    unless ``secret`` is given. ``noiseless`` drops the error terms on
    ``A``, ``B`` and ``Y`` (attack controls only).
    """
    pins = pins or Pins()
    sp = secret if secret is not None else generate(params, rng, max_tries)
    phi, M = sp.phi, sp.M
    alpha = pins.alpha if pins.alpha is not None else randbelow(rng, phi)
    beta = pins.beta if pins.beta is not None else randbelow(rng, phi)
    A = _noisy(sp, M, rng, noiseless)
    B = _noisy(sp, gf2.power(M, alpha), rng, noiseless)
    Y = _noisy(sp, gf2.power(M, beta), rng, noiseless)
    S = _sample_s(sp, rng, max_tries)
    target = alpha * beta % phi
    delta = target if b else _other_than(rng, phi, target, max_tries)
    v = gf2.column(gf2.power(M, delta), sp.j)
    return DhweSample(A, B, S, Y, v, int(b), _Witness(sp, alpha, beta, delta))


def gen_rsar_sample(
    params: SystemParams,
    b: int,
    rng: np.random.Generator,
    *,
    secret: SecretParams | None = None,
    pins: Pins | None = None,
    noiseless: bool = False,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> RsarSample:
    """One draw of ``(A, B, e, Y, v)``; ``v = (M^(d*beta))_j`` when ``b = 1``.

    ``d = e^-1 mod phi`` and ``Y = M^beta + R2 Q``, so for an honest RSA-R run
    (``beta = e*(theta + alpha*vartheta)``) the ``b = 1`` column is the agreed
    key.
    """
    pins = pins or Pins()
    sp = secret if secret is not None else generate(params, rng, max_tries)
    phi, M = sp.phi, sp.M
    e = pins.e if pins.e is not None else _sample_e(sp, rng)
    d = mod_inverse(e, phi)
    alpha = pins.alpha if pins.alpha is not None else randbelow(rng, phi)
    beta = pins.beta if pins.beta is not None else randbelow(rng, phi)
    A = _noisy(sp, M, rng, noiseless)
    B = _noisy(sp, gf2.power(M, alpha), rng, noiseless)
    Y = _noisy(sp, gf2.power(M, beta), rng, noiseless)
    target = d * beta % phi
    delta = target if b else _other_than(rng, phi, target, max_tries)
    v = gf2.column(gf2.power(M, delta), sp.j)
    return RsarSample(A, B, e, Y, v, int(b), _Witness(sp, alpha, beta, delta, e, d))


# -- attacks ----------------------------------------------------------------------------

def bruteforce_matrix_dlp(base: BitMatrix, target: BitMatrix, cap: int) -> int | None:
    """Least ``k`` in ``[1, cap]`` with ``base**k == target``, or None."""
    if not base.is_square:
        raise ValueError("base must be square")
    power = base
    for k in range(1, cap + 1):
        if power == target:
            return k
        power = gf2.mul(power, base)
    return None


def tail_pair(x: BitMatrix, cap: int = 1 << 16) -> tuple[int, int] | None:
    """Smallest ``s <= cap`` with ``x^s == x^t`` for some ``0 < t < s``.

    Only positive powers are indexed, so for invertible ``x`` of order ``w``
    the answer is ``(w + 1, 1)`` (the cycle through the identity is entered
    at ``x^1``).
    """
    if not x.is_square:
        raise ValueError("x must be square")
    seen: dict[bytes, int] = {}
    power = x
    for s in range(1, cap + 1):
        key = power.key()
        if key in seen:
            return s, seen[key]
        seen[key] = s
        power = gf2.mul(power, x)
    return None


def find_root_exponent(y: BitMatrix, x: BitMatrix, cap: int) -> int | None:
    """Least ``d`` in ``[1, cap]`` with ``y**d == x``.

    Stops early once the powers of ``y`` start repeating, since no new
    values can appear after that.
    """
    seen: set[bytes] = set()
    power = y
    for d in range(1, cap + 1):
        if power == x:
            return d
        key = power.key()
        if key in seen:
            return None
        seen.add(key)
        power = gf2.mul(power, y)
    return None


@dataclass(frozen=True)
class SearchOutcome:
    key: BitVector | None
    work: int


def bruteforce_key_search(
    view: Union[DhweView, RsarView, DhweSample, RsarSample], params: SystemParams, exponent_cap: int
) -> SearchOutcome:
    """Recover the shared key from public data by exponent search.

    DH-WE: find ``k`` with ``A^k = B`` and output ``(Y^k)_j``. RSA-R: find the
    order ``w`` of ``A`` and output ``(Y^(e^-1 mod w))_j``. Both only work on
    noiseless tuples; ``work`` counts candidate exponents tried.
    """
    if isinstance(view, (DhweSample, RsarSample)):
        view = view.view()
    j = params.j
    if isinstance(view, DhweView):
        k = bruteforce_matrix_dlp(view.A, view.B, exponent_cap)
        if k is None:
            return SearchOutcome(None, exponent_cap)
        return SearchOutcome(gf2.column(gf2.power(view.Y, k), j), k)
    order = bruteforce_matrix_dlp(view.A, gf2.identity(view.A.n_rows), exponent_cap)
    if order is None:
        return SearchOutcome(None, exponent_cap)
    if math.gcd(view.e, order) != 1:
        return SearchOutcome(None, order)
    d = pow(view.e, -1, order) if order > 1 else 1
    return SearchOutcome(gf2.column(gf2.power(view.Y, d), j), order)


# -- distinguishers ---------------------------------------------------------------------

Strategy = Callable[[Union[DhweView, RsarView], SystemParams, np.random.Generator], int]


def constant_strategy(bit: int = 0) -> Strategy:
    def guess(view, params, rng) -> int:
        return bit

    guess.__name__ = f"constant{bit}"
    return guess


def bitcount_strategy(view, params, rng) -> int:
    """Guess ``b = 1`` when ``v`` has more ones than zeros."""
    return int(2 * view.v.weight() > view.v.length)


def key_search_strategy(cap: int) -> Strategy:
    """Run :func:`bruteforce_key_search`; guess ``b = 1`` iff it reproduces ``v``."""

    def guess(view, params, rng) -> int:
        outcome = bruteforce_key_search(view, params, cap)
        if outcome.key is None:
            return int(rng.integers(2))
        return int(outcome.key == view.v)

    guess.__name__ = f"key_search{cap}"
    return guess


def run_distinguisher(
    kind: Literal["dhwe", "rsar"],
    strategy: Strategy,
    trials: int,
    params: SystemParams,
    rng: np.random.Generator,
    *,
    noiseless: bool = False,
    name: str | None = None,
) -> ExperimentReport:
    """Score ``strategy`` on ``trials`` fresh samples with a uniform hidden bit.

    Each trial draws from its own child stream, so results do not depend on
    evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    gen = {"dhwe": gen_dhwe_sample, "rsar": gen_rsar_sample}[kind]
    successes = 0
    for child in spawn(rng, trials):
        b = int(child.integers(2))
        sample = gen(params, b, child, noiseless=noiseless)
        guess = strategy(sample.view(), sample.params, child)
        successes += int(guess == b)
    label = name or f"{kind}:{getattr(strategy, '__name__', 'strategy')}"
    return ExperimentReport(label, trials, successes)


# -- experiments ------------------------------------------------------------------------

def params_for_dimension(n: int) -> SystemParams:
    """Smallest-``l`` preset with dimension ``n``."""
    matches = sorted((p for p in PRESETS.values() if p.n == n), key=lambda p: p.l)
    if not matches:
        raise ValueError(f"no preset with n = {n}; available: {sorted({p.n for p in PRESETS.values()})}")
    return matches[0]


def _nonsingular_noisy(sp, base, rng, max_tries):
    for _ in range(max_tries):
        a = gf2.add(base, noise(sp, rng))
        if gf2.det(a):
            return a
    raise GenerationError("no nonsingular sample")


def _singular_noisy(sp, base, rng, max_tries):
    for _ in range(max_tries):
        a = gf2.add(base, noise(sp, rng))
        if not gf2.det(a):
            return a
    raise GenerationError("no singular sample")


@dataclass(frozen=True)
class DlpContrast:
    clean: Proportion
    noisy: Proportion

    def as_dict(self) -> dict:
        return {"clean": self.clean.as_dict(), "noisy": self.noisy.as_dict()}


def dlp_contrast(params: SystemParams, trials: int, cap: int, rng: np.random.Generator,
                 params_every: int = 10) -> DlpContrast:
    """Exhaustive DLP on ``(M, M^alpha)`` versus ``(M + R0 Q, M^alpha + R1 Q)``.

    ``clean`` counts exact recoveries of the planted ``alpha``; ``noisy`` counts
    trials where any exponent ``k <= cap`` maps the noisy base to the noisy
    target.
    """
    clean = noisy = 0
    sp = None
    for t, child in enumerate(spawn(rng, trials)):
        if t % params_every == 0:
            sp = generate(params, child)
        alpha = randint(child, 2, sp.r - 1)
        m_alpha = gf2.power(sp.M, alpha)
        clean += bruteforce_matrix_dlp(sp.M, m_alpha, cap) == alpha
        A = gf2.add(sp.M, noise(sp, child))
        B = gf2.add(m_alpha, noise(sp, child))
        noisy += bruteforce_matrix_dlp(A, B, cap) is not None
    return DlpContrast(Proportion(trials, clean), Proportion(trials, noisy))


@dataclass(frozen=True)
class RootExperimentReport:
    """Frequency with which some ``d'`` inverts ``Y = X^e``.

    ``singular``: ``X = A^theta B^vartheta`` with singular ``B``, ``vartheta >= 1``.
    ``control``: invertible ``X = A^theta``, counted only when ``gcd(e, ord X) = 1``.
    ``mismatches``: trials where the search disagreed with the prediction from
    the tail pair of ``X``.
    """

    n: int
    singular: Proportion
    control: Proportion
    mismatches: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "singular": self.singular.as_dict(),
            "control": self.control.as_dict(),
            "mismatches": self.mismatches,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _root_predicted(x: BitMatrix, e: int, cap: int) -> bool:
    s, t = tail_pair(x, cap)
    # x^1 recurs only when it sits on the cycle (t == 1); the cycle has
    # length s - 1 and e must be invertible modulo it.
    return t == 1 and math.gcd(e, s - 1) == 1


def root_recovery_experiment(
    n: int,
    trials: int,
    e_range: tuple[int, int] = (3, 31),
    rng: np.random.Generator | None = None,
    *,
    cap: int | None = None,
    params: SystemParams | None = None,
    params_every: int = 100,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> RootExperimentReport:
    """Measure how often ``(X^e)^d' = X`` is solvable for singular ``X``.

    ``e`` is drawn uniformly from the odd numbers in ``e_range``. Secrets are
    regenerated every ``params_every`` trials.
    """
    if n > 10:
        raise ValueError("desk-scale experiment: n must be <= 10")
    if rng is None:
        rng = make_rng()
    params = params or params_for_dimension(n)
    cap = cap or (1 << (2 * n))
    odd_es = [e for e in range(e_range[0], e_range[1] + 1) if e % 2]
    half = 1 << (n // 2)
    sing_hits = ctrl_trials = ctrl_hits = mismatches = 0
    sp = None
    for t, child in enumerate(spawn(rng, trials)):
        if t % params_every == 0:
            sp = generate(params, child, max_tries)
        e = odd_es[int(child.integers(len(odd_es)))]

        A = gf2.add(sp.M, noise(sp, child))
        B = _singular_noisy(sp, gf2.power(sp.M, randint(child, 2, max(2, sp.r - 1))), child, max_tries)
        X = gf2.mul(gf2.power(A, randint(child, 0, half)), gf2.power(B, randint(child, 1, half)))
        hit = find_root_exponent(gf2.power(X, e), X, cap) is not None
        sing_hits += hit
        mismatches += hit != _root_predicted(X, e, cap)

        A = _nonsingular_noisy(sp, sp.M, child, max_tries)
        X = gf2.power(A, randint(child, 1, half))
        s, _ = tail_pair(X, cap)
        if math.gcd(e, s - 1) == 1:
            ctrl_trials += 1
            hit = find_root_exponent(gf2.power(X, e), X, cap) is not None
            ctrl_hits += hit
            mismatches += hit != _root_predicted(X, e, cap)
    return RootExperimentReport(n, Proportion(trials, sing_hits), Proportion(ctrl_trials, ctrl_hits), mismatches)


def key_search_scaling(
    preset_names: Iterable[str], trials: int, rng: np.random.Generator
) -> list[dict]:
    """Median exhaustive-search work on noiseless DH-WE tuples, per preset."""
    rows = []
    for name in preset_names:
        params = PRESETS[name]
        works, phis, found = [], [], 0
        for child in spawn(rng, trials):
            sample = gen_dhwe_sample(params, 1, child, noiseless=True)
            phi = sample.witness.secret.phi
            outcome = bruteforce_key_search(sample, sample.params, phi)
            found += outcome.key == sample.v
            works.append(outcome.work)
            phis.append(phi)
        phi = phis[0]
        rows.append({
            "preset": name,
            "m": params.m,
            "phi": phi,
            "median_work": statistics.median(works),
            "work_over_phi": statistics.median(works) / phi,
            "recovered": found / trials,
        })
    return rows
