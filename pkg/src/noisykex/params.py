"""Structured secret matrices ``M = F^-1 G F`` and their annihilator ``Q``.

``G = diag(D, C)`` where ``D`` is block-diagonal in ``d = [[1, 1], [0, 1]]``
(order 2) and ``C`` is block-diagonal in companion matrices of irreducible
polynomials (odd order ``r``). ``M`` then has order ``phi = 2r`` and
``Q = I + M^r`` has rank ``l/2``, kills column ``j`` and satisfies
``QM = MQ = Q``, ``Q^2 = 0``.

Polynomials over GF(2) are ints: bit ``i`` is the coefficient of ``x^i``.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from . import gf2
from ._polytable import PRIMITIVE_POLYS
from .errors import GenerationError, OrderUnavailableError, ReduciblePolynomialError
from .gf2 import BitMatrix

DEFAULT_MAX_TRIES = 10_000
# Trial division is only attempted below this bound.
FACTOR_LIMIT = 1 << 40

D_BLOCK = BitMatrix.from_rows([[1, 1], [0, 1]])


# -- polynomial arithmetic --------------------------------------------------

def _pmod(a: int, p: int) -> int:
    dp = p.bit_length()
    while a.bit_length() >= dp:
        a ^= p << (a.bit_length() - dp)
    return a


def _pmulmod(a: int, b: int, p: int) -> int:
    deg = p.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if (a >> deg) & 1:
            a ^= p
    return out


def _x_pow_mod(e: int, p: int) -> int:
    """``x**e mod p``."""
    result, base = _pmod(1, p), _pmod(2, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, p)
        base = _pmulmod(base, base, p)
        e >>= 1
    return result


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _prime_factors(n: int) -> dict[int, int]:
    """Trial division; callers keep ``n`` below ``FACTOR_LIMIT``."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_irreducible(mask: int) -> bool:
    """Rabin's test: ``x^(2^m) = x`` and no proper-subfield factor."""
    m = mask.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if not mask & 1:
        return False

    def x_pow2k(k: int) -> int:
        t = _pmod(2, mask)
        for _ in range(k):
            t = _pmulmod(t, t, mask)
        return t

    if x_pow2k(m) != _pmod(2, mask):
        return False
    for q in _prime_factors(m):
        if _pgcd(mask, x_pow2k(m // q) ^ _pmod(2, mask)) != 1:
            return False
    return True


@dataclass(frozen=True)
class PolySpec:
    """Monic polynomial over GF(2) with nonzero constant term."""

    mask: int
    known_order: int | None = None

    def __post_init__(self):
        if self.mask.bit_length() < 2:
            raise ValueError("polynomial degree must be >= 1")
        if not self.mask & 1:
            raise ValueError("constant term must be 1")
        if self.known_order is not None and self.known_order < 1:
            raise ValueError("known_order must be positive")

    @classmethod
    def from_exponents(cls, exponents: Sequence[int], known_order: int | None = None) -> "PolySpec":
        mask = 0
        for e in exponents:
            mask ^= 1 << e
        return cls(mask, known_order)

    @classmethod
    def parse(cls, text: str, known_order: int | None = None) -> "PolySpec":
        """Parse ``"x^8+x^4+x^3+x^2+1"`` style input."""
        mask = 0
        for term in text.replace(" ", "").split("+"):
            if term == "1":
                e = 0
            elif term == "x":
                e = 1
            else:
                hit = re.fullmatch(r"x\^(\d+)", term)
                if not hit:
                    raise ValueError(f"cannot parse term {term!r}")
                e = int(hit.group(1))
            mask ^= 1 << e
        return cls(mask, known_order)

    @property
    def degree(self) -> int:
        return self.mask.bit_length() - 1

    @property
    def coefficients(self) -> list[int]:
        """Coefficient bits, constant term first."""
        return [(self.mask >> i) & 1 for i in range(self.degree + 1)]

    def __str__(self) -> str:
        terms = []
        for e in range(self.degree, -1, -1):
            if (self.mask >> e) & 1:
                terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return "+".join(terms)


def primitive_poly(m: int) -> PolySpec:
    """Tabulated primitive polynomial of degree ``m`` (order ``2**m - 1``)."""
    if m == 1:
        return PolySpec(0b11)
    if m not in PRIMITIVE_POLYS:
        raise ValueError(f"no tabulated primitive polynomial of degree {m}")
    return PolySpec.from_exponents(PRIMITIVE_POLYS[m][0])


def companion(p: PolySpec) -> BitMatrix:
    """Companion matrix: ones on the subdiagonal, last column = low coefficients."""
    if not is_irreducible(p.mask):
        raise ReduciblePolynomialError(f"{p} is reducible over GF(2)")
    m = p.degree
    rows = []
    for i in range(m):
        row = (1 << (i - 1)) if i else 0
        if (p.mask >> i) & 1:
            row |= 1 << (m - 1)
        rows.append(row)
    return BitMatrix.from_int_rows(rows, m)


def _order_from_factors(mask: int, group: int, factors: dict[int, int]) -> tuple[int, dict[int, int]]:
    order = group
    remaining = dict(factors)
    for q in factors:
        while remaining[q] and _x_pow_mod(order // q, mask) == 1:
            order //= q
            remaining[q] -= 1
    return order, {q: e for q, e in remaining.items() if e}


def poly_order_factored(p: PolySpec) -> tuple[int, dict[int, int] | None]:
    """Order of ``p`` and its prime factorization (None when unknown)."""
    if not is_irreducible(p.mask):
        raise ReduciblePolynomialError(f"{p} is reducible over GF(2)")
    m = p.degree
    if p.known_order is not None:
        if _x_pow_mod(p.known_order, p.mask) != 1:
            raise ValueError(f"known_order {p.known_order} is not a period of {p}")
        if p.known_order >= FACTOR_LIMIT:
            return p.known_order, None  # trusted as the exact order
        # A period that is a multiple of the order still pins it down.
        return _order_from_factors(p.mask, p.known_order, _prime_factors(p.known_order))
    if m == 1:
        return 1, {}
    entry = PRIMITIVE_POLYS.get(m)
    if entry is not None:
        factors = dict(entry[1])
        if PolySpec.from_exponents(entry[0]).mask == p.mask:
            return (1 << m) - 1, factors
        return _order_from_factors(p.mask, (1 << m) - 1, factors)
    raise OrderUnavailableError(
        f"cannot compute the order of a degree-{m} polynomial; supply known_order"
    )


def poly_order(p: PolySpec) -> int:
    """Least ``k >= 1`` with ``companion(p)**k == I``."""
    return poly_order_factored(p)[0]


# -- parameters ---------------------------------------------------------------

@dataclass(frozen=True)
class SystemParams:
    """Public shape data: ``n = l + m``, the zero-column index ``j`` and the
    polynomials whose companions make up the C-block."""

    n: int
    l: int
    polys: tuple[PolySpec, ...]
    j: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if self.l < 2 or self.l % 2:
            raise ValueError(f"l must be even and >= 2, got {self.l}")
        if self.m < 1:
            raise ValueError("n must exceed l")
        degree_sum = sum(p.degree for p in self.polys)
        if degree_sum != self.m:
            raise ValueError(f"polynomial degrees sum to {degree_sum}, need m = {self.m}")
        if self.j is not None and not 0 <= self.j < self.n:
            raise ValueError(f"j = {self.j} out of range for n = {self.n}")

    @property
    def m(self) -> int:
        return self.n - self.l

    def with_j(self, j: int) -> "SystemParams":
        return replace(self, j=j)


def _preset(l: int, m: int) -> SystemParams:
    return SystemParams(l + m, l, (primitive_poly(m),))


PRESETS: dict[str, SystemParams] = {
    "toy-6": _preset(2, 4),
    "toy-8": _preset(4, 4),
    "toy-10": _preset(4, 6),
    "toy-12": _preset(4, 8),
    "toy-16": _preset(8, 8),
    "small-32": _preset(12, 20),
    "mid-64": _preset(14, 50),
    "lean-128": _preset(10, 118),
    "safe-128": _preset(30, 98),
}


def preset(name: str) -> SystemParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def recommended_l(n: int) -> int:
    """Smallest even ``l >= 2*(log2(n) + 8)``; spurious zero columns of Q then
    appear with probability below ``2**-8``."""
    l = math.ceil(2 * (math.log2(n) + 8))
    return l + (l % 2)


class Blocks(NamedTuple):
    D: BitMatrix
    C: BitMatrix
    G: BitMatrix
    r: int


class FSample(NamedTuple):
    F: BitMatrix
    F_inv: BitMatrix
    j: int


def _lcm_factors(parts: Sequence[dict[int, int] | None]) -> dict[int, int] | None:
    out: dict[int, int] = {}
    for f in parts:
        if f is None:
            return None
        for q, e in f.items():
            out[q] = max(out.get(q, 0), e)
    return out


def build_blocks(params: SystemParams) -> Blocks:
    """``D = diag(d, ..., d)``, ``C = diag(companions)``, ``G = diag(D, C)`` and
    ``r = lcm`` of the polynomial orders."""
    if params.l % 2:
        raise ValueError("l must be even")
    if sum(p.degree for p in params.polys) != params.m:
        raise ValueError("polynomial degrees must sum to m")
    D = gf2.block_diag(*[D_BLOCK] * (params.l // 2))
    C = gf2.block_diag(*[companion(p) for p in params.polys])
    r = math.lcm(*[poly_order(p) for p in params.polys])
    return Blocks(D, C, gf2.block_diag(D, C), r)


def _order_factors(params: SystemParams) -> dict[int, int] | None:
    return _lcm_factors([poly_order_factored(p)[1] for p in params.polys])


def build_F(params: SystemParams, rng: np.random.Generator, max_tries: int = DEFAULT_MAX_TRIES) -> FSample:
    """Random nonsingular ``F`` whose column ``j`` is zero in its first ``l`` rows.

    A column with at least ``l`` zeros is picked at random and ``l`` of its
    zero rows are moved to the top.
    """
    n, l = params.n, params.l
    for _ in range(max_tries):
        F = gf2.random_matrix(n, rng)
        if not gf2.gaussian_elim(F).det:
            continue
        zero_counts = n - gf2.column_weights(F)
        candidates = np.flatnonzero(zero_counts >= l)
        if not len(candidates):
            continue
        j = int(rng.choice(candidates))
        col = F.to_array()[:, j]
        zero_rows = np.flatnonzero(col == 0)
        top = rng.choice(zero_rows, size=l, replace=False)
        picked = set(top.tolist())
        rest = [r for r in range(n) if r not in picked]
        F = gf2.permute_rows(F, list(top) + rest)
        return FSample(F, gf2.inverse(F), j)
    raise GenerationError(f"no suitable F after {max_tries} samples")


@dataclass(frozen=True, repr=False)
class SecretParams:
    """Alice's private material. ``params`` is the public side with ``j`` set."""

    F: BitMatrix
    F_inv: BitMatrix
    G: BitMatrix
    M: BitMatrix
    Q: BitMatrix
    r: int
    phi: int
    j: int
    params: SystemParams
    phi_factors: dict[int, int] | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.params.n

    def __repr__(self) -> str:
        return f"SecretParams(n={self.params.n}, l={self.params.l}, j={self.j}, <secret>)"


@functools.lru_cache(maxsize=32)
def _generation_plan(params: SystemParams):
    blocks = build_blocks(params)
    # Q = F^-1 (I + G^r) F, so Q's zero columns are those of (I + G^r) F.
    shell = gf2.add(gf2.identity(params.n), gf2.power(blocks.G, blocks.r))
    return blocks, shell, _order_factors(params)


def assemble(params: SystemParams, F: BitMatrix, j: int, F_inv: BitMatrix | None = None) -> SecretParams:
    """Derive ``M``, ``Q`` and the orders from a chosen ``F`` and column ``j``.

    Raises ValueError unless ``F`` is invertible and ``j`` is the one zero
    column of the resulting ``Q``.
    """
    blocks, _, r_factors = _generation_plan(replace(params, j=None))
    if F.shape != (params.n, params.n):
        raise ValueError(f"F must be {params.n} x {params.n}")
    if F_inv is None:
        F_inv = gf2.gaussian_elim(F).inverse
        if F_inv is None:
            raise ValueError("F is singular")
    M = gf2.mul(gf2.mul(F_inv, blocks.G), F)
    Q = gf2.add(gf2.identity(params.n), gf2.power(M, blocks.r))
    if gf2.zero_columns(Q) != [j]:
        raise ValueError(f"column {j} is not the unique zero column of Q")
    phi_factors = None
    if r_factors is not None:
        phi_factors = dict(r_factors)
        phi_factors[2] = phi_factors.get(2, 0) + 1
    return SecretParams(
        F=F, F_inv=F_inv, G=blocks.G, M=M, Q=Q, r=blocks.r, phi=2 * blocks.r,
        j=j, params=params.with_j(j), phi_factors=phi_factors,
    )


def generate(params: SystemParams, rng: np.random.Generator, max_tries: int = DEFAULT_MAX_TRIES) -> SecretParams:
    """Sample ``F`` until ``Q`` has exactly one zero column, then build ``M`` and ``Q``."""
    _, shell, _ = _generation_plan(replace(params, j=None))
    for _ in range(max_tries):
        F, F_inv, j = build_F(params, rng, max_tries)
        if gf2.zero_columns(gf2.mul(shell, F)) != [j]:
            continue
        return assemble(params, F, j, F_inv)
    raise GenerationError(f"Q kept spurious zero columns after {max_tries} samples of F")


@dataclass
class ValidationReport:
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]

    def __str__(self) -> str:
        return "\n".join(f"{'PASS' if v else 'FAIL'}  {k}" for k, v in self.checks.items())


def validate(sp: SecretParams) -> ValidationReport:
    """Check every structural property the protocols rely on."""
    params = sp.params
    n, l, j = params.n, params.l, sp.j
    ident = gf2.identity(n)
    M, Q = sp.M, sp.Q
    m_r = gf2.power(M, sp.r)
    checks: dict[str, bool] = {}
    checks["f_inverse"] = gf2.mul(sp.F_inv, sp.F) == ident and gf2.mul(sp.F, sp.F_inv) == ident
    checks["f_column_zero_top"] = all(sp.F[i, j] == 0 for i in range(l))
    checks["m_conjugate"] = gf2.mul(gf2.mul(sp.F_inv, sp.G), sp.F) == M
    checks["r_odd"] = sp.r % 2 == 1
    checks["phi_is_2r"] = sp.phi == 2 * sp.r
    checks["m_phi_is_identity"] = gf2.power(M, sp.phi) == ident
    checks["m_r_not_identity"] = m_r != ident
    if sp.r > 1:
        checks["m_squared_not_identity"] = gf2.power(M, 2) != ident
    if sp.phi_factors is not None:
        checks["phi_exact_order"] = all(
            gf2.power(M, sp.phi // q) != ident for q in sp.phi_factors
        )
    checks["q_definition"] = Q == gf2.add(ident, m_r)
    checks["q_column_j_zero"] = gf2.column(Q, j).is_zero()
    checks["q_unique_zero_column"] = gf2.zero_columns(Q) == [j]
    checks["q_absorbs_m"] = gf2.mul(Q, M) == Q and gf2.mul(M, Q) == Q
    checks["q_nilpotent"] = gf2.mul(Q, Q).is_zero()
    return ValidationReport(checks)
