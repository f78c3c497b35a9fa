import functools

import pytest

from noisykex import params as P
from noisykex.gf2 import BitMatrix
from noisykex.rand import make_rng


def naive_mul(a, b):
    """Schoolbook product of 0/1 lists of lists, reduced mod 2."""
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] & b[t][j] for t in range(k)) & 1 for j in range(m)] for i in range(n)]


def naive_pow(a, k):
    n = len(a)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = naive_mul(out, a)
    return out


def naive_rank(rows):
    rows = [list(r) for r in rows]
    rank, n_cols = 0, len(rows[0]) if rows else 0
    for c in range(n_cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def brute_order(a: BitMatrix, cap: int = 1 << 16) -> int:
    n = a.n_rows
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    rows = a.to_list()
    cur = rows
    for k in range(1, cap + 1):
        if cur == ident:
            return k
        cur = naive_mul(cur, rows)
    raise AssertionError("order above cap")


@pytest.fixture
def rng():
    return make_rng(20261015)


@functools.lru_cache(maxsize=None)
def _secret(name: str, seed: int):
    return P.generate(P.preset(name), make_rng(seed))


@pytest.fixture(scope="session")
def secret_for():
    """Cached ``SecretParams`` per preset name."""
    return lambda name, seed=7: _secret(name, seed)


# Acceptance criteria append "PASS/FAIL ..." lines here; they are echoed in the
# terminal summary so they survive output capturing.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
