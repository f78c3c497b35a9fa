import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from noisykex import gf2
from noisykex.gf2 import BitMatrix, BitVector

from conftest import naive_mul, naive_pow, naive_rank


def bit_matrices(n_min=1, n_max=70, square=True):
    @st.composite
    def build(draw):
        n = draw(st.integers(n_min, n_max))
        m = n if square else draw(st.integers(n_min, n_max))
        rows = draw(st.lists(st.integers(0, (1 << m) - 1), min_size=n, max_size=n))
        return BitMatrix.from_int_rows(rows, m)
    return build()


def test_identity_and_zero_shapes():
    assert gf2.identity(3).to_list() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert BitMatrix.zeros(2, 5).shape == (2, 5)
    assert BitMatrix.zeros(4).is_zero()


def test_constructors_agree():
    rows = [[1, 0, 1], [0, 1, 1]]
    a = BitMatrix.from_rows(rows)
    assert a == BitMatrix.from_int_rows([0b101, 0b110], 3)
    assert a.to_list() == rows
    assert a.to_array().tolist() == rows
    assert a[0, 2] == 1 and a[1, 0] == 0


def test_padding_bits_rejected():
    words = np.array([[1 << 5]], dtype=np.uint64)
    with pytest.raises(ValueError):
        BitMatrix(words, 3)


def test_matrices_are_immutable():
    a = gf2.identity(4)
    with pytest.raises(ValueError):
        a.words[0, 0] = 0


@pytest.mark.parametrize("n", [1, 7, 63, 64, 65, 95, 96, 128, 130])
def test_mul_matches_schoolbook(n, rng):
    a, b = gf2.random_matrix(n, rng), gf2.random_matrix(n, rng)
    assert gf2.mul(a, b).to_list() == naive_mul(a.to_list(), b.to_list())


def test_rectangular_mul(rng):
    a = gf2.random_matrix(5, rng, n_cols=100)
    b = gf2.random_matrix(100, rng, n_cols=9)
    assert gf2.mul(a, b).to_list() == naive_mul(a.to_list(), b.to_list())
    with pytest.raises(ValueError):
        gf2.mul(b, b)


@pytest.mark.parametrize("n", [2, 5, 8])
def test_power_matches_repeated_mul(n, rng):
    a = gf2.random_matrix(n, rng)
    for k in (0, 1, 2, 3, 17, 40):
        assert gf2.power(a, k).to_list() == naive_pow(a.to_list(), k)


def test_power_rejects_negative_and_nonsquare(rng):
    with pytest.raises(ValueError):
        gf2.power(gf2.identity(3), -1)
    with pytest.raises(ValueError):
        gf2.power(gf2.random_matrix(2, rng, n_cols=3), 2)


def test_huge_exponent_is_exact():
    # d = [[1,1],[0,1]] has order 2, so only the parity of k matters.
    d = BitMatrix.from_rows([[1, 1], [0, 1]])
    assert gf2.power(d, 2**200) == gf2.identity(2)
    assert gf2.power(d, 2**200 + 1) == d


@settings(max_examples=60, deadline=None)
@given(bit_matrices(n_max=40), st.integers(0, 300), st.integers(0, 300))
def test_exponent_law(a, j, k):
    assert gf2.mul(gf2.power(a, j), gf2.power(a, k)) == gf2.power(a, j + k)
    assert gf2.power(gf2.power(a, j % 20), k % 20) == gf2.power(a, (j % 20) * (k % 20))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_distributive_and_associative(data):
    n = data.draw(st.integers(1, 80))
    draw = lambda: data.draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    a, b, c = (BitMatrix.from_int_rows(draw(), n) for _ in range(3))
    assert a @ (b + c) == a @ b + a @ c
    assert (a @ b) @ c == a @ (b @ c)


@settings(max_examples=60, deadline=None)
@given(bit_matrices(n_max=90))
def test_addition_is_an_involution(a):
    assert (a + a).is_zero()
    assert a + BitMatrix.zeros(a.n_rows) == a


@settings(max_examples=80, deadline=None)
@given(bit_matrices(n_max=70))
def test_inverse_when_nonsingular(a):
    res = gf2.gaussian_elim(a)
    assert res.rank == naive_rank(a.to_list())
    assert res.det == int(res.rank == a.n_rows)
    if res.det:
        ident = gf2.identity(a.n_rows)
        assert a @ res.inverse == ident and res.inverse @ a == ident
    else:
        assert res.inverse is None
        with pytest.raises(ValueError):
            gf2.inverse(a)


@settings(max_examples=60, deadline=None)
@given(bit_matrices(n_max=50, square=False))
def test_rank_of_rectangular(a):
    assert gf2.rank(a) == naive_rank(a.to_list())


def test_vstack_and_rank(rng):
    a = gf2.random_matrix(6, rng)
    stacked = gf2.vstack(a, a)
    assert stacked.shape == (12, 6)
    assert gf2.rank(stacked) == gf2.rank(a)


def test_column_and_zero_columns():
    a = BitMatrix.from_rows([[1, 0, 0, 1], [0, 0, 1, 1], [1, 0, 0, 0]])
    assert gf2.column(a, 0).bits() == [1, 0, 1]
    assert gf2.column(a, 1).is_zero()
    assert gf2.zero_columns(a) == [1]
    assert gf2.column_weights(a).tolist() == [2, 0, 1, 2]


def test_permute_rows_and_block_diag():
    a = BitMatrix.from_rows([[1, 0], [1, 1]])
    assert gf2.permute_rows(a, [1, 0]).to_list() == [[1, 1], [1, 0]]
    with pytest.raises(ValueError):
        gf2.permute_rows(a, [0, 0])
    blk = gf2.block_diag(a, gf2.identity(1))
    assert blk.to_list() == [[1, 0, 0], [1, 1, 0], [0, 0, 1]]


def test_bitvector_roundtrips():
    v = BitVector.from_bits([1, 0, 1, 1, 0, 0, 0, 0, 1])
    assert v.to_int() == 0b100001101
    assert v.bits() == [1, 0, 1, 1, 0, 0, 0, 0, 1]
    assert v.to_bytes() == bytes([0b00001101, 0b1])
    assert v.hex() == "0d01"
    assert v.weight() == 4 and not v.is_zero()
    assert BitVector.from_int(v.to_int(), 9) == v
    with pytest.raises(ValueError):
        BitVector.from_int(1 << 9, 9)


def test_random_matrix_is_uniformish(rng):
    ones = sum(gf2.random_matrix(65, rng).to_array().sum() for _ in range(20))
    assert abs(ones / (20 * 65 * 65) - 0.5) < 0.02
