import random

import pytest

from baercode.errors import (
    DimensionMismatchError,
    DuplicatePointError,
    NotPrimeError,
    SingularMatrixError,
    ZeroPointError,
    ZeroToNegativePowerError,
)
from baercode.galois import Field, Mat, field_new, mat_inv, mat_mul, rank, solve_right, vandermonde


def brute_force_order(x, p):
    v, order = x % p, 1
    while v != 1:
        v = v * x % p
        order += 1
    return order


def test_generator_is_smallest_full_order():
    # independently: smallest c in 2..p-1 with multiplicative order p-1
    for p in (7, 13, 101):
        fld = field_new(p)
        expected = next(c for c in range(2, p) if brute_force_order(c, p) == p - 1)
        assert fld.g == expected
        assert brute_force_order(fld.g, p) == p - 1


def test_known_generators():
    assert Field(7).g == 3
    assert Field(13).g == 2


def test_rejects_non_primes_and_tiny_moduli():
    for bad in (2, 1, 0, -5, 4, 9, 15, 2**16):
        with pytest.raises(NotPrimeError):
            Field(bad)
    with pytest.raises(NotPrimeError):
        Field("7")


def test_pow_negative_and_identities():
    f7 = Field(7)
    assert f7.pow(3, -1) == 5          # 3*5 = 15 = 1 mod 7
    assert f7.pow(f7.g, 0) == 1
    assert f7.pow(3, 6) == 1           # order divides p-1
    assert f7.pow(0, 0) == 1
    assert f7.pow(0, 3) == 0
    with pytest.raises(ZeroToNegativePowerError):
        f7.pow(0, -2)
    with pytest.raises(ZeroToNegativePowerError):
        f7.inv(0)


def test_scalar_ops_randomized():
    rng = random.Random(11)
    for p in (7, 13, 101):
        fld = Field(p)
        for _ in range(200):
            a = rng.randrange(p)
            assert fld.add(a, fld.neg(a)) == 0
            if a:
                assert fld.mul(a, fld.inv(a)) == 1
            b = rng.randrange(p)
            assert fld.mul(a, b) == a * b % p
            assert fld.sub(a, b) == (a - b) % p


def test_vandermonde_values():
    f7 = Field(7)
    assert vandermonde(f7, [3, 2], 3).tolist() == [[1, 3, 2], [1, 2, 4]]
    assert vandermonde(f7, [1], 1).tolist() == [[1]]
    with pytest.raises(DuplicatePointError):
        vandermonde(f7, [3, 3], 2)
    with pytest.raises(ZeroPointError):
        vandermonde(f7, [0, 1], 2)


def test_vandermonde_full_column_rank_randomized():
    rng = random.Random(5)
    for p in (7, 13, 101):
        fld = Field(p)
        for _ in range(25):
            rows = rng.randrange(1, min(p - 1, 8) + 1)
            cols = rng.randrange(1, rows + 1)
            points = rng.sample(range(1, p), rows)
            assert rank(vandermonde(fld, points, cols)) == cols


def test_rank_of_wide_vandermonde_matches_minor_oracle():
    f7 = Field(7)
    m = vandermonde(f7, [3, 2], 3)
    # oracle: largest nonsingular square submatrix via explicit 2x2 minors
    minors = [
        (m[0, i] * m[1, j] - m[0, j] * m[1, i]) % 7
        for i in range(3)
        for j in range(i + 1, 3)
    ]
    assert any(minors)
    assert rank(m) == 2


def test_identity_and_vandermonde_inverse():
    f7 = Field(7)
    eye = Mat.identity(f7, 2)
    assert mat_inv(eye) == eye
    v = vandermonde(f7, [3, 2], 2)
    vi = mat_inv(v)
    assert mat_mul(v, vi) == eye
    assert mat_mul(vi, v) == eye


def test_inverse_and_solve_randomized():
    rng = random.Random(17)
    for p in (7, 13, 101):
        fld = Field(p)
        for _ in range(20):
            n = rng.randrange(1, 6)
            while True:
                a = Mat(fld, [[rng.randrange(p) for _ in range(n)] for _ in range(n)])
                if a.rank() == n:
                    break
            ai = a.inv()
            eye = Mat.identity(fld, n)
            assert a @ ai == eye
            assert ai @ a == eye
            y = [rng.randrange(p) for _ in range(n)]
            x = solve_right(y, a)
            assert a.left_mul(x) == tuple(y)


def test_singular_and_dimension_errors():
    f7 = Field(7)
    singular = Mat(f7, [[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError):
        singular.inv()
    with pytest.raises(SingularMatrixError):
        singular.solve_right([1, 0])
    with pytest.raises(DimensionMismatchError):
        Mat(f7, [[1, 2], [3]])
    with pytest.raises(DimensionMismatchError):
        Mat(f7, [[1, 2]]) @ Mat(f7, [[1, 2]])
    with pytest.raises(DimensionMismatchError):
        Mat(f7, [[1, 2]]).inv()


def test_matmul_and_transpose_shapes():
    f13 = Field(13)
    a = Mat(f13, [[1, 2, 3], [4, 5, 6]])
    b = Mat(f13, [[1, 0], [0, 1], [1, 1]])
    ab = a @ b
    assert ab.shape == (2, 2)
    assert ab.tolist() == [[(1 + 3) % 13, (2 + 3) % 13], [(4 + 6) % 13, (5 + 6) % 13]]
    assert a.transpose().shape == (3, 2)
    assert a.transpose().transpose() == a


def test_empty_width_matrices_multiply():
    # kappa x 0 blocks show up when lam == kappa; products must stay sane
    f7 = Field(7)
    a = Mat(f7, [[], []], cols=0)
    b = Mat.zeros(f7, 0, 2)
    assert (a @ b).tolist() == [[0, 0], [0, 0]]
