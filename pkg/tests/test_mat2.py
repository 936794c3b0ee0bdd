import pytest

from matsemi.mat2 import (
    Mat2,
    class_base,
    idempotent_from_points,
    image_kernel,
    is_idempotent,
    is_nilpotent,
    nilpotent_from_point,
    random_matrix,
    rank,
    scalar_ratio,
)
from matsemi.projline import infinity, moebius_apply, point
from oracles import matmul


def _lists(m):
    return [list(r) for r in m.rows]


def test_product_matches_plain_formula(K, rng):
    for _ in range(20):
        x, y = random_matrix(K, rng), random_matrix(K, rng)
        assert _lists(x * y) == matmul(_lists(x), _lists(y))


def test_inverse_and_determinant(K, rng):
    for _ in range(10):
        g = random_matrix(K, rng, 2)
        assert g * g.inverse() == Mat2.identity(K)
        h = random_matrix(K, rng, 2)
        assert (g * h).det() == g.det() * h.det()


def test_rank_classes(K, rng):
    for r in (0, 1, 2):
        assert all(rank(random_matrix(K, rng, r)) == r for _ in range(10))


def test_image_kernel_of_rank_one(K, rng):
    for _ in range(25):
        x = random_matrix(K, rng, 1)
        v, u = image_kernel(x)
        a, b = u.coords()
        assert x.apply((a, b)) == (K.zero, K.zero)
        # the image is spanned by any nonzero column
        (p, q), (r, s) = x.rows
        col = (p, r) if (p or r) else (q, s)
        assert v.a * col[1] == v.b * col[0]


def test_idempotent_from_points(K):
    v, u = point(K, 1, 0), point(K, 1, 2)
    e = idempotent_from_points(v, u)
    assert is_idempotent(e) and image_kernel(e) == (v, u)
    with pytest.raises(ValueError):
        idempotent_from_points(v, v)


def test_nilpotent_from_point(K):
    v = point(K, 3, 1)
    n = nilpotent_from_point(v)
    assert is_nilpotent(n) and rank(n) == 1 and image_kernel(n) == (v, v)
    assert class_base(infinity(K), infinity(K)) == Mat2.of(K, ((0, -1), (0, 0)))


def test_zero_is_not_idempotent(K):
    assert not is_idempotent(Mat2.zero(K)) and is_nilpotent(Mat2.zero(K))


def test_scalar_ratio(K):
    x = Mat2.of(K, ((1, 2), (3, 4)))
    z = K.zeta()
    assert scalar_ratio(x.scale(z), x) == z
    assert scalar_ratio(x, Mat2.identity(K)) is None
    assert scalar_ratio(Mat2.zero(K), x) is None


def test_conjugated_idempotent_moves_points(K, rng):
    # g e g^-1 has image g.v and kernel g.u
    for _ in range(10):
        g = random_matrix(K, rng, 2)
        v, u = point(K, rng.randint(-3, 3)), infinity(K)
        e = idempotent_from_points(v, u)
        assert image_kernel(g * e * g.inverse()) == (moebius_apply(g, v), moebius_apply(g, u))
