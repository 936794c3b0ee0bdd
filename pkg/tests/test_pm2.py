from matsemi.mat2 import Mat2, class_base, random_matrix
from matsemi.pm2 import PM2Elem, canonical_scale, pm2_mul, project, rank1_mul
from matsemi.projline import infinity, point


def test_projection_forgets_scalars(K, rng):
    for _ in range(20):
        x = random_matrix(K, rng)
        assert project(x.scale(K.from_coeffs([1, 1, 0, 2]))) == project(x)


def test_rank1_law(K):
    a, b, c = infinity(K), point(K, 0), point(K, 1)
    assert rank1_mul((a, b), (c, a)) == (a, a)
    assert rank1_mul((a, b), (b, c)) is None


def test_homomorphism_on_samples(K, rng):
    for _ in range(100):
        x, y = random_matrix(K, rng), random_matrix(K, rng)
        assert project(x * y) == pm2_mul(project(x), project(y))


def test_element_flags(K):
    v, u = infinity(K), point(K, 0)
    assert PM2Elem.rank1(v, u).is_idempotent and not PM2Elem.rank1(v, u).is_nilpotent
    assert PM2Elem.rank1(v, v).is_nilpotent
    assert PM2Elem.zero().is_nilpotent and not PM2Elem.zero().is_idempotent
    assert project(Mat2.identity(K).scale(K(5))).is_idempotent
    assert project(class_base(v, u)).representative() == class_base(v, u)


def test_canonical_scale_leads_with_one(K):
    x = Mat2.of(K, ((0, 4), (2, 6)))
    assert canonical_scale(x).rows[0][1] == 1
