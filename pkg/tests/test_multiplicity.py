from fractions import Fraction

import pytest

from matsemi.mat2 import Mat2, class_base, idempotent_from_points, is_nilpotent
from matsemi.multiplicity import (
    NilpotentProduct,
    PreconditionError,
    SingularPart,
    ZeroProduct,
    check_multiplicity_laws,
    compute_multiplicities,
    lambda_preimage,
    lambda_product,
    nilpotent_product,
    nilpotent_product_formula,
    saturate,
)
from matsemi.projline import infinity, point
from matsemi.scalar import Multiplicity
from oracles import matmul


def _plain(m):
    # rational matrices only: drop to Fractions so the oracle never touches Cyclo
    return [[Fraction(x.coeffs[0]) for x in row] for row in m.rows]


def _idem_plain(v, u):
    # x with image v and kernel u, solved by hand: x = v (u-perp)^T / <u-perp, v>
    (a, b), (c, d) = [tuple(Fraction(t.coeffs[0]) for t in p.coords()) for p in (v, u)]
    s = a * d - b * c
    return [[a * d / s, -a * c / s], [b * d / s, -b * c / s]]


def _distinct(K, rng, k):
    # rational points only, so the Fraction oracle applies
    out = []
    while len(out) < k:
        p = infinity(K) if rng.random() < 0.1 else point(K, rng.randint(-9, 9), rng.randint(1, 5))
        if p not in out:
            out.append(p)
    return out


def test_lambda_examples(K):
    e = (infinity(K), point(K, 0))
    assert lambda_product(e, e)[0] == 1
    lam, h = lambda_product(e, (point(K, 1), point(K, 1, 2)))
    assert lam == 2 and h == (infinity(K), point(K, 1, 2))
    assert _plain(idempotent_from_points(*e) * idempotent_from_points(point(K, 1), point(K, 1, 2))) == \
        [[2, -1], [0, 0]]


def test_lambda_error_routing(K):
    inf, zero, one = infinity(K), point(K, 0), point(K, 1)
    with pytest.raises(NilpotentProduct):
        lambda_product((inf, zero), (one, inf))
    with pytest.raises(ZeroProduct):
        lambda_product((inf, zero), (zero, one))
    with pytest.raises(PreconditionError):
        lambda_product((inf, inf), (zero, one))


def test_lambda_matches_matrix_oracle(K, rng):
    done = 0
    while done < 100:
        v, u, x, w = _distinct(K, rng, 2) + _distinct(K, rng, 2)
        if v == u or x == w or u == x or v == w:
            continue
        lam, h = lambda_product((v, u), (x, w))
        lhs = matmul(_idem_plain(v, u), _idem_plain(x, w))
        rhs = [[Fraction(lam.coeffs[0]) * t for t in row] for row in _idem_plain(*h)]
        assert lhs == rhs
        done += 1


def test_lambda_is_representative_independent(K):
    v, u, x, w = point(K, 3), point(K, -1), point(K, 2), point(K, 5)
    lam, _ = lambda_product((v, u), (x, w))
    raw = lambda p, s: (p.a * s, p.b * s)
    assert lambda_product((raw(v, K(2)), raw(u, K(-3))), (raw(x, K(7)), w))[0] == lam


def test_lambda_preimage_round_trip(K):
    v, v2, u2 = infinity(K), point(K, 1), point(K, 1, 2)
    for lam in (K(2), K(1), K(-5), K.zeta()):
        c = lambda_preimage(lam, v, v2, u2)
        assert lambda_product((v, c), (v2, u2))[0] == lam
    # lambda = 1 is hit by [1:2]; [0:1] gives lambda = 2
    assert lambda_preimage(K(1), v, v2, u2) == point(K, 1, 2)
    assert lambda_preimage(K(2), v, v2, u2) == point(K, 0)


def test_lambda_preimage_is_injective(K):
    v, v2, u2 = infinity(K), point(K, 1), point(K, 1, 2)
    pts = {lambda_preimage(K(n), v, v2, u2) for n in range(1, 30)}
    assert len(pts) == 29


def test_lambda_preimage_preconditions(K):
    v, w = infinity(K), point(K, 1)
    with pytest.raises(PreconditionError):
        lambda_preimage(K(0), v, w, point(K, 2))
    with pytest.raises(PreconditionError):
        lambda_preimage(K(1), v, v, w)


def test_nilpotent_product_example(K):
    e = (infinity(K), point(K, 0))
    f = (point(K, 1), infinity(K))
    n = nilpotent_product(e, f)
    assert n == Mat2.of(K, [[0, 1], [0, 0]])
    assert nilpotent_product_formula(e, f) == n
    assert nilpotent_product_formula(e, f) == Mat2.of(K, [[0, -1], [0, 0]]).scale(K(-1))
    with pytest.raises(ZeroProduct):
        nilpotent_product((infinity(K), point(K, 1)), (point(K, 1), infinity(K)))


def test_nilpotent_formula_agrees_with_product(K, rng):
    done = 0
    while done < 60:
        v, u, x = _distinct(K, rng, 3)
        n = nilpotent_product((v, u), (x, v))
        assert n == nilpotent_product_formula((v, u), (x, v))
        assert is_nilpotent(n) and (n * n).is_zero()
        done += 1


def test_nilpotent_scale_invariance(K):
    v, u, x = point(K, 2), point(K, -1), point(K, 3)
    n = nilpotent_product((v, u), (x, v))
    assert n == nilpotent_product(((v.a * 2, v.b * 2), (u.a * 5, u.b * 5)), ((x.a * 3, x.b * 3), v.coords()))


def test_roots_of_unity_class(K):
    e = class_base(infinity(K), point(K, 0))
    w = K.root_of_unity(6)
    part = compute_multiplicities([e.scale(w ** k) for k in range(6)] + [Mat2.zero(K)])
    assert part.z_idempotent == Multiplicity.roots(6)


def test_non_torsion_generator_gives_full(K):
    e = class_base(infinity(K), point(K, 0))
    part = compute_multiplicities([e.scale(K(2))], closed=False)
    assert part.z_idempotent.is_full


def test_mixed_scalar_star_has_unequal_multiplicities(K):
    w = K.root_of_unity(6)
    e, f = Mat2.diag(K.one, K.zero), Mat2.diag(K.zero, K.one)
    elems = [e, e.scale(K(2)), Mat2.zero(K)] + [f.scale(w ** k) for k in range(6)]
    part = compute_multiplicities(elems)
    assert not part.equal_multiplicity
    checks = {c.law: c for c in check_multiplicity_laws(part, K)}
    assert checks["equal idempotent multiplicity"].status == "exempt"
    assert all(c.ok for c in checks.values())


def test_saturate_closes_scalars(K):
    k = (infinity(K), point(K, 0))
    state, has_zero = saturate({k: {K.root_of_unity(4)}}, False)
    assert state[k] == set(K.roots_of_unity(4)) and not has_zero
    state, has_zero = saturate({k: {K.one}, (point(K, 0), infinity(K)): {K.one}}, False)
    assert has_zero and len(state) == 2


def _two_sided_part(K, z):
    pts = [infinity(K), point(K, 0), point(K, 1)]
    gens = [class_base(a, b).scale(z) for a in pts[:2] for b in pts[1:] if a != b]
    gens.append(class_base(pts[0], pts[1]))
    return compute_multiplicities(gens, closed=False)


def test_law_nilpotent_matches_idempotent(K):
    part = _two_sided_part(K, K(3))
    checks = {c.law: c for c in check_multiplicity_laws(part, K)}
    assert part.z_nilpotent is not None
    assert checks["Z_n = Z_e"].status == "pass"
    assert checks["equal idempotent multiplicity"].status == "pass"


def test_law_one_sided_nilpotent_ideal(K):
    v, u1, u2 = infinity(K), point(K, 0), point(K, 1)
    gens = [class_base(v, u1).scale(K.root_of_unity(4)), class_base(v, u2), class_base(v, v)]
    part = compute_multiplicities(gens, closed=False)
    checks = {c.law: c for c in check_multiplicity_laws(part, K)}
    assert checks["nilpotents form an ideal"].status == "pass"
    assert checks["at most one nilpotent class"].status == "pass"
    assert checks["Z_e within Z_n"].status == "pass"
    assert checks["idempotent products are idempotent"].status == "pass"


def test_law_check_reports_violations(K):
    # hand-built data breaking equal multiplicity on a B_{F,G} shape
    part = _two_sided_part(K, K.root_of_unity(4))
    k0 = part.classes[0]
    broken = SingularPart(
        shape=part.shape, z_idempotent=None, z_nilpotent=part.z_nilpotent,
        nilpotent_base=part.nilpotent_base, equal_multiplicity=False,
        classes=((k0[0], k0[1], Multiplicity.roots(2)),) + part.classes[1:],
    )
    checks = {c.law: c for c in check_multiplicity_laws(broken, K)}
    assert not checks["equal idempotent multiplicity"].ok or not checks["Z_n = Z_e"].ok


def test_type_b_decomposition_law(K):
    c, v1, v2, u = infinity(K), point(K, 0), point(K, 1), point(K, 2)
    part = compute_multiplicities([class_base(v1, c), class_base(v2, c), class_base(c, u)], closed=False)
    assert part.shape.kind == "B"
    checks = {ch.law: ch for ch in check_multiplicity_laws(part, K)}
    assert checks["type B decomposition"].status == "pass"


def test_many_kernels_force_full(K):
    v = infinity(K)
    kernels = [point(K, n) for n in range(K.torsion + 4)]
    part = compute_multiplicities([class_base(v, u) for u in kernels] + [class_base(point(K, -1, 2), kernels[0])],
                                  closed=False)
    assert part.z_idempotent.is_full
    checks = {c.law: c for c in check_multiplicity_laws(part, K)}
    assert checks["many classes force C^x"].status == "pass"


def test_singular_input_only(K):
    with pytest.raises(PreconditionError):
        compute_multiplicities([Mat2.identity(K)])
