import pytest
from hypothesis import given, settings, strategies as st

from matsemi.mat2 import Mat2, random_matrix
from matsemi.projline import PointSet, infinity, moebius_apply, normalize, point, sorted_points


def test_canonical_form(K):
    assert normalize(K(2), K(4)) == point(K, 1, 2) == point(K, 3, 6)
    assert normalize(K(5), K(0)) == infinity(K)
    assert point(K, 1, 2).b == 1 and infinity(K).a == 1
    with pytest.raises(ValueError):
        normalize(K(0), K(0))


def test_infinity_sorts_first(K):
    pts = [point(K, 3), infinity(K), point(K, -1), point(K, 0)]
    assert sorted_points(pts)[0] == infinity(K)
    assert sorted_points(pts) == sorted_points(reversed(pts))


def test_moebius_action_is_an_action(K, rng):
    for _ in range(30):
        g, h = random_matrix(K, rng, 2), random_matrix(K, rng, 2)
        p = point(K, rng.randint(-5, 5), rng.randint(1, 4))
        assert moebius_apply(g * h, p) == moebius_apply(g, moebius_apply(h, p))
        assert moebius_apply(g.scale(K(3)), p) == moebius_apply(g, p)


def test_moebius_rejects_singular(K):
    with pytest.raises(ValueError):
        moebius_apply(Mat2.of(K, ((1, 0), (0, 0))), infinity(K))


UNIVERSE = range(6)


def _as_set(X):
    return {p for p in UNIVERSE if p in X}


pointsets = st.builds(
    lambda cof, pts: PointSet.cofinite_of(pts) if cof else PointSet.finite(pts),
    st.booleans(),
    st.sets(st.sampled_from(list(UNIVERSE)), max_size=4),
)


@given(pointsets, pointsets)
@settings(max_examples=200, deadline=None)
def test_pointset_algebra_against_python_sets(X, Y):
    # the integers stand in for points: the set algebra never looks inside them
    assert _as_set(X & Y) == _as_set(X) & _as_set(Y)
    assert _as_set(X | Y) == _as_set(X) | _as_set(Y)
    assert _as_set(X - Y) == _as_set(X) - _as_set(Y)
    assert _as_set(X.complement()) == set(UNIVERSE) - _as_set(X)
    assert (X.size() is None) == X.cofinite


def test_pointset_repr_and_restrict(K):
    X = PointSet.cofinite_of([infinity(K)])
    assert repr(X) == "Cofinite{[1:0]}"
    amb = [infinity(K), point(K, 0), point(K, 1)]
    assert X.restrict(amb) == (point(K, 0), point(K, 1))
    assert PointSet.finite().is_empty() and not PointSet.everything().is_empty()
