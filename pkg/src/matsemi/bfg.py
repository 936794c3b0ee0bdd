"""
Subsemigroups of PM_2^0 as combinatorial objects.

A rank-one class is a pair (image, kernel) of projective points and
(v, u)(v', u') = (v, u') when u != v', else 0. Every closed set of such
pairs is of one of two shapes:

* Type A: B_{F,G} = {(v, u) : v in F, u in G}, with or without 0;
* Type B: B_{F,{c}} u B_{{c},G} u {0} for a center point c.

The functions here are generic in the point type: anything hashable and
sortable works, which the brute-force enumeration exploits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .pm2 import rank1_mul
from .projline import PointSet, point_key, sorted_points


class NotClosedError(ValueError):
    pass


def pair_key(pair):
    return (point_key(pair[0]), point_key(pair[1]))


@dataclass(frozen=True)
class Rank1Set:
    pairs: frozenset
    has_zero: bool = False

    @staticmethod
    def of(pairs, has_zero=False):
        return Rank1Set(frozenset(tuple(p) for p in pairs), bool(has_zero))

    def sorted_pairs(self):
        return sorted(self.pairs, key=pair_key)

    def images(self):
        return {v for v, _ in self.pairs}

    def kernels(self):
        return {u for _, u in self.pairs}

    def points(self):
        return self.images() | self.kernels()

    def __len__(self):
        return len(self.pairs) + self.has_zero

    def __repr__(self):
        body = ", ".join(f"({v!r},{u!r})" for v, u in self.sorted_pairs())
        return "{" + body + (", 0" if self.has_zero else "") + "}"


@dataclass(frozen=True)
class SingularShape:
    kind: str  # "A" | "B"
    F: PointSet
    G: PointSet
    has_zero: bool = True
    center: object = None

    @staticmethod
    def type_a(F, G, has_zero):
        return SingularShape("A", _as_set(F), _as_set(G), bool(has_zero))

    @staticmethod
    def type_b(F, G, center):
        return SingularShape("B", _as_set(F), _as_set(G), True, center)

    def contains(self, v, u):
        """Membership of the nonzero class (v, u)."""
        if self.kind == "A":
            return v in self.F and u in self.G
        c = self.center
        return (u == c and v in self.F) or (v == c and u in self.G)

    def __repr__(self):
        if self.kind == "A":
            return f"TypeA(F={self.F!r}, G={self.G!r}, zero={self.has_zero})"
        return f"TypeB(F={self.F!r}, G={self.G!r}, center={self.center!r})"


def _as_set(X):
    return X if isinstance(X, PointSet) else PointSet.finite(X)


# closure ----------------------------------------------------------------------

def closure_violation(S):
    """None when S is closed, else a witness (x, y, xy) with xy missing."""
    pairs = S.sorted_pairs()
    for x in pairs:
        for y in pairs:
            xy = rank1_mul(x, y)
            if xy is None:
                if not S.has_zero:
                    return (x, y, 0)
            elif xy not in S.pairs:
                return (x, y, xy)
    return None


def is_closed(S):
    return closure_violation(S) is None


# classification ---------------------------------------------------------------

def _stats(S):
    S1 = sorted_points(S.images())
    S2 = sorted_points(S.kernels())
    kernels_of = {}
    images_of = {}
    for v, u in S.pairs:
        kernels_of.setdefault(v, set()).add(u)
        images_of.setdefault(u, set()).add(v)
    L = sorted_points(v for v, ks in kernels_of.items() if len(ks) >= 2)
    R = sorted_points(u for u, vs in images_of.items() if len(vs) >= 2)
    return S1, S2, L, R


def _classify_raw(S):
    S1, S2, L, R = _stats(S)
    if len(S1) <= 1 or len(S2) <= 1:
        return SingularShape.type_a(S1, S2, S.has_zero)
    if not L or not R:
        # only {(v,u),(u,v)} u {0} survives here
        c = min(S1, key=point_key)
        F = [x for x, y in S.pairs if y == c]
        G = [y for x, y in S.pairs if x == c]
        return SingularShape.type_b(F, G, c)
    if len(L) == 1 and L == R:
        return SingularShape.type_b(S1, S2, L[0])
    return SingularShape.type_a(S1, S2, S.has_zero)


def shape_elements(shape, ambient=()):
    """The pairs a shape denotes, cofinite sets cut down to ``ambient``."""
    def pts(X):
        if X.cofinite:
            return [p for p in ambient if p in X]
        return list(X.points)

    if shape.kind == "A":
        pairs = [(v, u) for v in pts(shape.F) for u in pts(shape.G)]
    else:
        c = shape.center
        pairs = [(v, c) for v in pts(shape.F)] + [(c, u) for u in pts(shape.G)]
    return Rank1Set.of(pairs, shape.has_zero)


def classify(S):
    """Type A / Type B shape of a closed set of rank-one classes."""
    w = closure_violation(S)
    if w is not None:
        raise NotClosedError(f"not closed: {w[0]!r}*{w[1]!r} = {w[2]!r} is missing")
    shape = _classify_raw(S)
    if shape.kind == "B" and not S.has_zero:
        raise AssertionError(f"type B shape without zero for {S!r}")
    back = shape_elements(shape, sorted_points(S.points()))
    if back != S:
        raise AssertionError(f"shape {shape!r} does not reconstruct {S!r}")
    return shape


# intersections ----------------------------------------------------------------

def _b_center_pair_agrees(x, y):
    c = x.center
    inter = ((c in x.F) or (c in x.G)) and ((c in y.F) or (c in y.G))
    naive = (c in x.F and c in y.F) or (c in x.G and c in y.G)
    return inter == naive


def shape_intersect(x, y, ambient=None):
    if x.kind == "A" and y.kind == "A":
        return SingularShape.type_a(x.F & y.F, x.G & y.G, x.has_zero and y.has_zero)
    if x.kind == "B" and y.kind == "B" and x.center == y.center and _b_center_pair_agrees(x, y):
        return SingularShape.type_b(x.F & y.F, x.G & y.G, x.center)
    if ambient is None:
        raise ValueError("these shapes only intersect element-wise; pass an ambient sample")
    X = shape_elements(x, ambient)
    Y = shape_elements(y, ambient)
    return classify(Rank1Set.of(X.pairs & Y.pairs, X.has_zero and Y.has_zero))


def intersect_all(shapes, ambient=None):
    shapes = list(shapes)
    out = shapes[0]
    for s in shapes[1:]:
        out = shape_intersect(out, s, ambient)
    return out


# definable witnesses ----------------------------------------------------------

def definable_witness_family(S, ambient):
    """Finite/cofinite shapes, each closed and containing S, meeting in S on ``ambient``.

    ``S`` may be a closed Rank1Set or a SingularShape. Finite coordinate sets
    are replaced by the cofinite set avoiding the rest of the ambient sample;
    a Type B center is kept.
    """
    ambient = sorted_points(ambient)
    if isinstance(S, Rank1Set):
        missing = S.points() - set(ambient)
        if missing:
            raise ValueError(f"ambient does not contain {sorted_points(missing)!r}")
        shape = classify(S)
        target = S
    else:
        shape = S
        target = shape_elements(S, ambient)

    def widen(X):
        if X.cofinite:
            return X
        return PointSet.cofinite_of(p for p in ambient if p not in X)

    if shape.kind == "A":
        if shape.F.is_empty() and shape.G.is_empty():
            family = [shape]
        elif shape.F.cofinite and shape.G.cofinite:
            family = [shape]
        else:
            family = [SingularShape.type_a(widen(shape.F), widen(shape.G), shape.has_zero)]
    else:
        c = shape.center
        F, G = shape.F, shape.G
        if F.cofinite and G.cofinite:
            family = [shape]
        else:
            family = [SingularShape.type_b(widen(F), widen(G), c)]

    for member in family:
        got = shape_elements(member, ambient)
        if not target.pairs <= got.pairs or (target.has_zero and not got.has_zero):
            raise AssertionError(f"witness {member!r} does not contain {target!r}")
        if not is_closed(got):
            raise ValueError(f"ambient too small: witness {member!r} is not closed on it")
    if family_intersection(family, ambient) != target:
        raise ValueError("ambient too small to separate the semigroup")
    return family


def ambient_pairs(ambient):
    return list(itertools.product(ambient, repeat=2))


def family_intersection(family, ambient):
    inter = set(ambient_pairs(ambient))
    zero = True
    for member in family:
        got = shape_elements(member, ambient)
        inter &= got.pairs
        zero = zero and got.has_zero
    return Rank1Set.of(inter, zero)


# brute force --------------------------------------------------------------------

MAX_GROUND = 4


def _product_tables(k):
    pairs = list(itertools.product(range(k), repeat=2))
    index = {p: i for i, p in enumerate(pairs)}
    nonzero = []  # (i, j, l): pair_i * pair_j = pair_l
    vanish = []   # (i, j): pair_i * pair_j = 0
    for i, x in enumerate(pairs):
        for j, y in enumerate(pairs):
            xy = rank1_mul(x, y)
            if xy is None:
                vanish.append((i, j))
            else:
                nonzero.append((i, j, index[xy]))
    return pairs, nonzero, vanish


def closed_masks(k):
    """Boolean arrays (ok_without_zero, ok_with_zero) over all 2^(k*k) subsets."""
    pairs, nonzero, vanish = _product_tables(k)
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    bits = [(masks >> i) & 1 for i in range(len(pairs))]
    bits = [b.astype(bool) for b in bits]
    closed = np.ones(masks.shape, dtype=bool)
    for i, j, l in nonzero:
        closed &= ~(bits[i] & bits[j] & ~bits[l])
    needs_zero = np.zeros(masks.shape, dtype=bool)
    for i, j in vanish:
        needs_zero |= bits[i] & bits[j]
    return pairs, closed & ~needs_zero, closed


def enumerate_closed_subsets(T):
    """Every multiplicatively closed subset of T x T (with and without 0)."""
    T = list(T)
    if len(T) > MAX_GROUND:
        raise ValueError(f"ground set of size {len(T)} exceeds the cap {MAX_GROUND}")
    k = len(T)
    pairs, ok_plain, ok_zero = closed_masks(k)
    out = []
    for flag, ok in ((False, ok_plain), (True, ok_zero)):
        for m in np.flatnonzero(ok):
            m = int(m)
            chosen = [(T[a], T[b]) for i, (a, b) in enumerate(pairs) if m >> i & 1]
            out.append(Rank1Set.of(chosen, flag))
    return out
