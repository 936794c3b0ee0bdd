"""Points of the projective line over Q(zeta_N), finite/cofinite point sets."""

from __future__ import annotations

from dataclasses import dataclass


class ProjPoint:
    """[a : b] in canonical form: b == 1 when b != 0, else a == 1."""

    __slots__ = ("a", "b", "_hash")

    def __init__(self, a, b):
        self.a = a
        self.b = b
        self._hash = hash((a, b))

    @property
    def field(self):
        return self.a.field

    @property
    def is_infinity(self):
        return not self.b

    def coords(self):
        return self.a, self.b

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return self._hash

    def sort_key(self):
        # infinity first, then the affine chart by coefficients
        return (bool(self.b), self.a.sort_key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"[{self.a!r}:{self.b!r}]"


def normalize(a, b):
    """Canonical representative of [a : b]."""
    if b:
        return ProjPoint(a / b, b.field.one)
    if not a:
        raise ValueError("[0:0] is not a point of the projective line")
    return ProjPoint(a.field.one, a.field.zero)


def point(K, a, b=1):
    return normalize(K(a), K(b))


def infinity(K):
    return ProjPoint(K.one, K.zero)


def moebius_apply(g, p):
    """Image of p under the invertible matrix g acting on column vectors."""
    (x, y), (z, w) = g.rows
    if not (x * w - y * z):
        raise ValueError("moebius_apply needs an invertible matrix")
    a, b = p.a, p.b
    return normalize(x * a + y * b, z * a + w * b)


def point_key(p):
    return p.sort_key() if hasattr(p, "sort_key") else p


def sorted_points(points):
    return tuple(sorted(set(points), key=point_key))


@dataclass(frozen=True)
class PointSet:
    """A finite subset of P^1, or the complement of one (``cofinite``)."""

    cofinite: bool
    points: tuple

    @staticmethod
    def finite(points=()):
        return PointSet(False, sorted_points(points))

    @staticmethod
    def cofinite_of(excluded=()):
        return PointSet(True, sorted_points(excluded))

    @staticmethod
    def everything():
        return PointSet(True, ())

    @property
    def mode(self):
        return "cofinite" if self.cofinite else "finite"

    def __contains__(self, p):
        return (p in self.points) != self.cofinite

    def complement(self):
        return PointSet(not self.cofinite, self.points)

    def __and__(self, other):
        A, B = set(self.points), set(other.points)
        if not self.cofinite and not other.cofinite:
            return PointSet.finite(A & B)
        if self.cofinite and other.cofinite:
            return PointSet.cofinite_of(A | B)
        if self.cofinite:
            return PointSet.finite(B - A)
        return PointSet.finite(A - B)

    def __or__(self, other):
        return (self.complement() & other.complement()).complement()

    def __sub__(self, other):
        return self & other.complement()

    def size(self):
        """Cardinality, or None when infinite."""
        return None if self.cofinite else len(self.points)

    def is_empty(self):
        return not self.cofinite and not self.points

    def restrict(self, ambient):
        """Points of the ambient list lying in this set, canonically ordered."""
        return sorted_points(p for p in ambient if p in self)

    def __repr__(self):
        body = ", ".join(map(repr, self.points))
        return f"Cofinite{{{body}}}" if self.cofinite else f"{{{body}}}"


def pointset_intersection(A, B):
    return A & B


def pointset_union(A, B):
    return A | B


def pointset_complement(A):
    return A.complement()


def pointset_contains(A, p):
    return p in A
