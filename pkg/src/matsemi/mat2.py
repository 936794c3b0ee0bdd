"""Exact 2x2 matrices over Q(zeta_N)."""

from __future__ import annotations

from functools import lru_cache

from .projline import ProjPoint, normalize


class Mat2:
    __slots__ = ("rows", "_hash")

    def __init__(self, rows):
        (a, b), (c, d) = rows
        K = a.field
        self.rows = ((K(a), K(b)), (K(c), K(d)))
        self._hash = None

    @classmethod
    def of(cls, K, rows):
        (a, b), (c, d) = rows
        return cls(((K(a), K(b)), (K(c), K(d))))

    @classmethod
    def identity(cls, K):
        return cls.of(K, ((1, 0), (0, 1)))

    @classmethod
    def zero(cls, K):
        return cls.of(K, ((0, 0), (0, 0)))

    @classmethod
    def diag(cls, x, y):
        K = x.field
        return cls(((x, K.zero), (K.zero, K(y))))

    @property
    def field(self):
        return self.rows[0][0].field

    def entries(self):
        (a, b), (c, d) = self.rows
        return a, b, c, d

    # arithmetic -------------------------------------------------------------
    def __mul__(self, other):
        if not isinstance(other, Mat2):
            return self.scale(other)
        (a, b), (c, d) = self.rows
        (x, y), (z, w) = other.rows
        return Mat2(((a * x + b * z, a * y + b * w), (c * x + d * z, c * y + d * w)))

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s):
        (a, b), (c, d) = self.rows
        return Mat2(((a * s, b * s), (c * s, d * s)))

    def __add__(self, other):
        (a, b), (c, d) = self.rows
        (x, y), (z, w) = other.rows
        return Mat2(((a + x, b + y), (c + z, d + w)))

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def det(self):
        (a, b), (c, d) = self.rows
        return a * d - b * c

    def adjugate(self):
        (a, b), (c, d) = self.rows
        return Mat2(((d, -b), (-c, a)))

    def inverse(self):
        det = self.det()
        if not det:
            raise ZeroDivisionError("singular matrix has no inverse")
        return self.adjugate().scale(det.inverse())

    def transpose(self):
        (a, b), (c, d) = self.rows
        return Mat2(((a, c), (b, d)))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat2.identity(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply(self, v):
        (a, b), (c, d) = self.rows
        x, y = v
        return a * x + b * y, c * x + d * y

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def is_zero(self):
        return not any(self.entries())

    def first_nonzero(self):
        for x in self.entries():
            if x:
                return x
        return None

    def sort_key(self):
        return tuple(x.sort_key() for x in self.entries())

    def __repr__(self):
        (a, b), (c, d) = self.rows
        return f"[[{a!r}, {b!r}], [{c!r}, {d!r}]]"


def rank(x):
    if x.is_zero():
        return 0
    return 2 if x.det() else 1


def is_idempotent(x):
    # the zero matrix is never called idempotent
    return not x.is_zero() and x * x == x


def is_nilpotent(x):
    return (x * x).is_zero()


def is_invertible(x):
    return bool(x.det())


def image_kernel(x):
    """(image, kernel) of a rank-one matrix as projective points."""
    if rank(x) != 1:
        raise ValueError(f"image_kernel needs a rank-one matrix, got rank {rank(x)}")
    (a, b), (c, d) = x.rows
    if a or c:
        image = normalize(a, c)
    else:
        image = normalize(b, d)
    if a or b:
        kernel = normalize(-b, a)
    else:
        kernel = normalize(-d, c)
    return image, kernel


def idempotent_from_points(v, u):
    """The rank-one idempotent with image v and kernel u."""
    a, b = v.coords()
    c, d = u.coords()
    det = a * d - b * c
    if not det:
        raise ValueError("image equals kernel: that class is nilpotent, not idempotent")
    s = det.inverse()
    return Mat2(((a * d * s, -a * c * s), (b * d * s, -b * c * s)))


def nilpotent_from_point(v, lam=None):
    """lam * [[ab, -a^2], [b^2, -ab]] for v = [a:b]."""
    a, b = v.coords()
    if lam is None:
        lam = a.field.one
    if not lam:
        raise ValueError("nilpotent scale must be nonzero")
    return Mat2(((lam * a * b, -lam * a * a), (lam * b * b, -lam * a * b)))


@lru_cache(maxsize=1 << 16)
def class_base(v, u):
    """Canonical matrix of the rank-one class (v, u)."""
    if v == u:
        return nilpotent_from_point(v)
    return idempotent_from_points(v, u)


def scalar_ratio(x, y):
    """The scalar c with x == c*y, or None when they are not proportional."""
    c = None
    for p, q in zip(x.entries(), y.entries()):
        if q:
            c = p / q
            break
    if c is None or not c:
        return None
    return c if x == y.scale(c) else None


def random_matrix(K, rng, rank_=None, size=3):
    """Random exact matrix of the requested rank (any rank when None)."""
    from .scalar import random_scalar, random_unit

    if rank_ is None:
        rank_ = rng.choice((0, 1, 2, 2))
    if rank_ == 0:
        return Mat2.zero(K)
    if rank_ == 2:
        while True:
            m = Mat2(tuple(tuple(random_scalar(K, rng, size) for _ in range(2)) for _ in range(2)))
            if m.det():
                return m
    # column times row
    while True:
        col = (random_scalar(K, rng, size), random_scalar(K, rng, size))
        row = (random_scalar(K, rng, size), random_scalar(K, rng, size))
        if any(col) and any(row):
            break
    if rng.random() < 0.25:
        # force a nilpotent: row orthogonal to col
        s = random_unit(K, rng)
        row = (-col[1] * s, col[0] * s)
    return Mat2(((col[0] * row[0], col[0] * row[1]), (col[1] * row[0], col[1] * row[1])))


def random_point(K, rng, size=3, p_infinity=0.1):
    from .scalar import random_scalar

    if rng.random() < p_infinity:
        return ProjPoint(K.one, K.zero)
    return normalize(random_scalar(K, rng, size), K.one)
