"""The quotient M_2 -> PM_2 = M_2 / C^x and its multiplication."""

from __future__ import annotations

from dataclasses import dataclass

from .mat2 import Mat2, class_base, image_kernel, rank
from .projline import ProjPoint


@dataclass(frozen=True)
class PM2Elem:
    kind: str  # "zero" | "rank1" | "invertible"
    image: ProjPoint | None = None
    kernel: ProjPoint | None = None
    rep: Mat2 | None = None

    @staticmethod
    def zero():
        return _ZERO

    @staticmethod
    def rank1(image, kernel):
        return PM2Elem("rank1", image, kernel)

    @property
    def is_zero(self):
        return self.kind == "zero"

    @property
    def is_rank1(self):
        return self.kind == "rank1"

    @property
    def is_invertible(self):
        return self.kind == "invertible"

    @property
    def is_idempotent(self):
        if self.kind == "invertible":
            return self.rep == Mat2.identity(self.rep.field)
        return self.kind == "rank1" and self.image != self.kernel

    @property
    def is_nilpotent(self):
        return self.kind == "zero" or (self.kind == "rank1" and self.image == self.kernel)

    def pair(self):
        return self.image, self.kernel

    def representative(self, K=None):
        """Some matrix projecting to this element."""
        if self.kind == "invertible":
            return self.rep
        if self.kind == "rank1":
            return class_base(self.image, self.kernel)
        if K is None:
            raise ValueError("the zero class needs a field to build a representative")
        return Mat2.zero(K)

    def __repr__(self):
        if self.kind == "zero":
            return "0"
        if self.kind == "rank1":
            return f"({self.image!r}, {self.kernel!r})"
        return f"<{self.rep!r}>"


_ZERO = PM2Elem("zero")


def canonical_scale(x):
    """x scaled so its first nonzero entry (row-major) is 1."""
    lead = x.first_nonzero()
    return x.scale(lead.inverse())


def project(x):
    r = rank(x)
    if r == 0:
        return _ZERO
    if r == 1:
        return PM2Elem("rank1", *image_kernel(x))
    return PM2Elem("invertible", rep=canonical_scale(x))


def rank1_mul(p, q):
    """The combinatorial law on nonzero rank-one classes."""
    v, u = p
    v2, u2 = q
    if u == v2:
        return None
    return (v, u2)


def pm2_mul(x, y):
    if x.is_zero or y.is_zero:
        return _ZERO
    if x.is_rank1 and y.is_rank1:
        r = rank1_mul(x.pair(), y.pair())
        return _ZERO if r is None else PM2Elem("rank1", *r)
    return project(x.representative() * y.representative())
