"""
Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are stored as coefficient tuples over the power basis
1, z, ..., z^(phi(N)-1), fully reduced modulo the N-th cyclotomic
polynomial, so equality is coefficient-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce


DEFAULT_ORDER = 12


class FieldMismatch(TypeError):
    pass


def _poly_divmod_int(num, den):
    # den monic, integer coefficients, lowest degree first
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        q = num[i + len(den) - 1]
        out[i] = q
        if q:
            for j, c in enumerate(den):
                num[i + j] -= q * c
    return out, num[:len(den) - 1]


def _integral(coeffs):
    """(integer numerators, common denominator) of a Fraction tuple."""
    den = 1
    for c in coeffs:
        if c.denominator != 1:
            den = den * c.denominator // math.gcd(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, cyclotomic_poly(d))
            assert not any(rem)
    return tuple(poly)


def totient(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


class CyclotomicField:
    """The field Q(zeta_N). Use :func:`field` to get the shared instance."""

    def __init__(self, order):
        if order < 1:
            raise ValueError("cyclotomic order must be >= 1")
        self.order = order
        self.degree = totient(order)
        self.modulus = cyclotomic_poly(order)
        self.torsion = order if order % 2 == 0 else 2 * order
        # reduction rows for z^k with degree <= k, enough for products and zeta powers
        d = self.degree
        rows = {}
        for k in range(d, max(2 * d - 1, order + 1)):
            mono = [0] * k + [1]
            _, rem = _poly_divmod_int(mono, self.modulus)
            rows[k] = tuple(rem + [0] * (d - len(rem)))
        self._rows = rows
        self.zero = Cyclo(self, (Fraction(0),) * d)
        self.one = self(1)

    def __repr__(self):
        return f"CyclotomicField({self.order})"

    def __reduce__(self):
        return (field, (self.order,))

    def __call__(self, value):
        if isinstance(value, Cyclo):
            if value.field is not self:
                raise FieldMismatch(f"scalar from Q(zeta_{value.field.order}) used in {self}")
            return value
        return Cyclo(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))

    def from_coeffs(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = list(self._reduce(coeffs))
        return Cyclo(self, tuple(coeffs) + (Fraction(0),) * (self.degree - len(coeffs)))

    def _reduce(self, coeffs):
        d = self.degree
        out = list(coeffs[:d]) + [Fraction(0)] * max(0, d - len(coeffs))
        for k in range(d, len(coeffs)):
            c = coeffs[k]
            if not c:
                continue
            if k in self._rows:
                row = self._rows[k]
            else:
                _, rem = _poly_divmod_int([0] * k + [1], self.modulus)
                row = tuple(rem + [0] * (d - len(rem)))
            for j, r in enumerate(row):
                if r:
                    out[j] += c * r
        return tuple(out)

    def _reduce_int(self, coeffs):
        d = self.degree
        out = list(coeffs[:d]) + [0] * max(0, d - len(coeffs))
        for k in range(d, len(coeffs)):
            c = coeffs[k]
            if c:
                for j, r in enumerate(self._rows[k]):
                    if r:
                        out[j] += c * r
        return out

    def zeta(self, k=1):
        """zeta_N ** k for any integer k."""
        k %= self.order
        if k < self.degree:
            coeffs = [0] * self.degree
            coeffs[k] = 1
            return self.from_coeffs(coeffs)
        return self.from_coeffs([0] * k + [1])

    def root_of_unity(self, m, k=1):
        """A fixed primitive m-th root of unity raised to k.

        Requires m | lcm(2, N); for odd N the extra factor 2 comes from -zeta_N.
        """
        if self.torsion % m:
            raise ValueError(f"mu_{m} is not contained in Q(zeta_{self.order})")
        if self.order % m == 0:
            return self.zeta((self.order // m) * k)
        base = -self.zeta(1)  # primitive 2N-th root, N odd
        return base ** (((2 * self.order) // m) * k % m)

    def roots_of_unity(self, m):
        return [self.root_of_unity(m, k) for k in range(m)]

    def conjugate(self, x, k):
        """Galois conjugate z -> z^k (k coprime to N)."""
        acc = [Fraction(0)] * self.order
        for i, c in enumerate(x.coeffs):
            if c:
                acc[(i * k) % self.order] += c
        return self.from_coeffs(acc)


@lru_cache(maxsize=None)
def field(order=DEFAULT_ORDER):
    return CyclotomicField(order)


class Cyclo:
    """An element of Q(zeta_N). Immutable."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # coercion ---------------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Cyclo):
            if other.field is not self.field:
                raise FieldMismatch(
                    f"cannot mix Q(zeta_{self.field.order}) and Q(zeta_{other.field.order})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return Cyclo(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return Cyclo(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.field, tuple(a * other for a in self.coeffs))
        other = self._other(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not any(a[1:]):
            return Cyclo(self.field, tuple(a[0] * c for c in b))
        if not any(b[1:]):
            return Cyclo(self.field, tuple(b[0] * c for c in a))
        # integer convolution over a common denominator; Fractions only at the end
        na, da = _integral(a)
        nb, db = _integral(b)
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(na):
            if x:
                for j, y in enumerate(nb):
                    if y:
                        prod[i + j] += x * y
        den = da * db
        return Cyclo(self.field, tuple(Fraction(c, den) for c in self.field._reduce_int(prod)))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.is_rational():
            return self.field(1 / self.coeffs[0])
        # x * prod of the other conjugates is the (rational) norm
        n = self.field.order
        cofactor = self.field.one
        for k in range(2, n):
            if math.gcd(k, n) == 1:
                cofactor = cofactor * self.field.conjugate(self, k)
        norm = self * cofactor
        assert norm.is_rational(), norm
        return cofactor * (1 / norm.coeffs[0])

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return other.field is self.field and other.coeffs == self.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.field.order, self.coeffs))
        return self._hash

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def sort_key(self):
        return self.coeffs

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "(" + " + ".join(terms) + f")_{self.field.order}"

    def __reduce__(self):
        return (_rebuild, (self.field.order, self.coeffs))


def _rebuild(order, coeffs):
    return field(order).from_coeffs(coeffs)


# roots of unity -------------------------------------------------------------

def root_of_unity_order(z):
    """Multiplicative order of z if it is a root of unity, else None."""
    if not z:
        raise ZeroDivisionError("zero is not a unit")
    L = z.field.torsion
    if z ** L != 1:
        return None
    for d in divisors(L):
        if z ** d == 1:
            return d
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Multiplicity:
    """A multiplicative scalar set: all of C^x, mu_n, or an explicit finite set.

    ``values`` is only used by the explicit kind and is kept sorted and
    deduplicated.
    """

    kind: str  # "full" | "roots" | "explicit"
    n: int = 0
    values: tuple = ()

    @staticmethod
    def full():
        return Multiplicity("full")

    @staticmethod
    def roots(n):
        if n < 1:
            raise ValueError("mu_n needs n >= 1")
        return Multiplicity("roots", n)

    @staticmethod
    def explicit(values):
        vals = sorted(set(values), key=Cyclo.sort_key)
        if any(not v for v in vals):
            raise ValueError("multiplicities are subsets of C^x")
        return Multiplicity("explicit", 0, tuple(vals))

    @property
    def is_full(self):
        return self.kind == "full"

    @property
    def is_group(self):
        return self.kind in ("full", "roots")

    def contains(self, z):
        if not z:
            return False
        if self.kind == "full":
            return True
        if self.kind == "roots":
            return z ** self.n == 1
        return z in self.values

    __contains__ = contains

    def elements(self, K):
        if self.kind == "full":
            raise ValueError("C^x is not finite")
        if self.kind == "roots":
            return K.roots_of_unity(self.n)
        return list(self.values)

    def __repr__(self):
        if self.kind == "full":
            return "C^x"
        if self.kind == "roots":
            return f"mu_{self.n}"
        return "{" + ", ".join(map(repr, self.values)) + "}"


def torsion_closure(gens):
    """Zariski closure of the multiplicative semigroup generated by ``gens``."""
    gens = list(gens)
    n = 1
    for g in gens:
        if not g:
            raise ZeroDivisionError("zero generator")
        k = root_of_unity_order(g)
        if k is None:
            return Multiplicity.full()
        n = n * k // math.gcd(n, k)
    return Multiplicity.roots(n)


def canonical(m, K):
    """Rewrite an explicit set that happens to be some mu_n as roots(n)."""
    if m.kind != "explicit" or not m.values:
        return m
    orders = [root_of_unity_order(v) for v in m.values]
    if any(o is None for o in orders):
        return m
    n = reduce(lambda a, b: a * b // math.gcd(a, b), orders, 1)
    if n == len(m.values):
        return Multiplicity.roots(n)
    return m


def mult_subset(a, b):
    """a is a subset of b."""
    if b.kind == "full":
        return True
    if a.kind == "full":
        return False
    if a.kind == "roots" and b.kind == "roots":
        return b.n % a.n == 0
    if a.kind == "roots":
        # an explicit set can only contain mu_n by listing it
        vals = set(b.values)
        K = b.values[0].field if b.values else None
        if K is None:
            return False
        return all(z in vals for z in K.roots_of_unity(a.n))
    return all(b.contains(z) for z in a.values)


def mult_equal(a, b):
    return mult_subset(a, b) and mult_subset(b, a)


def mult_scale(m, c):
    """The set c*m."""
    if m.kind == "full":
        return m
    if m.kind == "roots" and m.contains(c):
        return m
    K = c.field
    return canonical(Multiplicity.explicit([c * z for z in m.elements(K)]), K)


def mult_product(a, b, K):
    """The product set a*b (both nonempty)."""
    if a.kind == "full" or b.kind == "full":
        return Multiplicity.full()
    if a.kind == "roots" and b.kind == "roots":
        return Multiplicity.roots(a.n * b.n // math.gcd(a.n, b.n))
    vals = {x * y for x in a.elements(K) for y in b.elements(K)}
    return canonical(Multiplicity.explicit(vals), K)


def mult_union(a, b, K):
    if a.kind == "full" or b.kind == "full":
        return Multiplicity.full()
    if mult_subset(a, b):
        return b
    if mult_subset(b, a):
        return a
    return canonical(Multiplicity.explicit(set(a.elements(K)) | set(b.elements(K))), K)


def mult_intersection(a, b, K):
    if a.kind == "full":
        return b
    if b.kind == "full":
        return a
    if a.kind == "roots" and b.kind == "roots":
        return Multiplicity.roots(math.gcd(a.n, b.n))
    small, other = (a, b) if a.kind == "explicit" else (b, a)
    return canonical(Multiplicity.explicit([z for z in small.values if other.contains(z)]), K)


def random_scalar(K, rng, size=3, rational=False, denominators=(1, 1, 2, 3)):
    """A random element with small integer (occasionally fractional) coefficients."""
    if rational:
        return K(Fraction(rng.randint(-size, size), rng.choice(denominators)))
    return K.from_coeffs(
        [Fraction(rng.randint(-size, size), rng.choice(denominators)) for _ in range(K.degree)]
    )


def random_unit(K, rng, size=3):
    while True:
        z = random_scalar(K, rng, size)
        if z:
            return z
