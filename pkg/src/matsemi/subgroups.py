"""
Algebraic subgroups of PGL_2 up to conjugation, and their orbits on P^1.

Finite groups are materialized; the infinite ones (full PGL_2, Borel,
torus, unipotent, infinite dihedral) are handled through their known
orbit structure and spot-checked with sampled elements.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .mat2 import Mat2
from .pm2 import PM2Elem, canonical_scale, project
from .projline import PointSet, infinity, moebius_apply, normalize, point_key, sorted_points

DEFAULT_CAP = 10000

FINITE_KINDS = ("Dn", "A4", "S4", "A5")
INFINITE_KINDS = ("FullPGL2", "Borel", "Torus", "Unipotent", "DInfinity")
KINDS = INFINITE_KINDS + FINITE_KINDS + ("FiniteGenerated",)

ORDERS = {"A4": 12, "S4": 24, "A5": 60}


class NotRepresentable(ValueError):
    pass


class UnsupportedGroup(ValueError):
    pass


class InfiniteSignal:
    """Returned by closures that ran past their cap."""

    def __init__(self, cap):
        self.cap = cap

    def __bool__(self):
        return False

    def __repr__(self):
        return f"InfiniteSignal(cap={self.cap})"


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    n: int = 0
    gens: tuple = ()
    conjugator: Mat2 | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind == "Dn" and self.n < 1:
            raise ValueError("Dn needs n >= 1")

    @staticmethod
    def trivial():
        return GroupSpec("FiniteGenerated")

    @staticmethod
    def generated(gens):
        return GroupSpec("FiniteGenerated", gens=tuple(gens))

    def conjugate(self, c):
        if self.conjugator is not None:
            c = c * self.conjugator
        return GroupSpec(self.kind, self.n, self.gens, c)

    @property
    def is_catalog_infinite(self):
        return self.kind in INFINITE_KINDS

    def __repr__(self):
        extra = f"({self.n})" if self.kind == "Dn" else ""
        if self.kind == "FiniteGenerated":
            extra = f"[{len(self.gens)} gens]"
        conj = " conjugated" if self.conjugator is not None else ""
        return f"<{self.kind}{extra}{conj}>"


def _conj(spec, g):
    c = spec.conjugator
    if c is None:
        return g
    return c * g * c.inverse()


def _conj_point(spec, p):
    return p if spec.conjugator is None else moebius_apply(spec.conjugator, p)


# generators -----------------------------------------------------------------------

def _need_roots(K, m, what):
    if K.torsion % m:
        raise NotRepresentable(f"{what} needs mu_{m}, which Q(zeta_{K.order}) lacks")


def _raw_generators(spec, K):
    M = lambda rows: Mat2.of(K, rows)
    z = K.zeta()
    kind = spec.kind
    if kind == "FullPGL2":
        return [M(((1, 1), (0, 1))), M(((1, 0), (1, 1))), M(((2, 0), (0, 1))), M(((0, 1), (1, 0)))]
    if kind == "Borel":
        return [M(((1, 1), (0, 1))), M(((2, 0), (0, 1))), M(((3, -1), (0, 1))),
                Mat2(((z, K(2)), (K.zero, K.one)))]
    if kind == "Torus":
        return [M(((2, 0), (0, 1))), Mat2.diag(z, K.one), M(((-3, 0), (0, 1)))]
    if kind == "Unipotent":
        return [M(((1, 1), (0, 1))), Mat2(((K.one, z), (K.zero, K.one))), M(((1, -2), (0, 1)))]
    if kind == "DInfinity":
        from fractions import Fraction as Q
        return [M(((2, 0), (0, Q(1, 2)))), M(((0, -1), (1, 0))), M(((0, -2), (Q(1, 2), 0))),
                Mat2.diag(z, z.inverse())]
    if kind == "Dn":
        _need_roots(K, 2 * spec.n, f"D_{spec.n}")
        w = K.root_of_unity(2 * spec.n)
        return [Mat2.diag(w, w.inverse()), M(((0, 1), (1, 0)))]
    if kind in ("A4", "S4"):
        _need_roots(K, 4, kind)
        i = K.root_of_unity(4)
        h = K(1) / 2
        gens = [
            Mat2.diag(i, -i),
            M(((0, 1), (-1, 0))),
            Mat2((((1 + i) * h, (1 + i) * h), ((-1 + i) * h, (1 - i) * h))),
        ]
        if kind == "S4":
            gens.append(Mat2.diag(i, K.one))
        return gens
    if kind == "A5":
        if K.order % 5:
            raise NotRepresentable(f"A5 needs zeta_5, which Q(zeta_{K.order}) lacks")
        e = K.root_of_unity(5)
        e2, e3, e4 = e ** 2, e ** 3, e ** 4
        sqrt5 = 2 * (e + e4) + 1
        s = sqrt5.inverse()
        return [
            Mat2.diag(e3, e2),
            Mat2(((-(e - e4) * s, (e2 - e3) * s), ((e2 - e3) * s, (e - e4) * s))),
        ]
    return list(spec.gens)


def catalog_generators(spec, K):
    """Generators (a finite sample for the infinite kinds), conjugated."""
    return [_conj(spec, g) for g in _raw_generators(spec, K)]


# closures -------------------------------------------------------------------------

def group_closure(gens, cap=DEFAULT_CAP, K=None):
    """Projective classes generated by invertible ``gens``, or InfiniteSignal."""
    gens = list(gens)
    for g in gens:
        if not g.det():
            raise ValueError(f"singular generator {g!r}")
    if K is None:
        if not gens:
            raise ValueError("an empty generator list needs the field")
        K = gens[0].field
    ident = project(Mat2.identity(K))
    seen = {ident}
    order = [ident]
    frontier = [ident]
    reps = [canonical_scale(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in reps:
                y = PM2Elem("invertible", rep=canonical_scale(x.rep * g))
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        return InfiniteSignal(cap)
        frontier = nxt
    return order


def matrix_closure(gens, cap=DEFAULT_CAP, K=None):
    """The finite subgroup of GL_2 generated by ``gens`` (identity included), or InfiniteSignal."""
    gens = list(gens)
    if K is None:
        K = gens[0].field
    ident = Mat2.identity(K)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        return InfiniteSignal(cap)
        frontier = nxt
    return order


def is_finite(spec, K, cap=DEFAULT_CAP):
    if spec.kind in INFINITE_KINDS:
        return False
    if spec.kind in FINITE_KINDS:
        return True
    return not isinstance(group_closure(catalog_generators(spec, K), cap, K), InfiniteSignal)


def projective_elements(spec, K, cap=DEFAULT_CAP):
    if spec.kind in INFINITE_KINDS:
        raise UnsupportedGroup(f"{spec!r} is infinite")
    out = group_closure(catalog_generators(spec, K), cap, K)
    if isinstance(out, InfiniteSignal):
        raise UnsupportedGroup(f"{spec!r} did not close within {cap} elements")
    return [x.rep for x in out]


def group_elements(spec, K, cap=DEFAULT_CAP):
    """Elements of a finite group as matrices.

    The GL_2 closure of the generators when that is finite, otherwise one
    canonical representative per projective class.
    """
    if spec.kind in INFINITE_KINDS:
        raise UnsupportedGroup(f"{spec!r} is infinite")
    gens = catalog_generators(spec, K)
    out = matrix_closure(gens, cap, K)
    if not isinstance(out, InfiniteSignal):
        return out
    return projective_elements(spec, K, cap)


def group_order(spec, K, cap=DEFAULT_CAP):
    return len(projective_elements(spec, K, cap))


def _random_param(K, rng):
    from .scalar import random_unit
    return random_unit(K, rng, size=4)


def sample_elements(spec, K, rng=None, k=20):
    """``k`` group elements: generators first, then random ones."""
    rng = rng or random.Random(0)
    gens = catalog_generators(spec, K)
    out = list(gens)
    if spec.kind not in INFINITE_KINDS:
        elems = group_elements(spec, K)
        while len(out) < k:
            out.append(rng.choice(elems))
        return out[:max(k, len(gens))]
    from .scalar import random_scalar
    while len(out) < k:
        a = _random_param(K, rng)
        b = random_scalar(K, rng, 4)
        kind = spec.kind
        if kind == "Borel":
            g = Mat2(((a, b), (K.zero, K.one)))
        elif kind == "Torus":
            g = Mat2.diag(a, K.one)
        elif kind == "Unipotent":
            g = Mat2(((K.one, b if b else K.one), (K.zero, K.one)))
        elif kind == "DInfinity":
            if rng.random() < 0.5:
                g = Mat2.diag(a, a.inverse())
            else:
                g = Mat2(((K.zero, -a), (a.inverse(), K.zero)))
        else:
            g = Mat2(((a, b), (random_scalar(K, rng, 4), _random_param(K, rng))))
            if not g.det():
                continue
        out.append(_conj(spec, g))
    return out


# orbits ---------------------------------------------------------------------------

def structural_orbits(spec, K):
    """The finite orbits of an infinite catalog group (after conjugation)."""
    inf = infinity(K)
    zero = normalize(K.zero, K.one)
    table = {
        "FullPGL2": [],
        "Borel": [[inf]],
        "Torus": [[inf], [zero]],
        "Unipotent": [[inf]],
        "DInfinity": [[inf, zero]],
    }
    return [sorted_points(_conj_point(spec, p) for p in orbit) for orbit in table[spec.kind]]


@dataclass(frozen=True)
class OrbitDecomposition:
    finite_orbits: tuple
    cofinite_orbit: PointSet | None = None

    def orbit_of(self, p):
        for orb in self.finite_orbits:
            if p in orb:
                return orb
        if self.cofinite_orbit is not None and p in self.cofinite_orbit:
            return self.cofinite_orbit
        return None


def orbit(gens, p, cap=DEFAULT_CAP):
    seen = {p}
    frontier = [p]
    while frontier:
        nxt = []
        for q in frontier:
            for g in gens:
                r = moebius_apply(g, q)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
        if len(seen) > cap:
            raise UnsupportedGroup("orbit did not close; the group looks infinite")
    return sorted_points(seen)


def orbit_decomposition(spec, probes, K, rng=None, samples=20):
    probes = list(probes)
    if spec.kind in INFINITE_KINDS:
        fin = structural_orbits(spec, K)
        dec = OrbitDecomposition(tuple(fin), PointSet.cofinite_of(p for o in fin for p in o))
        _spot_check(spec, dec, probes, K, rng or random.Random(0), samples)
        return dec
    if not probes:
        raise ValueError("finite groups need probe points")
    if not is_finite(spec, K):
        raise UnsupportedGroup(f"{spec!r} generates an infinite group")
    gens = catalog_generators(spec, K)
    orbits = []
    for p in probes:
        if any(p in o for o in orbits):
            continue
        orbits.append(orbit(gens, p))
    return OrbitDecomposition(tuple(orbits), None)


class StructureViolation(AssertionError):
    pass


def _spot_check(spec, dec, probes, K, rng, samples):
    elems = sample_elements(spec, K, rng, samples)
    fixed = [o[0] for o in dec.finite_orbits if len(o) == 1]
    for p in probes:
        home = dec.orbit_of(p)
        for g in elems:
            q = moebius_apply(g, p)
            if p in fixed and q != p:
                raise StructureViolation(f"{g!r} moves declared fixed point {p!r}")
            if dec.orbit_of(q) is not home and dec.orbit_of(q) != home:
                raise StructureViolation(f"{g!r} sends {p!r} outside its declared orbit")


def spot_verify(spec, probes, K, rng=None, samples=20):
    """Every probe stays in its declared orbit under ``samples`` sampled elements."""
    dec = orbit_decomposition(spec, probes, K, rng, samples)
    return dec


# invariance -------------------------------------------------------------------

def is_invariant(spec, X, K, rng=None, samples=20):
    """(True, None) or (False, (g, p, g.p)) for a PointSet X."""
    listed = set(X.points)

    def escapes(g, p):
        return moebius_apply(g, p) not in listed

    if spec.kind not in INFINITE_KINDS:
        for g in projective_elements(spec, K):
            for p in sorted(listed, key=point_key):
                if escapes(g, p):
                    return False, (g, p, moebius_apply(g, p))
        return True, None

    fin = structural_orbits(spec, K)
    elems = sample_elements(spec, K, rng or random.Random(0), samples)
    for p in sorted(listed, key=point_key):
        home = next((o for o in fin if p in o), None)
        ok = home is not None and all(q in listed for q in home)
        if ok:
            continue
        for g in elems:
            if escapes(g, p):
                return False, (g, p, moebius_apply(g, p))
        raise StructureViolation(f"no sampled element moves {p!r} out of the listed points")
    return True, None


def fixes_point(spec, p, K, rng=None, samples=20):
    return is_invariant(spec, PointSet.finite([p]), K, rng, samples)
