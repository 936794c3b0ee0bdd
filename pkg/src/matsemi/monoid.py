"""
Submonoids M = H u S of M_2: a group part H (a catalog group or a finite
closure) and a singular part S with multiplicity data.

Everything that involves cofinite point sets is checked relative to a
finite ``ambient`` list of points: the rank-one classes over the ambient
are closed under products among themselves, so closure, containment and
intersection can all be decided exactly on that sample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .bfg import SingularShape, pair_key, shape_elements
from .mat2 import Mat2, class_base, rank, scalar_ratio
from .multiplicity import (
    LawCheck,
    PreconditionError,
    SingularPart,
    check_multiplicity_laws,
    classes_from_elements,
    part_from_classes,
    saturate,
)
from .pm2 import project, rank1_mul
from .projline import PointSet, point_key, sorted_points
from .scalar import (
    Multiplicity,
    canonical,
    mult_equal,
    mult_intersection,
    mult_product,
    mult_scale,
    mult_subset,
)
from .subgroups import (
    DEFAULT_CAP,
    INFINITE_KINDS,
    GroupSpec,
    InfiniteSignal,
    UnsupportedGroup,
    catalog_generators,
    group_elements,
    is_invariant,
    matrix_closure,
    orbit,
    sample_elements,
    structural_orbits,
)

FULL = Multiplicity.full()


@dataclass(frozen=True)
class MonoidSpec:
    group_part: GroupSpec
    singular_part: SingularPart
    ambient: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ambient", sorted_points(self.ambient))

    @property
    def shape(self):
        return self.singular_part.shape


# closure --------------------------------------------------------------------------

@dataclass
class ClosureResult:
    group: list | InfiniteSignal
    part: SingularPart | None
    has_zero: bool
    group_spec: GroupSpec

    @property
    def group_is_finite(self):
        return not isinstance(self.group, InfiniteSignal)

    def spec(self, ambient=()):
        if self.part is None:
            raise UnsupportedGroup("the invertible part is infinite: declare a catalog group")
        pts = set(ambient) | self.part.rank1set().points()
        return MonoidSpec(self.group_spec, self.part, tuple(pts))


def closure_monoid(gens, K, cap=DEFAULT_CAP):
    """The monoid generated by ``gens`` (identity adjoined), split into H and S."""
    gens = [Mat2(g.rows) for g in gens]
    invertible = [g for g in gens if rank(g) == 2]
    singular = [g for g in gens if rank(g) < 2]
    gspec = GroupSpec.generated(invertible)
    H = matrix_closure(invertible, cap, K)
    state, has_zero = classes_from_elements(singular)
    if isinstance(H, InfiniteSignal):
        return ClosureResult(H, None, has_zero, gspec)
    state, has_zero = saturate(state, has_zero, group=H, cap=cap)
    return ClosureResult(H, part_from_classes(state, has_zero), has_zero, gspec)


# class data relative to canonical bases -------------------------------------------------

@lru_cache(maxsize=None)
def _canonical_product(k1, k2):
    """(k3, c) with base(k1) base(k2) = c base(k3), or None for 0."""
    k3 = rank1_mul(k1, k2)
    if k3 is None:
        return None
    return k3, scalar_ratio(class_base(*k1) * class_base(*k2), class_base(*k3))


def class_data(part, k):
    """Z of class k rescaled to its canonical base, or None when k is not in S."""
    hit = part.lookup(*k)
    if hit is None:
        return None
    base, z = hit
    r = scalar_ratio(base, class_base(*k))
    return z if r == 1 else mult_scale(z, r)


def ambient_classes(part, ambient):
    keys = set(shape_elements(part.shape, ambient).pairs)
    keys |= {k for k in part.explicit_keys() if k[0] in ambient and k[1] in ambient}
    return sorted(keys, key=pair_key)


def closure_violation_on(part, ambient, K):
    """None, or (k1, k2, reason) for a product of ambient classes escaping S."""
    keys = ambient_classes(part, ambient)
    data = {k: class_data(part, k) for k in keys}
    for k1 in keys:
        for k2 in keys:
            bp = _canonical_product(k1, k2)
            if bp is None:
                if not part.has_zero:
                    return k1, k2, "0 missing"
                continue
            k3, c = bp
            z3 = data.get(k3)
            if z3 is None:
                return k1, k2, f"class {k3!r} missing"
            got = mult_scale(mult_product(data[k1], data[k2], K), c)
            if not mult_subset(got, z3):
                return k1, k2, f"{got!r} not inside {z3!r}"
    return None


# the submonoid criterion ------------------------------------------------------------

@dataclass
class SubmonoidCheck:
    ok: bool
    checks: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.ok


def _group_sample(H, K, rng, samples):
    if H.kind in INFINITE_KINDS:
        return sample_elements(H, K, rng, samples)
    return group_elements(H, K)


def check_submonoid(H, S, K, ambient=(), rng=None, samples=20):
    """Is H u S a monoid? Point-set invariance plus scalars of h*s and s*h."""
    rng = rng or random.Random(0)
    shape = S.shape
    checks = []
    sets = [("F", shape.F), ("G", shape.G)]
    if shape.kind == "B":
        sets.append(("center", PointSet.finite([shape.center])))
    for name, X in sets:
        ok, w = is_invariant(H, X, K, rng, samples)
        checks.append(LawCheck(f"{name} is H-invariant", "pass" if ok else "fail", w))

    keys = sorted(set(ambient_classes(S, ambient)) | set(S.explicit_keys()), key=pair_key)
    bad = None
    for h in _group_sample(H, K, rng, samples):
        for k in keys:
            base, z = S.lookup(*k)
            for prod in (h * base, base * h):
                k3 = project(prod).pair()
                hit = S.lookup(*k3)
                if hit is None:
                    bad = (h, k, f"class {k3!r} missing")
                    break
                c = scalar_ratio(prod, hit[0])
                if not mult_subset(mult_scale(z, c), hit[1]):
                    bad = (h, k, f"{c!r}*{z!r} not inside {hit[1]!r}")
                    break
            if bad:
                break
        if bad:
            break
    checks.append(LawCheck("H*S and S*H inside S", "fail" if bad else "pass", bad))
    return SubmonoidCheck(all(c.ok for c in checks), checks)


# structure reports ----------------------------------------------------------------

CASE_TAGS = (
    "type-A/no-nilpotents",
    "type-A/two-sided-nilpotents",
    "type-A/one-sided-image",
    "type-A/one-sided-kernel",
    "type-B",
)


@dataclass
class StructureReport:
    case_tag: str
    equal_multiplicity: bool
    z_values: dict
    witness_family: list
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks)


def _has_nilpotents(part):
    if part.nilpotent_keys():
        return True
    if part.classes:
        return False
    sh = part.shape
    return part.z_nilpotent is not None and not (sh.F & sh.G).is_empty()


def case_tag(part):
    sh = part.shape
    if sh.kind == "B":
        return "type-B"
    if not _has_nilpotents(part):
        return "type-A/no-nilpotents"
    if sh.F.size() == 1:
        return "type-A/one-sided-image"
    if sh.G.size() == 1:
        return "type-A/one-sided-kernel"
    return "type-A/two-sided-nilpotents"


def _z_values(part):
    sh = part.shape
    if sh.kind == "B":
        return {"Z_e": part.z_left, "Z_f": part.z_right, "Z_n": part.z_nilpotent}
    out = {"Z_e": part.z_idempotent}
    if _has_nilpotents(part):
        out["Z_n"] = part.z_nilpotent
    if part.equal_multiplicity and part.z_idempotent is not None:
        out = {"Z_S": part.z_idempotent, **out}
    return out


def structure_report(M, K, rng=None, samples=20):
    part = M.singular_part
    sub = check_submonoid(M.group_part, part, K, M.ambient, rng, samples)
    if not sub.ok:
        raise PreconditionError(f"not a submonoid: {[c for c in sub.checks if not c.ok]!r}")
    checks = list(sub.checks)
    w = closure_violation_on(part, M.ambient, K)
    checks.append(LawCheck("S closed on the ambient", "fail" if w else "pass", w))
    if part.classes:
        checks.extend(check_multiplicity_laws(part, K))
    tag = case_tag(part)
    if tag == "type-A/two-sided-nilpotents" or (tag == "type-A/no-nilpotents" and part.equal_multiplicity):
        z = part.z_idempotent
        if z is not None and z.is_full:
            zs = {k: class_data(part, k) for k in ambient_classes(part, M.ambient)}
            miss = [k for k, zk in zs.items() if zk is None or not zk.is_full]
            checks.append(LawCheck("S = full preimage of B_{F,G} on the ambient",
                                   "fail" if miss else "pass", miss[0] if miss else None))
    if tag.startswith("type-A/one-sided"):
        checks.append(_one_sided_decomposition(part, M.ambient))

    family = intersection_witness_monoid(M, K, rng, samples)
    equal = part.equal_multiplicity if part.classes else _symbolic_equal(part)
    return StructureReport(tag, equal, _z_values(part), family, checks)


def _symbolic_equal(part):
    zs = [z for z in (part.z_idempotent, part.z_nilpotent, part.z_left, part.z_right) if z is not None]
    return all(mult_equal(zs[0], z) for z in zs[1:]) if zs else True


def _one_sided_decomposition(part, ambient):
    """S = Z_e B_{F,G} u Z_n n: one Z_e, one nilpotent class, Z_e inside Z_n."""
    keys = ambient_classes(part, ambient)
    idem = [k for k in keys if k[0] != k[1]]
    nil = [k for k in keys if k[0] == k[1]]
    ze = [class_data(part, k) for k in idem]
    bad = None
    if any(not mult_equal(ze[0], z) for z in ze[1:]):
        bad = "idempotent classes disagree"
    elif len(nil) > 1:
        bad = f"{len(nil)} nilpotent classes"
    elif nil and ze:
        base, zn = part.lookup(*nil[0])
        if not mult_subset(ze[0], zn):
            bad = f"Z_e={ze[0]!r} not inside Z_n={zn!r}"
    return LawCheck("S = Z_e B_{F,G} u Z_n n", "fail" if bad else "pass", bad)


# intersection witnesses -------------------------------------------------------------

@dataclass(frozen=True)
class DefinableMonoid:
    """H u S_i with finite/cofinite point data and finitely described scalars."""

    group: GroupSpec
    part: SingularPart

    def __repr__(self):
        return f"{self.group!r} u {self.part.shape!r}"


@dataclass
class MemberCheck:
    contains: LawCheck
    closed: LawCheck
    invariant: LawCheck

    @property
    def ok(self):
        return self.contains.ok and self.closed.ok and self.invariant.ok


def _exclusions(X, ambient, H, K):
    """Finite H-invariant sets covering ambient \\ X, or None when impossible."""
    rest = [p for p in ambient if p not in X]
    out = []
    if H.kind in INFINITE_KINDS:
        fin = structural_orbits(H, K)
        for p in rest:
            o = next((o for o in fin if p in o), None)
            if o is None:
                return None
            if o not in out:
                out.append(o)
        return out
    gens = catalog_generators(H, K)
    for p in rest:
        if any(p in o for o in out):
            continue
        try:
            out.append(orbit(gens, p))
        except UnsupportedGroup:
            return None
    return out


def _widen(X, ambient, H, K, merged=False):
    """Cofinite H-invariant supersets of X that cut out X on the ambient.

    One set per excluded orbit, or a single set excluding all of them when
    ``merged``. Returns [X] when X is already cofinite or cannot be widened.
    """
    if X.cofinite:
        return [X]
    orbits = _exclusions(X, ambient, H, K)
    if orbits is None:
        return [X]
    if merged:
        return [PointSet.cofinite_of(p for o in orbits for p in o)]
    return [PointSet.cofinite_of(o) for o in orbits]


def _symbolic(shape, z_e=None, z_n=None, n_base=None, z_left=None, z_right=None):
    zs = [z for z in (z_e, z_n, z_left, z_right) if z is not None]
    equal = all(mult_equal(zs[0], z) for z in zs[1:]) if zs else True
    return SingularPart(shape=shape, z_idempotent=z_e, z_nilpotent=z_n, nilpotent_base=n_base,
                        equal_multiplicity=equal, z_left=z_left, z_right=z_right)


def _common_idempotent_z(M):
    part = M.singular_part
    if part.z_idempotent is not None:
        return part.z_idempotent
    keys = [k for k in ambient_classes(part, M.ambient) if k[0] != k[1]]
    zs = [class_data(part, k) for k in keys]
    if zs and all(mult_equal(zs[0], z) for z in zs[1:]):
        return zs[0]
    return None


def _nil_data(part, v):
    """(Z_n, base) for the nilpotent class at v, or None."""
    if not part.shape.contains(v, v):
        return None
    base, z = part.lookup(v, v)
    return z, base


def _type_a_members(M, K):
    part = M.singular_part
    sh = part.shape
    H = M.group_part
    amb = M.ambient
    everything = PointSet.everything()
    z_e = _common_idempotent_z(M)
    nil_keys = [k for k in ambient_classes(part, amb) if k[0] == k[1]]
    nil_full = all(class_data(part, k).is_full for k in nil_keys)
    if z_e is None and not nil_keys:
        return None
    full = (z_e is None or z_e.is_full) and nil_full

    members = []
    if full:
        if sh.has_zero:
            for U in _widen(sh.F, amb, H, K):
                members.append(SingularShape.type_a(U, everything, True))
            for V in _widen(sh.G, amb, H, K):
                members.append(SingularShape.type_a(everything, V, True))
        else:
            if not sh.G.cofinite:
                for U in _widen(sh.F, amb, H, K):
                    members.append(SingularShape.type_a(U - sh.G, sh.G, False))
            if not sh.F.cofinite:
                for V in _widen(sh.G, amb, H, K):
                    members.append(SingularShape.type_a(sh.F, V - sh.F, False))
        return [_symbolic(s, FULL, FULL) for s in members]

    # torsion scalars survive widening only along the long side of a one-sided shape
    if sh.F.size() == 1:
        (v,) = sh.F.points
        nd = _nil_data(part, v)
        for V in _widen(sh.G, amb, H, K):
            V = V if sh.has_zero else V - sh.F
            s = SingularShape.type_a(sh.F, V, sh.has_zero)
            members.append(_symbolic(s, z_e, *(nd or (FULL, None))))
        return members
    if sh.G.size() == 1:
        (u,) = sh.G.points
        nd = _nil_data(part, u)
        for U in _widen(sh.F, amb, H, K):
            U = U if sh.has_zero else U - sh.G
            s = SingularShape.type_a(U, sh.G, sh.has_zero)
            members.append(_symbolic(s, z_e, *(nd or (FULL, None))))
        return members
    return None


def cross_coefficients(F, G, center, n_base, ambient):
    """Coefficients a with e*f = a*n for e = (center, u), f = (v, center) over the ambient."""
    out = []
    for u in G.restrict(ambient):
        for v in F.restrict(ambient):
            if center in (u, v) or u == v:
                continue
            prod = class_base(center, u) * class_base(v, center)
            out.append(scalar_ratio(prod, n_base))
    return out


def _type_b_members(M, K):
    part = M.singular_part
    sh = part.shape
    H = M.group_part
    amb = M.ambient
    c = sh.center
    z_l, z_r = part.z_left, part.z_right
    if z_l is None or z_r is None:
        return None
    nd = _nil_data(part, c)
    z_n, n_base = nd if nd else (None, class_base(c, c))
    members = []
    for side in ("F", "G"):
        # merged: cross products with freshly admitted points would add
        # nilpotent coefficients that no other member could remove
        for W in _widen(sh.F if side == "F" else sh.G, amb, H, K, merged=True):
            F, G = (W, sh.G) if side == "F" else (sh.F, W)
            coeffs = cross_coefficients(F, G, c, n_base, amb)
            if z_l.is_full or z_r.is_full or (z_n is not None and z_n.is_full):
                A = FULL
            else:
                extra = {a * x * y for a in coeffs for x in z_l.elements(K) for y in z_r.elements(K)}
                base_vals = set(z_n.elements(K)) if z_n is not None else set()
                A = canonical(Multiplicity.explicit(base_vals | extra), K) if base_vals | extra else None
            members.append(_symbolic(SingularShape.type_b(F, G, c), None, A, n_base, z_l, z_r))
    return members


def _widened(member_shape, shape):
    every = PointSet.everything()
    return member_shape.F not in (shape.F, every) or member_shape.G not in (shape.G, every)


def _as_member(M):
    return DefinableMonoid(M.group_part, M.singular_part)


def _all_cofinite(sh):
    return sh.F.cofinite and sh.G.cofinite


def intersection_witness_monoid(M, K, rng=None, samples=20):
    """Definable monoids H u S_i, each verified, whose intersection is M on the ambient.

    The singleton {M} comes back when M is already given by cofinite data,
    when H is infinite (finite invariant sets cannot be widened past its
    infinite orbit), or when no widening keeps the scalar data finite.
    """
    rng = rng or random.Random(0)
    part = M.singular_part
    sh = part.shape
    missing = part.rank1set().points() - set(M.ambient)
    if missing:
        raise ValueError(f"ambient lacks the points {sorted_points(missing)!r}")
    parts = None
    if not _all_cofinite(sh) and not (sh.F.is_empty() and sh.G.is_empty()):
        parts = _type_b_members(M, K) if sh.kind == "B" else _type_a_members(M, K)
    if parts and not any(_widened(p.shape, sh) for p in parts):
        parts = None
    family = [_as_member(M)] if not parts else [DefinableMonoid(M.group_part, p) for p in parts]
    if parts and not family_matches(M, family, K):
        # widening created classes the other members cannot remove again
        family = [_as_member(M)]
    for member in family:
        chk = verify_member(M, member, K, rng, samples)
        if not chk.ok:
            raise ValueError(f"witness {member!r} failed: {chk!r}")
    if not family_matches(M, family, K):
        raise ValueError("ambient too small to separate the monoid")
    return family


def verify_member(M, member, K, rng=None, samples=20):
    amb = M.ambient
    part = member.part
    miss = None
    if M.singular_part.has_zero and not part.has_zero:
        miss = "0 missing"
    for k in ambient_classes(M.singular_part, amb):
        if miss:
            break
        zm = class_data(M.singular_part, k)
        zw = class_data(part, k)
        if zw is None or not mult_subset(zm, zw):
            miss = (k, zm, zw)
    contains = LawCheck("contains M", "fail" if miss else "pass", miss)
    w = closure_violation_on(part, amb, K)
    closed = LawCheck("closed on the ambient", "fail" if w else "pass", w)
    sub = check_submonoid(member.group, part, K, amb, rng, samples)
    bad = [c for c in sub.checks if not c.ok]
    invariant = LawCheck("H-invariant", "fail" if bad else "pass", bad[0].witness if bad else None)
    return MemberCheck(contains, closed, invariant)


def family_matches(M, family, K):
    """Do the members meet exactly in M on the ambient?"""
    amb = M.ambient
    if all(m.part.has_zero for m in family) != M.singular_part.has_zero:
        return False
    for v in amb:
        for u in amb:
            k = (v, u)
            zm = class_data(M.singular_part, k)
            zs = [class_data(m.part, k) for m in family]
            if any(z is None for z in zs):
                if zm is not None:
                    return False
                continue
            if zm is None:
                return False
            inter = zs[0]
            for z in zs[1:]:
                inter = mult_intersection(inter, z, K)
            if not mult_equal(inter, zm):
                return False
    return True


def family_intersection_size(family, ambient):
    """Number of ambient classes present in every member (a reporting aid)."""
    pts = sorted(ambient, key=point_key)
    return sum(all(m.part.lookup(v, u) is not None for m in family) for v in pts for u in pts)
