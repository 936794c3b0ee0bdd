"""
Multiplicities Z_x = {z : z*x in S} of singular semigroups in M_2.

Scalar data for a rank-one class is always stored relative to a fixed base
matrix of that class: the canonical idempotent for (v, u) with v != u, and
for the nilpotent class (v, v) either the canonical nilpotent or a concrete
element of the semigroup (``nilpotent_base``), since projecting loses the
nilpotent's scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .bfg import Rank1Set, SingularShape, classify, pair_key
from .mat2 import Mat2, class_base, idempotent_from_points, rank, scalar_ratio
from .pm2 import project, rank1_mul
from .scalar import (
    Multiplicity,
    canonical,
    mult_equal,
    mult_product,
    mult_scale,
    mult_subset,
    root_of_unity_order,
    torsion_closure,
)


class PreconditionError(ValueError):
    pass


class ZeroProduct(PreconditionError):
    pass


class NilpotentProduct(PreconditionError):
    pass


class CapExceeded(RuntimeError):
    pass


# formulas -------------------------------------------------------------------

def lambda_product(e, f):
    """lambda with e*f = lambda*h for idempotents e = (v, u), f = (v', u').

    Returns (lambda, (v, u')). The points may be ProjPoints or raw
    coordinate pairs; the value does not depend on the representatives.
    """
    (a, b), (c, d) = _coords(e[0]), _coords(e[1])
    (x, y), (z, w) = _coords(f[0]), _coords(f[1])
    de = a * d - b * c
    df = x * w - y * z
    if not de or not df:
        raise PreconditionError("image equals kernel: not an idempotent class")
    if not (d * x - c * y):
        raise ZeroProduct("kernel of e equals image of f: the product is zero")
    if not (a * w - b * z):
        raise NilpotentProduct("image of e equals kernel of f: the product is nilpotent")
    lam = (a * w - b * z) * (d * x - c * y) / (de * df)
    return lam, (e[0], f[1])


def lambda_preimage(lam, v, v2, u2):
    """The kernel [c:d] of e giving lambda_product((v,[c:d]), (v2,u2)) == lam."""
    from .projline import normalize

    if not lam:
        raise PreconditionError("lambda must be nonzero")
    if v == v2 or v == u2 or v2 == u2:
        raise PreconditionError("anchor points must be pairwise distinct")
    a, b = v.coords()
    x, y = v2.coords()
    z, w = u2.coords()
    p = a * w - b * z
    q = x * w - y * z
    cc = lam * b * q - y * p
    dd = x * p - a * lam * q
    # cc*c + dd*d = 0
    return normalize(-dd, cc)


def nilpotent_product(e, f):
    """e*f for e = (v, u), f = (v', v): a nilpotent with image v."""
    (a, b), (c, d) = _coords(e[0]), _coords(e[1])
    (x, y), (a2, b2) = _coords(f[0]), _coords(f[1])
    if a * b2 - b * a2:
        raise PreconditionError("kernel of f must equal image of e")
    if not (c * y - d * x):
        raise ZeroProduct("kernel of e equals image of f: the product is zero")
    if not (a * d - b * c) or not (a * y - b * x):
        raise PreconditionError("degenerate idempotent data")
    return _idem(e) * _idem(f)


def nilpotent_product_formula(e, f):
    """The closed form (cy-dx)/((ad-bc)(ay-bx)) * [[ab, -a^2], [b^2, -ab]]."""
    (a, b), (c, d) = _coords(e[0]), _coords(e[1])
    (x, y), _ = _coords(f[0]), _coords(f[1])
    k = (c * y - d * x) / ((a * d - b * c) * (a * y - b * x))
    return Mat2(((k * a * b, -k * a * a), (k * b * b, -k * a * b)))


def _coords(p):
    return p.coords() if hasattr(p, "coords") else tuple(p)


def _idem(pair):
    from .projline import normalize

    v, u = pair
    if not hasattr(v, "coords"):
        v, u = normalize(*v), normalize(*u)
    return idempotent_from_points(v, u)


# base-relative products ---------------------------------------------------------

def base_product(k1, k2, base1=None, base2=None):
    """(k3, c) with base1*base2 == c*base(k3), or None when the product is 0."""
    k3 = rank1_mul(k1, k2)
    if k3 is None:
        return None
    b1 = base1 if base1 is not None else class_base(*k1)
    b2 = base2 if base2 is not None else class_base(*k2)
    return k3, scalar_ratio(b1 * b2, class_base(*k3))


# the singular part --------------------------------------------------------------

@dataclass(frozen=True)
class SingularPart:
    """Projective shape plus scalar data of a singular semigroup.

    Class data is looked up in ``classes`` first (explicit, per class) and
    otherwise through the shape-level defaults, which is how witness
    members with cofinite point sets are described.
    """

    shape: SingularShape
    z_idempotent: Multiplicity | None = None
    z_nilpotent: Multiplicity | None = None
    nilpotent_base: Mat2 | None = None
    equal_multiplicity: bool = True
    z_left: Multiplicity | None = None
    z_right: Multiplicity | None = None
    classes: tuple = ()  # ((v, u), base, Multiplicity)

    @cached_property
    def class_map(self):
        return {k: (b, m) for k, b, m in self.classes}

    @property
    def has_zero(self):
        return self.shape.has_zero

    def lookup(self, v, u):
        """(base, Z) for the class (v, u), or None when it is not in S."""
        if not self.shape.contains(v, u):
            return None
        hit = self.class_map.get((v, u))
        if hit is not None:
            return hit
        if v == u:
            if self.nilpotent_base is not None and project(self.nilpotent_base).pair() == (v, u):
                return self.nilpotent_base, self.z_nilpotent
            if self.z_nilpotent is not None and self.z_nilpotent.is_full:
                return class_base(v, u), self.z_nilpotent
            raise LookupError(f"no scalar data for the nilpotent class at {v!r}")
        z = self.z_idempotent
        if self.shape.kind == "B":
            if v == self.shape.center and self.z_left is not None:
                z = self.z_left
            elif u == self.shape.center and self.z_right is not None:
                z = self.z_right
        if z is None:
            raise LookupError(f"no scalar data for the class ({v!r}, {u!r})")
        return class_base(v, u), z

    def contains_matrix(self, x):
        r = rank(x)
        if r == 0:
            return self.has_zero
        if r == 2:
            return False
        v, u = project(x).pair()
        hit = self.lookup(v, u)
        if hit is None:
            return False
        base, z = hit
        c = scalar_ratio(x, base)
        return c is not None and z.contains(c)

    def explicit_keys(self):
        return [k for k, _, _ in self.classes]

    def idempotent_keys(self):
        return [k for k in self.explicit_keys() if k[0] != k[1]]

    def nilpotent_keys(self):
        return [k for k in self.explicit_keys() if k[0] == k[1]]

    def rank1set(self):
        return Rank1Set.of(self.explicit_keys(), self.has_zero)

    def elements(self, K):
        """All matrices, when every class has finite scalar data."""
        out = [Mat2.zero(K)] if self.has_zero else []
        for _, base, z in self.classes:
            out.extend(base.scale(s) for s in z.elements(K))
        return out


# saturation ---------------------------------------------------------------------

FULL = "full"


def _is_torsion(z):
    return root_of_unity_order(z) is not None


def _merge(state, key, new, cap):
    """Add scalar data ``new`` to the class ``key``; True when it grew."""
    old = state.get(key)
    if old == FULL:
        return False
    if new == FULL:
        state[key] = FULL
        return True
    merged = set(old or ()) | set(new)
    if key[0] != key[1] and any(not _is_torsion(s) for s in merged):
        # idempotent class with a non-torsion multiple: its Zariski closure is C^x
        state[key] = FULL
        return True
    if old is not None and len(merged) == len(old):
        return False
    if len(merged) > cap:
        raise CapExceeded(f"scalar set of class {key!r} exceeds {cap}")
    state[key] = frozenset(merged)
    return True


def _times(A, B, c):
    if A == FULL or B == FULL:
        return FULL
    return {a * b * c for a in A for b in B}


def saturate(state, has_zero, group=(), cap=10000):
    """Close class-level scalar data under products and the action of ``group``.

    ``state`` maps (image, kernel) -> set of scalars relative to the class
    base, or FULL. Returns (state, has_zero).
    """
    state = dict(state)
    memo = {}
    changed = True
    while changed:
        changed = False
        keys = sorted(state, key=pair_key)
        for k1 in keys:
            for k2 in keys:
                if (k1, k2) not in memo:
                    memo[k1, k2] = base_product(k1, k2)
                bp = memo[k1, k2]
                if bp is None:
                    if not has_zero:
                        has_zero = True
                        changed = True
                    continue
                k3, c = bp
                if _merge(state, k3, _times(state[k1], state[k2], c), cap):
                    changed = True
        for h in group:
            for k in keys:
                base = class_base(*k)
                for prod in (h * base, base * h):
                    k3 = project(prod).pair()
                    c = scalar_ratio(prod, class_base(*k3))
                    src = state[k]
                    new = FULL if src == FULL else {s * c for s in src}
                    if _merge(state, k3, new, cap):
                        changed = True
        if len(state) > cap:
            raise CapExceeded(f"more than {cap} rank-one classes")
    return state, has_zero


# building a SingularPart ------------------------------------------------------------

def classes_from_elements(elements):
    """Group singular matrices by class: ({key: set of scalars}, has_zero)."""
    state = {}
    has_zero = False
    for x in elements:
        r = rank(x)
        if r == 2:
            raise PreconditionError(f"{x!r} is invertible, not singular")
        if r == 0:
            has_zero = True
            continue
        k = project(x).pair()
        state.setdefault(k, set()).add(scalar_ratio(x, class_base(*k)))
    return state, has_zero


def part_from_classes(state, has_zero):
    keys = sorted(state, key=pair_key)
    shape = classify(Rank1Set.of(keys, has_zero))
    K = None
    for k in keys:
        K = k[0].field
        break
    full_idem_points = set()
    data = {}
    for k in keys:
        if k[0] == k[1]:
            continue
        src = state[k]
        z = Multiplicity.full() if src == FULL else torsion_closure(src)
        data[k] = (class_base(*k), z)
        if z.is_full:
            full_idem_points.update(k)
    for k in keys:
        if k[0] != k[1]:
            continue
        src = state[k]
        base = class_base(*k)
        if src == FULL or k[0] in full_idem_points:
            data[k] = (base, Multiplicity.full())
            continue
        r0 = min(src, key=lambda s: s.sort_key())
        rel = canonical(Multiplicity.explicit([s / r0 for s in src]), K)
        data[k] = (base.scale(r0), rel)

    classes = tuple((k, data[k][0], data[k][1]) for k in keys)
    zs = [m for _, _, m in classes]
    equal = all(mult_equal(zs[0], m) for m in zs[1:]) if zs else True

    def common(sel):
        ms = [data[k][1] for k in keys if sel(k)]
        if ms and all(mult_equal(ms[0], m) for m in ms[1:]):
            return ms[0]
        return None

    z_idem = common(lambda k: k[0] != k[1])
    nil_keys = [k for k in keys if k[0] == k[1]]
    z_nil = data[nil_keys[0]][1] if nil_keys else None
    n_base = data[nil_keys[0]][0] if nil_keys else None
    z_left = z_right = None
    if shape.kind == "B":
        c = shape.center
        z_left = common(lambda k: k[0] == c and k[1] != c)
        z_right = common(lambda k: k[1] == c and k[0] != c)
    return SingularPart(
        shape=shape,
        z_idempotent=z_idem,
        z_nilpotent=z_nil,
        nilpotent_base=n_base,
        equal_multiplicity=equal,
        z_left=z_left,
        z_right=z_right,
        classes=classes,
    )


def compute_multiplicities(elements, closed=True, cap=10000):
    """SingularPart of a finite set of singular matrices.

    With ``closed`` the set is taken as the semigroup itself (scalar sets
    read off directly, then closed up in the Zariski sense). Otherwise it is
    a generating set and is saturated first.
    """
    state, has_zero = classes_from_elements(elements)
    if not closed:
        state, has_zero = saturate(state, has_zero, cap=cap)
    return part_from_classes(state, has_zero)


def part_is_closed(part, K):
    """Class-level closure of a materialized part; None or a witness."""
    keys = part.explicit_keys()
    for k1 in keys:
        b1, z1 = part.class_map[k1]
        for k2 in keys:
            b2, z2 = part.class_map[k2]
            bp = base_product(k1, k2, b1, b2)
            if bp is None:
                if not part.has_zero:
                    return (k1, k2, "0 missing")
                continue
            k3, _ = bp
            hit = part.lookup(*k3)
            if hit is None:
                return (k1, k2, f"class {k3!r} missing")
            b3, z3 = hit
            c = scalar_ratio(b1 * b2, b3)
            if not mult_subset(mult_scale(mult_product(z1, z2, K), c), z3):
                return (k1, k2, f"scalars {z1!r}*{z2!r}*{c!r} not inside {z3!r}")
    return None


# law checks -------------------------------------------------------------------------

@dataclass
class LawCheck:
    law: str
    status: str  # "pass" | "fail" | "exempt" | "n/a"
    witness: object = None
    note: str = ""

    @property
    def ok(self):
        return self.status != "fail"


def check_multiplicity_laws(part, K=None):
    shape = part.shape
    keys = part.explicit_keys()
    idem = part.idempotent_keys()
    nil = part.nilpotent_keys()
    if K is None:
        K = keys[0][0].field if keys else None
    checks = []

    def z(k):
        return part.class_map[k][1]

    def equal_over(ks):
        for k in ks[1:]:
            if not mult_equal(z(ks[0]), z(k)):
                return (ks[0], z(ks[0]), k, z(k))
        return None

    # (1) equal idempotent multiplicity for B_{F,G}
    if shape.kind != "A":
        checks.append(LawCheck("equal idempotent multiplicity", "exempt",
                               note="projection is not of the form B_{F,G}"))
    else:
        w = equal_over(idem)
        checks.append(LawCheck("equal idempotent multiplicity", "fail" if w else "pass", w))

    nF = shape.F.size()
    nG = shape.G.size()
    two_sided = shape.kind == "A" and (nF is None or nF > 1) and (nG is None or nG > 1)
    one_sided = shape.kind == "A" and (nF == 1 or nG == 1)

    # (2) nilpotents share the idempotent multiplicity when |F|, |G| > 1
    if two_sided and nil and idem:
        bad = None
        for n in nil:
            if not mult_equal(z(n), z(idem[0])):
                bad = (n, z(n), idem[0], z(idem[0]))
                break
        checks.append(LawCheck("Z_n = Z_e", "fail" if bad else "pass", bad))
    else:
        checks.append(LawCheck("Z_n = Z_e", "n/a"))

    # (3) one-sided case
    if one_sided:
        checks.append(LawCheck("at most one nilpotent class", "pass" if len(nil) <= 1 else "fail",
                               None if len(nil) <= 1 else nil))
        if nil and idem:
            bad = [k for k in idem if not mult_subset(z(k), z(nil[0]))]
            checks.append(LawCheck("Z_e within Z_n", "fail" if bad else "pass",
                                   (bad[0], z(bad[0]), z(nil[0])) if bad else None))
        else:
            checks.append(LawCheck("Z_e within Z_n", "n/a"))
        checks.append(_check_nil_ideal(part, keys, nil))
        checks.append(_check_idempotent_products(part, idem))
    else:
        for law in ("at most one nilpotent class", "Z_e within Z_n",
                    "nilpotents form an ideal", "idempotent products are idempotent"):
            checks.append(LawCheck(law, "n/a"))

    # (4) type B decomposition
    if shape.kind == "B":
        checks.extend(_check_type_b(part, K))
    else:
        checks.append(LawCheck("type B decomposition", "n/a"))

    # Distinct kernels give distinct lambdas, and Q(zeta_N) holds only
    # `torsion` roots of unity: more kernels than that (two may be
    # excluded) force a non-torsion lambda, hence Z = C^x.
    if shape.kind == "A" and K is not None and idem:
        inf = float("inf")
        nF_, nG_ = (inf if nF is None else nF), (inf if nG is None else nG)
        bound = K.torsion + 2
        big = (nF_ > 1 and nG_ > bound) or (nG_ > 1 and nF_ > bound)
        if big:
            bad = [k for k in idem if not z(k).is_full]
            checks.append(LawCheck("many classes force C^x", "fail" if bad else "pass",
                                   bad[0] if bad else None))
        else:
            checks.append(LawCheck("many classes force C^x", "n/a"))
    return checks


def _check_nil_ideal(part, keys, nil):
    nilset = set(nil)
    for n in nil:
        for k in keys:
            for a, b in ((k, n), (n, k)):
                p = rank1_mul(a, b)
                if p is not None and (p[0] != p[1] or p not in nilset):
                    return LawCheck("nilpotents form an ideal", "fail", (a, b, p))
                if p is not None:
                    ba, _ = part.class_map[a]
                    bb, _ = part.class_map[b]
                    if not ((ba * bb) * (ba * bb)).is_zero():
                        return LawCheck("nilpotents form an ideal", "fail", (a, b, "not nilpotent"))
    return LawCheck("nilpotents form an ideal", "pass" if nil else "n/a")


def _check_idempotent_products(part, idem):
    for k1 in idem:
        for k2 in idem:
            bp = base_product(k1, k2)
            if bp is None:
                continue
            k3, c = bp
            if k3[0] == k3[1] or c != 1:
                return LawCheck("idempotent products are idempotent", "fail", (k1, k2, k3, c))
    return LawCheck("idempotent products are idempotent", "pass" if idem else "n/a")


def _check_type_b(part, K):
    c = part.shape.center
    left = [k for k in part.idempotent_keys() if k[0] == c]
    right = [k for k in part.idempotent_keys() if k[1] == c]
    nil = part.nilpotent_keys()
    out = []

    def common(ks):
        if not ks:
            return None, None
        z0 = part.class_map[ks[0]][1]
        for k in ks[1:]:
            if not mult_equal(z0, part.class_map[k][1]):
                return z0, k
        return z0, None

    ze, bad_e = common(left)
    zf, bad_f = common(right)
    covered = set(left) | set(right) | set(nil)
    stray = [k for k in part.explicit_keys() if k not in covered]
    ok = bad_e is None and bad_f is None and len(nil) <= 1 and not stray
    out.append(LawCheck("type B decomposition", "pass" if ok else "fail",
                        None if ok else {"left": bad_e, "right": bad_f, "nilpotents": nil,
                                         "stray": stray},
                        note=f"Z_e={ze!r}, Z_f={zf!r}, Z_n={part.z_nilpotent!r}"))
    if left and right and nil:
        e = part.class_map[left[0]][0]
        f = part.class_map[right[0]][0]
        n = part.nilpotent_base
        rel = {
            "fe=0": (f * e).is_zero(),
            "ne=0": (n * e).is_zero(),
            "fn=0": (f * n).is_zero(),
            "en=n": e * n == n,
            "nf=n": n * f == n,
        }
        bad = [k for k, v in rel.items() if not v]
        out.append(LawCheck("fe=0, ne=0, fn=0, en=n, nf=n", "fail" if bad else "pass",
                            bad or None))
        # every e*f lands in Z_n * n
        miss = None
        zn = part.z_nilpotent
        for kl in left:
            for kr in right:
                bl, zl = part.class_map[kl]
                br, zr = part.class_map[kr]
                prod = bl * br
                if prod.is_zero():
                    continue
                coeff = scalar_ratio(prod, n)
                if not mult_subset(mult_scale(mult_product(zl, zr, K), coeff), zn):
                    miss = (kl, kr, coeff)
                    break
            if miss:
                break
        out.append(LawCheck("ef inside Z_n n", "fail" if miss else "pass", miss))
    else:
        out.append(LawCheck("fe=0, ne=0, fn=0, en=n, nf=n", "n/a"))
        out.append(LawCheck("ef inside Z_n n", "n/a"))
    return out
