"""JSON encoding of scalars, points, matrices, shapes, specs and reports.

Rational scalars are written as "p/q" strings (plain "p" for integers);
anything else as {"order": N, "coeffs": [...]}. Decoders take the field
as an argument and reject scalars from a different cyclotomic order.
"""

from __future__ import annotations

from fractions import Fraction

from .bfg import Rank1Set, SingularShape
from .mat2 import Mat2
from .multiplicity import LawCheck, SingularPart
from .pm2 import PM2Elem
from .projline import PointSet, ProjPoint, normalize
from .scalar import Cyclo, Multiplicity
from .subgroups import GroupSpec, InfiniteSignal, OrbitDecomposition


class ParseError(ValueError):
    pass


# scalars ------------------------------------------------------------------------

def dump_scalar(x):
    if x.is_rational():
        return str(Fraction(x.coeffs[0]))
    return {"order": x.field.order, "coeffs": [str(c) for c in x.coeffs]}


def load_scalar(obj, K):
    if isinstance(obj, bool):
        raise ParseError(f"not a scalar: {obj!r}")
    if isinstance(obj, int):
        return K(obj)
    if isinstance(obj, str):
        try:
            return K(Fraction(obj.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad rational {obj!r}") from e
    if isinstance(obj, dict):
        if obj.get("order") != K.order:
            raise ParseError(f"scalar of order {obj.get('order')} in a job over Q(zeta_{K.order})")
        coeffs = obj.get("coeffs")
        if not isinstance(coeffs, list) or len(coeffs) != K.degree:
            raise ParseError(f"expected {K.degree} coefficients, got {coeffs!r}")
        try:
            return K.from_coeffs([Fraction(str(c)) for c in coeffs])
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad coefficients {coeffs!r}") from e
    raise ParseError(f"not a scalar: {obj!r}")


# points and point sets ------------------------------------------------------------

def dump_point(p):
    return {"a": dump_scalar(p.a), "b": dump_scalar(p.b)}


def load_point(obj, K):
    if isinstance(obj, list) and len(obj) == 2:
        a, b = obj
    elif isinstance(obj, dict) and set(obj) == {"a", "b"}:
        a, b = obj["a"], obj["b"]
    else:
        raise ParseError(f"not a point: {obj!r}")
    try:
        return normalize(load_scalar(a, K), load_scalar(b, K))
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e)) from e


def dump_pointset(X):
    return {"mode": X.mode, "points": [dump_point(p) for p in X.points]}


def load_pointset(obj, K):
    if isinstance(obj, list):
        return PointSet.finite(load_point(p, K) for p in obj)
    mode = _get(obj, "mode")
    pts = [load_point(p, K) for p in _get(obj, "points")]
    if mode == "finite":
        return PointSet.finite(pts)
    if mode == "cofinite":
        return PointSet.cofinite_of(pts)
    raise ParseError(f"unknown point-set mode {mode!r}")


# matrices -----------------------------------------------------------------------

def dump_matrix(m):
    return [[dump_scalar(x) for x in row] for row in m.rows]


def load_matrix(obj, K):
    if not (isinstance(obj, list) and len(obj) == 2 and all(isinstance(r, list) and len(r) == 2 for r in obj)):
        raise ParseError(f"not a 2x2 matrix: {obj!r}")
    return Mat2(tuple(tuple(load_scalar(x, K) for x in row) for row in obj))


def dump_pm2(x):
    if x.is_zero:
        return {"kind": "zero"}
    if x.is_rank1:
        return {"kind": "rank1", "image": dump_point(x.image), "kernel": dump_point(x.kernel)}
    return {"kind": "invertible", "rep": dump_matrix(x.rep)}


def load_pm2(obj, K):
    kind = _get(obj, "kind")
    if kind == "zero":
        return PM2Elem.zero()
    if kind == "rank1":
        return PM2Elem.rank1(load_point(_get(obj, "image"), K), load_point(_get(obj, "kernel"), K))
    if kind == "invertible":
        return PM2Elem("invertible", rep=load_matrix(_get(obj, "rep"), K))
    raise ParseError(f"unknown PM2 kind {kind!r}")


# multiplicities and shapes -----------------------------------------------------------

def dump_mult(m):
    if m is None:
        return None
    if m.kind == "full":
        return {"kind": "full"}
    if m.kind == "roots":
        return {"kind": "roots", "n": m.n}
    return {"kind": "explicit", "values": [dump_scalar(v) for v in m.values]}


def load_mult(obj, K):
    if obj is None:
        return None
    kind = _get(obj, "kind")
    if kind == "full":
        return Multiplicity.full()
    if kind == "roots":
        return Multiplicity.roots(int(_get(obj, "n")))
    if kind == "explicit":
        return Multiplicity.explicit(load_scalar(v, K) for v in _get(obj, "values"))
    raise ParseError(f"unknown multiplicity kind {kind!r}")


def dump_pair(k):
    return [dump_point(k[0]), dump_point(k[1])]


def dump_rank1set(S):
    return {"pairs": [dump_pair(k) for k in S.sorted_pairs()], "has_zero": S.has_zero}


def load_rank1set(obj, K):
    pairs = []
    for pr in _get(obj, "pairs"):
        if not (isinstance(pr, list) and len(pr) == 2):
            raise ParseError(f"not an (image, kernel) pair: {pr!r}")
        pairs.append((load_point(pr[0], K), load_point(pr[1], K)))
    return Rank1Set.of(pairs, bool(obj.get("has_zero", False)))


def dump_shape(s):
    out = {"type": s.kind, "F": dump_pointset(s.F), "G": dump_pointset(s.G), "has_zero": s.has_zero}
    if s.kind == "B":
        out["center"] = dump_point(s.center)
    return out


def load_shape(obj, K):
    kind = _get(obj, "type")
    F = load_pointset(_get(obj, "F"), K)
    G = load_pointset(_get(obj, "G"), K)
    if kind == "A":
        return SingularShape.type_a(F, G, bool(obj.get("has_zero", True)))
    if kind == "B":
        return SingularShape.type_b(F, G, load_point(_get(obj, "center"), K))
    raise ParseError(f"unknown shape type {kind!r}")


def dump_part(p):
    out = {"shape": dump_shape(p.shape), "equal_multiplicity": p.equal_multiplicity}
    for name in ("z_idempotent", "z_nilpotent", "z_left", "z_right"):
        if getattr(p, name) is not None:
            out[name] = dump_mult(getattr(p, name))
    if p.nilpotent_base is not None:
        out["nilpotent_base"] = dump_matrix(p.nilpotent_base)
    if p.classes:
        out["classes"] = [
            {"image": dump_point(k[0]), "kernel": dump_point(k[1]), "base": dump_matrix(b), "z": dump_mult(z)}
            for k, b, z in p.classes
        ]
    return out


def load_part(obj, K):
    classes = tuple(
        ((load_point(_get(c, "image"), K), load_point(_get(c, "kernel"), K)),
         load_matrix(_get(c, "base"), K), load_mult(_get(c, "z"), K))
        for c in obj.get("classes", ())
    )
    nb = obj.get("nilpotent_base")
    return SingularPart(
        shape=load_shape(_get(obj, "shape"), K),
        z_idempotent=load_mult(obj.get("z_idempotent"), K),
        z_nilpotent=load_mult(obj.get("z_nilpotent"), K),
        nilpotent_base=None if nb is None else load_matrix(nb, K),
        equal_multiplicity=bool(obj.get("equal_multiplicity", True)),
        z_left=load_mult(obj.get("z_left"), K),
        z_right=load_mult(obj.get("z_right"), K),
        classes=classes,
    )


# groups and monoids -------------------------------------------------------------------

def dump_group(g):
    out = {"kind": g.kind}
    if g.kind == "Dn":
        out["n"] = g.n
    if g.kind == "FiniteGenerated":
        out["gens"] = [dump_matrix(m) for m in g.gens]
    if g.conjugator is not None:
        out["conjugator"] = dump_matrix(g.conjugator)
    return out


def load_group(obj, K):
    kind = _get(obj, "kind")
    try:
        spec = GroupSpec(
            kind,
            int(obj.get("n", 0)),
            tuple(load_matrix(m, K) for m in obj.get("gens", ())),
            None if obj.get("conjugator") is None else load_matrix(obj["conjugator"], K),
        )
    except ParseError:
        raise
    except ValueError as e:
        raise ParseError(str(e)) from e
    if spec.conjugator is not None and not spec.conjugator.det():
        raise ParseError("conjugator must be invertible")
    return spec


def dump_monoid(M):
    return {
        "group": dump_group(M.group_part),
        "singular": dump_part(M.singular_part),
        "ambient": [dump_point(p) for p in M.ambient],
    }


def load_monoid(obj, K, ambient=()):
    from .monoid import MonoidSpec

    part = load_part(_get(obj, "singular"), K)
    group = load_group(obj["group"], K) if obj.get("group") is not None else GroupSpec.trivial()
    pts = set(load_point(p, K) for p in obj.get("ambient", ())) | set(ambient)
    pts |= part.rank1set().points()
    sh = part.shape
    for X in (sh.F, sh.G):
        if not X.cofinite:
            pts.update(X.points)
    if sh.kind == "B":
        pts.add(sh.center)
    return MonoidSpec(group, part, tuple(pts))


def dump_orbits(dec):
    return {
        "finite_orbits": [[dump_point(p) for p in o] for o in dec.finite_orbits],
        "cofinite_complement": None if dec.cofinite_orbit is None
        else [dump_point(p) for p in dec.cofinite_orbit.points],
    }


def load_orbits(obj, K):
    co = obj.get("cofinite_complement")
    return OrbitDecomposition(
        tuple(tuple(load_point(p, K) for p in o) for o in _get(obj, "finite_orbits")),
        None if co is None else PointSet.cofinite_of(load_point(p, K) for p in co),
    )


def dump_member(m):
    p = m.part
    mult = {k: dump_mult(getattr(p, k)) for k in ("z_idempotent", "z_left", "z_right")
            if getattr(p, k) is not None}
    scal = {}
    if p.z_nilpotent is not None:
        scal["z_nilpotent"] = dump_mult(p.z_nilpotent)
    if p.nilpotent_base is not None:
        scal["nilpotent_base"] = dump_matrix(p.nilpotent_base)
    if p.classes:
        scal["classes"] = dump_part(p)["classes"]
    return {"group": dump_group(m.group), "shape": dump_shape(p.shape),
            "multiplicities": mult, "scalar_sets": scal}


def dump_check(c):
    out = {"law": c.law, "status": c.status, "witness": to_jsonable(c.witness)}
    if c.note:
        out["note"] = c.note
    return out


def to_jsonable(x):
    """Best-effort encoding for witnesses of any shape."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Cyclo):
        return dump_scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, ProjPoint):
        return dump_point(x)
    if isinstance(x, PointSet):
        return dump_pointset(x)
    if isinstance(x, Mat2):
        return dump_matrix(x)
    if isinstance(x, Multiplicity):
        return dump_mult(x)
    if isinstance(x, PM2Elem):
        return dump_pm2(x)
    if isinstance(x, SingularShape):
        return dump_shape(x)
    if isinstance(x, LawCheck):
        return dump_check(x)
    if isinstance(x, InfiniteSignal):
        return {"infinite": True, "cap": x.cap}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((to_jsonable(v) for v in x), key=repr)
    return repr(x)


def _get(obj, key):
    if not isinstance(obj, dict):
        raise ParseError(f"expected an object with {key!r}, got {obj!r}")
    if key not in obj:
        raise ParseError(f"missing field {key!r}")
    return obj[key]
