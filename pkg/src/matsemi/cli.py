"""
matsemi command line.

    matsemi closure  INPUT   generate a monoid from matrices and analyse it
    matsemi classify INPUT   Type A / Type B shape of a set of rank-one classes
    matsemi orbits   INPUT   orbit decomposition of a catalog or generated group
    matsemi verify   INPUT   run every check against a monoid; exit 1 on failure
    matsemi witness  INPUT   verified family of definable monoids meeting in M
    matsemi enumerate        all closed subsets over a small ground set

INPUT is a JSON file ("-" for stdin). Exit codes: 0 ok, 1 a check failed,
2 unparsable input, 3 a cap was exceeded, 4 a precondition does not hold.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections import Counter

from . import serial
from .bfg import MAX_GROUND, NotClosedError, Rank1Set, classify, closure_violation, enumerate_closed_subsets
from .mat2 import rank
from .monoid import (
    ClosureResult,
    MonoidSpec,
    check_submonoid,
    closure_monoid,
    closure_violation_on,
    family_matches,
    intersection_witness_monoid,
    structure_report,
    verify_member,
)
from .multiplicity import (
    CapExceeded,
    LawCheck,
    PreconditionError,
    check_multiplicity_laws,
    classes_from_elements,
    part_from_classes,
    saturate,
)
from .projline import infinity, point
from .scalar import field
from .serial import ParseError, dump_check, dump_member, dump_monoid, dump_mult, dump_part, dump_point, dump_shape
from .subgroups import (
    DEFAULT_CAP,
    INFINITE_KINDS,
    InfiniteSignal,
    NotRepresentable,
    UnsupportedGroup,
    group_elements,
    group_order,
    orbit_decomposition,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP, EXIT_PRECONDITION = 0, 1, 2, 3, 4


class CapError(RuntimeError):
    pass


# input ------------------------------------------------------------------------------

def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e


def _load_ambient(args, K):
    if not args.ambient:
        return ()
    data = _read_json(args.ambient)
    if isinstance(data, dict):
        data = data.get("ambient", [])
    return tuple(serial.load_point(p, K) for p in data)


def _default_ambient(K, extra=3):
    pts = [infinity(K), point(K, 0), point(K, 1), point(K, -1), point(K, 2), point(K, 3)]
    return tuple(pts[: 2 + extra])


def _monoid_from(doc, K, args):
    """A MonoidSpec from {"singular": ...} or from {"generators": ...}."""
    ambient = _load_ambient(args, K) + tuple(serial.load_point(p, K) for p in doc.get("ambient", ()))
    if "singular" in doc:
        return serial.load_monoid(doc, K, ambient or _default_ambient(K)), None
    gens = [serial.load_matrix(m, K) for m in _need(doc, "generators")]
    res, declared = _closure(gens, doc, K, args)
    if res.part is None:
        raise CapError("the invertible part is infinite: declare a catalog group under \"group\"")
    amb = ambient or _default_ambient(K)
    pts = set(amb) | res.part.rank1set().points()
    return MonoidSpec(declared or res.group_spec, res.part, tuple(pts)), res


def _closure(gens, doc, K, args):
    """closure_monoid, or a singular closure under a declared group."""
    declared = serial.load_group(doc["group"], K) if doc.get("group") is not None else None
    if declared is None:
        return closure_monoid(gens, K, args.cap), None
    singular = [g for g in gens if rank(g) < 2]
    state, has_zero = classes_from_elements(singular)
    group = [] if declared.kind in INFINITE_KINDS else group_elements(declared, K, args.cap)
    state, has_zero = saturate(state, has_zero, group=group, cap=args.cap)
    H = InfiniteSignal(args.cap) if declared.kind in INFINITE_KINDS else group
    return ClosureResult(H, part_from_classes(state, has_zero), has_zero, declared), declared


def _need(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"input needs a {key!r} field")
    return doc[key]


# commands ---------------------------------------------------------------------------

def cmd_closure(doc, K, args):
    gens = [serial.load_matrix(m, K) for m in _need(doc, "generators")]
    res, declared = _closure(gens, doc, K, args)
    out = {"command": "closure", "order": K.order}
    if isinstance(res.group, InfiniteSignal):
        out["group"] = {"finite": False, "cap": res.group.cap}
    else:
        out["group"] = {"finite": True, "size": len(res.group)}
    if declared is not None:
        out["group"]["declared"] = serial.dump_group(declared)
    if res.part is None:
        out["status"] = "infinite-group"
        out["guidance"] = ("the invertible generators did not close within the cap; "
                           "declare the group as a catalog entry under \"group\" and rerun")
        return out, EXIT_CAP
    part = res.part
    out["singular"] = dump_part(part)
    out["classification"] = dump_shape(part.shape)
    out["multiplicities"] = {
        "equal": part.equal_multiplicity,
        "classes": [{"image": dump_point(k[0]), "kernel": dump_point(k[1]), "z": dump_mult(z)}
                    for k, _, z in part.classes],
    }
    out["laws"] = [dump_check(c) for c in check_multiplicity_laws(part, K)]
    pts = set(_load_ambient(args, K) or _default_ambient(K)) | part.rank1set().points()
    M = MonoidSpec(declared or res.group_spec, part, tuple(pts))
    sub = check_submonoid(M.group_part, part, K, M.ambient, random.Random(args.seed))
    out["submonoid"] = [dump_check(c) for c in sub.checks]
    if sub.ok:
        rep = structure_report(M, K, random.Random(args.seed))
        out["structure"] = _dump_report(rep)
    return out, EXIT_OK


def cmd_classify(doc, K, args):
    if "generators" in doc:
        gens = [serial.load_matrix(m, K) for m in doc["generators"]]
        state, has_zero = classes_from_elements(gens)
        state, has_zero = saturate(state, has_zero, cap=args.cap)
        S = Rank1Set.of(state, has_zero)
    else:
        S = serial.load_rank1set(doc, K)
    out = {"command": "classify", "input": serial.dump_rank1set(S)}
    w = closure_violation(S)
    if w is not None:
        out["closed"] = False
        out["witness"] = serial.to_jsonable(w)
        return out, EXIT_PRECONDITION
    shape = classify(S)
    out["closed"] = True
    out["shape"] = dump_shape(shape)
    return out, EXIT_OK


def cmd_orbits(doc, K, args):
    spec = serial.load_group(_need(doc, "group"), K)
    probes = [serial.load_point(p, K) for p in doc.get("probes", ())] or list(_load_ambient(args, K))
    dec = orbit_decomposition(spec, probes, K, random.Random(args.seed), doc.get("samples", 20))
    out = {"command": "orbits", "group": serial.dump_group(spec), "probes": [dump_point(p) for p in probes]}
    if spec.kind in INFINITE_KINDS:
        out["group_order"] = None
    else:
        n = group_order(spec, K, args.cap)
        out["group_order"] = n
        out["lagrange"] = all(n % len(o) == 0 for o in dec.finite_orbits)
    out["orbits"] = serial.dump_orbits(dec)
    return out, EXIT_OK


def cmd_verify(doc, K, args):
    M, _ = _monoid_from(doc, K, args)
    rng = random.Random(args.seed)
    checks = list(check_submonoid(M.group_part, M.singular_part, K, M.ambient, rng).checks)
    w = closure_violation_on(M.singular_part, M.ambient, K)
    checks.append(LawCheck("S closed on the ambient", "fail" if w else "pass", w))
    if M.singular_part.classes:
        checks.extend(check_multiplicity_laws(M.singular_part, K))
    out = {"command": "verify", "monoid": dump_monoid(M)}
    if all(c.ok for c in checks):
        rep = structure_report(M, K, random.Random(args.seed))
        checks.extend(c for c in rep.checks if c not in checks)
        out["case"] = rep.case_tag
    out["checks"] = [dump_check(c) for c in checks]
    ok = all(c.ok for c in checks)
    out["ok"] = ok
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_witness(doc, K, args):
    M, _ = _monoid_from(doc, K, args)
    sub = check_submonoid(M.group_part, M.singular_part, K, M.ambient, random.Random(args.seed))
    if not sub.ok:
        raise PreconditionError("not a submonoid; run verify for the failing checks")
    family = intersection_witness_monoid(M, K, random.Random(args.seed))
    members = []
    for m in family:
        chk = verify_member(M, m, K, random.Random(args.seed))
        entry = dump_member(m)
        entry["checks"] = [dump_check(c) for c in (chk.contains, chk.closed, chk.invariant)]
        members.append(entry)
    exact = family_matches(M, family, K)
    return {"command": "witness", "monoid": dump_monoid(M), "family": members,
            "intersection_equals_monoid": exact}, EXIT_OK if exact else EXIT_FAIL


def cmd_enumerate(doc, K, args):
    if doc is not None and "ground" in doc:
        ground = [serial.load_point(p, K) for p in doc["ground"]]
    else:
        ground = list(_default_ambient(K, max(0, args.size - 2)))[: args.size]
    if len(ground) > MAX_GROUND:
        raise PreconditionError(f"ground sets above {MAX_GROUND} points are out of reach")
    sets = enumerate_closed_subsets(ground)
    kinds = Counter()
    listing = []
    for S in sets:
        shape = classify(S)
        kinds[shape.kind] += 1
        if args.list:
            listing.append({"set": serial.dump_rank1set(S), "shape": dump_shape(shape)})
    out = {"command": "enumerate", "ground": [dump_point(p) for p in ground],
           "closed_subsets": len(sets), "type_A": kinds["A"], "type_B": kinds["B"]}
    if args.list:
        out["sets"] = listing
    return out, EXIT_OK


def _dump_report(rep):
    return {
        "case": rep.case_tag,
        "equal_multiplicity": rep.equal_multiplicity,
        "z_values": {k: dump_mult(v) for k, v in rep.z_values.items()},
        "checks": [dump_check(c) for c in rep.checks],
        "witness_family": [dump_member(m) for m in rep.witness_family],
    }


COMMANDS = {
    "closure": cmd_closure,
    "classify": cmd_classify,
    "orbits": cmd_orbits,
    "verify": cmd_verify,
    "witness": cmd_witness,
    "enumerate": cmd_enumerate,
}


# text rendering --------------------------------------------------------------------

def _render_text(out, indent=0):
    pad = "  " * indent
    lines = []
    for k, v in out.items():
        if isinstance(v, dict) and not _is_leaf(v):
            lines.append(f"{pad}{k}:")
            lines.extend(_render_text(v, indent + 1))
        elif isinstance(v, list) and v and all(isinstance(x, dict) and "law" in x for x in v):
            lines.append(f"{pad}{k}:")
            for c in v:
                w = "" if c["witness"] is None else f"  witness={_short(c['witness'])}"
                lines.append(f"{pad}  [{c['status']}] {c['law']}{w}")
        else:
            lines.append(f"{pad}{k}: {_short(v)}")
    return lines


def _is_leaf(v):
    return set(v) <= {"a", "b"} or set(v) <= {"kind", "n", "values"} or set(v) <= {"order", "coeffs"}


def _short(v):
    if isinstance(v, dict) and set(v) == {"a", "b"}:
        return f"[{_short(v['a'])}:{_short(v['b'])}]"
    if isinstance(v, dict) and v.get("kind") in ("full", "roots", "explicit") and set(v) <= {"kind", "n", "values"}:
        return {"full": "C^x", "roots": f"mu_{v.get('n')}"}.get(v["kind"], f"{{{', '.join(map(_short, v.get('values', [])))}}}")
    if isinstance(v, dict) and set(v) == {"order", "coeffs"}:
        terms = [f"{c}*z^{i}" if i else c for i, c in enumerate(v["coeffs"]) if c != "0"]
        return "(" + " + ".join(terms) + f")_{v['order']}"
    if isinstance(v, dict) and set(v) == {"mode", "points"}:
        body = ", ".join(_short(p) for p in v["points"])
        return f"Cofinite{{{body}}}" if v["mode"] == "cofinite" else f"{{{body}}}"
    if isinstance(v, list):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_short(x)}" for k, x in v.items()) + "}"
    return str(v)


def emit(out, fmt, stream):
    if fmt == "json":
        stream.write(json.dumps(out, indent=2, sort_keys=False) + "\n")
    else:
        stream.write("\n".join(_render_text(out)) + "\n")


# entry point -----------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="matsemi", description="Submonoids of 2x2 matrices over Q(zeta_N).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=12, help="cyclotomic order N (default 12)")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="closure cap (default 10000)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--ambient", metavar="FILE", help="JSON list of ambient points")
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("closure", "classify", "orbits", "verify", "witness"):
        p = sub.add_parser(name, parents=[common], help=COMMANDS[name].__name__.replace("cmd_", ""))
        p.add_argument("input", help='JSON input file, or "-" for stdin')
    p = sub.add_parser("enumerate", parents=[common], help="closed subsets of T x T")
    p.add_argument("input", nargs="?", help='optional JSON {"ground": [points]}')
    p.add_argument("--size", type=int, default=3, help="ground-set size when no input is given")
    p.add_argument("--list", action="store_true", help="list every closed subset")
    return ap


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    if args.order < 1 or args.cap < 1:
        stderr.write("matsemi: --order and --cap must be positive\n")
        return EXIT_PARSE
    K = field(args.order)
    try:
        doc = _read_json(args.input) if args.input else None
        out, code = COMMANDS[args.command](doc, K, args)
    except ParseError as e:
        stderr.write(f"matsemi: parse error: {e}\n")
        return EXIT_PARSE
    except (CapExceeded, CapError) as e:
        stderr.write(f"matsemi: cap exceeded: {e}\n")
        return EXIT_CAP
    except (PreconditionError, NotClosedError, NotRepresentable, UnsupportedGroup, ValueError) as e:
        stderr.write(f"matsemi: precondition failed: {e}\n")
        return EXIT_PRECONDITION
    emit(out, args.format, stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
