"""Acceptance run: eight criteria, each with its time budget.

Runs under pytest (one test per criterion, summary lines printed at the end
of the session) or directly: ``python tests/test_acceptance.py``.
"""

import io
import json
import random
import sys
import tempfile
import time
from itertools import product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from matsemi.bfg import Rank1Set, classify, closure_violation, shape_elements
from matsemi.cli import main as cli_main
from matsemi.mat2 import Mat2, class_base, random_matrix, random_point
from matsemi.monoid import closure_monoid, family_matches, structure_report, verify_member
from matsemi.multiplicity import (
    check_multiplicity_laws,
    lambda_preimage,
    lambda_product,
    nilpotent_product_formula,
    part_is_closed,
)
from matsemi.pm2 import pm2_mul, project
from matsemi.projline import infinity, moebius_apply, point
from matsemi.scalar import field, mult_equal, mult_subset, random_unit
from matsemi.subgroups import GroupSpec, catalog_generators, orbit, orbit_decomposition, sample_elements
from monoid_cases import seeded_monoid
from oracles import closed_subsets_bruteforce, matmul

RESULTS = {}


def _timed(budget):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t0
            ok = ok and (budget is None or dt < budget)
            limit = "no time limit" if budget is None else f"of {budget}s"
            RESULTS[fn.__name__] = (ok, f"{detail}; {dt:.2f}s {limit}")
            return ok, detail, dt
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _idem(v, u):
    # idempotent with image v, kernel u, written out from the coordinates
    (a, b), (c, d) = v.coords(), u.coords()
    s = a * d - b * c
    return [[a * d / s, -a * c / s], [b * d / s, -b * c / s]]


def _ratio(x, y):
    # the scalar c with x = c*y, read off a nonzero entry of y
    for i, j in product(range(2), repeat=2):
        if y[i][j]:
            c = x[i][j] / y[i][j]
            assert all(x[p][q] == c * y[p][q] for p, q in product(range(2), repeat=2))
            return c
    raise AssertionError("zero matrix")


def _distinct_points(K, rng, k):
    out = []
    while len(out) < k:
        p = random_point(K, rng)
        if p not in out:
            out.append(p)
    return out


# 1 --------------------------------------------------------------------------------

@_timed(5)
def criterion_1():
    """projection to PM_2 is a homomorphism on 1000 random pairs of every rank mix"""
    K, rng = field(12), random.Random(1)
    ranks = list(product((0, 1, 2), repeat=2))
    bad = 0
    for i in range(1000):
        r1, r2 = ranks[i % len(ranks)]
        x, y = random_matrix(K, rng, r1), random_matrix(K, rng, r2)
        bad += project(x * y) != pm2_mul(project(x), project(y))
    return bad == 0, f"{1000 - bad}/1000 pairs agree"


# 2 --------------------------------------------------------------------------------

@_timed(5)
def criterion_2():
    """lambda formula vs direct products; preimage round-trips and injectivity"""
    K, rng = field(12), random.Random(2)
    agree = 0
    while agree < 500:
        v, u, x, w = _distinct_points(K, rng, 2) + _distinct_points(K, rng, 2)
        if u == x or v == w:
            continue
        lam, h = lambda_product((v, u), (x, w))
        direct = _ratio(matmul(_idem(v, u), _idem(x, w)), _idem(*h))
        if direct != lam:
            return False, f"lambda mismatch at {(v, u, x, w)!r}"
        agree += 1
    for _ in range(100):
        a, b, c = _distinct_points(K, rng, 3)
        lam = random_unit(K, rng)
        p = lambda_preimage(lam, a, b, c)
        if lambda_product((a, p), (b, c))[0] != lam:
            return False, f"round-trip failed for lambda={lam!r}"
    for _ in range(100):
        a, b, c = _distinct_points(K, rng, 3)
        l1 = random_unit(K, rng)
        l2 = l1 + random_unit(K, rng)
        if not l2 or l1 == l2:
            continue
        p1, p2 = lambda_preimage(l1, a, b, c), lambda_preimage(l2, a, b, c)
        if p1 == p2 or lambda_product((a, p1), (b, c))[0] == lambda_product((a, p2), (b, c))[0]:
            return False, "two values share a kernel"
    return True, "500 formula checks, 100 round-trips, 100 injectivity pairs"


# 3 --------------------------------------------------------------------------------

@_timed(2)
def criterion_3():
    """nilpotent product formula (with the -ab entry) vs direct products"""
    K, rng = field(12), random.Random(3)
    for _ in range(200):
        v, u, x = _distinct_points(K, rng, 3)
        direct = matmul(_idem(v, u), _idem(x, v))
        formula = nilpotent_product_formula((v, u), (x, v))
        if [list(r) for r in formula.rows] != direct:
            return False, f"mismatch at {(v, u, x)!r}"
        if not (formula * formula).is_zero():
            return False, "output does not square to zero"
    return True, "200 configurations exact, all square to zero"


# 4 --------------------------------------------------------------------------------

def _exhaustive(k):
    K = field(12)
    T = [infinity(K)] + [point(K, n) for n in range(k - 1)]
    pairs = list(product(range(k), repeat=2))
    closed = set(closed_subsets_bruteforce(k))
    seen = 0
    for bits in range(1 << len(pairs)):
        chosen = [(T[a], T[b]) for i, (a, b) in enumerate(pairs) if bits >> i & 1]
        idx = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
        for zero in (False, True):
            S = Rank1Set.of(chosen, zero)
            lib = closure_violation(S) is None
            if lib != ((idx, zero) in closed):
                return False, f"closure disagrees on {S!r}"
            if not lib:
                continue
            shape = classify(S)
            if shape_elements(shape, T) != S:
                return False, f"{S!r} does not reconstruct"
            seen += 1
    return seen == len(closed), seen


@_timed(60)
def criterion_4():
    """every closed subset of T x T classifies and reconstructs (|T| = 3, 4)"""
    ok3, n3 = _exhaustive(3)
    ok4, n4 = _exhaustive(4)
    return ok3 and ok4, f"{n3} closed sets at size 3, {n4} at size 4"


# 5 --------------------------------------------------------------------------------

@_timed(5)
def criterion_5():
    """multiplicity laws on a star with C^x and mu_6 classes, and on constructed type A examples"""
    K = field(12)
    laws = lambda part: {c.law: c for c in check_multiplicity_laws(part, K)}
    e, f = Mat2.diag(K.one, K.zero), Mat2.diag(K.zero, K.one)
    star = closure_monoid([e, e.scale(K(2)), f.scale(K.root_of_unity(6))], K).part
    a = (part_is_closed(star, K) is None and not star.equal_multiplicity
         and all(c.ok for c in laws(star).values()))

    inf, zero, one = infinity(K), point(K, 0), point(K, 1)
    z = K.root_of_unity(4)
    gens = [class_base(p, q).scale(z) for p in (inf, zero) for q in (zero, one) if p != q]
    gens.append(class_base(inf, zero))
    two = closure_monoid(gens, K).part
    zs = [m for _, _, m in two.classes]
    b = (len(two.nilpotent_keys()) > 0 and len(two.idempotent_keys()) > 1
         and all(mult_equal(zs[0], m) for m in zs) and laws(two)["Z_n = Z_e"].status == "pass")

    n = class_base(inf, inf)
    one_sided = closure_monoid([class_base(inf, zero).scale(z), class_base(inf, one), n, n.scale(K.zeta())], K).part
    ch = laws(one_sided)
    ze = one_sided.class_map[one_sided.idempotent_keys()[0]][1]
    c = (ch["nilpotents form an ideal"].status == "pass" and ch["Z_e within Z_n"].status == "pass"
         and mult_subset(ze, one_sided.z_nilpotent))
    return a and b and c, f"(a) {a}, (b) {b}, (c) {c}"


# 6 --------------------------------------------------------------------------------

def _brute_order(gens):
    # plain BFS over matrices normalised by their first nonzero entry
    def norm(m):
        lead = next(x for x in m.entries() if x)
        return m.scale(lead.inverse())

    ident = norm(Mat2.identity(gens[0].field))
    seen, todo = {ident}, [ident]
    while todo:
        x = todo.pop()
        for g in gens:
            y = norm(x * g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen)


@_timed(30)
def criterion_6():
    """catalog orders, Lagrange on orbits, spot checks of the infinite groups"""
    K = field(12)
    cases = [(GroupSpec("Dn", 2), K, 4), (GroupSpec("Dn", 3), K, 6), (GroupSpec("A4"), K, 12),
             (GroupSpec("S4"), K, 24), (GroupSpec("A5"), field(60), 60)]
    probes = lambda F: [infinity(F), point(F, 0), point(F, 1), point(F, 2), point(F, -1), point(F, 1, 3)]
    for spec, F, want in cases:
        gens = catalog_generators(spec, F)
        if _brute_order(gens) != want:
            return False, f"{spec!r} has the wrong order"
        for p in probes(F):
            if want % len(orbit(gens, p)) != 0:
                return False, f"{spec!r} orbit of {p!r} breaks Lagrange"
    rng = random.Random(6)
    pts = [infinity(K), point(K, 0)] + _distinct_points(K, rng, 48)
    for kind in ("Borel", "Torus", "Unipotent", "DInfinity"):
        spec = GroupSpec(kind)
        dec = orbit_decomposition(spec, pts, K, rng, 20)
        for p in pts:
            home = next((o for o in dec.finite_orbits if p in o), None)
            for g in sample_elements(spec, K, rng, 20):
                q = moebius_apply(g, p)
                if home is not None and (q not in home or (len(home) == 1 and q != p)):
                    return False, f"{kind}: {p!r} leaves its finite orbit"
                if home is None and any(q in o for o in dec.finite_orbits):
                    return False, f"{kind}: {p!r} falls into a finite orbit"
    return True, "orders 4, 6, 12, 24, 60; 50 probes x 20 samples on 4 infinite groups"


# 7 --------------------------------------------------------------------------------

@_timed(30)
def criterion_7():
    """verified witness families for 20 seeded monoids"""
    K = field(12)
    names = set()
    for seed in range(20):
        name, M = seeded_monoid(K, seed)
        names.add(name)
        rep = structure_report(M, K, random.Random(seed))
        if not rep.ok:
            return False, f"seed {seed} ({name}): report has failing checks"
        for m in rep.witness_family:
            if not verify_member(M, m, K, random.Random(seed)).ok:
                return False, f"seed {seed} ({name}): member {m!r} fails"
        if not family_matches(M, rep.witness_family, K):
            return False, f"seed {seed} ({name}): family does not meet in M"
    return True, f"20 monoids from {len(names)} templates"


# 8 --------------------------------------------------------------------------------

CLI_INPUTS = {
    "closure": {"generators": [[["0", "0"], ["0", {"order": 12, "coeffs": ["0", "0", "1", "0"]}]],
                               [["1", "0"], ["0", "0"]]]},
    "orbits": {"group": {"kind": "A4"}, "probes": [[1, 0], [0, 1], [1, 1], [2, 1], [3, 1]]},
    "witness": {"singular": {"shape": {"type": "A", "F": [[1, 0], [0, 1]], "G": [[1, 0], [0, 1]],
                                       "has_zero": True},
                             "z_idempotent": {"kind": "full"}, "z_nilpotent": {"kind": "full"}},
                "ambient": [[1, 1], [2, 1]]},
    "verify": {"generators": [[["1", "0"], ["0", "0"]], [["0", "1"], ["0", "0"]]], "group": {"kind": "Borel"}},
}


@_timed(None)
def criterion_8():
    """byte-identical CLI output across repeated runs with a fixed seed"""
    with tempfile.TemporaryDirectory() as d:
        for cmd, doc in CLI_INPUTS.items():
            path = Path(d) / f"{cmd}.json"
            path.write_text(json.dumps(doc))
            outs = []
            for _ in range(3):
                buf = io.StringIO()
                cli_main([cmd, str(path), "--seed", "11"], stdout=buf, stderr=io.StringIO())
                outs.append(buf.getvalue().encode())
            if len(set(outs)) != 1 or not outs[0]:
                return False, f"{cmd} output differs between runs"
    return True, f"{len(CLI_INPUTS)} commands x 3 runs identical"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("crit", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(crit):
    ok, detail, dt = crit()
    print(f"{crit.__name__}: {'PASS' if ok else 'FAIL'} ({detail}; {dt:.2f}s)")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for crit in CRITERIA:
        ok, detail, dt = crit()
        failed += not ok
        print(f"{crit.__name__}: {'PASS' if ok else 'FAIL'} ({detail}; {dt:.2f}s)")
    sys.exit(1 if failed else 0)
