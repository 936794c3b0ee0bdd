"""A monoid H u S written as an intersection of definable monoids.

H is the dihedral group of order 4 acting on the projective line, S the
closure of one full-scalar idempotent under H. S only reaches the points
{[1:0], [0:1]}, so it is not itself cut out by cofinite data; each member
of the family widens one side by a cofinite set and the members meet in S.
"""

import random

from matsemi.mat2 import class_base
from matsemi.monoid import MonoidSpec, closure_monoid, family_matches, structure_report, verify_member
from matsemi.projline import infinity, point
from matsemi.scalar import field
from matsemi.subgroups import GroupSpec, catalog_generators

K = field(12)
H = GroupSpec("Dn", 2)
inf, zero = infinity(K), point(K, 0)

res = closure_monoid(catalog_generators(H, K) + [class_base(inf, zero).scale(K(3))], K)
ambient = (inf, zero, point(K, 1), point(K, -1), point(K, 2))
M = MonoidSpec(H, res.part, ambient)

rep = structure_report(M, K, random.Random(0))
print("case:", rep.case_tag, " Z:", rep.z_values)
for m in rep.witness_family:
    chk = verify_member(M, m, K)
    print(f"  {m!r}   contains/closed/invariant: {chk.contains.status}/{chk.closed.status}/{chk.invariant.status}")
print("intersection equals M on the ambient:", family_matches(M, rep.witness_family, K))
