"""Scalar multiplicities of a monoid of singular matrices.

For a nonzero x in S, Z_x = {z : z*x in S}. Here one idempotent carries
every nonzero scalar and the other only sixth roots of unity; the two
classes form a star through [1:0], so nothing forces them to agree.
"""

from matsemi.mat2 import Mat2
from matsemi.monoid import closure_monoid
from matsemi.multiplicity import check_multiplicity_laws
from matsemi.scalar import field

K = field(12)
e, f = Mat2.diag(K.one, K.zero), Mat2.diag(K.zero, K.one)

# 2*e has infinite order, so the closed-up class of e carries C^x
res = closure_monoid([e, e.scale(K(2)), f.scale(K.root_of_unity(6))], K)
part = res.part
print("shape:", part.shape)
for (v, u), _, z in part.classes:
    print(f"  Z on ({v!r}, {u!r}) = {z!r}")
print("equal multiplicity:", part.equal_multiplicity)

for c in check_multiplicity_laws(part, K):
    print(f"  [{c.status:>6}] {c.law}" + (f"  ({c.note})" if c.note else ""))
