"""Products of rank-one idempotents, done by hand and by formula.

Two idempotents e = (v, u) and f = (v', u') multiply to a scalar multiple
of the idempotent (v, u'), unless the kernel of e swallows the image of f
(product 0) or the image of e is the kernel of f (a nilpotent).
"""

from matsemi.mat2 import idempotent_from_points
from matsemi.multiplicity import (
    ZeroProduct,
    lambda_preimage,
    lambda_product,
    nilpotent_product,
    nilpotent_product_formula,
)
from matsemi.projline import infinity, point
from matsemi.scalar import field

K = field(12)
inf, zero, one, half = infinity(K), point(K, 0), point(K, 1), point(K, 1, 2)

e, f = (inf, zero), (one, half)
lam, h = lambda_product(e, f)
print("e*f = lambda*h with lambda =", lam, "and h =", h)
print(idempotent_from_points(*e) * idempotent_from_points(*f))
print(idempotent_from_points(*h).scale(lam))

# Fix the image of e and the whole of f; the kernel of e then decides lambda,
# and every nonzero lambda is hit exactly once.
for target in (K(1), K(2), K(-3), K.zeta()):
    kernel = lambda_preimage(target, inf, one, half)
    got, _ = lambda_product((inf, kernel), (one, half))
    print(f"lambda {target!r:>22} <- kernel {kernel!r:>10}   check: {got!r}")

try:
    lambda_product((inf, one), (one, half))
except ZeroProduct as exc:
    print("kernel of e = image of f:", exc)

# image of e equal to the kernel of f gives a nilpotent
n = nilpotent_product((inf, zero), (one, inf))
print("nilpotent product:", n, " closed form:", nilpotent_product_formula((inf, zero), (one, inf)))
print("squares to zero:", (n * n).is_zero())
