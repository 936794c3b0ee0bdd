"""Every multiplicatively closed set of rank-one classes over a 3-point line.

A rank-one class is an (image, kernel) pair; (v, u)(v', u') is (v, u')
unless u = v', where it is 0. The closed sets come in two shapes: all
pairs F x G (type A), or a star through one center point (type B).
"""

from collections import Counter

from matsemi.bfg import classify, enumerate_closed_subsets
from matsemi.projline import infinity, point
from matsemi.scalar import field

K = field(12)
T = [infinity(K), point(K, 0), point(K, 1)]

sets = enumerate_closed_subsets(T)
shapes = [classify(S) for S in sets]
print(len(sets), "closed sets;", dict(Counter(s.kind for s in shapes)))

# a few of the type B ones, written out
stars = [(S, sh) for S, sh in zip(sets, shapes) if sh.kind == "B"]
for S, shape in stars[:6]:
    pairs = ", ".join(f"({v!r},{u!r})" for v, u in S.sorted_pairs())
    print(f"center {shape.center!r}: {pairs}")

# Without 0 a closed set never pairs an image with an equal kernel,
# so F and G are disjoint.
no_zero = [sh for S, sh in zip(sets, shapes) if not S.has_zero]
print(len(no_zero), "sets without 0; all type A:", all(sh.kind == "A" for sh in no_zero))
