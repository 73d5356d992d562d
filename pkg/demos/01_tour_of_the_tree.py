"""A guided tour of the Berkovich line over Q_3: points, joins, distances,
seminorms, and how a rational map moves balls around.

Run:  python3 demos/01_tour_of_the_tree.py
"""

from fractions import Fraction as F

from berkdyn import Backend, PADIC
from berkdyn.berkovich import (
    BerkPoint,
    hyperbolic_distance,
    join,
    seminorm_eval,
)
from berkdyn.ratmap import RationalMap

bk = Backend(PADIC, p=3)

print("== Points ==")
gauss = BerkPoint.canonical(bk)            # the closed unit ball B(0, 1)
deep = BerkPoint.type_ii(bk.from_int(2), F(5, 2))
leaf = BerkPoint.type_i(bk.from_int(11))
print("canonical point     :", gauss)
print("smaller ball        :", deep, " (closed ball around 2 of radius 3^(-5/2))")
print("type-I point        :", leaf)

print()
print("== Tree structure ==")
j = join(deep, BerkPoint.type_ii(bk.from_int(5), F(4)))
print("join of B(2, 5/2) and B(5, 4):", j)
print("  (2 and 5 agree modulo 3 but not modulo 9, so the smallest common")
print("   ball has valuation radius 1)")
print("hyperbolic distance gauss <-> deep:", hyperbolic_distance(gauss, deep))

print()
print("== Seminorms ==")
poly = [bk.from_int(3), bk.zero(), bk.one()]  # z^2 + 3
for S in (gauss, BerkPoint.type_ii(bk.zero(), F(5, 2))):
    print(f"val-scale seminorm of z^2 + 3 at {S}: {seminorm_eval(S, poly)}")
print("  (on the small ball around 0 the constant term 3 dominates: val 1)")

print()
print("== A rational map acting on balls ==")
R = RationalMap.parse("(z^5 - 243)/z^2", bk)
print("map:", "(z^5 - 243)/z^2", " degree", R.degree)
for t in (F(1, 2), F(1), F(2)):
    S = BerkPoint.type_ii(bk.zero(), t)
    print(
        f"  image of B(0, logr={t}): {R.image_point(S)}"
        f"   local degree {R.local_degree(S)}"
    )
print("  (the axis rises with slope 3 until t = 5/4, then falls with slope 2)")

print()
print("== Fibers ==")
T = BerkPoint.canonical(bk)
for S, mult in R.preimages(T):
    print(f"  preimage {S} with multiplicity {mult}")
print("  multiplicities sum to the degree:", sum(m for _, m in R.preimages(T)))
