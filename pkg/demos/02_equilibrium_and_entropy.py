"""Equilibrium measures by iterated pullback, entropy bounds, and the
single-atom detection procedure.

Run:  python3 demos/02_equilibrium_and_entropy.py
"""

import math

from berkdyn import Backend, PADIC
from berkdyn.berkovich import BerkPoint
from berkdyn.equilibrium import (
    entropy_lower_bound,
    equilibrium_approx,
    invariance_defect,
    theorem_e_detect,
)
from berkdyn.ratmap import RationalMap

bk = Backend(PADIC, p=3)
can = BerkPoint.canonical(bk)

print("== Good reduction: the measure is a single atom ==")
R = RationalMap.parse("z^2+1", bk)
chain = equilibrium_approx(R, can, 4)
print("pullback chain of z^2+1 from the canonical point:")
for n, level in enumerate(chain.levels):
    print(f"  level {n}: {level}")
print("single invariant atom detected:", theorem_e_detect(R))

print()
print("== A map whose measure spreads over a Cantor set ==")
R0 = RationalMap.parse("(z^5 - 243)/z^2", bk)
chain = equilibrium_approx(R0, can, 4)
print("level-4 approximation (atoms sorted by mass):")
for p, m in sorted(chain.measure.atoms, key=lambda a: -a[1]):
    print(f"  mass {str(m):>8} at {p}")
print("invariance defect (exact):", invariance_defect(chain))
print("single invariant atom detected:", theorem_e_detect(R0))

print()
print("== Entropy bound from the mean local degree ==")
chain6 = equilibrium_approx(R0, can, 6)
bound = entropy_lower_bound(R0, chain6)
closed = (3 / 5) * math.log(5 / 3) + (2 / 5) * math.log(5 / 2)
print(f"entropy lower bound at level 6: {bound:.6f}")
print(f"closed-form branch-weight value: {closed:.6f}")
print(f"topological entropy log 2 = {math.log(2):.6f}  (strictly larger)")
print(f"log deg = log 5 = {math.log(5):.6f}  (strictly larger still)")
