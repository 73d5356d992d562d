"""The segment-dynamics catalog: branch systems, their companion rational
maps, and the ball-splitting shift polynomial.

Run:  python3 demos/03_catalog_and_shift.py
"""

import math

from berkdyn import skeleton as sk

print("== Catalog entry R1: three branches filling the segment ==")
M = sk.catalog("R1")
for j, br in enumerate(M.branches):
    arrow = "rising" if br.orientation == 1 else "falling"
    print(f"  branch {j}: [{br.a}, {br.b}] {arrow}, slope {br.slope}")
kind, _ = sk.invariant_set(M)
h_top, h_eq, weights = sk.entropies(M)
print("invariant set:", kind)
print(f"h_top = log 3 = {h_top:.6f}")
print(f"h_eq  = {h_eq:.6f}   weights {[str(w) for w in weights]}")
print("cross-validated against the companion rational map at",
      sk.cross_validate(M, 60), "grid points (exact, raises on mismatch)")

print()
print("== Catalog entry R0: a gap makes the invariant set a Cantor set ==")
M0 = sk.catalog("R0")
kind, gaps = sk.invariant_set(M0)
print("invariant set:", kind, " gaps:", gaps)
_, h_eq0, w0 = sk.entropies(M0)
print(f"h_eq = {h_eq0:.6f} < log 2 = {math.log(2):.6f}")

print()
print("== Exact mixing on the Bernoulli code ==")
code = sk.SymbolicCode(M)
print("depth-2 cylinder masses (first 4):")
for word, (lo, hi), mass in code.cylinders(2)[:4]:
    print(f"  word {word}: interval [{lo}, {hi}], mass {mass}")
print("correlation of cylinders 0 and 1 after n steps:")
for n in range(4):
    print(f"  n={n}: {code.bernoulli_correlation(0, 1, n)}")

print()
print("== The shift polynomial splits balls into p^k components ==")
levels, _ = sk.shift_model(2, 3)
for k, level in enumerate(levels):
    radius = level[0].logr
    print(f"  depth {k}: {len(level)} components at valuation radius {radius}")
print("closed-form radius (1 - 2^-k)/(2-1):",
      [str(sk.shift_radius(2, k)) for k in range(1, 4)])
