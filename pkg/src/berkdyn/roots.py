"""Root finding for polynomials over the valued-field backends.

The workhorse is Newton-polygon digit descent: each polygon segment gives the
valuation of a batch of roots, the associated residue polynomial gives their
leading digits, and recursion (with a Newton/Hensel acceleration once a root
separates) refines them to the requested precision.  Multiplicities come from
the gcd recursion F -> gcd(F, F'), which is characteristic-safe."""

from __future__ import annotations

from fractions import Fraction

from .errors import ExtensionBound, PrecisionExhausted
from .fields import (
    Backend,
    EQUICHARP,
    FieldElement,
    INF,
    PADIC,
    residue_roots,
)
from . import polys
from . import residue as rs

_MAX_DESCENT_STEPS = 500


def lift_residue(bk: Backend, theta: rs.ResidueElement) -> FieldElement:
    """Canonical lift of a residue element to a valuation-0 (or 0) element."""
    if theta.is_zero():
        return bk.zero()
    if theta.field.is_rational:
        return bk.from_rational(theta.value)
    if bk.kind == PADIC:
        if theta.field.k == 1:
            return bk.from_int(theta.value[0])
        raise ExtensionBound(
            "residue digit lies in a proper extension of the residue field; "
            "not liftable in this backend"
        )
    return bk.from_term(Fraction(0), theta)


def pth_root_element(x: FieldElement) -> FieldElement:
    """The p-th root in an equicharacteristic-p series field (Frobenius is
    bijective there: take p-th roots of coefficients and divide exponents)."""
    bk = x.backend
    if bk.kind != EQUICHARP:
        raise ValueError("p-th roots of elements only in characteristic p")
    terms = {q / bk.p: c.pth_root() for q, c in x.terms.items()}
    prec = None if x.prec is None else Fraction(x.prec, bk.p)
    return FieldElement(bk, terms, prec)


def _common_field(elts):
    from math import lcm

    fields = [e.field for e in elts if not e.field.is_rational]
    if not fields:
        return elts[0].field
    k = 1
    for f in fields:
        k = lcm(k, f.k)
    big = rs.ResidueField(fields[0].p, k)
    return big


def segment_residue_poly(G, seg):
    """Residue polynomial of a Newton-polygon segment of G.

    Returns (coeffs over a common residue field, root valuation v).  Roots u
    of the residue polynomial are the leading digits of roots h = u*pi^v + ...
    of G, with matching multiplicities."""
    slope, width, i0, i1 = seg
    v = -slope
    bk = G[0].backend
    y0 = G[i0].valuation()
    res = []
    for j in range(width + 1):
        c = G[i0 + j]
        line = y0 + slope * j
        if c.is_zero_to_precision():
            if not c.is_exact and c.prec <= line:
                raise PrecisionExhausted("segment coefficient unknown at line level")
            res.append(None)
            continue
        if c.valuation() > line:
            res.append(None)
        else:
            shifted = c * bk.uniformizer_pow(-line)
            res.append(shifted.reduce())
    field = _common_field([r for r in res if r is not None])
    out = []
    for r in res:
        if r is None:
            out.append(field.zero())
        elif r.field == field or r.field.is_rational:
            out.append(r)
        else:
            out.append(rs.embed_element(r, field))
    return out, v


def _taylor_head(F, z):
    """Constant and linear coefficients of F(z + h)."""
    rem, quot = polys._synth_div(F, z)
    c1, _ = polys._synth_div(quot, z)
    return rem, c1


def squarefree_roots(F, prec, partial=False):
    """All roots of a squarefree polynomial (nonzero constant term), each to
    additive precision `prec` (exact roots are returned exact).

    With partial=True, branches whose digits need an unrepresentable residue
    extension are skipped instead of raising ExtensionBound."""
    F = polys.trim(F)
    bk = F[0].backend
    d = polys.degree(F)
    if d < 1:
        return []
    prec = Fraction(prec)
    roots = []
    # work items: (approximation z, digit depth reached, residue multiplicity)
    stack = [(bk.zero(), -INF, d)]
    steps = 0
    while stack:
        z, depth, mult = stack.pop()
        steps += 1
        if steps > _MAX_DESCENT_STEPS:
            raise PrecisionExhausted("root descent exceeded its step budget")
        try:
            _descend_node(F, z, depth, mult, prec, partial, bk, roots, stack)
        except PrecisionExhausted:
            # phantom branches (roots outside the representable field) can
            # run out of digits; in partial mode they are simply dropped
            if not partial:
                raise
    return roots


def _descend_node(F, z, depth, mult, prec, partial, bk, roots, stack):
    """Process one node of the digit-descent tree: record an exact or
    precise-enough root, or push one more digit of every branch."""
    c0, c1 = _taylor_head(F, z)
    hit_exact = c0.is_zero_to_precision() and c0.is_exact
    if hit_exact:
        roots.append(z)
        if mult == 1:
            return
        # the cluster holds further roots beyond this exact one; descend
        mult -= 1
    else:
        if depth >= prec:
            if mult == 1:
                roots.append(_finalize(F, z, prec))
                return
            raise PrecisionExhausted(
                "distinct roots closer together than the requested precision"
            )
        if mult == 1 and not c1.is_zero_to_precision():
            v1 = c1.valuation_lower_bound()
            if c0.valuation() > 2 * v1:
                roots.append(_newton_refine(F, z, prec))
                return
    # one more digit: polygon of F(z + h), segments deeper than `depth`
    G = polys.recenter(F, z)
    progressed = False
    skipped = False
    for seg in polys.newton_polygon(G):
        slope = seg[0]
        if -slope <= depth:
            continue
        res_poly, v = segment_residue_poly(G, seg)
        try:
            branches = residue_roots(res_poly, k_max=bk.k_max)
        except ExtensionBound:
            if partial:
                skipped = True
                continue
            raise
        for theta, mu in branches:
            try:
                digit = lift_residue(bk, theta) * bk.uniformizer_pow(v)
            except ExtensionBound:
                if partial:
                    skipped = True
                    continue
                raise
            stack.append((z + digit, v, mu))
            progressed = True
    if not progressed and not skipped:
        raise PrecisionExhausted("no further digits found for a root")


def _mark_approx(z: FieldElement, prec: Fraction) -> FieldElement:
    t = z.truncate_below(prec)
    return FieldElement(z.backend, t.terms, prec)


def _ratrec(w: int, M: int):
    """Rational reconstruction: a/b with small |a|, b and a = w*b mod M."""
    from math import gcd, isqrt

    bound = isqrt(M // 2)
    r0, r1 = M, w % M
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    if t1 < 0:
        return -r1, -t1
    return r1, t1


def _promote_exact(F, approx: FieldElement):
    """Try to recognize a digit-truncated root as an exact element (small
    rationals in each tower slot), verifying by exact evaluation."""
    import math as _math

    bk = approx.backend
    if approx.prec is None:
        return approx
    cand_terms = {}
    if bk.kind == PADIC:
        from .fields import _vp

        for (i, e), r in approx.terms.items():
            off = Fraction(i, e)
            a = _vp(r, bk.p)
            m = _math.floor(approx.prec - off - a)
            if m <= 1:
                cand_terms[(i, e)] = r
                continue
            unit = r / Fraction(bk.p) ** a
            w = (unit.numerator * pow(unit.denominator, -1, bk.p ** m)) % (bk.p ** m)
            rec = _ratrec(w, bk.p ** m)
            if rec is None:
                cand_terms[(i, e)] = r
            else:
                cand_terms[(i, e)] = Fraction(rec[0], rec[1]) * Fraction(bk.p) ** a
    else:
        cand_terms = dict(approx.terms)
    cand = FieldElement(bk, cand_terms, None)
    val = polys.evaluate(F, cand)
    if val.is_zero_to_precision() and val.is_exact:
        return cand
    return None


def _finalize(F, z: FieldElement, prec: Fraction) -> FieldElement:
    marked = _mark_approx(z, prec)
    exact = _promote_exact(F, marked)
    return exact if exact is not None else marked


def _newton_refine(F, z, prec):
    """Quadratic refinement once the simple-root (Hensel) condition holds."""
    for _ in range(200):
        c0, c1 = _taylor_head(F, z)
        if c0.is_zero_to_precision() and c0.is_exact:
            return z
        v1 = c1.valuation()
        if c0.is_zero_to_precision() or c0.valuation() - v1 >= prec:
            return _finalize(F, z, prec)
        z = z - c0 / c1
    raise PrecisionExhausted("Newton refinement did not reach target precision")


def _match(r: FieldElement, s: FieldElement) -> bool:
    return (r - s).is_zero_to_precision()


def roots_with_mult(F, prec=None, partial=False):
    """All roots of F in the backend's field with multiplicities.

    Returns [(root, mult)] with sum of mults == deg F whenever the polynomial
    splits over the representable field; raises ExtensionBound otherwise.
    With partial=True the representable roots are returned and the rest are
    silently dropped.  Roots are exact when possible, else correct to additive
    precision `prec` (default: the backend's working precision)."""
    found = _roots_impl(F, prec, partial)
    if not partial:
        total = sum(m for _, m in found)
        if total != polys.degree(polys.trim(F)):
            raise ExtensionBound(
                "polynomial does not split over the representable field: "
                f"found {total} of {polys.degree(polys.trim(F))} roots"
            )
    return found


def _roots_impl(F, prec, partial):
    F = polys.trim(F)
    if not F:
        raise ValueError("zero polynomial")
    bk = F[0].backend
    if prec is None:
        prec = bk.precision
    out = []
    # strip roots at the origin
    ord0 = 0
    while ord0 < len(F) and F[ord0].is_zero_to_precision() and F[ord0].is_exact:
        ord0 += 1
    if ord0:
        out.append((bk.zero(), ord0))
        F = F[ord0:]
    if polys.degree(F) < 1:
        return out
    dF = polys.derivative(F)
    if bk.kind == EQUICHARP and polys.trim(dF) == []:
        # F(z) = H(z^p): take p-th roots of the roots of H
        H = [F[i] for i in range(0, len(F), bk.p)]
        for r, m in _roots_impl(H, Fraction(prec) * bk.p, partial):
            if r.is_zero_to_precision():
                continue  # origin already stripped
            out.append((pth_root_element(r), m * bk.p))
        return out
    g = polys.gcd_poly(F, dF)
    if polys.degree(g) < 1:
        for r in squarefree_roots(F, prec, partial):
            out.append((r, 1))
        return _merge(out)
    S, rem = polys.divmod_poly(F, g)
    assert all(c.is_zero_to_precision() for c in rem)
    simple = [(r, 1) for r in squarefree_roots(S, prec, partial)]
    repeated = _roots_impl(g, prec, partial)
    for r, m in repeated:
        if r.is_zero_to_precision():
            continue  # origin handled above
        placed = False
        for i, (s, ms) in enumerate(simple):
            if _match(r, s):
                simple[i] = (s, ms + m)
                placed = True
                break
        if not placed:
            simple.append((r, m))
    return _merge(out + simple)


def _merge(pairs):
    merged = []
    for r, m in pairs:
        for i, (s, ms) in enumerate(merged):
            if _match(r, s):
                merged[i] = (s, ms + m)
                break
        else:
            merged.append((r, m))
    return merged
