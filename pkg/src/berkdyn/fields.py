"""Valued-field backends with exact rational valuations.

Three desk-scale sub-models of a complete algebraically closed
non-archimedean field:

* PADIC(p)    — the tower Q(p^(1/e)) for varying e, i.e. polynomials in
                x = p^(1/e) modulo x^e - p with Fraction coefficients.
                Arithmetic is exact; inexact elements (Newton-lifted roots)
                carry a precision order.
* EQUICHAR0   — Puiseux polynomials in t over Q.
* EQUICHARP   — Puiseux polynomials in t over F_{p^k}.

The value group is Q throughout.  valuation() of the zero element is +inf
(math.inf mixes fine with Fraction in comparisons).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from math import gcd, lcm

from .errors import (
    DivisionByZero,
    FractionalOffsetMismatch,  # noqa: F401  (part of the documented surface)
    IncompatibleBackends,
    NegativeValuation,
    PrecisionExhausted,
    ExtensionBound,
)
from . import residue as rs

INF = math.inf

PADIC = "padic"
EQUICHAR0 = "equichar0"
EQUICHARP = "equicharp"

DEFAULT_PRECISION = 40
DEFAULT_KMAX = 4


class Backend:
    """Descriptor of a valued-field backend."""

    def __init__(self, kind, p=None, k=1, precision=DEFAULT_PRECISION, k_max=DEFAULT_KMAX):
        if kind not in (PADIC, EQUICHAR0, EQUICHARP):
            raise ValueError(f"unknown backend kind {kind!r}")
        if kind in (PADIC, EQUICHARP):
            if p is None or p < 2 or not rs._is_prime(p):
                raise ValueError("backend needs a prime p >= 2")
        if precision < 1:
            raise ValueError("precision must be >= 1")
        self.kind = kind
        self.p = p
        self.k = k if kind == EQUICHARP else 1
        self.precision = precision
        self.k_max = k_max

    # residue characteristic: p for PADIC/EQUICHARP, 0 for EQUICHAR0
    @property
    def residue_char(self):
        return self.p if self.kind in (PADIC, EQUICHARP) else 0

    @property
    def char(self):
        """Characteristic of the field itself."""
        return self.p if self.kind == EQUICHARP else 0

    def residue_field(self) -> rs.ResidueField:
        if self.kind == EQUICHAR0:
            return rs.ResidueField(0)
        if self.kind == PADIC:
            return rs.ResidueField(self.p, 1)
        return rs.ResidueField(self.p, self.k)

    def __eq__(self, other):
        return isinstance(other, Backend) and (
            self.kind, self.p, self.k
        ) == (other.kind, other.p, other.k)

    def __hash__(self):
        return hash((self.kind, self.p, self.k))

    def __repr__(self):
        if self.kind == PADIC:
            return f"padic:p={self.p},prec={self.precision}"
        if self.kind == EQUICHAR0:
            return f"laurentq:prec={self.precision}"
        return f"laurentfp:p={self.p},k={self.k},prec={self.precision}"

    # -- element constructors -----------------------------------------

    def zero(self):
        return FieldElement(self, {}, None)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, q) -> "FieldElement":
        q = Fraction(q)
        if q == 0:
            return self.zero()
        if self.kind == PADIC:
            return FieldElement(self, {(0, 1): q}, None)
        if self.kind == EQUICHAR0:
            return FieldElement(self, {Fraction(0): q}, None)
        c = self.residue_field().from_fraction(q)
        if c.is_zero():
            return self.zero()
        return FieldElement(self, {Fraction(0): c}, None)

    def from_int(self, n):
        return self.from_rational(Fraction(n))

    def uniformizer_pow(self, q) -> "FieldElement":
        """Exact element of valuation q (q any rational)."""
        q = Fraction(q)
        if self.kind == PADIC:
            n = q.numerator // q.denominator
            frac = q - n
            e = frac.denominator
            i = frac.numerator  # 0 <= i < e
            return FieldElement(self, {(i, e): Fraction(self.p) ** n}, None)
        if self.kind == EQUICHAR0:
            return FieldElement(self, {q: Fraction(1)}, None)
        return FieldElement(self, {q: self.residue_field().one()}, None)

    def from_term(self, q, coeff) -> "FieldElement":
        """coeff * uniformizer^q with coeff a rational (PADIC/EQUICHAR0) or
        ResidueElement (EQUICHARP)."""
        if self.kind == EQUICHARP and isinstance(coeff, rs.ResidueElement):
            if coeff.is_zero():
                return self.zero()
            return FieldElement(self, {Fraction(q): coeff}, None)
        return self.from_rational(coeff) * self.uniformizer_pow(q)

    def parse_literal(self, text: str) -> "FieldElement":
        """Parse an element literal: "3/4" (rational) or "[(0,2),(3/2,1)]"."""
        text = text.strip()
        if text.startswith("["):
            body = text[1:-1].strip() if text.endswith("]") else text[1:]
            out = self.zero()
            for m in re.finditer(r"\(([^,()]+),([^()]+)\)", body):
                q = Fraction(m.group(1).strip())
                c = Fraction(m.group(2).strip())
                out = out + self.from_rational(c) * self.uniformizer_pow(q)
            return out
        if "^" in text:
            # convenience: "p^3" / "t^{q}" style literal for uniformizer powers
            base, _, expo = text.partition("^")
            base = base.strip()
            if base in ("p", "t"):
                return self.uniformizer_pow(Fraction(expo.strip()))
        return self.from_rational(Fraction(text))


def parse_backend(spec: str, precision=None) -> Backend:
    """Parse a backend spec string like "padic:p=3,prec=40"."""
    name, _, rest = spec.partition(":")
    opts = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            opts[key.strip()] = int(val)
    prec = precision or opts.get("prec", DEFAULT_PRECISION)
    if name == "padic":
        return Backend(PADIC, p=opts["p"], precision=prec)
    if name == "laurentq":
        return Backend(EQUICHAR0, precision=prec)
    if name == "laurentfp":
        return Backend(EQUICHARP, p=opts["p"], k=opts.get("k", 1), precision=prec)
    raise ValueError(f"unknown backend spec {spec!r}")


def _vp(q: Fraction, p: int):
    """p-adic valuation of a rational."""
    if q == 0:
        return INF
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


class FieldElement:
    """Immutable element of a Backend.

    PADIC terms: dict {(i, e): Fraction r} meaning r * p^(i/e), with
    0 <= i < e and gcd(i, e) reduced; fractional-power parts with different
    denominators coexist (they live in the common tower Q(p^(1/lcm))).

    Series terms: dict {Fraction q: coeff} meaning coeff * t^q, coeff a
    Fraction (EQUICHAR0) or ResidueElement (EQUICHARP).

    prec: None for exact elements, else the element is only known modulo
    valuation >= prec.
    """

    __slots__ = ("backend", "terms", "prec", "_val")

    def __init__(self, backend, terms, prec):
        self.backend = backend
        self._val = None
        # normalize
        if backend.kind == PADIC:
            norm = {}
            for (i, e), r in terms.items():
                if r == 0:
                    continue
                g = gcd(i, e) if i else e
                key = (i // g, e // g)
                norm[key] = norm.get(key, Fraction(0)) + r
            norm = {k: v for k, v in norm.items() if v != 0}
        else:
            norm = {}
            for q, c in terms.items():
                if backend.kind == EQUICHAR0:
                    if c == 0:
                        continue
                    norm[q] = norm.get(q, Fraction(0)) + c
                else:
                    prev = norm.get(q)
                    norm[q] = (prev + c) if prev is not None else c
            norm = {
                q: c
                for q, c in norm.items()
                if (c != 0 if backend.kind == EQUICHAR0 else not c.is_zero())
            }
        if prec is not None:
            norm = {k: v for k, v in norm.items() if _term_val(backend, k, v) < prec}
        # cap the number of tracked terms at the backend precision
        if len(norm) > backend.precision:
            items = sorted(norm.items(), key=lambda kv: _term_val(backend, kv[0], kv[1]))
            cutoff = _term_val(backend, *items[backend.precision])
            norm = dict(items[: backend.precision])
            prec = cutoff if prec is None else min(prec, cutoff)
            norm = {k: v for k, v in norm.items() if _term_val(backend, k, v) < prec}
        self.terms = norm
        self.prec = prec

    # -- predicates ----------------------------------------------------

    @property
    def is_exact(self):
        return self.prec is None

    def is_zero(self):
        """Exactly zero (raises if only zero to working precision)."""
        if self.terms:
            return False
        if self.prec is not None:
            raise PrecisionExhausted(
                f"element is zero to precision {self.prec}; cannot certify exact zero"
            )
        return True

    def is_zero_to_precision(self):
        return not self.terms

    def valuation(self):
        if self._val is None:
            if not self.terms:
                if self.prec is not None:
                    raise PrecisionExhausted(
                        f"valuation unknown: zero to precision {self.prec}"
                    )
                self._val = INF
            else:
                self._val = min(
                    _term_val(self.backend, k, v) for k, v in self.terms.items()
                )
        return self._val

    def valuation_lower_bound(self):
        """min(valuation, prec) without raising — safe for bookkeeping."""
        if not self.terms:
            return self.prec if self.prec is not None else INF
        return min(_term_val(self.backend, k, v) for k, v in self.terms.items())

    # -- arithmetic ------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other)!r}")
        if self.backend != other.backend:
            raise IncompatibleBackends(f"{self.backend} vs {other.backend}")

    def __add__(self, other):
        self._check(other)
        prec = _min_prec(self.prec, other.prec)
        if self.backend.kind == PADIC:
            terms = dict(self.terms)
            for k, r in other.terms.items():
                terms[k] = terms.get(k, Fraction(0)) + r
            return FieldElement(self.backend, terms, prec)
        a, b = self, other
        if self.backend.kind == EQUICHARP:
            a, b = _align_cfields(self, other)
        terms = dict(a.terms)
        for q, c in b.terms.items():
            if q in terms:
                terms[q] = terms[q] + c
            else:
                terms[q] = c
        return FieldElement(self.backend, terms, prec)

    def __neg__(self):
        return FieldElement(
            self.backend, {k: -v for k, v in self.terms.items()}, self.prec
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        pa = _shifted_prec(self.prec, other.valuation_lower_bound())
        pb = _shifted_prec(other.prec, self.valuation_lower_bound())
        prec = _min_prec(pa, pb)
        bk = self.backend
        if bk.kind == PADIC:
            terms = {}
            for (i1, e1), r1 in self.terms.items():
                for (i2, e2), r2 in other.terms.items():
                    e = lcm(e1, e2)
                    i = i1 * (e // e1) + i2 * (e // e2)
                    carry, i = divmod(i, e)
                    r = r1 * r2 * Fraction(bk.p) ** carry
                    key = (i, e)
                    terms[key] = terms.get(key, Fraction(0)) + r
            return FieldElement(bk, terms, prec)
        a, b = self, other
        if bk.kind == EQUICHARP:
            a, b = _align_cfields(self, other)
        terms = {}
        for q1, c1 in a.terms.items():
            for q2, c2 in b.terms.items():
                q = q1 + q2
                c = c1 * c2
                if q in terms:
                    terms[q] = terms[q] + c
                else:
                    terms[q] = c
        return FieldElement(bk, terms, prec)

    def inverse(self):
        if not self.terms:
            if self.prec is not None:
                raise PrecisionExhausted("cannot invert an element that is zero to precision")
            raise DivisionByZero("inverse of zero")
        v = self.valuation()
        bk = self.backend
        rel = None if self.prec is None else self.prec - v  # relative precision
        if bk.kind == PADIC:
            if len(self.terms) == 1:
                # single term r * p^(i/e): exact monomial inverse
                ((i, e), r) = next(iter(self.terms.items()))
                out = bk.from_rational(1 / r) * bk.uniformizer_pow(Fraction(-i, e))
                return FieldElement(bk, out.terms, None if rel is None else -v + rel)
            e = 1
            for (_, ee) in self.terms:
                e = lcm(e, ee)
            if rel is None and e <= 8 and len(self.terms) <= 16:
                return FieldElement(bk, _padic_inverse(bk, self.terms), None)
            # Newton iteration: exact Euclid in Q[x]/(x^e - p) blows up for
            # large e, so invert the unit part of big elements iteratively,
            # truncating to the precision budget at each step
            budget = rel if rel is not None else Fraction(bk.precision)
            lead_key = min(self.terms, key=lambda k: _term_val(bk, k, self.terms[k]))
            li, le = lead_key
            lead_inv = bk.from_rational(1 / self.terms[lead_key]) * bk.uniformizer_pow(
                Fraction(-li, le)
            )
            a = self * lead_inv  # 1 + u with val(u) > 0
            x = bk.one()
            err = (a - bk.one()).valuation_lower_bound()
            while err < budget:
                x = x + x - x * x * a
                x = FieldElement(bk, x.terms, None).truncate_below(budget)
                err *= 2
            out = x * lead_inv
            return FieldElement(bk, out.terms, -v + budget)
        # series: c*t^v * (1 + u) with val(u) > 0
        lead_q = min(self.terms)
        lead_c = self.terms[lead_q]
        lead_inv = (
            1 / lead_c if bk.kind == EQUICHAR0 else lead_c.inverse()
        )
        lead = bk.from_term(-lead_q, lead_inv)
        u = self * lead - bk.one()  # val(u) > 0
        budget = rel if rel is not None else Fraction(bk.precision)
        acc = bk.one()
        power = bk.one()
        uval = u.valuation_lower_bound()
        if uval == INF:
            out = lead
            if rel is not None:
                out = FieldElement(bk, out.terms, -v + rel)
            return out
        nsteps = int(budget / uval) + 1
        for _ in range(nsteps):
            power = power * (-u)
            acc = acc + power
        out = acc * lead
        return FieldElement(bk, out.terms, _min_prec(out.prec, -v + budget))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.backend.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- reduction & truncation -----------------------------------------

    def reduce(self) -> rs.ResidueElement:
        """Image in the residue field; requires valuation >= 0."""
        if not self.terms:
            if self.prec is not None and self.prec <= 0:
                raise PrecisionExhausted("residue not determined at this precision")
            return self.backend.residue_field().zero()
        if self.valuation() < 0:
            raise NegativeValuation(f"valuation {self.valuation()} < 0")
        if self.prec is not None and self.prec <= 0:
            raise PrecisionExhausted("residue not determined at this precision")
        bk = self.backend
        if bk.kind == PADIC:
            # fractional-offset terms have non-integer positive valuation and
            # reduce to zero; only the (0,1) slot can contribute
            r = self.terms.get((0, 1), Fraction(0))
            return bk.residue_field().from_fraction(r)
        c = self.terms.get(Fraction(0))
        if c is None:
            return bk.residue_field().zero()
        if bk.kind == EQUICHAR0:
            return bk.residue_field().from_fraction(c)
        rf = bk.residue_field()
        if c.field == rf:
            return c
        if c.field.k <= bk.k_max and c.field.k % rf.k == 0:
            return c  # element of an extension residue field; return as-is
        return c

    def truncate_below(self, v) -> "FieldElement":
        """The canonical truncation: the part of the expansion with valuation < v.

        Used for canonical ball centers.  Exact."""
        bk = self.backend
        if v == INF:
            return self
        v = Fraction(v)
        if self.prec is not None and self.prec < v:
            raise PrecisionExhausted(
                f"cannot truncate below {v}: element only known to precision {self.prec}"
            )
        if bk.kind != PADIC:
            terms = {q: c for q, c in self.terms.items() if q < v}
            return FieldElement(bk, terms, None)
        terms = {}
        for (i, e), r in self.terms.items():
            off = Fraction(i, e)
            cut = v - off  # keep p-adic digits of r strictly below this
            a = _vp(r, bk.p)
            if a >= cut:
                continue
            m = math.ceil(cut) - a
            if m <= 0:
                continue
            # r = p^a * n/d with d coprime to p; truncated digits form an integer
            unit = r / Fraction(bk.p) ** a
            n, d = unit.numerator, unit.denominator
            w = (n * pow(d, -1, bk.p ** m)) % (bk.p ** m)
            if w:
                terms[(i, e)] = Fraction(w) * Fraction(bk.p) ** a
        return FieldElement(bk, terms, None)

    def as_rational(self) -> Fraction:
        """The element as a rational, when it is one (PADIC/EQUICHAR0)."""
        bk = self.backend
        if not self.terms:
            return Fraction(0)
        if bk.kind == PADIC:
            if set(self.terms) == {(0, 1)}:
                return self.terms[(0, 1)]
        elif bk.kind == EQUICHAR0:
            if set(self.terms) == {Fraction(0)}:
                return self.terms[Fraction(0)]
        raise ValueError("element is not a plain rational")

    # -- equality, hashing, display --------------------------------------

    def _key(self):
        if self.backend.kind == PADIC:
            items = tuple(sorted(self.terms.items()))
        else:
            items = tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))
        return (self.backend, items, self.prec)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        bk = self.backend
        if not self.terms:
            body = "0"
        elif bk.kind == PADIC:
            parts = []
            for (i, e), r in sorted(
                self.terms.items(), key=lambda kv: Fraction(kv[0][0], kv[0][1])
            ):
                if (i, e) == (0, 1):
                    parts.append(str(r))
                else:
                    parts.append(f"({r})*{bk.p}^({i}/{e})")
            body = " + ".join(parts)
        else:
            parts = []
            for q, c in sorted(self.terms.items()):
                if q == 0:
                    parts.append(str(c))
                else:
                    parts.append(f"({c})*t^({q})")
            body = " + ".join(parts)
        if self.prec is not None:
            body += f" + O(pi^{self.prec})"
        return body

    def literal(self) -> str:
        """Serialize to the CLI literal syntax (exact elements only)."""
        bk = self.backend
        if bk.kind == PADIC and set(self.terms) <= {(0, 1)}:
            return str(self.terms.get((0, 1), Fraction(0)))
        pairs = []
        if bk.kind == PADIC:
            for (i, e), r in sorted(
                self.terms.items(), key=lambda kv: Fraction(kv[0][0], kv[0][1])
            ):
                pairs.append(f"({Fraction(i, e)},{r})")
        else:
            for q, c in sorted(self.terms.items()):
                if bk.kind == EQUICHARP:
                    if c.field.k != 1:
                        raise ValueError("no literal for extension-field coefficients")
                    c = c.value[0]
                pairs.append(f"({q},{c})")
        return "[" + ",".join(pairs) + "]"


def _term_val(backend, key, coeff):
    if backend.kind == PADIC:
        i, e = key
        return _vp(coeff, backend.p) + Fraction(i, e)
    return key


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _shifted_prec(prec, shift):
    if prec is None:
        return None
    if shift == INF:
        return None
    return prec + shift


def _align_cfields(a: FieldElement, b: FieldElement):
    """Embed EQUICHARP coefficients into a common residue field."""
    fa = _cfield(a)
    fb = _cfield(b)
    if fa is None or fb is None or fa == fb:
        return a, b
    m = lcm(fa.k, fb.k)
    if m > a.backend.k_max:
        raise ExtensionBound(f"residue extension degree {m} exceeds k_max")
    big = rs.ResidueField(fa.p, m)
    return _embed_series(a, big), _embed_series(b, big)


def _cfield(x: FieldElement):
    for c in x.terms.values():
        return c.field
    return None


def _embed_series(x: FieldElement, big: rs.ResidueField) -> FieldElement:
    terms = {q: rs.embed_element(c, big) for q, c in x.terms.items()}
    return FieldElement(x.backend, terms, x.prec)


def _padic_inverse(bk, terms):
    """Invert an element of Q(p^(1/e)) given by its term dict (exact)."""
    e = 1
    for (_, ee) in terms:
        e = lcm(e, ee)
    # as a polynomial in x = p^(1/e), degree < e
    poly = [Fraction(0)] * e
    for (i, ee), r in terms.items():
        poly[i * (e // ee)] += r
    if e == 1:
        return {(0, 1): 1 / poly[0]}
    # extended Euclid against x^e - p over Q[x]
    modulus = [Fraction(-bk.p)] + [Fraction(0)] * (e - 1) + [Fraction(1)]
    inv = _qpoly_invmod(poly, modulus)
    return {(i, e): c for i, c in enumerate(inv) if c != 0}


def _qpoly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _qpoly_divmod(a, b):
    a = _qpoly_trim(list(a))
    b = _qpoly_trim(list(b))
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and r:
        c = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            r[i + d] -= c * y
        _qpoly_trim(r)
    return q, r


def _qpoly_invmod(a, mod):
    """Inverse of a modulo mod in Q[x] (mod irreducible)."""
    a = _qpoly_trim(list(a))
    b = list(mod)
    s0, s1 = [Fraction(1)], [Fraction(0)]
    r0, r1 = b, a
    t0, t1 = [Fraction(0)], [Fraction(1)]
    while _qpoly_trim(list(r1)):
        q, r = _qpoly_divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _qpoly_sub(t0, _qpoly_mul(q, t1))
    # r0 = gcd (constant), t0 satisfies t0*a == r0 (mod mod)
    r0 = _qpoly_trim(list(r0))
    if len(r0) != 1:
        raise DivisionByZero("element not invertible (unexpected)")
    c = 1 / r0[0]
    inv = [x * c for x in t0]
    _, inv = _qpoly_divmod(inv, mod)
    inv = inv + [Fraction(0)] * (len(mod) - 1 - len(inv))
    return inv


def _qpoly_sub(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else Fraction(0)
        y = b[i] if i < len(b) else Fraction(0)
        out.append(x - y)
    return _qpoly_trim(out)


def _qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _qpoly_trim(out)


# ---------------------------------------------------------------------------
# module-level operation entry points matching the documented interface


def valuation(x: FieldElement):
    return x.valuation()


def reduce_element(x: FieldElement) -> rs.ResidueElement:
    return x.reduce()


def uniformizer_pow(b: Backend, q) -> FieldElement:
    return b.uniformizer_pow(q)


def residue_roots(coeffs, k_max=DEFAULT_KMAX):
    """Roots of a polynomial over a residue field, searching extensions up
    to degree k_max.

    coeffs: ascending list of ResidueElement over a common field.
    Returns [(root, multiplicity)].  Raises ExtensionBound when no root is
    representable within the bound (QQ: no rational root).
    """
    coeffs = rs.rpoly_trim(list(coeffs))
    if rs.rpoly_degree(coeffs) < 1:
        raise ValueError("residue_roots needs deg >= 1")
    field = coeffs[0].field
    if field.is_rational:
        found = _rational_roots(coeffs)
        if not found:
            raise ExtensionBound("no rational residue roots")
        return found
    base_k = field.k
    p = field.p
    found = []
    total_mult = 0
    deg = rs.rpoly_degree(coeffs)
    m = 1
    while base_k * m <= k_max and total_mult < deg:
        big = rs.ResidueField(p, base_k * m)
        emb = [rs.embed_element(c, big) for c in coeffs]
        for cand in big.elements():
            if not rs.rpoly_eval(emb, cand).is_zero():
                continue
            # count each root only at its minimal field level: skip if cand
            # is fixed by the Frobenius of a proper subfield over the base
            minimal = True
            for mp in range(1, m):
                if m % mp == 0 and cand ** (p ** (base_k * mp)) == cand:
                    minimal = False
                    break
            if not minimal:
                continue
            mult = 0
            work = list(emb)
            divisor = [-cand, big.one()]
            while True:
                q, r = rs.rpoly_divmod(work, divisor, big)
                if r:
                    break
                work = q
                mult += 1
            found.append((cand, mult))
            total_mult += mult
        m += 1
    if not found:
        raise ExtensionBound(
            f"residue roots require an extension beyond k_max={k_max}"
        )
    return found


def residue_roots_or_empty(coeffs, k_max=DEFAULT_KMAX):
    try:
        return residue_roots(coeffs, k_max=k_max)
    except ExtensionBound:
        return []


def _rational_roots(coeffs):
    """All rational roots with multiplicity (rational root theorem)."""
    fracs = [c.value for c in coeffs]
    den = 1
    for f in fracs:
        den = lcm(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    field = coeffs[0].field
    found = []
    # roots at zero
    k0 = 0
    while ints and ints[0] == 0:
        ints = ints[1:]
        k0 += 1
    if k0:
        found.append((field.zero(), k0))
    if len(ints) <= 1:
        return found
    cands = set()
    for pnum in _divisors(abs(ints[0])):
        for pden in _divisors(abs(ints[-1])):
            cands.add(Fraction(pnum, pden))
            cands.add(Fraction(-pnum, pden))
    work = [Fraction(c) for c in ints]
    for cand in sorted(cands):
        mult = 0
        while _qpoly_eval(work, cand) == 0:
            work = _qpoly_deflate(work, cand)
            mult += 1
        if mult:
            found.append((rs.ResidueElement(field, cand), mult))
    return found


def _qpoly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _qpoly_deflate(coeffs, root):
    """Divide by (z - root), assuming exact divisibility (synthetic division)."""
    out = []
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * root + c
        out.append(acc)
    out = out[:-1]  # drop the remainder (zero by assumption)
    out.reverse()
    return out


def _divisors(n):
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)
