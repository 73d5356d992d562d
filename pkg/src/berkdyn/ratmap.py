"""Rational maps acting on the Berkovich projective line.

A map is a coprime pair of polynomials (numerator, denominator) over one of
the valued-field backends.  The action on type-II points is computed exactly:
the image of a ball B(a, r) has center R(a) and a log-radius read off the
Gauss valuations of the recentered numerator and denominator; balls containing
a pole are handled by maximizing the image valuation over candidate centers
digit by digit.
"""

from __future__ import annotations

import re
from collections import deque
from fractions import Fraction

from .errors import (
    DivisionByZero,
    ExtensionBound,
    ParamDomain,
    PoleAtCenter,
    PrecisionExhausted,
)
from .berkovich import BerkPoint, seminorm_eval
from .fields import Backend, EQUICHARP, FieldElement, INF, PADIC
from . import polys
from . import residue as rs
from .roots import lift_residue, residue_roots, roots_with_mult, segment_residue_poly

_MAX_CENTER_STEPS = 400


class RationalMap:
    """R = num/den with num, den coprime polynomials, deg R >= 1."""

    def __init__(self, num, den, simplify=True):
        num = polys.trim(list(num))
        den = polys.trim(list(den))
        if not den:
            raise DivisionByZero("denominator is the zero polynomial")
        if not num:
            den = [den[-1].backend.one()]  # the zero map, in lowest terms
        if simplify and num:
            g = polys.gcd_poly(num, den)
            if polys.degree(g) >= 1:
                num, _ = polys.divmod_poly(num, g)
                den, _ = polys.divmod_poly(den, g)
        # normalize: monic denominator (or monic numerator for polynomials)
        lead = den[-1]
        num = polys.scale(num, lead.inverse())
        den = polys.scale(den, lead.inverse())
        self.num = num
        self.den = den
        self.backend = den[-1].backend

    @property
    def degree(self) -> int:
        return max(polys.degree(self.num), polys.degree(self.den))

    def __repr__(self):
        return f"RationalMap(num={self.num}, den={self.den})"

    # -- construction ---------------------------------------------------

    @staticmethod
    def from_rationals(bk: Backend, num, den) -> "RationalMap":
        return RationalMap(polys.from_rationals(bk, num), polys.from_rationals(bk, den))

    @staticmethod
    def parse(text: str, bk: Backend, consts=None) -> "RationalMap":
        num, den = _parse_map_literal(text, bk, consts or {})
        return RationalMap(num, den)

    # -- basic transforms ----------------------------------------------

    def source_inverted(self) -> "RationalMap":
        """The map z -> R(1/z)."""
        d = self.degree
        bk = self.backend
        num = [bk.zero()] * (d - polys.degree(self.num)) + list(reversed(self.num))
        den = [bk.zero()] * (d - polys.degree(self.den)) + list(reversed(self.den))
        return RationalMap(num, den)

    def target_inverted(self) -> "RationalMap":
        """The map z -> 1/R(z)."""
        if not self.num:
            raise DivisionByZero("cannot invert the zero map")
        return RationalMap(self.den, self.num)

    def compose(self, other: "RationalMap") -> "RationalMap":
        """self after other: z -> self(other(z))."""
        bk = self.backend
        p, q = other.num, other.den
        d = max(polys.degree(self.num), polys.degree(self.den))
        # homogenize: num = sum a_i p^i q^(d-i), same for den
        powers_p = [[bk.one()]]
        powers_q = [[bk.one()]]
        for _ in range(d):
            powers_p.append(polys.mul(powers_p[-1], p))
            powers_q.append(polys.mul(powers_q[-1], q))

        def homog(coeffs):
            out = []
            for i, c in enumerate(coeffs):
                term = polys.scale(polys.mul(powers_p[i], powers_q[d - i]), c)
                out = polys.add(out, term)
            return out

        return RationalMap(homog(self.num), homog(self.den))

    def iterate(self, n: int) -> "RationalMap":
        if n < 1:
            raise ParamDomain("iterate needs n >= 1")
        out = self
        for _ in range(n - 1):
            out = out.compose(self)
        return out

    # -- evaluation -----------------------------------------------------

    def eval_type1(self, x: FieldElement) -> BerkPoint:
        pv = polys.evaluate(self.num, x) if self.num else self.backend.zero()
        qv = polys.evaluate(self.den, x)
        if qv.is_zero_to_precision():
            if not qv.is_exact:
                raise PrecisionExhausted("denominator vanishes to working precision")
            return BerkPoint.infinity(self.backend)
        return BerkPoint.type_i(pv / qv)

    def eval_infinity(self) -> BerkPoint:
        dn, dd = polys.degree(self.num), polys.degree(self.den)
        if dn > dd:
            return BerkPoint.infinity(self.backend)
        if dn < dd:
            return BerkPoint.type_i(self.backend.zero())
        return BerkPoint.type_i(self.num[-1] / self.den[-1])

    # -- images of points ----------------------------------------------

    def image_point(self, S: BerkPoint) -> BerkPoint:
        """The image R(S) of any representable point."""
        if S.is_infinity:
            return self.source_inverted().eval_type1(self.backend.zero())
        if S.is_type_i:
            return self.eval_type1(S.value)
        a, v = S.value, S.logr
        P_a = polys.recenter(self.num, a) if self.num else []
        Q_a = polys.recenter(self.den, a)
        if self._ball_contains_pole(Q_a, v):
            return self._pole_ball_image(P_a, Q_a, v, a)
        b = (P_a[0] if P_a else self.backend.zero()) / Q_a[0]
        N = polys.sub(P_a, polys.scale(Q_a, b))
        N = [self.backend.zero()] + N[1:]  # constant term vanishes by design
        u = polys.gauss_valuation(N, v) - polys.gauss_valuation(Q_a, v)
        if u == INF:
            raise PrecisionExhausted("image radius not determined (constant map?)")
        return BerkPoint.type_ii(b, u)

    @staticmethod
    def _ball_contains_pole(Q_a, v) -> bool:
        """Does B(a, v) contain a root of the denominator?  (Q_a recentered)."""
        q0 = Q_a[0]
        if q0.is_zero_to_precision():
            if q0.is_exact:
                return True
            raise PrecisionExhausted("denominator at center known only approximately")
        tail = polys.gauss_valuation([Q_a[0].backend.zero()] + Q_a[1:], v)
        return tail <= q0.valuation()

    def _pole_ball_image(self, P_a, Q_a, v, a) -> BerkPoint:
        """Image of a ball containing a pole: find the target center w
        maximizing the image valuation phi(w) = S(P - w*Q) - S(Q)."""
        bk = self.backend
        denom_val = polys.gauss_valuation(Q_a, v)
        res_q = _ball_residue_poly(Q_a, v)
        w = bk.zero()
        for _ in range(_MAX_CENTER_STEPS):
            A = polys.sub(P_a, polys.scale(Q_a, w))
            if polys.trim(A) == []:
                raise DivisionByZero("map is constant")
            phi = polys.gauss_valuation(A, v) - denom_val
            res_a = _ball_residue_poly(A, v)
            d = _proportionality(res_a, res_q)
            if d is None:
                return BerkPoint.type_ii(w, phi)
            w = w + lift_residue(bk, d) * bk.uniformizer_pow(phi)
        raise PrecisionExhausted("image center descent exceeded its budget")

    # -- degrees --------------------------------------------------------

    def topological_degree(self) -> int:
        """Number of preimages of a generic point (degree divided by the
        inseparability factor in characteristic p)."""
        num, den = self.num, self.den
        bk = self.backend
        if bk.kind != EQUICHARP:
            return self.degree
        p = bk.p
        while True:
            # R is a function of z^p iff both parts are (coprimality)
            if any(
                i % p and not c.is_zero_to_precision()
                for poly in (num, den)
                for i, c in enumerate(poly)
            ):
                return max(polys.degree(num), polys.degree(den))
            num = [num[i] for i in range(0, len(num), p)]
            den = [den[i] for i in range(0, len(den), p)]

    def local_degree(self, S: BerkPoint) -> int:
        """Multiplicity of R at the point S."""
        if S.is_infinity:
            inv = self.source_inverted()
            return inv.local_degree(BerkPoint.type_i(self.backend.zero()))
        if S.is_type_i:
            return self._local_degree_type1(S.value)
        return self._local_degree_type2(S)

    def _local_degree_type1(self, x: FieldElement) -> int:
        y = self.eval_type1(x)
        if y.is_infinity:
            return self.target_inverted()._local_degree_type1(x)
        N = polys.sub(self.num, polys.scale(self.den, y.value))
        shifted = polys.recenter(N, x)
        for i in range(1, len(shifted)):
            c = shifted[i]
            if not c.is_zero_to_precision():
                return i
            if not c.is_exact:
                raise PrecisionExhausted("local degree not determined")
        raise PrecisionExhausted("no nonvanishing derivative found")

    def _local_degree_type2(self, S: BerkPoint) -> int:
        a, v = S.value, S.logr
        T = self.image_point(S)
        b = T.value
        P_a = polys.recenter(self.num, a) if self.num else []
        Q_a = polys.recenter(self.den, a)
        N = polys.sub(P_a, polys.scale(Q_a, b))
        res_n = _ball_residue_poly(N, v)
        res_q = _ball_residue_poly(Q_a, v)
        res_n, res_q = _align_res_pair(res_n, res_q)
        field = res_n[0].field
        g = rs.rpoly_gcd(res_n, res_q, field)
        if rs.rpoly_degree(g) >= 1:
            res_n, _ = rs.rpoly_divmod(res_n, g, field)
            res_q, _ = rs.rpoly_divmod(res_q, g, field)
        return max(rs.rpoly_degree(res_n), rs.rpoly_degree(res_q))

    # -- preimages ------------------------------------------------------

    def preimages(self, T: BerkPoint, partial=False):
        """The fiber over T with local multiplicities: [(point, mult)], with
        sum of mults == degree unless partial=True and the fiber needs an
        unrepresentable extension."""
        if T.is_type_ii:
            pairs = self._preimages_type2(T, partial)
        else:
            pairs = self._preimages_type1(T, partial)
        if not partial and sum(m for _, m in pairs) != self.degree:
            raise ExtensionBound(
                "fiber is not fully representable: found multiplicity "
                f"{sum(m for _, m in pairs)} of {self.degree}"
            )
        return pairs

    def _preimages_type1(self, T: BerkPoint, partial):
        bk = self.backend
        out = []
        if T.is_infinity:
            A = self.den
        else:
            A = polys.sub(self.num, polys.scale(self.den, T.value))
        degA = polys.degree(A)
        if degA < self.degree:
            # the fiber meets infinity with the degree drop as multiplicity
            out.append((BerkPoint.infinity(bk), self.degree - max(degA, 0)))
        if degA >= 1:
            for r, m in roots_with_mult(A, partial=partial):
                out.append((BerkPoint.type_i(r), m))
        return out

    def _preimages_type2(self, T: BerkPoint, partial):
        bk = self.backend
        b, u = T.value, T.logr
        A = polys.sub(self.num, polys.scale(self.den, b))
        F = polys.mul(A if polys.trim(A) else [bk.one()], self.den)
        found = {}
        order = []
        hi = Fraction(bk.precision)
        lo_cap = -Fraction(bk.precision)
        # breadth-first: fiber components on sibling branches are found (and
        # the total-multiplicity break taken) before any single branch chases
        # a type-I root through many digits
        queue = deque([(bk.zero(), -INF)])
        steps = 0
        while queue:
            z, depth = queue.popleft()
            steps += 1
            if steps > _MAX_CENTER_STEPS:
                raise PrecisionExhausted("fiber descent exceeded its budget")
            lo = depth if depth != -INF else lo_cap
            for t in self._candidate_radii(z, u, lo, hi):
                cand = BerkPoint.type_ii(z, t)
                if cand in found:
                    continue
                if self.image_point(cand) == T:
                    found[cand] = self.local_degree(cand)
                    order.append(cand)
            if sum(found.values()) >= self.degree:
                break
            if depth != -INF and depth >= hi:
                continue
            G = polys.recenter(F, z)
            ord0 = 0
            while ord0 < len(G) and G[ord0].is_zero_to_precision() and G[ord0].is_exact:
                ord0 += 1
            for seg in polys.newton_polygon(G[ord0:] if ord0 else G):
                slope = seg[0]
                if -slope <= depth:
                    continue
                try:
                    res_poly, v = segment_residue_poly(
                        G[ord0:] if ord0 else G, seg
                    )
                    for theta, _mu in residue_roots(res_poly, k_max=bk.k_max):
                        digit = lift_residue(bk, theta) * bk.uniformizer_pow(v)
                        child = z + digit
                        if child.prec is not None:
                            # the center needs more digits than the precision
                            # budget tracks; any deeper fiber point is out of
                            # reach
                            if partial:
                                continue
                            raise PrecisionExhausted(
                                "fiber center exhausted the precision budget"
                            )
                        queue.append((child, v))
                except ExtensionBound:
                    continue  # that branch's fiber points are unrepresentable
        return [(pt, found[pt]) for pt in order]

    def _candidate_radii(self, z, u, lo, hi):
        """Radii t for which B(z, t) could map onto the target diameter u."""
        bk = self.backend
        qz = polys.evaluate(self.den, z)
        pz = polys.evaluate(self.num, z) if self.num else bk.zero()
        if qz.is_zero_to_precision() and qz.is_exact:
            # pole at the candidate center: work through 1/R
            P_z = polys.recenter(self.num, z)
            Q_z = polys.recenter(self.den, z)
            return polys.solve_seminorm_ratio(Q_z, P_z, -u, lo, hi)
        # clear denominators: qz*P - pz*Q vanishes at z, and its Gauss
        # valuation is val(qz) above that of P - (pz/qz)*Q
        P_z = polys.recenter(self.num, z) if self.num else []
        Q_z = polys.recenter(self.den, z)
        N = polys.sub(polys.scale(P_z, qz), polys.scale(Q_z, pz))
        N = [bk.zero()] + N[1:]
        return polys.solve_seminorm_ratio(N, Q_z, u + qz.valuation(), lo, hi)

    # -- reduction ------------------------------------------------------

    def reduced_pair(self):
        """Joint normalization and reduction of (num, den) at the Gauss point:
        scale both by a single power of the uniformizer so min valuation is 0,
        then reduce coefficients."""
        bk = self.backend
        vmin = min(
            polys.gauss_valuation(self.num, Fraction(0)) if self.num else INF,
            polys.gauss_valuation(self.den, Fraction(0)),
        )
        scale = bk.uniformizer_pow(-vmin)
        red_n = [(c * scale).reduce() for c in self.num]
        red_d = [(c * scale).reduce() for c in self.den]
        return rs.rpoly_trim(red_n), rs.rpoly_trim(red_d)

    def good_reduction_check(self) -> bool:
        """Good reduction at the canonical point: the reduced pair keeps the
        full degree and stays coprime."""
        red_n, red_d = _align_res_pair(*self.reduced_pair())
        if max(rs.rpoly_degree(red_n), rs.rpoly_degree(red_d)) != self.degree:
            return False
        if not red_n or not red_d:
            return False
        field = (red_n + red_d)[0].field
        g = rs.rpoly_gcd(red_n, red_d, field)
        return rs.rpoly_degree(g) < 1

    # -- exceptional points --------------------------------------------

    def exceptional_points(self):
        """Type-I points whose two-step backward orbit is just themselves.
        At most two for degree >= 2."""
        if self.degree < 2:
            raise ParamDomain("exceptional points need degree >= 2")
        R2 = self.compose(self)
        d2 = R2.degree
        bk = self.backend
        out = []
        # infinity: totally invariant under R^2 iff R^2 is a polynomial
        if polys.degree(R2.den) == 0 and polys.degree(R2.num) == d2:
            out.append(BerkPoint.infinity(bk))
        # affine x: fixed under R^2 with num2 - x*den2 == c*(z - x)^(d2)
        fix_poly = polys.sub(R2.num, polys.mul([bk.zero(), bk.one()], R2.den))
        if polys.degree(fix_poly) >= 1:
            for x, _m in roots_with_mult(fix_poly, partial=True):
                N = polys.sub(R2.num, polys.scale(R2.den, x))
                if polys.degree(N) != d2:
                    continue
                shifted = polys.recenter(N, x)
                if all(c.is_zero_to_precision() for c in shifted[:-1]):
                    pt = BerkPoint.type_i(x)
                    if pt not in out:
                        out.append(pt)
        return out


# ---------------------------------------------------------------------------
# residue helpers for ball-level computations


def _ball_residue_poly(C, v):
    """Residue polynomial of C along the ball of log-radius v (centered where
    C was recentered): coefficient i reduces C_i * pi^(i*v - level)."""
    C = list(C)
    level = polys.gauss_valuation(C, v)
    if level == INF:
        return []
    bk = None
    for c in C:
        bk = c.backend
        break
    res = []
    for i, c in enumerate(C):
        if c.is_zero_to_precision():
            if not c.is_exact and c.prec + i * v <= level:
                raise PrecisionExhausted("ball residue coefficient unknown")
            res.append(None)
            continue
        if c.valuation() + i * v > level:
            res.append(None)
        else:
            res.append((c * bk.uniformizer_pow(i * v - level)).reduce())
    present = [r for r in res if r is not None]
    field = _common_res_field(present)
    out = []
    for r in res:
        if r is None:
            out.append(field.zero())
        elif r.field == field or r.field.is_rational:
            out.append(r)
        else:
            out.append(rs.embed_element(r, field))
    return rs.rpoly_trim(out)


def _common_res_field(elts):
    from math import lcm

    fields = [e.field for e in elts if not e.field.is_rational]
    if not fields:
        return elts[0].field
    k = 1
    for f in fields:
        k = lcm(k, f.k)
    return rs.ResidueField(fields[0].p, k)


def _align_res_pair(a, b):
    """Embed two residue coefficient lists into a common field."""
    both = [e for e in list(a) + list(b) if not e.field.is_rational]
    if not both:
        return list(a), list(b)
    field = _common_res_field(both)
    out_a = [e if e.field == field else rs.embed_element(e, field) for e in a]
    out_b = [e if e.field == field else rs.embed_element(e, field) for e in b]
    return out_a, out_b


def _proportionality(res_a, res_q):
    """If res_a == d * res_q for a constant residue d, return d, else None."""
    res_a, res_q = _align_res_pair(res_a, res_q)
    n = max(len(res_a), len(res_q))
    field = (res_a + res_q)[0].field
    za = list(res_a) + [field.zero()] * (n - len(res_a))
    zq = list(res_q) + [field.zero()] * (n - len(res_q))
    d = None
    for x, y in zip(za, zq):
        if y.is_zero():
            if not x.is_zero():
                return None
            continue
        ratio = x / y
        if d is None:
            d = ratio
        elif d != ratio:
            return None
    if d is None or d.is_zero():
        return None
    return d


# ---------------------------------------------------------------------------
# map-literal parser


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[()+\-*/^]))"
)


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParamDomain(f"bad map literal near {text[pos:pos+10]!r}")
        pos = m.end()
        if m.group("num"):
            out.append(("num", Fraction(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    out.append(("end", None))
    return out


class _Frac:
    """A rational function as a (num, den) coefficient pair during parsing."""

    __slots__ = ("n", "d")

    def __init__(self, n, d):
        self.n = n
        self.d = d

    def __add__(self, o):
        return _Frac(
            polys.add(polys.mul(self.n, o.d), polys.mul(o.n, self.d)),
            polys.mul(self.d, o.d),
        )

    def __sub__(self, o):
        return self + _Frac(polys.neg(o.n), o.d)

    def __mul__(self, o):
        return _Frac(polys.mul(self.n, o.n), polys.mul(self.d, o.d))

    def __truediv__(self, o):
        if polys.trim(o.n) == []:
            raise DivisionByZero("division by zero in map literal")
        return _Frac(polys.mul(self.n, o.d), polys.mul(self.d, o.n))

    def __pow__(self, k):
        if k < 0:
            return _Frac(self.d, self.n) ** (-k)
        bk = self.d[0].backend
        out = _Frac([bk.one()], [bk.one()])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out


class _Parser:
    def __init__(self, tokens, bk, consts):
        self.toks = tokens
        self.i = 0
        self.bk = bk
        self.consts = consts

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def one(self):
        return _Frac([self.bk.one()], [self.bk.one()])

    def parse_expr(self):
        if self.peek() == ("op", "-"):
            self.next()
            node = self.one() * _Frac([-self.bk.one()], [self.bk.one()]) * self.parse_term()
        else:
            node = self.parse_term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.next()[1]
            rhs = self.parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.next()[1]
            rhs = self.parse_factor()
            node = node * rhs if op == "*" else node / rhs
        return node

    def parse_factor(self):
        node = self.parse_atom()
        while self.peek() == ("op", "^"):
            self.next()
            kind, val = self.next()
            if kind != "num" or val.denominator != 1:
                raise ParamDomain("exponent must be an integer")
            node = node ** int(val)
        return node

    def parse_atom(self):
        kind, val = self.next()
        if kind == "num":
            return _Frac([self.bk.from_rational(val)], [self.bk.one()])
        if kind == "name":
            if val == "z":
                return _Frac([self.bk.zero(), self.bk.one()], [self.bk.one()])
            if val in self.consts:
                c = self.consts[val]
                if not isinstance(c, FieldElement):
                    c = self.bk.parse_literal(str(c))
                return _Frac([c], [self.bk.one()])
            raise ParamDomain(f"unknown symbol {val!r} in map literal")
        if (kind, val) == ("op", "("):
            node = self.parse_expr()
            if self.next() != ("op", ")"):
                raise ParamDomain("unbalanced parentheses in map literal")
            return node
        raise ParamDomain(f"unexpected token {val!r} in map literal")


def _parse_map_literal(text, bk, consts):
    parser = _Parser(_tokenize(text), bk, consts)
    node = parser.parse_expr()
    if parser.peek()[0] != "end":
        raise ParamDomain("trailing input in map literal")
    return node.n, node.d
