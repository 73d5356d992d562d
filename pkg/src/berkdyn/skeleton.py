"""Piecewise-affine segment dynamics on the tree axis, with the example
catalog and exact entropy numbers.

A skeleton map acts on a closed parameter segment [t_min, t_max]; each branch
carries a subdomain, an orientation, and an integer slope, and maps its
domain affinely onto the full segment (the Bernoulli shape).  The catalog
returns both the abstract branch system and, where available, a companion
rational map over a p-adic backend together with the embedding of the
parameter axis into the tree, so the two can be cross-validated point by
point."""

from __future__ import annotations

import math
from fractions import Fraction

from .berkovich import BerkPoint
from .errors import Mismatch, NotBernoulli, ParamDomain
from .ratmap import RationalMap
from .fields import Backend, PADIC


class Branch:
    """One affine branch: [a, b] onto the full segment with slope +/- d."""

    __slots__ = ("a", "b", "orientation", "slope")

    def __init__(self, a, b, orientation, slope):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.orientation = orientation
        self.slope = int(slope)
        if self.b <= self.a or orientation not in (1, -1) or self.slope < 1:
            raise ParamDomain("branch needs a < b, orientation ±1, slope >= 1")

    def contains(self, t) -> bool:
        return self.a <= t <= self.b

    def apply(self, t) -> Fraction:
        t = Fraction(t)
        if self.orientation == 1:
            return (t - self.a) * self.slope
        return (self.b - t) * self.slope


class SkeletonMap:
    """A Bernoulli branch system on [t_min, t_max] (t_min normalized to 0)."""

    __slots__ = ("t_min", "t_max", "branches", "total_degree", "axis_sign", "companion")

    def __init__(self, t_max, branches, total_degree, axis_sign=1, companion=None):
        self.t_min = Fraction(0)
        self.t_max = Fraction(t_max)
        self.branches = branches
        self.total_degree = int(total_degree)
        self.axis_sign = axis_sign
        self.companion = companion
        for br in branches:
            if br.apply(br.a if br.orientation == 1 else br.b) != 0:
                raise ParamDomain("branch does not start at the segment bottom")
            if br.apply(br.b if br.orientation == 1 else br.a) != self.t_max:
                raise ParamDomain("branch does not cover the full segment")

    @property
    def k(self) -> int:
        return len(self.branches)

    def branch_of(self, t):
        for j, br in enumerate(self.branches):
            if br.contains(t):
                return j, br
        return None, None

    def apply(self, t) -> Fraction:
        _, br = self.branch_of(t)
        if br is None:
            raise ParamDomain(f"parameter {t} is outside every branch domain")
        return br.apply(t)

    def inverse_in_branch(self, j: int, s) -> Fraction:
        s = Fraction(s)
        br = self.branches[j]
        if br.orientation == 1:
            return br.a + s / br.slope
        return br.b - s / br.slope

    def point_of(self, t, bk: Backend) -> BerkPoint:
        """The type-II point on the 0-infinity axis for a parameter value."""
        return BerkPoint.type_ii(bk.zero(), self.axis_sign * Fraction(t))


# -- invariant set and entropies ----------------------------------------

FULL_SEGMENT = "FULL_SEGMENT"
CANTOR = "CANTOR"


def invariant_set(M: SkeletonMap):
    """FULL_SEGMENT when the branch domains tile the segment (the slopes'
    reciprocals sum to 1), else a Cantor descriptor with the gap list."""
    total = sum(Fraction(1, br.slope) for br in M.branches)
    if total == 1:
        return FULL_SEGMENT, None
    gaps = []
    cursor = M.t_min
    for br in M.branches:
        if br.a > cursor:
            gaps.append((cursor, br.a))
        cursor = br.b
    if cursor < M.t_max:
        gaps.append((cursor, M.t_max))
    return CANTOR, gaps


def entropies(M: SkeletonMap):
    """(h_top, h_eq, weights): topological entropy log k, the equilibrium
    weights d_j/D on the branch cylinders, and the entropy of the weight
    measure in Rokhlin form sum (d_j/D) log(D/d_j)."""
    D = M.total_degree
    if sum(br.slope for br in M.branches) != D:
        raise NotBernoulli("branch slopes must sum to the total degree")
    weights = [Fraction(br.slope, D) for br in M.branches]
    h_top = math.log(M.k)
    h_eq = sum(float(w) * math.log(D / br.slope) for w, br in zip(weights, M.branches))
    return h_top, h_eq, weights


# -- symbolic dynamics --------------------------------------------------


class SymbolicCode:
    """Cylinder structure of a Bernoulli skeleton map: depth-m cylinders are
    the k^m inverse-branch images of the segment, with product masses."""

    def __init__(self, M: SkeletonMap):
        self.map = M

    def cylinders(self, depth: int):
        """[(word, (lo, hi), mass)] for all words of the given depth; the
        i-th letter of the word is the branch visited at time i."""
        M = self.map
        D = M.total_degree
        out = [((), (M.t_min, M.t_max), Fraction(1))]
        for _ in range(depth):
            nxt = []
            for word, (lo, hi), mass in out:
                for j, br in enumerate(M.branches):
                    ends = (M.inverse_in_branch(j, lo), M.inverse_in_branch(j, hi))
                    nxt.append(
                        ((j,) + word, (min(ends), max(ends)), mass * Fraction(br.slope, D))
                    )
            out = nxt
        return out

    def bernoulli_correlation(self, a: int, b: int, n: int) -> Fraction:
        """Exact correlation of depth-1 cylinder indicators after n steps:
        the weight of {x in I_b, T^n x in I_a} minus the product of weights."""
        M = self.map
        D = M.total_degree
        w = [Fraction(br.slope, D) for br in M.branches]
        if n == 0:
            joint = w[a] if a == b else Fraction(0)
        else:
            # full shift: first symbol b, the n-th symbol a, free in between
            joint = w[b] * w[a]
        return joint - w[a] * w[b]


# -- the example catalog ------------------------------------------------


def catalog(name: str, **params):
    """Named skeleton systems, with companion rational maps where available.

    R0:     two-branch degree-d family (slopes d-2 and 2), params d, alog, p
    R1:     the degree-10 three-branch map (slopes 2, 4, 4), param p
    LATTES: multiplication by m on a degenerating Legendre curve, params m, p
    """
    name = name.upper()
    if name == "R0":
        return _catalog_r0(
            int(params.get("d", 5)), int(params.get("alog", 1)), int(params.get("p", 3))
        )
    if name == "R1":
        return _catalog_r1(int(params.get("p", 2)))
    if name == "LATTES":
        return _catalog_lattes(int(params.get("m", 2)), int(params.get("p", 5)))
    raise ParamDomain(f"unknown catalog entry {name!r}")


def _catalog_r0(d: int, alog: int, p: int) -> SkeletonMap:
    if d < 3 or alog < 1:
        raise ParamDomain("the two-branch family needs d >= 3 and alog >= 1")
    bk = Backend(PADIC, p=p)
    L = Fraction(d * alog, 2)
    branches = [
        Branch(0, L / (d - 2), 1, d - 2),
        Branch(Fraction(d * alog, 4), L, -1, 2),
    ]
    companion = RationalMap.parse(f"(z^{d} - {p ** (d * alog)})/z^2", bk)
    return SkeletonMap(L, branches, d, axis_sign=1, companion=companion)


def _catalog_r1(p: int) -> SkeletonMap:
    bk = Backend(PADIC, p=p)
    a2, a3 = p ** 2, p ** 3
    companion = RationalMap.parse(
        f"z^2*(1 + {a3 ** 8}*z^8)/(1 + {a2 ** 6}*z^6)", bk
    )
    branches = [Branch(0, 2, 1, 2), Branch(2, 3, -1, 4), Branch(3, 4, 1, 4)]
    return SkeletonMap(4, branches, 10, axis_sign=-1, companion=companion)


def _catalog_lattes(m: int, p: int) -> SkeletonMap:
    if m not in (2, 3):
        raise ParamDomain("companion formulas are provided for m = 2 and 3")
    if p in (2, 3):
        raise ParamDomain("the residue characteristic must not divide 6")
    bk = Backend(PADIC, p=p)
    lam = p  # valuation 1, so the multiplier parameter has valuation 2
    if m == 2:
        text = f"(z^2 - {lam})^2 / (4*z*(z - 1)*(z - {lam}))"
        companion = RationalMap.parse(text, bk)
    else:
        companion = _lattes_three(bk, lam)
    L = Fraction(1)
    branches = []
    for i in range(m):
        lo = L * i / m
        hi = L * (i + 1) / m
        branches.append(Branch(lo, hi, 1 if i % 2 == 0 else -1, m))
    return SkeletonMap(L, branches, m * m, axis_sign=1, companion=companion)


def _lattes_three(bk: Backend, lam: int) -> RationalMap:
    """Multiplication by 3 on y^2 = x(x-1)(x-lam), via division polynomials."""
    b2, b4, b6, b8 = -4 * (1 + lam), 2 * lam, 0, -lam * lam
    consts = {
        "A": Fraction(b2),
        "B": Fraction(b4),
        "C": Fraction(b8),
        "L": Fraction(lam),
    }
    psi3 = "(3*z^4 + A*z^3 + 3*B*z^2 + C)"
    # psi2*psi4 = 4*f(z) * (2 z^6 + A z^5 + 5 B z^4 + 10 C z^2 + A*C z + B*C)
    f = "(z*(z - 1)*(z - L))"
    g = "(2*z^6 + A*z^5 + 5*B*z^4 + 10*C*z^2 + A*C*z + B*C)"
    text = f"(z*{psi3}^2 - 4*{f}*{g}) / {psi3}^2"
    return RationalMap.parse(text, bk, consts=consts)


# -- cross-validation against the tree engine ---------------------------


def cross_validate(M: SkeletonMap, samples: int, R: RationalMap = None):
    """Exact conjugacy check: for a grid of parameter values in each branch
    domain, the companion map must send the axis point of t to the axis
    point of the branch image, with matching interior local degree.

    Returns the number of points checked; raises Mismatch on any defect."""
    R = R if R is not None else M.companion
    if R is None:
        raise ParamDomain("no companion map available for this system")
    bk = R.backend
    checked = 0
    per_branch = max(1, -(-samples // M.k))
    for j, br in enumerate(M.branches):
        width = br.b - br.a
        for i in range(per_branch):
            t = br.a + width * Fraction(2 * i + 1, 2 * per_branch)
            S = M.point_of(t, bk)
            expected = M.point_of(br.apply(t), bk)
            got = R.image_point(S)
            if got != expected:
                raise Mismatch(f"image mismatch at t={t}: {got!r} != {expected!r}")
            if R.local_degree(S) != br.slope:
                raise Mismatch(
                    f"local degree mismatch at t={t}: "
                    f"{R.local_degree(S)} != {br.slope}"
                )
            checked += 1
    return checked


# -- the ball-splitting shift polynomial --------------------------------


def shift_radius(p: int, k: int) -> Fraction:
    """Valuation radius of the level-k nested components."""
    return Fraction(1 - Fraction(1, p ** k), p - 1)


def shift_map(p: int) -> RationalMap:
    bk = Backend(PADIC, p=p)
    return RationalMap.parse(f"(z^{p} - z^{p * p})/{p}", bk)


def shift_model(p: int, depth: int):
    """The p-ary tree of nested ball components of the iterated preimages of
    the closed unit ball under the shift polynomial.

    Returns (levels, code): levels[k] is the list of type-II ball points at
    depth k (p^k of them, all with the closed-form valuation radius); the
    radii and counts are asserted against the formulas during construction."""
    if depth < 1:
        raise ParamDomain("depth must be >= 1")
    P = shift_map(p)
    bk = P.backend
    levels = [[BerkPoint.canonical(bk)]]
    for k in range(1, depth + 1):
        r = shift_radius(p, k)
        nxt = []
        for S in levels[-1]:
            fiber = P.preimages(S)
            for T, mult in fiber:
                if mult != p:
                    raise Mismatch(
                        f"level {k}: component degree {mult} != {p} at {T!r}"
                    )
                if T.logr != r:
                    raise Mismatch(f"level {k}: radius {T.logr} != {r} at {T!r}")
                nxt.append(T)
        if len(nxt) != p ** k:
            raise Mismatch(f"level {k}: {len(nxt)} components, expected {p ** k}")
        levels.append(nxt)
    code = SymbolicCode(
        SkeletonMap(
            1,
            [Branch(Fraction(i, p), Fraction(i + 1, p), 1, p) for i in range(p)],
            p * p,
        )
    )
    return levels, code
