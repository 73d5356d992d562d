"""Residue fields of the valued-field backends.

Two kinds appear: the rationals (equicharacteristic-zero backends) and the
finite fields F_{p^k}.  Finite fields are modeled as F_p[x] modulo a fixed
irreducible of degree k (the lexicographically first monic one, so the choice
is deterministic across runs).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class ResidueField:
    """Descriptor for the residue field: GF(p, k) or QQ (p = 0)."""

    def __init__(self, p: int, k: int = 1):
        self.p = p
        self.k = k
        if p == 0:
            self.modulus = None
        else:
            self.modulus = _find_irreducible(p, k)

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __eq__(self, other):
        return isinstance(other, ResidueField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(("ResidueField", self.p, self.k))

    def __repr__(self):
        if self.is_rational:
            return "QQ"
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    # -- construction -------------------------------------------------

    def zero(self) -> "ResidueElement":
        return self.from_int(0)

    def one(self) -> "ResidueElement":
        return self.from_int(1)

    def from_int(self, n) -> "ResidueElement":
        if self.is_rational:
            return ResidueElement(self, Fraction(n))
        return ResidueElement(self, (n % self.p,) + (0,) * (self.k - 1))

    def from_fraction(self, q: Fraction) -> "ResidueElement":
        if self.is_rational:
            return ResidueElement(self, Fraction(q))
        num = q.numerator % self.p
        den = q.denominator % self.p
        if den == 0:
            raise ZeroDivisionError("denominator divisible by p")
        return self.from_int(num * pow(den, -1, self.p))

    def generator(self) -> "ResidueElement":
        if self.is_rational or self.k == 1:
            raise ValueError("no generator for prime/rational residue field")
        return ResidueElement(self, (0, 1) + (0,) * (self.k - 2))

    def elements(self):
        """Iterate over all elements (finite fields only)."""
        if self.is_rational:
            raise ValueError("cannot enumerate QQ")
        coeffs = [0] * self.k
        total = self.p ** self.k
        for n in range(total):
            m = n
            for i in range(self.k):
                m, coeffs[i] = divmod(m, self.p)
            yield ResidueElement(self, tuple(coeffs))


class ResidueElement:
    __slots__ = ("field", "value")

    def __init__(self, field: ResidueField, value):
        self.field = field
        self.value = value

    def is_zero(self) -> bool:
        if self.field.is_rational:
            return self.value == 0
        return all(c == 0 for c in self.value)

    def __eq__(self, other):
        return (
            isinstance(other, ResidueElement)
            and self.field == other.field
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        if self.field.is_rational:
            return str(self.value)
        if self.field.k == 1:
            return str(self.value[0])
        parts = []
        for i, c in enumerate(self.value):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}g" + (f"^{i}" if i > 1 else ""))
        return "+".join(parts) if parts else "0"

    def __add__(self, other):
        f = self.field
        if f.is_rational:
            return ResidueElement(f, self.value + other.value)
        return ResidueElement(
            f, tuple((a + b) % f.p for a, b in zip(self.value, other.value))
        )

    def __neg__(self):
        f = self.field
        if f.is_rational:
            return ResidueElement(f, -self.value)
        return ResidueElement(f, tuple((-a) % f.p for a in self.value))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        if f.is_rational:
            return ResidueElement(f, self.value * other.value)
        prod = [0] * (2 * f.k - 1)
        for i, a in enumerate(self.value):
            if a:
                for j, b in enumerate(other.value):
                    if b:
                        prod[i + j] = (prod[i + j] + a * b) % f.p
        return ResidueElement(f, _reduce_mod(prod, f.modulus, f.p, f.k))

    def inverse(self):
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError("residue inverse of zero")
        if f.is_rational:
            return ResidueElement(f, 1 / self.value)
        if f.k == 1:
            return ResidueElement(f, (pow(self.value[0], -1, f.p),))
        # extended Euclid in F_p[x] against the modulus
        a = list(self.value)
        b = list(f.modulus)
        s0, s1 = [0], [1]
        while any(c != 0 for c in a):
            q, r = _polydivmod_fp(b, a, f.p)
            b, a = a, r
            s0, s1 = s1, _polysub_fp(s0, _polymul_fp(q, s1, f.p), f.p)
        # b is now gcd (a constant), s0 its cofactor: s0 * self == b (mod modulus)
        c = pow(b[0], -1, f.p)
        inv = [(x * c) % f.p for x in s0]
        inv = _reduce_mod(inv, f.modulus, f.p, f.k)
        return ResidueElement(f, inv)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def pth_root(self):
        """Inverse of Frobenius (finite fields): x ↦ x^(p^(k-1))."""
        f = self.field
        if f.is_rational:
            raise ValueError("pth_root only in characteristic p")
        return self ** (f.p ** (f.k - 1))


# ---------------------------------------------------------------------------
# F_p[x] helpers on plain integer coefficient lists (ascending order)


def _polytrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polysub_fp(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = (x - y) % p
    return _polytrim(out)


def _polymul_fp(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % p
    return _polytrim(out)


def _polydivmod_fp(a, b, p):
    a = _polytrim(list(a))
    b = _polytrim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and r:
        c = (r[-1] * inv_lead) % p
        d = len(r) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            r[i + d] = (r[i + d] - c * y) % p
        _polytrim(r)
    return _polytrim(q), r


def _reduce_mod(coeffs, modulus, p, k):
    _, r = _polydivmod_fp(coeffs, list(modulus), p)
    r = list(r) + [0] * (k - len(r))
    return tuple(r[:k])


def _poly_powmod_fp(base, n, mod, p):
    result = [1]
    base = _polydivmod_fp(base, mod, p)[1]
    while n:
        if n & 1:
            result = _polydivmod_fp(_polymul_fp(result, base, p), mod, p)[1]
        base = _polydivmod_fp(_polymul_fp(base, base, p), mod, p)[1]
        n >>= 1
    return result


def _polygcd_fp(a, b, p):
    a, b = _polytrim(list(a)), _polytrim(list(b))
    while b:
        a, b = b, _polydivmod_fp(a, b, p)[1]
    if a:
        c = pow(a[-1], -1, p)
        a = [(x * c) % p for x in a]
    return a


def _is_irreducible(f, p):
    k = len(f) - 1
    x = [0, 1]
    # f | x^(p^k) - x  and  gcd(x^(p^(k/ell)) - x, f) = 1 for prime divisors ell of k
    xq = _poly_powmod_fp(x, p ** k, f, p)
    if _polytrim(_polysub_fp(xq, x, p)):
        return False
    for ell in range(2, k + 1):
        if k % ell == 0 and _is_prime(ell):
            xq = _poly_powmod_fp(x, p ** (k // ell), f, p)
            if len(_polygcd_fp(_polysub_fp(xq, x, p), f, p)) > 1:
                return False
    return True


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def _find_irreducible(p, k):
    """Lexicographically first monic irreducible of degree k over F_p."""
    if k == 1:
        return (0, 1)
    total = p ** k
    for n in range(total):
        coeffs = []
        m = n
        for _ in range(k):
            m, c = divmod(m, p)
            coeffs.append(c)
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible found (unreachable)")


# ---------------------------------------------------------------------------
# Polynomials over a ResidueField (coefficient lists of ResidueElements)


def rpoly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def rpoly_degree(coeffs):
    coeffs = rpoly_trim(coeffs)
    return len(coeffs) - 1 if coeffs else -1


def rpoly_eval(coeffs, x: ResidueElement):
    acc = x.field.zero()
    for c in reversed(rpoly_trim(coeffs)):
        acc = acc * x + c
    return acc


def rpoly_mul(a, b, field):
    a, b = rpoly_trim(a), rpoly_trim(b)
    if not a or not b:
        return []
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def rpoly_divmod(a, b, field):
    a, b = rpoly_trim(a), rpoly_trim(b)
    if not b:
        raise ZeroDivisionError
    inv_lead = b[-1].inverse()
    q = [field.zero()] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and r:
        c = r[-1] * inv_lead
        d = len(r) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            r[i + d] = r[i + d] - c * y
        r = rpoly_trim(r)
    return q, r


def rpoly_gcd(a, b, field):
    a, b = rpoly_trim(a), rpoly_trim(b)
    while b:
        a, b = b, rpoly_divmod(a, b, field)[1]
    if a:
        c = a[-1].inverse()
        a = [x * c for x in a]
    return a


def rpoly_derivative(coeffs, field):
    out = []
    for i, c in enumerate(rpoly_trim(coeffs)):
        if i == 0:
            continue
        out.append(c * field.from_int(i))
    return rpoly_trim(out)


def embed_element(x: ResidueElement, big: ResidueField) -> ResidueElement:
    """Embed x ∈ F_{p^k} into F_{p^m}, k | m (deterministic choice of embedding)."""
    small = x.field
    if small == big:
        return x
    if small.is_rational or big.is_rational:
        raise ValueError("no embedding between QQ and finite fields")
    if big.k % small.k != 0:
        raise ValueError("no embedding: degree does not divide")
    beta = _embedding_image(small.p, small.k, big.k)
    beta_el = ResidueElement(big, beta)
    acc = big.zero()
    for c in reversed(x.value):
        acc = acc * beta_el + big.from_int(c)
    return acc


@lru_cache(maxsize=None)
def _embedding_image(p, k, m):
    """Image of the degree-k generator inside GF(p, m): first root of its modulus."""
    small = ResidueField(p, k)
    big = ResidueField(p, m)
    modulus_coeffs = [big.from_int(c) for c in small.modulus]
    for cand in big.elements():
        if rpoly_eval(modulus_coeffs, cand).is_zero():
            return cand.value
    raise RuntimeError("embedding root not found (unreachable)")
