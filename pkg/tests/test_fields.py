"""Valued-field backend tests: worked examples plus randomized invariants.

The valuation oracle for rationals is independent brute force (factor
numerator/denominator); randomized properties use a fixed seed so failures
are reproducible.
"""

import random
from fractions import Fraction as F

import pytest

from berkdyn import (
    Backend,
    ExtensionBound,
    INF,
    NegativeValuation,
    PADIC,
    EQUICHAR0,
    EQUICHARP,
    parse_backend,
    residue_roots,
)
from berkdyn import fields as fl
from berkdyn import residue as rs


def brute_valuation(q: F, p: int):
    """Oracle: count factors of p in numerator minus denominator."""
    if q == 0:
        return INF
    v = 0
    n = abs(q.numerator)
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


B2 = Backend(PADIC, p=2)
B3 = Backend(PADIC, p=3)
B5 = Backend(PADIC, p=5)
BQ = Backend(EQUICHAR0)
BF2 = Backend(EQUICHARP, p=2)
BF3 = Backend(EQUICHARP, p=3)


def random_element(bk, rng, exact_rational=False):
    if bk.kind == PADIC or exact_rational:
        num = rng.randint(-50, 50)
        den = rng.randint(1, 50)
        shift = rng.randint(-3, 3)
        q = F(num, den) * F(bk.p if bk.kind == PADIC else 1) ** shift if bk.kind == PADIC else F(num, den)
        x = bk.from_rational(q)
        if bk.kind == PADIC and rng.random() < 0.3:
            x = x * bk.uniformizer_pow(F(rng.randint(0, 3), rng.choice([1, 2, 3])))
        return x
    # series backends: a few random terms
    x = bk.zero()
    for _ in range(rng.randint(1, 4)):
        q = F(rng.randint(-6, 8), rng.choice([1, 1, 2, 3]))
        c = rng.randint(-6, 6)
        x = x + bk.from_rational(c) * bk.uniformizer_pow(q)
    return x


class TestValuation:
    def test_padic_square(self):
        assert B3.from_int(9).valuation() == 2

    def test_zero(self):
        for bk in (B3, BQ, BF2):
            assert bk.zero().valuation() == INF

    def test_rational_oracle_example(self):
        q = F(3, 4)
        assert B2.from_rational(q).valuation() == brute_valuation(q, 2) == -2

    def test_rational_oracle_random(self):
        rng = random.Random(7)
        for _ in range(300):
            q = F(rng.randint(-500, 500), rng.randint(1, 500))
            for bk in (B2, B3, B5):
                assert bk.from_rational(q).valuation() == brute_valuation(q, bk.p)

    @pytest.mark.parametrize("bk", [B2, B3, BQ, BF2, BF3])
    def test_multiplicativity_1000(self, bk):
        rng = random.Random(11)
        for _ in range(1000):
            x = random_element(bk, rng)
            y = random_element(bk, rng)
            vx, vy = x.valuation(), y.valuation()
            if vx == INF or vy == INF:
                assert (x * y).valuation() == INF
            else:
                assert (x * y).valuation() == vx + vy

    @pytest.mark.parametrize("bk", [B2, B3, BQ, BF2, BF3])
    def test_ultrametric_distinct_1000(self, bk):
        rng = random.Random(13)
        done = 0
        while done < 1000:
            x = random_element(bk, rng)
            y = random_element(bk, rng)
            vx, vy = x.valuation(), y.valuation()
            if vx == vy:
                continue
            assert (x + y).valuation() == min(vx, vy)
            done += 1


class TestArithmetic:
    def test_inverse_pair(self):
        assert (B5.from_rational(F(1, 5)) * B5.from_int(5)).as_rational() == 1

    def test_series_cancellation(self):
        x = BQ.one() + BQ.uniformizer_pow(1) + BQ.from_int(-1)
        assert x.valuation() == 1

    def test_integer_addition(self):
        s = B2.from_int(2) + B2.from_int(4)
        assert s.as_rational() == 6
        assert s.valuation() == 1

    def test_division_by_zero(self):
        from berkdyn import DivisionByZero

        with pytest.raises(DivisionByZero):
            B2.one() / B2.zero()

    def test_incompatible_backends(self):
        from berkdyn import IncompatibleBackends

        with pytest.raises(IncompatibleBackends):
            B2.one() + B3.one()

    @pytest.mark.parametrize("bk", [B2, B3, BQ, BF2, BF3])
    def test_field_axioms_random(self, bk):
        rng = random.Random(17)
        for _ in range(100):
            x = random_element(bk, rng)
            y = random_element(bk, rng)
            z = random_element(bk, rng)
            assert (x + y) + z == x + (y + z)
            assert x * (y + z) == x * y + x * z
            assert x + (-x) == bk.zero()
            try:
                if not y.is_zero():
                    q = x / y
                    if q.is_exact:
                        assert q * y == x
                    else:
                        err = q * y - x
                        assert err.valuation_lower_bound() >= q.prec + y.valuation()
            except fl.PrecisionExhausted:
                pass

    def test_padic_tower_inverse(self):
        x = B3.one() + B3.uniformizer_pow(F(1, 2))
        assert (x * x.inverse()) == B3.one()
        y = B2.uniformizer_pow(F(3, 4)) + B2.from_int(5)
        assert (y * y.inverse()) == B2.one()


class TestReduce:
    def test_examples(self):
        assert B3.from_int(7).reduce() == B3.residue_field().from_int(1)
        assert B3.from_int(3).reduce().is_zero()
        x = BQ.from_int(2) + BQ.from_int(5) * BQ.uniformizer_pow(1)
        assert x.reduce().value == F(2)

    def test_negative_valuation(self):
        with pytest.raises(NegativeValuation):
            B3.from_rational(F(1, 3)).reduce()

    @pytest.mark.parametrize("bk", [B2, B3, BQ, BF3])
    def test_homomorphism_500(self, bk):
        rng = random.Random(23)
        done = 0
        while done < 500:
            x = random_element(bk, rng)
            y = random_element(bk, rng)
            if x.valuation() < 0 or y.valuation() < 0:
                continue
            assert (x + y).reduce() == x.reduce() + y.reduce()
            assert (x * y).reduce() == x.reduce() * y.reduce()
            done += 1


class TestUniformizerPow:
    def test_integer_power(self):
        assert B2.uniformizer_pow(1).as_rational() == 2

    def test_series_fractional(self):
        x = BQ.uniformizer_pow(F(3, 2))
        assert x.valuation() == F(3, 2)

    def test_formal_square_root(self):
        x = B3.uniformizer_pow(F(1, 2))
        assert x.valuation() == F(1, 2)
        assert (x * x).as_rational() == 3

    def test_multiplicative_random(self):
        rng = random.Random(29)
        for bk in (B2, BQ, BF2):
            for _ in range(50):
                q1 = F(rng.randint(-8, 8), rng.randint(1, 4))
                q2 = F(rng.randint(-8, 8), rng.randint(1, 4))
                assert bk.uniformizer_pow(q1) * bk.uniformizer_pow(q2) == bk.uniformizer_pow(q1 + q2)


class TestResidueRoots:
    def test_f3_squares(self):
        rf = B3.residue_field()
        roots = residue_roots([rf.from_int(-1), rf.zero(), rf.one()])
        values = sorted(r.value[0] for r, _ in roots)
        assert values == [1, 2]
        assert all(m == 1 for _, m in roots)

    def test_f2_needs_f4(self):
        rf = rs.ResidueField(2, 1)
        roots = residue_roots([rf.one(), rf.one(), rf.one()])
        assert len(roots) == 2
        assert all(m == 1 for _, m in roots)
        assert all(r.field.k == 2 for r, _ in roots)

    def test_rational_no_sqrt2(self):
        rf = rs.ResidueField(0)
        with pytest.raises(ExtensionBound):
            residue_roots([rf.from_int(-2), rf.zero(), rf.one()])

    def test_resubstitution_random(self):
        rng = random.Random(31)
        for p in (2, 3):
            rf = rs.ResidueField(p, 1)
            for _ in range(50):
                deg = rng.randint(1, 4)
                coeffs = [rf.from_int(rng.randint(0, p - 1)) for _ in range(deg)]
                coeffs.append(rf.one())
                try:
                    roots = residue_roots(coeffs)
                except ExtensionBound:
                    continue
                for root, mult in roots:
                    big = root.field
                    emb = [rs.embed_element(c, big) for c in coeffs]
                    assert rs.rpoly_eval(emb, root).is_zero()
                    assert mult >= 1
                assert sum(m for _, m in roots) <= deg


class TestBackendSpec:
    def test_parse_roundtrip(self):
        bk = parse_backend("padic:p=3,prec=40")
        assert bk.kind == PADIC and bk.p == 3 and bk.precision == 40
        bk = parse_backend("laurentq:prec=10")
        assert bk.kind == EQUICHAR0 and bk.precision == 10
        bk = parse_backend("laurentfp:p=2,k=1,prec=40")
        assert bk.kind == EQUICHARP and bk.p == 2 and bk.k == 1

    def test_literals(self):
        x = B3.parse_literal("3/4")
        assert x.as_rational() == F(3, 4)
        y = BQ.parse_literal("[(0,2),(3/2,1)]")
        assert y == BQ.from_int(2) + BQ.uniformizer_pow(F(3, 2))
        assert BQ.parse_literal(y.literal()) == y

    def test_truncate_below_is_canonical(self):
        rng = random.Random(37)
        for bk in (B2, B3):
            for _ in range(100):
                x = random_element(bk, rng)
                v = F(rng.randint(0, 6), rng.choice([1, 2]))
                t = x.truncate_below(v)
                diff = x - t
                assert diff.valuation_lower_bound() >= v
                # truncating twice changes nothing
                assert t.truncate_below(v) == t
