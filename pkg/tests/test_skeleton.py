"""Segment-dynamics catalog tests.

Oracles:
- the branch systems are validated point-by-point against their companion
  rational maps (exact conjugacy on a parameter grid, matching local degrees);
- entropy values are checked against closed forms evaluated independently;
- the ball-splitting polynomial satisfies an exact increment identity
  val(P(z+w) - P(w)) = p*val(z) - 1 for 0 < val(z) < 1/(p-1), which pins the
  level radii, and the nested-component counts are cross-checked by pushing
  every component forward one level.
"""

import math
import random
from fractions import Fraction as F

import pytest

from berkdyn import Backend, PADIC
from berkdyn import polys
from berkdyn.berkovich import BerkPoint
from berkdyn.equilibrium import jacobian
from berkdyn.errors import Mismatch, ParamDomain
from berkdyn.skeleton import (
    CANTOR,
    FULL_SEGMENT,
    Branch,
    SkeletonMap,
    SymbolicCode,
    catalog,
    cross_validate,
    entropies,
    invariant_set,
    shift_map,
    shift_model,
    shift_radius,
)


class TestBranchSystem:
    def test_branch_apply(self):
        br = Branch(0, F(5, 6), 1, 3)
        assert br.apply(0) == 0
        assert br.apply(F(5, 6)) == F(5, 2)
        rev = Branch(F(5, 4), F(5, 2), -1, 2)
        assert rev.apply(F(5, 2)) == 0
        assert rev.apply(F(5, 4)) == F(5, 2)

    def test_branch_must_cover_segment(self):
        with pytest.raises(ParamDomain):
            SkeletonMap(2, [Branch(0, 1, 1, 1)], 1)

    def test_inverse_in_branch_round_trip(self):
        M = catalog("R1")
        for j, br in enumerate(M.branches):
            for s in [F(0), F(1, 3), F(7, 2), F(4)]:
                t = M.inverse_in_branch(j, s)
                assert br.contains(t)
                assert M.apply(t) == s or M.branch_of(t)[0] != j


class TestCatalogR0:
    def test_structure(self):
        M = catalog("R0")  # d=5, alog=1, p=3
        assert M.t_max == F(5, 2)
        assert [(br.a, br.b, br.orientation, br.slope) for br in M.branches] == [
            (F(0), F(5, 6), 1, 3),
            (F(5, 4), F(5, 2), -1, 2),
        ]
        kind, gaps = invariant_set(M)
        assert kind == CANTOR
        assert gaps == [(F(5, 6), F(5, 4))]

    def test_entropies(self):
        h_top, h_eq, weights = entropies(catalog("R0"))
        assert h_top == pytest.approx(math.log(2))
        expected = (3 / 5) * math.log(5 / 3) + (2 / 5) * math.log(5 / 2)
        assert h_eq == pytest.approx(expected, abs=1e-12)
        assert weights == [F(3, 5), F(2, 5)]
        assert 0 < h_eq < math.log(2) < math.log(5)

    def test_cross_validate_100(self):
        assert cross_validate(catalog("R0"), 100) >= 100

    def test_rokhlin_consistency(self):
        # the entropy of the weight measure equals the mean log Jacobian of
        # the companion map sampled inside each branch
        M = catalog("R0")
        R = M.companion
        _, h_eq, weights = entropies(M)
        acc = 0.0
        for w, br in zip(weights, M.branches):
            mid = (br.a + br.b) / 2
            acc += float(w) * math.log(jacobian(R, M.point_of(mid, R.backend)))
        assert acc == pytest.approx(h_eq, abs=1e-12)


class TestCatalogR1:
    def test_structure(self):
        M = catalog("R1")
        assert M.t_max == 4
        assert M.total_degree == 10
        kind, gaps = invariant_set(M)
        assert kind == FULL_SEGMENT and gaps is None

    def test_entropies(self):
        h_top, h_eq, weights = entropies(catalog("R1"))
        assert h_top == pytest.approx(math.log(3))
        expected = (1 / 5) * math.log(5) + (4 / 5) * math.log(5 / 2)
        assert h_eq == pytest.approx(expected, abs=1e-12)
        assert h_eq == pytest.approx(1.0549201679861442, abs=1e-12)
        assert weights == [F(1, 5), F(2, 5), F(2, 5)]

    def test_cross_validate_100(self):
        assert cross_validate(catalog("R1"), 100) >= 100


class TestCatalogLattes:
    @pytest.mark.parametrize("m", [2, 3])
    def test_structure_and_conjugacy(self, m):
        M = catalog("LATTES", m=m, p=5)
        assert M.t_max == 1
        assert M.k == m and M.total_degree == m * m
        assert M.companion.degree == m * m
        kind, _ = invariant_set(M)
        assert kind == FULL_SEGMENT
        h_top, h_eq, _ = entropies(M)
        assert h_top == pytest.approx(math.log(m))
        assert h_eq == pytest.approx(math.log(m))
        assert cross_validate(M, 100) >= 100

    def test_rejects_bad_parameters(self):
        with pytest.raises(ParamDomain):
            catalog("LATTES", m=4, p=5)
        with pytest.raises(ParamDomain):
            catalog("LATTES", m=2, p=3)


class TestSymbolicCode:
    def test_cylinder_counts_and_masses(self):
        code = SymbolicCode(catalog("R1"))
        for depth in (1, 2, 3):
            cyls = code.cylinders(depth)
            assert len(cyls) == 3 ** depth
            assert sum(m for _, _, m in cyls) == 1
            w = [F(1, 5), F(2, 5), F(2, 5)]
            for word, (lo, hi), mass in cyls:
                assert lo < hi
                prod = F(1)
                for j in word:
                    prod *= w[j]
                assert mass == prod

    def test_cylinder_nesting(self):
        code = SymbolicCode(catalog("R0"))
        outer = {w: iv for w, iv, _ in code.cylinders(1)}
        for word, (lo, hi), _ in code.cylinders(2):
            plo, phi = outer[word[:1]]
            assert plo <= lo < hi <= phi

    def test_bernoulli_correlations(self):
        code = SymbolicCode(catalog("R1"))
        w = [F(1, 5), F(2, 5), F(2, 5)]
        for a in range(3):
            for b in range(3):
                assert code.bernoulli_correlation(a, b, 0) == (
                    (w[a] if a == b else F(0)) - w[a] * w[b]
                )
                for n in (1, 2, 5):
                    assert code.bernoulli_correlation(a, b, n) == 0

    def test_markov_invariance(self):
        # pushing the depth-2 cylinder masses forward one symbol recovers the
        # depth-1 masses: the weight measure is shift-invariant
        code = SymbolicCode(catalog("R1"))
        depth1 = {w[0]: m for w, _, m in code.cylinders(1)}
        pushed = {}
        for word, _, m in code.cylinders(2):
            pushed[word[1]] = pushed.get(word[1], F(0)) + m
        assert pushed == depth1


class TestShiftIncrement:
    @pytest.mark.parametrize("p,denom", [(2, 4), (3, 8)])
    def test_increment_valuation_identity(self, p, denom):
        # val(P(z+w) - P(w)) = p*val(z) - 1 whenever 0 < val(z) < 1/(p-1)
        bk = Backend(PADIC, p=p)
        P = shift_map(p)
        rng = random.Random(1000 + p)
        limit = F(1, p - 1)
        checked = 0
        while checked < 100:
            v = F(rng.randint(1, denom - 1), denom)
            if not (0 < v < limit):
                continue
            unit = bk.from_int(rng.choice([u for u in range(1, 2 * p) if u % p]))
            z = unit * bk.uniformizer_pow(v)
            w = bk.from_int(rng.randint(0, p ** 3 - 1))

            def ev(x):
                return polys.evaluate(P.num, x) / polys.evaluate(P.den, x)

            diff = ev(z + w) - ev(w)
            assert diff.valuation() == p * v - 1
            checked += 1

    def test_radius_formula_examples(self):
        assert shift_radius(2, 1) == F(1, 2)
        assert shift_radius(2, 3) == F(7, 8)
        assert shift_radius(3, 2) == F(4, 9)

    def test_radius_recursion(self):
        # one application of the increment identity per level:
        # r_{k+1} = (1 + r_k) / p
        for p in (2, 3, 5):
            for k in range(1, 6):
                assert shift_radius(p, k + 1) == (1 + shift_radius(p, k)) / p


class TestShiftModel:
    @pytest.mark.parametrize("p,depth", [(2, 4), (3, 2)])
    def test_component_tree(self, p, depth):
        levels, code = shift_model(p, depth)
        P = shift_map(p)
        for k, level in enumerate(levels):
            assert len(level) == p ** k
            for S in level:
                assert S.logr == shift_radius(p, k) if k else S.logr == 0
        # independent cross-check: each component maps onto one component of
        # the previous level, and every parent receives exactly p children
        for k in range(1, len(levels)):
            hits = {S: 0 for S in levels[k - 1]}
            for T in levels[k]:
                img = P.image_point(T)
                assert img in hits
                hits[img] += 1
            assert all(c == p for c in hits.values())

    def test_code_matches_tree(self):
        levels, code = shift_model(2, 3)
        M = code.map
        assert M.k == 2 and M.total_degree == 4
        for depth in (1, 2, 3):
            cyls = code.cylinders(depth)
            assert len(cyls) == len(levels[depth])
            # each branch has slope p: the code's cylinder masses are uniform,
            # matching equal local degree p on every component
            assert {m for _, _, m in cyls} == {F(1, 2) ** depth}

    def test_nested_level_containment(self):
        levels, _ = shift_model(2, 2)
        from berkdyn.berkovich import order_leq

        for T in levels[2]:
            parents = [S for S in levels[1] if order_leq(T, S)]
            assert len(parents) == 1
