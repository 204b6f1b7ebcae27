import random
from fractions import Fraction

import pytest

from starnambu import (ArityError, DimensionError, PhaseExpr, SubsetCache,
                       jordan, moyal, nambu_jacobian, phase_algebra, poisson,
                       qnb, resolve_qnb4, star, star_commutator,
                       symplectic_trace)
from starnambu.models import get_model
from starnambu.operators import ExactMatrix, matrix_algebra, naive_bracket
from tests.test_phase import rand_expr


def basics(n=2):
    return (PhaseExpr.coord(n, 0), PhaseExpr.momentum(n, 0),
            PhaseExpr.one(n), PhaseExpr.radical_s(n))


def star_reference(f, g):
    """Slow independent oracle: iterate the Poisson bidifferential one
    derivative at a time on ordered pairs and sum (i hbar/2)^k D^k/k!."""
    n = f.n
    total = f * g
    pairs = [(f, g)]
    k = 0
    kfact = 1
    while pairs:
        k += 1
        kfact *= k
        new = []
        for a, b in pairs:
            for i in range(n):
                da, db = a.diff_x(i), b.diff_p(i)
                if not da.is_zero() and not db.is_zero():
                    new.append((da, db))
                da, db = a.diff_p(i), b.diff_x(i)
                if not da.is_zero() and not db.is_zero():
                    new.append((-da, db))
        pairs = new
        if not pairs:
            break
        order = PhaseExpr.zero(n)
        for a, b in pairs:
            order = order + a * b
        total = total + order.times_ihbar(k).scale_fraction(
            Fraction(1, (1 << k) * kfact))
    return total


class TestStar:
    def test_canonical_example(self):
        x, px, one, _ = basics()
        want = x * px + PhaseExpr.hbar(2).times_i().scale_fraction(Fraction(1, 2))
        assert star(x, px).equals(want)

    def test_unit(self):
        x, px, one, s = basics()
        f = s * px + x
        assert star(one, f).equals(f)
        assert star(f, one).equals(f)

    def test_s2_correction_piece(self):
        m = get_model("sphere:2")
        x, px, one, _ = basics()
        y = PhaseExpr.coord(2, 1)
        r = one - x * x - y * y
        want = (one / r - one.scale_fraction(3)) \
            .times_hbar(2).scale_fraction(Fraction(1, 8))
        assert (m.h_quantum - m.h_classical).equals(want)

    def test_termination_bound(self):
        # the series assert inside the loop guards the bound; degrees add
        x, px, one, s = basics()
        f = (px ** 3) * x
        g = (px ** 2) * s
        out = star(f, g)
        assert out.momentum_degree() <= 5

    def test_associativity_with_radicals(self):
        rng = random.Random(21)
        w = PhaseExpr.w_function(2)
        for trial in range(10):
            f = rand_expr(2, rng, terms=3)
            g = rand_expr(2, rng, terms=3)
            h = rand_expr(2, rng, pdeg=1, terms=3)
            if trial % 3 == 0:
                g = g * w
            assert star(star(f, g), h).equals(star(f, star(g, h)))

    def test_commutator_matches_two_products(self):
        rng = random.Random(22)
        for _ in range(10):
            f, g = rand_expr(2, rng, terms=3), rand_expr(2, rng, terms=3)
            assert star_commutator(f, g).equals(star(f, g) - star(g, f))

    def test_against_literal_bidifferential_oracle(self):
        rng = random.Random(36)
        for n in (1, 2):
            for _ in range(6):
                f = rand_expr(n, rng, pdeg=2, xdeg=1, terms=3)
                g = rand_expr(n, rng, pdeg=2, xdeg=1, terms=3)
                assert star(f, g).equals(star_reference(f, g))
        w = PhaseExpr.w_function(2)
        f = rand_expr(2, rng, pdeg=1, terms=2) * w
        g = rand_expr(2, rng, pdeg=1, terms=2)
        assert star(f, g).equals(star_reference(f, g))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            star(PhaseExpr.coord(2, 0), PhaseExpr.coord(3, 0))


class TestPoissonMoyal:
    def test_canonical_pairs(self):
        x, px, one, _ = basics()
        assert poisson(x, px).equals(one)
        assert moyal(x, px).equals(one)

    def test_so3(self):
        m = get_model("sphere:2")
        assert poisson(m.charge("Lx"), m.charge("Ly")).equals(m.charge("Lz"))
        assert poisson(m.h_classical, m.charge("Lz")).is_zero()
        assert moyal(m.charge("Lx"), m.charge("Ly")).equals(m.charge("Lz"))

    def test_classical_limits(self):
        rng = random.Random(23)
        for _ in range(10):
            f, g = rand_expr(2, rng, terms=3), rand_expr(2, rng, terms=3)
            assert star(f, g).subst_hbar_zero().equals((f * g).subst_hbar_zero())
            assert moyal(f, g).subst_hbar_zero().equals(
                poisson(f, g).subst_hbar_zero())

    def test_moyal_is_a_star_derivation(self):
        rng = random.Random(24)
        for _ in range(6):
            f = rand_expr(2, rng, pdeg=1, terms=3)
            g = rand_expr(2, rng, pdeg=1, terms=3)
            h = rand_expr(2, rng, pdeg=1, terms=3)
            lhs = moyal(f, star(g, h))
            rhs = star(moyal(f, g), h) + star(g, moyal(f, h))
            assert lhs.equals(rhs)


class TestNambu:
    def test_identity_jacobian(self):
        x, px, one, _ = basics()
        y, py = PhaseExpr.coord(2, 1), PhaseExpr.momentum(2, 1)
        assert nambu_jacobian([x, px, y, py]).equals(one)

    def test_sphere_evolution(self):
        rng = random.Random(25)
        m = get_model("sphere:2")
        for _ in range(3):
            k = rand_expr(2, rng, terms=3)
            got = nambu_jacobian([k, m.charge("Lx"), m.charge("Ly"),
                                  m.charge("Lz")])
            assert got.equals(poisson(k, m.h_classical))

    def test_hamiltonian_annihilated(self):
        m = get_model("sphere:2")
        assert nambu_jacobian([m.h_classical, m.charge("Lx"), m.charge("Ly"),
                               m.charge("Lz")]).is_zero()

    def test_antisymmetry(self):
        rng = random.Random(26)
        f = rand_expr(2, rng, terms=3)
        g = rand_expr(2, rng, terms=3)
        h = rand_expr(2, rng, terms=3)
        assert nambu_jacobian([f, f, g, h]).is_zero()
        a = nambu_jacobian([f, g, h, PhaseExpr.coord(2, 0)])
        b = nambu_jacobian([g, f, h, PhaseExpr.coord(2, 0)])
        assert (a + b).is_zero()

    def test_arity(self):
        x, px, one, _ = basics()
        with pytest.raises(ArityError):
            nambu_jacobian([x, px, one])
        with pytest.raises(ArityError):
            symplectic_trace([x, px, one])

    def test_trace_reduces_to_poisson(self):
        rng = random.Random(27)
        for n in (2, 3):
            f = rand_expr(n, rng, pdeg=1, xdeg=1, terms=3)
            g = rand_expr(n, rng, pdeg=1, xdeg=1, terms=3)
            assert symplectic_trace([f, g]).equals(poisson(f, g))
            assert symplectic_trace([f, f]).is_zero()


class TestBracketProducts:
    def test_canonical_values(self):
        x, px, one, _ = basics()
        y, py = PhaseExpr.coord(2, 1), PhaseExpr.momentum(2, 1)
        alg = phase_algebra(2)
        assert qnb([x, px], alg).value.equals(one.times_ihbar(1))
        got = qnb([x, px, y, py], alg)
        assert got.value.equals(PhaseExpr.hbar(2, 2).scale_fraction(-2))
        assert got.stats.nodes > 0 and got.stats.products > 0
        assert jordan([x], alg).value.equals(x)
        assert jordan([one, one], alg).value.equals(PhaseExpr.const(2, 2))

    def test_empty_raises(self):
        alg = phase_algebra(2)
        with pytest.raises(ArityError):
            qnb([], alg)
        with pytest.raises(ArityError):
            jordan([], alg)

    def test_algebra_handles_are_associative_and_unital(self):
        rng = random.Random(37)
        alg = phase_algebra(2)
        vals = [rand_expr(2, rng, pdeg=1, terms=2) for _ in range(3)]
        a, b, c = vals
        assert alg.eq(alg.mul(alg.unit, a), a)
        assert alg.eq(alg.mul(a, alg.unit), a)
        assert alg.eq(alg.mul(alg.mul(a, b), c), alg.mul(a, alg.mul(b, c)))
        malg = matrix_algebra(3)
        mats = [ExactMatrix.from_int_rows(
            [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
            for _ in range(3)]
        a, b, c = mats
        assert malg.eq(malg.mul(malg.unit, a), a)
        assert malg.eq(malg.mul(malg.mul(a, b), c), malg.mul(a, malg.mul(b, c)))

    def test_subset_recursion_matches_naive_all_k(self):
        rng = random.Random(28)
        malg = matrix_algebra(3)
        for k in range(1, 6):
            for _ in range(2):
                mats = [ExactMatrix.from_int_rows(
                    [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
                    for _ in range(k)]
                fast_q = qnb(mats, malg).value
                assert fast_q == qnb(mats, malg, naive=True).value
                assert fast_q == naive_bracket(mats)
                assert jordan(mats, malg).value == jordan(mats, malg, naive=True).value

    def test_phase_subset_matches_naive(self):
        rng = random.Random(29)
        alg = phase_algebra(2)
        vals = [rand_expr(2, rng, pdeg=1, xdeg=1, terms=2) for _ in range(4)]
        assert qnb(vals, alg).value.equals(qnb(vals, alg, naive=True).value)
        assert jordan(vals[:3], alg).value.equals(
            jordan(vals[:3], alg, naive=True).value)

    def test_antisymmetry_and_symmetry(self):
        rng = random.Random(30)
        alg = phase_algebra(2)
        a, b, c = (rand_expr(2, rng, pdeg=1, terms=2) for _ in range(3))
        assert qnb([a, a, b, c], alg).value.is_zero()
        assert jordan([a, b, c], alg).value.equals(jordan([b, a, c], alg).value)

    def test_resolution_formula(self):
        rng = random.Random(31)
        alg = phase_algebra(2)
        x, px, one, _ = basics()
        y, py = PhaseExpr.coord(2, 1), PhaseExpr.momentum(2, 1)
        got = resolve_qnb4(x, px, y, py, alg)
        assert got.equals(PhaseExpr.hbar(2, 2).scale_fraction(-2))
        a, c, d = (rand_expr(2, rng, pdeg=1, terms=2) for _ in range(3))
        assert resolve_qnb4(a, a, c, d, alg).is_zero()
        vals = [rand_expr(2, rng, pdeg=1, terms=2) for _ in range(4)]
        assert resolve_qnb4(*vals, alg).equals(qnb(vals, alg).value)
        malg = matrix_algebra(3)
        mats = [ExactMatrix.from_int_rows(
            [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
            for _ in range(4)]
        assert resolve_qnb4(*mats, malg) == qnb(mats, malg, naive=True).value

    def test_shared_cache_consistency(self):
        rng = random.Random(32)
        alg = phase_algebra(2)
        tail = [rand_expr(2, rng, pdeg=1, terms=2) for _ in range(3)]
        cache = SubsetCache()
        a = rand_expr(2, rng, pdeg=1, terms=2)
        b = rand_expr(2, rng, pdeg=1, terms=2)
        first = qnb([a] + tail, alg, cache=cache).value
        second = qnb([b] + tail, alg, cache=cache).value
        assert first.equals(qnb([a] + tail, alg).value)
        assert second.equals(qnb([b] + tail, alg).value)

    def test_four_bracket_vs_commutator_of_casimir(self):
        m = get_model("sphere:2")
        alg = phase_algebra(2)
        rng = random.Random(33)
        lx, ly, lz = m.charge("Lx"), m.charge("Ly"), m.charge("Lz")
        casimir = star(lx, lx) + star(ly, ly) + star(lz, lz)
        a = rand_expr(2, rng, terms=3)
        lhs = qnb([a, lx, ly, lz], alg).value
        rhs = (star(a, casimir) - star(casimir, a)).times_ihbar(1)
        assert lhs.equals(rhs)

    def test_fundamental_identity_with_prefactor(self):
        rng = random.Random(34)
        for n in (1, 2):
            gs = [rand_expr(n, rng, pdeg=1, xdeg=1, terms=2)
                  for _ in range(2 * n - 1)]
            fs = [rand_expr(n, rng, pdeg=1, xdeg=1, terms=2)
                  for _ in range(2 * n)]
            vol = rand_expr(n, rng, pdeg=0, xdeg=1, terms=2)
            lhs = PhaseExpr.zero(n)
            for i in range(2 * n):
                entries = list(fs)
                entries[i] = vol * nambu_jacobian(gs + [fs[i]])
                lhs = lhs + nambu_jacobian(entries)
            rhs = nambu_jacobian(gs + [vol * nambu_jacobian(fs)])
            assert lhs.equals(rhs)

    def test_nb_leibniz(self):
        rng = random.Random(35)
        n = 2
        big_l = rand_expr(n, rng, pdeg=1, xdeg=1, terms=2)
        big_m = rand_expr(n, rng, pdeg=1, xdeg=1, terms=2)
        rest = [rand_expr(n, rng, pdeg=1, xdeg=1, terms=2) for _ in range(3)]
        k_of = big_l * big_m + big_m * big_m
        dk_dl = big_m
        dk_dm = big_l + big_m.scale_fraction(2)
        lhs = nambu_jacobian([k_of] + rest)
        rhs = dk_dl * nambu_jacobian([big_l] + rest) \
            + dk_dm * nambu_jacobian([big_m] + rest)
        assert lhs.equals(rhs)
