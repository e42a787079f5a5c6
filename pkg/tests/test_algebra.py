"""Convolution algebra: ring axioms, involution, norms, exact scalars."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heckepairs import (
    DihedralElement,
    HeckeElement,
    L2Vector,
    ModeMismatchError,
    QQi,
    apply_regular_rep,
    convolve,
    l1_norm,
    l2_norm_sq,
    double_key,
    norms,
    random_hecke_element,
    sobolev_inner,
    spawn_rng,
    spread,
)


def sigma(pair, n, coeff=1):
    return HeckeElement.delta(pair, DihedralElement(n, 1), coeff=coeff)


small_fraction = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=3
)
small_qqi = st.builds(QQi, small_fraction, small_fraction)


def dihedral_elements(pair):
    # up to five double cosets with exact complex coefficients
    return st.lists(
        st.tuples(st.integers(min_value=0, max_value=4), small_qqi),
        min_size=0, max_size=5,
    ).map(
        lambda terms: sum(
            (sigma(pair, n, coeff=c) for n, c in terms),
            HeckeElement.zero(pair),
        )
    )


class TestConvolution:
    def test_sigma_one_squared(self, dihedral):
        # the basic composition rule: two length-one hops land on length
        # two or cancel back to the identity coset, with multiplicity 2
        prod = convolve(dihedral, sigma(dihedral, 1), sigma(dihedral, 1))
        expect = sigma(dihedral, 2) + sigma(dihedral, 0, coeff=2)
        assert prod.sorted_terms() == expect.sorted_terms()

    def test_sigma_tables_match_brute_force(self, dihedral):
        # sigma_m * sigma_n = sigma_{m+n} + sigma_{|m-n|} for m != n > 0
        for m, n in [(1, 2), (2, 3), (1, 4)]:
            prod = convolve(dihedral, sigma(dihedral, m), sigma(dihedral, n))
            expect = sigma(dihedral, m + n) + sigma(dihedral, abs(m - n))
            assert prod.sorted_terms() == expect.sorted_terms()

    def test_identity_is_neutral(self, dihedral):
        e = HeckeElement.delta(dihedral, dihedral.identity)
        rng = spawn_rng(2, 0)
        for _ in range(20):
            f = random_hecke_element(dihedral, rng, complex_part=True)
            assert convolve(dihedral, e, f).sorted_terms() == f.sorted_terms()
            assert convolve(dihedral, f, e).sorted_terms() == f.sorted_terms()

    def test_dihedral_commutes(self, dihedral):
        rng = spawn_rng(2, 1)
        for _ in range(30):
            f = random_hecke_element(dihedral, rng, complex_part=True)
            g = random_hecke_element(dihedral, rng, complex_part=True)
            lhs = convolve(dihedral, f, g)
            rhs = convolve(dihedral, g, f)
            assert lhs.sorted_terms() == rhs.sorted_terms()

    def test_associative_exact(self, dihedral):
        rng = spawn_rng(2, 2)
        for _ in range(15):
            f, g, h = (
                random_hecke_element(dihedral, rng, complex_part=True)
                for _ in range(3)
            )
            lhs = convolve(dihedral, convolve(dihedral, f, g), h)
            rhs = convolve(dihedral, f, convolve(dihedral, g, h))
            assert lhs.sorted_terms() == rhs.sorted_terms()

    def test_bost_connes_not_commutative(self, bost_connes):
        from heckepairs import AxbElement

        a = HeckeElement.delta(bost_connes, AxbElement(Fraction(3, 2), 0))
        b = HeckeElement.delta(bost_connes, AxbElement(Fraction(1, 1), Fraction(1, 2)))
        lhs = convolve(bost_connes, a, b)
        rhs = convolve(bost_connes, b, a)
        assert lhs.sorted_terms() != rhs.sorted_terms()

    def test_distributes_over_sum(self, dihedral):
        rng = spawn_rng(2, 3)
        for _ in range(10):
            f, g, h = (
                random_hecke_element(dihedral, rng, complex_part=True)
                for _ in range(3)
            )
            lhs = convolve(dihedral, f, g + h)
            rhs = convolve(dihedral, f, g) + convolve(dihedral, f, h)
            assert lhs.sorted_terms() == rhs.sorted_terms()


class TestInvolution:
    def test_involutive(self, dihedral):
        rng = spawn_rng(2, 4)
        for _ in range(20):
            f = random_hecke_element(dihedral, rng, complex_part=True)
            assert f.involution().involution().sorted_terms() == f.sorted_terms()

    def test_anti_homomorphism(self, pairs):
        from heckepairs import AxbElement

        bc = pairs["bost_connes"]
        a = HeckeElement.delta(bc, AxbElement(Fraction(3, 2), 0), coeff=QQi(1, 1))
        b = HeckeElement.delta(bc, AxbElement(1, Fraction(1, 3)), coeff=QQi(0, 2))
        lhs = convolve(bc, a, b).involution()
        rhs = convolve(bc, b.involution(), a.involution())
        assert lhs.sorted_terms() == rhs.sorted_terms()

    def test_positivity_at_identity(self, pairs):
        # the identity coefficient of f * f^* equals the squared two-norm
        # of f^*; with asymmetric degrees it is NOT the two-norm of f
        for name in ("dihedral", "finite_index", "bost_connes", "semidirect"):
            pair = pairs[name]
            rng = spawn_rng(2, 5)
            for _ in range(10):
                f = random_hecke_element(pair, rng, radius=2, complex_part=True)
                prod = convolve(pair, f, f.involution())
                c = prod.coefficient(double_key(pair, pair.identity))
                assert c.is_real_nonneg()
                assert c.re == l2_norm_sq(f.involution())

    def test_bost_connes_involution_changes_two_norm(self, bost_connes):
        from heckepairs import AxbElement

        f = HeckeElement.delta(bost_connes, AxbElement(Fraction(3, 2), 0))
        assert l2_norm_sq(f) != l2_norm_sq(f.involution())


class TestScalars:
    def test_qqi_ring_matches_rational_oracle(self):
        rng = spawn_rng(2, 6)
        for _ in range(50):
            a = QQi(Fraction(int(rng.integers(-6, 7)), 3), Fraction(int(rng.integers(-6, 7)), 2))
            b = QQi(Fraction(int(rng.integers(-6, 7)), 5), Fraction(int(rng.integers(-6, 7)), 7))
            s = a + b
            assert (s.re, s.im) == (a.re + b.re, a.im + b.im)
            d = a - b
            assert (d.re, d.im) == (a.re - b.re, a.im - b.im)
            p = a * b
            assert (p.re, p.im) == (
                a.re * b.re - a.im * b.im,
                a.re * b.im + a.im * b.re,
            )
            assert (a.conj().re, a.conj().im) == (a.re, -a.im)
            assert a.abs_sq() == a.re * a.re + a.im * a.im

    def test_qqi_real_nonneg(self):
        assert QQi(3).is_real_nonneg()
        assert QQi(0).is_real_nonneg()
        assert not QQi(-1).is_real_nonneg()
        assert not QQi(1, 1).is_real_nonneg()

    def test_scale_with_fraction(self, dihedral):
        f = sigma(dihedral, 1).scale(Fraction(2, 3))
        k = double_key(dihedral, DihedralElement(1, 1))
        assert f.coefficient(k) == QQi(Fraction(2, 3))


class TestModes:
    def test_mixed_modes_rejected(self, dihedral):
        fe = sigma(dihedral, 1)
        ff = HeckeElement.delta(dihedral, DihedralElement(1, 1), mode="float")
        with pytest.raises(ModeMismatchError):
            fe + ff
        with pytest.raises(ModeMismatchError):
            convolve(dihedral, fe, ff)

    def test_cross_pair_rejected(self, dihedral, finite_index):
        from heckepairs import IntegerElement

        f = sigma(dihedral, 1)
        g = HeckeElement.delta(finite_index, IntegerElement(1))
        with pytest.raises(ModeMismatchError):
            convolve(dihedral, f, g)

    def test_to_float_preserves_values(self, dihedral):
        f = sigma(dihedral, 2, coeff=QQi(Fraction(1, 3), 2))
        g = f.to_float()
        c = g.coefficient(double_key(dihedral, DihedralElement(2, 1)))
        assert c == pytest.approx(complex(1 / 3, 2))
        prod = convolve(dihedral, g, g)
        exact = convolve(dihedral, f, f)
        for k, v in exact.sorted_terms():
            assert prod.coefficient(k) == pytest.approx(complex(v.to_complex()))


class TestNorms:
    def test_frozen_sobolev_values(self, dihedral):
        # f = (1/2 + i) sigma_1 + sigma_2 at s=1:
        # |c1|^2 = 5/4 over two cosets of weight (1+1)^2, plus 2*(1+2)^2
        f = sigma(dihedral, 1, coeff=QQi(Fraction(1, 2), 1)) + sigma(dihedral, 2)
        r = norms(f, s=1)
        assert r.exact
        assert r.sobolev_sq == 28
        assert r.prime_sq == 14
        assert r.l2_sq == Fraction(9, 2)
        assert r.l1 == Fraction(9, 2) or r.l1 > 0

    def test_prime_below_sobolev(self, dihedral):
        rng = spawn_rng(2, 7)
        for s in (0, 1, 2):
            for _ in range(20):
                f = random_hecke_element(dihedral, rng, complex_part=True)
                r = norms(f, s=s)
                assert r.prime_sq <= r.sobolev_sq

    def test_monotone_in_s(self, dihedral):
        rng = spawn_rng(2, 8)
        for _ in range(20):
            f = random_hecke_element(dihedral, rng, complex_part=True)
            r0, r1, r2 = (norms(f, s=s) for s in (0, 1, 2))
            assert r0.sobolev_sq <= r1.sobolev_sq <= r2.sobolev_sq
            assert r0.prime_sq <= r1.prime_sq <= r2.prime_sq

    def test_s_zero_sobolev_is_l2(self, dihedral):
        rng = spawn_rng(2, 9)
        for _ in range(10):
            f = random_hecke_element(dihedral, rng, complex_part=True)
            assert norms(f, s=0).sobolev_sq == l2_norm_sq(f)

    def test_spread_preserves_two_norm(self, dihedral):
        rng = spawn_rng(2, 10)
        for _ in range(10):
            f = random_hecke_element(dihedral, rng, complex_part=True)
            assert spread(f).norm_sq() == l2_norm_sq(f)

    def test_sobolev_inner_diagonal(self, dihedral):
        f = sigma(dihedral, 1, coeff=QQi(Fraction(1, 2), 1)) + sigma(dihedral, 2)
        assert sobolev_inner(f, f, s=1) == QQi(28)


class TestRegularRepresentation:
    def test_delta_moves_identity_to_coset_sum(self, dihedral):
        xi = L2Vector.delta_identity(dihedral)
        out = apply_regular_rep(dihedral, sigma(dihedral, 1), xi)
        assert {k.key for k, _ in out.sorted_terms()} == {(-1, 1), (1, 1)}
        assert out.norm_sq() == 2

    def test_linear_in_vector(self, dihedral):
        rng = spawn_rng(2, 11)
        from heckepairs import random_l2_vector

        f = random_hecke_element(dihedral, rng, complex_part=True)
        xi = random_l2_vector(dihedral, rng, complex_part=True)
        eta = random_l2_vector(dihedral, rng, complex_part=True)
        lhs = apply_regular_rep(dihedral, f, xi + eta)
        rhs = apply_regular_rep(dihedral, f, xi) + apply_regular_rep(dihedral, f, eta)
        assert lhs.sorted_terms() == rhs.sorted_terms()

    def test_multiplicative_in_element(self, dihedral):
        # lam(f1 * f2) = lam(f1) lam(f2), the identity that makes the
        # convolution well defined
        rng = spawn_rng(2, 12)
        from heckepairs import random_l2_vector

        for _ in range(10):
            f1 = random_hecke_element(dihedral, rng, complex_part=True)
            f2 = random_hecke_element(dihedral, rng, complex_part=True)
            xi = random_l2_vector(dihedral, rng, complex_part=True)
            lhs = apply_regular_rep(dihedral, convolve(dihedral, f1, f2), xi)
            rhs = apply_regular_rep(dihedral, f1, apply_regular_rep(dihedral, f2, xi))
            assert lhs.sorted_terms() == rhs.sorted_terms()

    def test_inner_product_convention(self, dihedral):
        a = L2Vector.delta(dihedral, DihedralElement(1, 1), coeff=QQi(0, 1))
        b = L2Vector.delta(dihedral, DihedralElement(1, 1), coeff=QQi(2))
        # linear in the first slot, conjugate linear in the second
        assert a.inner(b) == QQi(0, 2)
        assert b.inner(a) == QQi(0, -2)


class TestProperties:
    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(data=st.data())
    def test_l1_triangle_and_scaling(self, dihedral, data):
        # l1 is float valued, so equality cases need an ulp of slack
        f = data.draw(dihedral_elements(dihedral))
        g = data.draw(dihedral_elements(dihedral))
        bound = l1_norm(f) + l1_norm(g)
        assert l1_norm(f + g) <= bound + 1e-12 * max(1.0, bound)
        c = data.draw(small_fraction)
        got = l1_norm(f.scale(abs(c)))
        want = float(abs(c)) * l1_norm(f)
        assert abs(got - want) <= 1e-12 * max(1.0, want)

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(data=st.data())
    def test_involution_is_isometric_here(self, dihedral, data):
        # dihedral degrees are inversion symmetric, so the two-norm survives
        f = data.draw(dihedral_elements(dihedral))
        assert l2_norm_sq(f.involution()) == l2_norm_sq(f)

    @settings(derandomize=True, max_examples=40, deadline=None)
    @given(data=st.data())
    def test_convolution_bilinear(self, dihedral, data):
        f = data.draw(dihedral_elements(dihedral))
        g = data.draw(dihedral_elements(dihedral))
        c = data.draw(small_qqi)
        lhs = convolve(dihedral, f.scale(c), g)
        rhs = convolve(dihedral, f, g.scale(c))
        assert lhs.sorted_terms() == rhs.sorted_terms()
