"""Scan diagnostics, transfer identities, and degree growth fits."""

import math
from fractions import Fraction

import pytest

from heckepairs import (
    ConfigError,
    DihedralElement,
    HeckeElement,
    InfiniteSubgroupError,
    L2Vector,
    cauchy_schwarz_constant_check,
    degree_growth_fit,
    enumerate_ball,
    exact_ratio_sq,
    fit_power_law,
    haagerup_scan_exact,
    haagerup_scan_operator,
    random_hecke_element,
    scan_csv_rows,
    spawn_rng,
    transfer_check,
)


def char_element(pair, radius):
    """Indicator of the double-coset ball, coefficients all one."""
    ball = enumerate_ball(pair, pair.length, radius).double
    f = HeckeElement.zero(pair)
    for k in ball.keys:
        f = f + HeckeElement.delta(pair, k.rep)
    return f


def char_vector(pair, radius):
    ball = enumerate_ball(pair, pair.length, radius).right
    v = L2Vector.zero(pair)
    for k in ball.keys:
        v = v + L2Vector.delta(pair, k.rep)
    return v


def char_ratio_sq_closed_form(r, factor=5):
    """Hand-derived squared ratio for ball indicators on the line pair.

    Convolving the radius-r indicator into the radius-K one (K = factor*r)
    gives a trapezoid: height 2r+1 on the plateau of width 2K - 2r + 1,
    with quadratic ramps summing 2 * sum_{v=1}^{2r} v^2 on the sides.
    Norms: ||f||^2 = 2r + 1 (r doubles of degree 2 plus the identity),
    ||k||^2 = 2K + 1 right cosets.
    """
    K = factor * r
    plateau = (2 * K - 2 * r + 1) * (2 * r + 1) ** 2
    ramps = 2 * Fraction(2 * r * (2 * r + 1) * (4 * r + 1), 6)
    num = plateau + ramps
    return Fraction(num, (2 * r + 1) * (2 * K + 1))


class TestExactRatio:
    def test_char_ratio_matches_closed_form(self, dihedral):
        for r in (1, 2, 4):
            f = char_element(dihedral, r)
            k = char_vector(dihedral, 5 * r)
            got = exact_ratio_sq(dihedral, f, k)
            assert got == char_ratio_sq_closed_form(r)

    def test_r4_frozen_value(self, dihedral):
        # [DERIVED] plateau 33*81 + 2*(816) over 17*41
        got = exact_ratio_sq(dihedral, char_element(dihedral, 4), char_vector(dihedral, 20))
        assert got == Fraction(1027, 123)
        assert char_ratio_sq_closed_form(4) == Fraction(1027, 123)

    def test_zero_inputs_rejected(self, dihedral):
        f = HeckeElement.zero(dihedral)
        k = L2Vector.delta_identity(dihedral)
        with pytest.raises(ConfigError):
            exact_ratio_sq(dihedral, f, k)


class TestScans:
    def test_exact_scan_shape_and_monotone_rows(self, dihedral):
        rep = haagerup_scan_exact(dihedral, radii=(2, 4, 8), samples=20, seed=7)
        jd = rep.to_json_dict()
        assert [row["r"] for row in jd["rows"]] == [2, 4, 8]
        for row in jd["rows"]:
            assert row["max_ratio_exact"] <= row["schur_upper"] + 1e-9
            assert row["exact"]
        # ball indicators are in the sample stream, so the max ratio grows
        # at least like the char ratio
        for row, r in zip(jd["rows"], (2, 4, 8)):
            floor = math.sqrt(float(char_ratio_sq_closed_form(r)))
            assert row["max_ratio_exact"] >= floor - 1e-9

    def test_scan_deterministic(self, dihedral):
        a = haagerup_scan_exact(dihedral, radii=(2, 4), samples=10, seed=3)
        b = haagerup_scan_exact(dihedral, radii=(2, 4), samples=10, seed=3)
        assert a.to_json_dict() == b.to_json_dict()
        c = haagerup_scan_exact(dihedral, radii=(2, 4), samples=10, seed=4)
        assert c.to_json_dict() != a.to_json_dict()

    def test_csv_rows_header_and_width(self, dihedral):
        rep = haagerup_scan_exact(dihedral, radii=(2, 4), samples=5, seed=0)
        rows = scan_csv_rows(rep)
        assert rows[0] == [
            "r", "ball_double", "ball_right", "max_ratio_exact",
            "max_ratio_operator_lower", "schur_upper", "fitted_C", "fitted_s",
        ]
        assert all(len(r) == len(rows[0]) for r in rows)

    def test_operator_scan_lower_below_schur(self, dihedral):
        rep = haagerup_scan_operator(dihedral, radii=(2, 4), samples=5, seed=1)
        for row in rep.to_json_dict()["rows"]:
            assert row["max_ratio_operator_lower"] <= row["schur_upper"] + 1e-8

    def test_scan_rejects_lengthless_pair(self, gl2q):
        with pytest.raises(ConfigError):
            haagerup_scan_exact(gl2q, radii=(2,), samples=2, seed=0)


class TestFits:
    def test_power_law_recovers_synthetic_exponent(self):
        radii = [4, 8, 16, 32, 64]
        values = [3.0 * (1 + r) ** 0.5 for r in radii]
        C, s = fit_power_law(radii, values)
        assert C == pytest.approx(3.0, rel=1e-12)
        assert s == pytest.approx(0.5, abs=1e-12)

    def test_power_law_needs_two_points(self):
        with pytest.raises(ConfigError):
            fit_power_law([4], [2.0])
        with pytest.raises(ConfigError):
            fit_power_law([0, 0], [1.0, 2.0])

    def test_degree_growth_dihedral(self, dihedral):
        fit = degree_growth_fit(dihedral)
        assert fit.d == pytest.approx(2.0)
        assert fit.t == 0
        assert fit.table[0][2] == 1  # identity coset
        assert all(row[2] == 2 for row in fit.table[1:])

    def test_degree_growth_finite_index(self, finite_index):
        fit = degree_growth_fit(finite_index)
        assert fit.d == pytest.approx(1.0)
        assert fit.t == 0


class TestTransfer:
    def test_frozen_values_on_generator_pair(self, dihedral):
        # [DERIVED] f = sigma_1 (lift is the 4-element set H(1,1)H, norm 4),
        # k = delta_H (lift norm 2); f * k spreads over two cosets so
        # n^3 ||f*k||^2 = 16; the averaging equalities give 32 and 4
        f = HeckeElement.delta(dihedral, DihedralElement(1, 1))
        k = L2Vector.delta_identity(dihedral)
        rep = transfer_check(dihedral, f, k, rng=spawn_rng(4, 0))
        assert rep.ok
        got = {
            item["name"]: item
            for item in rep.to_json_dict()["items"]
        }
        assert got["a:lift-right-norm"]["lhs"] == "2"
        assert got["b:lift-double-norm"]["lhs"] == "4"
        assert got["c:norm"]["lhs"] == got["c:norm"]["rhs"] == "16"
        assert got["d:double-average"]["lhs"] == "32"
        assert got["d:right-average"]["lhs"] == "4"

    def test_random_inputs_all_pass(self, dihedral):
        rng = spawn_rng(4, 1)
        for _ in range(15):
            f = random_hecke_element(dihedral, rng, radius=3, nonneg=True)
            from heckepairs import random_l2_vector

            k = random_l2_vector(dihedral, rng, radius=3, nonneg=True)
            if f.is_zero() or k.is_zero():
                continue
            assert transfer_check(dihedral, f, k, rng=rng).ok

    def test_requires_nonneg_exact(self, dihedral):
        f = HeckeElement.delta(dihedral, DihedralElement(1, 1), coeff=-1)
        k = L2Vector.delta_identity(dihedral)
        with pytest.raises(ConfigError):
            transfer_check(dihedral, f, k)
        with pytest.raises(ConfigError):
            transfer_check(
                dihedral,
                HeckeElement.delta(dihedral, DihedralElement(1, 1), mode="float"),
                k.to_float(),
            )

    def test_infinite_h_rejected(self, bost_connes):
        from heckepairs import AxbElement

        f = HeckeElement.delta(bost_connes, AxbElement(Fraction(3, 2), 0))
        k = L2Vector.delta_identity(bost_connes)
        with pytest.raises(InfiniteSubgroupError):
            transfer_check(bost_connes, f, k)

    def test_cauchy_schwarz_constant_sharp(self):
        for m in (1, 2, 4, 9):
            value, sharp = cauchy_schwarz_constant_check(m, trials=200, seed=0)
            assert value == Fraction(m)
            assert sharp


class TestRng:
    def test_spawn_is_deterministic_and_split(self):
        a = spawn_rng(5, 1, 2).integers(0, 10 ** 9, size=4)
        b = spawn_rng(5, 1, 2).integers(0, 10 ** 9, size=4)
        c = spawn_rng(5, 1, 3).integers(0, 10 ** 9, size=4)
        assert list(a) == list(b)
        assert list(a) != list(c)

    def test_key_order_matters(self):
        a = spawn_rng(5, 1, 2).integers(0, 10 ** 9, size=4)
        b = spawn_rng(5, 2, 1).integers(0, 10 ** 9, size=4)
        assert list(a) != list(b)
