"""Catalog pairs: construction, degrees against hand enumerations, lengths."""

from fractions import Fraction

import pytest

from heckepairs import (
    AxbElement,
    ConfigError,
    DihedralElement,
    IntegerElement,
    MatrixElement,
    SemidirectElement,
    build_pair,
    catalog_list,
    degree,
)


def hnf_coset_count(n):
    """Independent oracle for the number of right cosets in the double
    coset of diag(1, n): Hermite forms [[a, b], [0, d]] with a*d = n and
    0 <= b < d, restricted to primitive matrices (entry gcd 1) since an
    imprimitive form has different elementary divisors and lands in a
    different double coset."""
    import math

    total = 0
    for a in range(1, n + 1):
        if n % a:
            continue
        d = n // a
        for b in range(d):
            if math.gcd(math.gcd(a, b), d) == 1:
                total += 1
    return total


class TestCatalog:
    def test_all_six_build(self, pairs):
        assert set(pairs) == {
            "dihedral", "finite_index", "gl2q", "bost_connes", "sl3", "semidirect",
        }
        for pair in pairs.values():
            assert pair.contains(pair.identity)

    def test_catalog_list_covers_catalog(self):
        rows = catalog_list()
        assert len(rows) == 6
        names = {row["name"] for row in rows}
        assert "dihedral" in names and "sl3" in names

    def test_unknown_name_rejected(self):
        with pytest.raises(ConfigError):
            build_pair("affine_over_Z")

    def test_dihedral_takes_no_params(self):
        with pytest.raises(ConfigError):
            build_pair("dihedral", {"n_max": 50})


class TestDegrees:
    def test_dihedral_degree_two_off_identity(self, dihedral):
        for n in (1, 2, 7, 100):
            assert degree(dihedral, DihedralElement(n, 1)) == 2
            assert degree(dihedral, DihedralElement(n, -1)) == 2
        assert degree(dihedral, dihedral.identity) == 1
        assert degree(dihedral, DihedralElement(0, -1)) == 1

    def test_finite_index_degree_one(self, finite_index):
        for n in (-3, 0, 1, 5):
            assert degree(finite_index, IntegerElement(n)) == 1

    def test_gl2q_prime_degree_matches_hnf_count(self, gl2q):
        # [DERIVED] deg(diag(1, p)) counts upper triangular forms with
        # determinant p up to row reduction, which is sigma_1(p) = p + 1.
        for p in (2, 3, 5, 7):
            got = degree(gl2q, MatrixElement(((1, 0), (0, p))))
            assert got == hnf_coset_count(p) == p + 1

    def test_gl2q_prime_square(self, gl2q):
        # [DERIVED] primitive Hermite forms with determinant 4:
        # (1,4) gives b in 0..3, (2,2) only b=1, (4,1) only b=0
        assert degree(gl2q, MatrixElement(((1, 0), (0, 4)))) == hnf_coset_count(4) == 6

    def test_bost_connes_scaling_degree(self, bost_connes):
        # [DERIVED] deg((p/q, 0)) is the numerator in lowest terms
        assert degree(bost_connes, AxbElement(Fraction(3, 2), 0)) == 3
        assert degree(bost_connes, AxbElement(Fraction(5, 3), 0)) == 5
        assert degree(bost_connes, AxbElement(Fraction(1, 4), 0)) == 1

    def test_bost_connes_degree_asymmetric(self, bost_connes):
        g = AxbElement(Fraction(3, 2), 0)
        assert degree(bost_connes, g) != degree(bost_connes, g.inv())

    def test_semidirect_degree(self, semidirect):
        assert degree(semidirect, SemidirectElement((2, 3), 0, "swap")) == 2
        assert degree(semidirect, SemidirectElement((1, 1), 0, "swap")) == 1
        assert degree(semidirect, semidirect.identity) == 1


class TestSubgroupStructure:
    def test_sl3_subgroup_is_not_normal(self, sl3):
        # a witness g with g h g^-1 outside H kills normality, which is
        # what makes the pair a genuine Hecke pair rather than a quotient
        found = False
        for g in sl3.h_sample(0) + tuple(
            MatrixElement(rows)
            for rows in [
                ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
                ((1, 0, 0), (0, 1, 1), (0, 0, 1)),
                ((1, 0, 1), (0, 1, 0), (0, 0, 1)),
            ]
        ):
            for h in sl3.h_elements:
                if not sl3.contains(g * h * g.inv()):
                    found = True
        assert found

    def test_sl3_h_has_two_elements(self, sl3):
        assert len(sl3.h_elements) == 2
        t = [h for h in sl3.h_elements if h != sl3.identity][0]
        assert t * t == sl3.identity

    def test_h_sample_lies_in_h(self, pairs):
        for pair in pairs.values():
            sample = pair.h_sample(2)
            assert sample, pair.name
            for h in sample:
                assert pair.contains(h), (pair.name, h)

    def test_finite_index_h_membership(self, finite_index):
        assert finite_index.contains(IntegerElement(4))
        assert not finite_index.contains(IntegerElement(3))


class TestLengths:
    def test_default_lengths_validate(self, pairs):
        for name in ("dihedral", "finite_index", "semidirect"):
            report = pairs[name].validate_length()
            assert report.ok, (name, report.failures)

    def test_lengthless_pairs_expose_candidates_only(self, pairs):
        for name in ("gl2q", "bost_connes"):
            pair = pairs[name]
            assert pair.length is None
            assert pair.candidate_lengths
            for L in pair.candidate_lengths.values():
                assert not L.locally_finite

    def test_gl2q_candidate_validates(self, gl2q):
        L = gl2q.candidate_lengths["log-det-prim"]
        report = gl2q.validate_length(length=L, tol=1e-9)
        assert report.ok, report.failures

    def test_dihedral_length_values(self, dihedral):
        L = dihedral.length
        assert L(DihedralElement(7, -1)) == 7
        assert L(DihedralElement(-7, 1)) == 7
        assert L(dihedral.identity) == 0

    def test_semidirect_length_values(self, semidirect):
        L = semidirect.length
        assert L(SemidirectElement((3, -4), 1, "swap")) == 7

    def test_rd_status_labels(self, pairs):
        assert pairs["dihedral"].rd_status == "expected"
        assert pairs["sl3"].rd_status == "non-example"
