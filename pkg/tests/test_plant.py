import numpy as np
import pytest

from sofpalm import (
    Plant,
    is_stabilizing,
    make_mass_spring,
    spectral_abscissa,
    validate_plant,
)

from oracles import riccati_gain


class TestValidatePlant:
    def test_mass_spring_ok(self, mass_spring10):
        report = validate_plant(mass_spring10)
        assert report.ok
        assert report.violations == []

    def test_zero_r_not_positive_definite(self):
        plant = Plant(A=-1.0, B1=1.0, B2=1.0, Q=1.0, R=0.0)
        report = validate_plant(plant)
        assert not report.ok
        assert "R not positive definite" in report.violations

    def test_dimension_mismatch_a_b2(self):
        plant = Plant(A=np.eye(3), B1=np.ones((3, 1)), B2=np.ones((2, 1)),
                      Q=np.eye(3), R=np.eye(1))
        report = validate_plant(plant)
        assert not report.ok
        assert "dimension mismatch A/B2" in report.violations

    def test_singular_q_warns_but_passes(self):
        plant = Plant(A=-np.eye(2), B1=np.eye(2), B2=np.eye(2),
                      Q=np.diag([1.0, 0.0]), R=np.eye(2))
        report = validate_plant(plant)
        assert report.ok
        assert any("Q" in w for w in report.warnings)

    def test_asymmetric_q_flagged(self):
        plant = Plant(A=-np.eye(2), B1=np.eye(2), B2=np.eye(2),
                      Q=np.array([[1.0, 0.5], [0.0, 1.0]]), R=np.eye(2))
        report = validate_plant(plant)
        assert "Q not symmetric" in report.violations

    def test_report_valued_no_side_effects(self, mass_spring4):
        before = mass_spring4.A.copy()
        validate_plant(mass_spring4)
        validate_plant(mass_spring4)
        np.testing.assert_array_equal(mass_spring4.A, before)


class TestSpectralAbscissa:
    def test_diagonal(self):
        assert spectral_abscissa(np.diag([-1.0, -2.0])) == pytest.approx(-1.0)

    def test_rotation_is_marginal(self):
        M = np.array([[0.0, 1.0], [-1.0, 0.0]])
        assert spectral_abscissa(M) == pytest.approx(0.0, abs=1e-12)

    def test_distributed_block(self):
        M = np.array([[1.0, 1.0], [1.0, 2.0]])
        assert spectral_abscissa(M) == pytest.approx((3 + np.sqrt(5)) / 2)

    def test_deterministic_repeat(self, rng):
        M = rng.standard_normal((7, 7))
        values = {spectral_abscissa(M) for _ in range(5)}
        assert len(values) == 1

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            spectral_abscissa(np.ones((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            spectral_abscissa(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestIsStabilizing:
    def test_scalar_stable(self, scalar_plant):
        assert is_stabilizing(scalar_plant, 0.0)

    def test_scalar_unstable(self):
        plant = Plant(A=1.0, B1=1.0, B2=1.0, Q=1.0, R=1.0)
        assert not is_stabilizing(plant, 0.0)

    def test_lqr_gain_stabilizes_mass_spring(self, mass_spring10):
        F = riccati_gain(mass_spring10.A, mass_spring10.B2,
                         mass_spring10.Q, mass_spring10.R)
        assert is_stabilizing(mass_spring10, F)

    def test_matches_abscissa_sign(self, mass_spring4, rng):
        F = rng.standard_normal((mass_spring4.m, mass_spring4.n))
        closed = mass_spring4.A - mass_spring4.B2 @ F
        assert is_stabilizing(mass_spring4, F) == (
            spectral_abscissa(closed) < 0.0)


class TestPlantImmutability:
    def test_matrices_read_only(self, mass_spring4):
        with pytest.raises(ValueError):
            mass_spring4.A[0, 0] = 5.0

    def test_construction_copies_input(self):
        A = np.array([[-1.0]])
        plant = Plant(A=A, B1=1.0, B2=1.0, Q=1.0, R=1.0)
        A[0, 0] = 7.0
        assert plant.A[0, 0] == -1.0

    def test_default_p_is_n(self, mass_spring4):
        assert mass_spring4.p == mass_spring4.n == 8
