import dataclasses
import math

import pytest

from bcnfchaos import (
    BcnfParams,
    SearchConfig,
    build_polygon,
    certify,
    check_invariance_conditions,
    cross_validate,
    find_escape_indices,
    lambda_bound,
)
from bcnfchaos.errors import FailureC1, InvalidRegime, NotExpanding

from conftest import POINT_A, POINT_B, POINT_C


class TestWorkedPoints:
    def test_first_point_certifies(self, cert_a):
        assert cert_a.chi_chaos is True
        assert cert_a.beta == 0.25
        assert (cert_a.r, cert_a.ell) == (2, 2)
        assert cert_a.p_max == 1
        assert tuple(cert_a.word_set) == ("R", "RL")
        assert cert_a.fail_stage is None and cert_a.fail_detail is None
        assert cert_a.expansion_c > 1.0
        assert cert_a.lambda_bound == pytest.approx(
            math.log(cert_a.expansion_c) / 2.0, rel=1e-15
        )

    def test_second_point_fails_expansion(self, cert_b):
        assert cert_b.chi_chaos is False
        assert cert_b.beta == 0.65
        assert cert_b.p_max == 2
        assert cert_b.fail_stage == "C5"
        assert "H_3" in cert_b.fail_detail and "NoRealRoots" in cert_b.fail_detail
        assert cert_b.expansion_c is None and cert_b.lambda_bound is None

    def test_third_point_certifies(self, cert_c):
        assert cert_c.chi_chaos is True
        assert cert_c.beta == 0.49
        assert cert_c.p_max == 2
        assert tuple(cert_c.word_set) == ("R", "RL", "RLL")
        assert cert_c.lambda_bound > 0.0


class TestStageAttribution:
    def test_no_escape_indices_anywhere(self):
        # attracting right piece with a genuine fixed point: the forward
        # orbit never leaves x1 > 0 for any seed
        cert = certify(BcnfParams(0.7, 1.1, 0.3, 0.3))
        assert cert.fail_stage == "C1"
        assert cert.beta is None and cert.polygon is None

    def test_placement_never_holds(self):
        cert = certify(BcnfParams(0.2, -2.8, 0.3, 0.3))
        assert cert.fail_stage == "C2"
        assert cert.beta is None

    def test_cone_inadmissible(self):
        cert = certify(BcnfParams(0.7, -1.0, 0.3, 0.3))
        assert cert.fail_stage == "C3"
        assert cert.beta is not None and cert.p_max is not None
        assert cert.polygon is not None

    def test_cone_not_invariant(self):
        cert = certify(BcnfParams(-0.15, -0.65, 0.59, 0.08))
        assert cert.fail_stage == "C4"
        assert "unstable slope" in cert.fail_detail
        assert cert.beta is not None and cert.cone is not None

    def test_late_failures_keep_the_accepted_seed(self, cert_b):
        assert cert_b.fail_stage == "C5"
        assert cert_b.beta == 0.65
        assert cert_b.cone is not None and cert_b.fixed_points is not None

    def test_invalid_regime(self):
        with pytest.raises(InvalidRegime):
            certify(BcnfParams(0.7, -1.4, -0.3, 0.3))
        with pytest.raises(InvalidRegime):
            certify(BcnfParams(0.7, -1.4, 0.3, 0.0))


class TestScanFidelity:
    def independent_first_seed(self, m, cfg):
        k = 0
        while True:
            beta = cfg.beta_min + k * cfg.beta_step
            if beta > cfg.beta_max:
                return None
            try:
                r, ell = find_escape_indices(m, beta, cfg.r_max, cfg.ell_max)
                poly = build_polygon(m, beta, r, ell)
                if check_invariance_conditions(m, poly):
                    return beta
            except FailureC1:
                pass
            k += 1

    def test_accepted_seed_is_minimal_grid_value(self, rng):
        cfg = SearchConfig()
        points = [POINT_A, POINT_B, POINT_C]
        for _ in range(20):
            points.append(
                BcnfParams(float(rng.uniform(0.0, 1.5)), float(rng.uniform(-3.4, -1.0)), 0.3, 0.3)
            )
        for m in points:
            cert = certify(m, cfg)
            expected = self.independent_first_seed(m, cfg)
            assert cert.beta == expected

    def test_custom_grid(self):
        cfg = SearchConfig(beta_min=0.05, beta_step=0.05, beta_max=2.0)
        cert = certify(POINT_A, cfg)
        assert cert.chi_chaos
        assert cert.beta == self.independent_first_seed(POINT_A, cfg)
        k = round((cert.beta - cfg.beta_min) / cfg.beta_step)
        assert cert.beta == cfg.beta_min + k * cfg.beta_step


class TestLambdaBound:
    def test_unit_cases(self):
        assert lambda_bound(math.e, 1) == pytest.approx(1.0, rel=1e-15)
        assert lambda_bound(math.e**2, 2) == pytest.approx(1.0, rel=1e-15)

    def test_not_expanding(self):
        with pytest.raises(NotExpanding):
            lambda_bound(1.0, 1)
        with pytest.raises(NotExpanding):
            lambda_bound(0.5, 2)

    def test_certificate_bound_consistency(self, cert_c):
        assert cert_c.lambda_bound == pytest.approx(
            math.log(cert_c.expansion_c) / cert_c.word_set.l_max, rel=1e-15
        )


class TestSearchConfig:
    def test_defaults(self):
        cfg = SearchConfig()
        assert (cfg.beta_min, cfg.beta_step, cfg.beta_max) == (0.01, 0.01, 5.0)
        assert (cfg.r_max, cfg.ell_max) == (15, 15)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"beta_min": 0.0},
            {"beta_step": -0.1},
            {"beta_min": 6.0},
            {"r_max": -1},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            SearchConfig(**kwargs)


class TestStabilityBoundary:
    def test_certification_flips_at_the_fixed_point_boundary(self):
        # along tau_R = -delta_R - 1 the right matrix has an eigenvalue -1,
        # the norm gain vanishes at its own stable slope, and certification
        # fails; just below the line it succeeds
        from bcnfchaos.cones import SlopeQuadruple, slope_fixed_points

        quad = SlopeQuadruple(-1.3, 1.0, -0.3, 0.0)
        fp = slope_fixed_points(quad)
        assert quad.h(fp.m_stab) == 0.0
        assert certify(BcnfParams(1.0, -1.3, 0.3, 0.3)).fail_stage == "C5"
        assert certify(BcnfParams(1.0, -1.29, 0.3, 0.3)).fail_stage == "C5"
        assert certify(BcnfParams(1.0, -1.31, 0.3, 0.3)).chi_chaos


class TestErrorSurface:
    def test_certify_is_total_over_the_valid_regime(self, rng):
        # wide fuzz: every call returns a certificate or raises a documented
        # error type; nothing leaks through as a bare exception
        from bcnfchaos.errors import BcnfChaosError

        for _ in range(1000):
            m = BcnfParams(
                float(rng.uniform(-3, 3)), float(rng.uniform(-4, 3)),
                float(rng.uniform(0.01, 1.5)), float(rng.uniform(0.01, 1.5)),
            )
            try:
                cert = certify(m)
            except BcnfChaosError:
                continue
            assert cert.chi_chaos in (True, False)
            if cert.chi_chaos:
                assert cert.lambda_bound > 0.0 and cert.expansion_c > 1.0


class TestCrossValidation:
    def test_certified_points_validate(self, cert_a, cert_c, rng):
        for cert in (cert_a, cert_c):
            report = cross_validate(
                cert, cert.params, n_orbit=20_000, n_samples=2000,
                recurrence_samples=300, rng=rng,
            )
            assert report.all_ok
            assert all(est >= report.lambda_bound for est in report.lyapunov_estimates)
            assert report.growth_min_margin >= math.log1p(-1e-9)
            assert report.max_word_run <= cert.p_max
            assert report.invariance_failures == 0

    def test_inflated_factor_is_caught(self, cert_a, rng):
        forged = dataclasses.replace(cert_a, expansion_c=cert_a.expansion_c * 10.0)
        report = cross_validate(
            forged, cert_a.params, n_orbit=20_000, n_samples=500,
            recurrence_samples=100, rng=rng,
        )
        assert not report.growth_ok
        assert not report.all_ok

    def test_requires_successful_certificate(self, cert_b, rng):
        with pytest.raises(ValueError):
            cross_validate(cert_b, cert_b.params, rng=rng)
