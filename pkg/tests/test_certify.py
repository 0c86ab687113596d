import numpy as np
import pytest

import pascucert as pc
from pascucert import certify, kernels, series
from pascucert.errors import (DomainError, NotApplicable,
                              RepresentationMismatch, ZeroDenominator)

P12 = pc.ParameterSet.from_mu_nu(1.0, 2.0, sigma=0.1, xi=1.0)
KOMATU = pc.make_kernel("komatu", c=0.0, delta=3.0)
BERNARDI = pc.make_kernel("bernardi", c=1.0)


def test_beta_from_integral_values():
    assert certify.beta_from_integral(-1.0) == pytest.approx(0.5)
    assert certify.beta_from_integral(0.0) == pytest.approx(0.0)
    with pytest.raises(DomainError):
        certify.beta_from_integral(1.0)


def test_beta_routes_agree_bernardi():
    p = pc.ParameterSet.from_mu_nu(1.0, 2.0, sigma=0.0, xi=0.5)
    iq = certify.beta_quadrature_route(BERNARDI, p)
    ise = certify.beta_series_route(BERNARDI, p)
    assert abs(certify.beta_from_integral(iq)
               - certify.beta_from_integral(ise)) < 1e-9
    assert certify.beta_sharp(BERNARDI, p) == pytest.approx(
        certify.beta_from_integral(iq))


def test_beta_sharp_mismatch_raises(monkeypatch):
    monkeypatch.setattr(certify, "beta_series_route",
                        lambda k, p: certify.beta_quadrature_route(k, p) + 0.1)
    with pytest.raises(RepresentationMismatch):
        certify.beta_sharp(BERNARDI, P12)


def test_beta0_closed_form_requirements():
    with pytest.raises(DomainError):
        certify.beta0_hohlov_closed_form(
            pc.ParameterSet.from_mu_nu(1.0, 2.0, xi=0.0), 1.0, 4.0)


def test_disk_grid_validation():
    with pytest.raises(DomainError):
        certify.DiskGrid(radii=(0.9, 0.5))
    with pytest.raises(DomainError):
        certify.DiskGrid(radii=(0.5, 1.0))
    with pytest.raises(DomainError):
        certify.DiskGrid(angles=2)
    grid = certify.DiskGrid(radii=(0.5, 0.9), angles=8, epsilon_count=8)
    assert len(grid.z_points()) == 16


def test_m_functional_node_route_matches_direct():
    rng = np.random.default_rng(7)
    for kernel in (KOMATU, BERNARDI):
        for _ in range(2):
            z = complex(0.8 * rng.uniform(0.2, 1.0)
                        * np.exp(1j * rng.uniform(0, 2 * np.pi)))
            eps = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
            fast = certify.m_functional(kernel, P12, z, eps)
            slow = certify.m_functional_direct(kernel, P12, z, eps)
            assert fast == pytest.approx(slow, abs=5e-8)


def test_m_functional_min_nonnegative_for_certified_instance():
    mmin, zmin, emin = certify.m_functional_min(KOMATU, P12)
    assert mmin >= -1e-6
    assert abs(emin) == pytest.approx(1.0)
    assert abs(zmin) <= 0.999 + 1e-12


def test_m_functional_epsilon_refinement_improves():
    coarse = certify.DiskGrid(radii=(0.9, 0.999), angles=64, epsilon_count=8)
    m1, _, _ = certify.m_functional_min(KOMATU, P12, coarse)
    m2, _, _ = certify.m_functional_min(KOMATU, P12)
    assert m2 <= m1 + 1e-12


def test_monotone_condition_not_applicable_at_xi_zero():
    p = pc.ParameterSet.from_mu_nu(1.0, 2.0, sigma=0.1, xi=0.0)
    with pytest.raises(NotApplicable):
        certify.check_monotone_condition(KOMATU, p)
    with pytest.raises(NotApplicable):
        certify.check_growth_condition(KOMATU, p)


def test_monotone_condition_margins():
    assert certify.check_monotone_condition(KOMATU, P12) >= 0.0
    # a weaker kernel violates the monotone route even though membership
    # can still hold
    weak = pc.make_kernel("komatu", c=0.0, delta=1.0)
    assert certify.check_monotone_condition(weak, P12) < 0.0


def test_growth_condition_margins():
    assert certify.check_growth_condition(KOMATU, P12) >= 0.0
    # an increasing density flips the primal inequality and fails it
    assert certify.check_growth_condition(BERNARDI, P12) < 0.0


def test_growth_condition_requires_gamma_positive():
    p = pc.ParameterSet.from_mu_nu(0.0, 2.0, sigma=0.1, xi=1.0)
    with pytest.raises(DomainError):
        certify.check_growth_condition(BERNARDI, p)


def test_phi_probe_monotone_for_certified_instance():
    a_vals = np.linspace(-0.999, 0.0, 25)
    assert certify.phi_t_monotonicity_probe(a_vals, 0.0, P12)


def test_phi_probe_detects_reversal():
    # sigma > 1/2 makes the bracket change sign near t = 1
    p = pc.ParameterSet.from_mu_nu(2.0, 2.0, sigma=0.6, xi=1.0)
    a_vals = np.linspace(-0.999, 0.0, 25)
    assert not certify.phi_t_monotonicity_probe(a_vals, 0.0, p)


def test_verify_membership_positive_for_starlike():
    # z/(1 - z)^1.8 is starlike of order 0.1; keep the grid radius where
    # the truncation tail is negligible
    n = np.arange(1, 2000, dtype=float)
    c = np.concatenate([[0.0, 1.0],
                        np.cumprod((n + 0.8) / n)[:1997]])
    f = series.from_coeffs(c)
    grid = certify.DiskGrid(radii=(0.5, 0.9, 0.99), angles=128,
                            epsilon_count=8)
    margin, argmin = certify.verify_membership(f, 0.1, 0.0, grid)
    assert margin >= -1e-6
    assert abs(argmin) < 1.0


def test_verify_membership_zero_denominator():
    # K(z) = z - 2 z^2 vanishes at the grid point z = 0.5
    f = series.from_coeffs([0.0, 1.0, -2.0])
    with pytest.raises(ZeroDenominator):
        certify.verify_membership(f, 0.0, 0.0,
                                  certify.DiskGrid(radii=(0.5, 0.9),
                                                   angles=8,
                                                   epsilon_count=8))


def test_verify_sharpness_extremal_starlike():
    # z/(1 - z)^{2(1 - sigma)} attains Re(zK'/K) = sigma at z -> -1
    sigma = 0.25
    a = 2.0 * (1.0 - sigma)
    n = np.arange(1, 2000, dtype=float)
    c = np.concatenate([[0.0, 1.0], np.cumprod((n + a - 1.0) / n)[:1997]])
    k = series.from_coeffs(c)
    assert certify.verify_sharpness(k, sigma) < 1e-4


def test_run_certification_report_schema():
    rep = certify.run_certification(KOMATU, P12, order=128)
    d = rep.to_dict()
    assert d["schema_version"] == 1
    assert d["kernel"] == "komatu c=0 delta=3"
    assert d["beta"]["integral"] == pytest.approx(d["beta"]["series"],
                                                  abs=1e-7)
    assert d["params"]["beta"] == d["beta"]["integral"]
    assert d["boundary_decay_ok"] is True
    assert d["hypothesis_check"]["all_satisfied"] is True
    assert isinstance(d["passed"], bool)
    assert rep.passed()


def test_run_certification_curves():
    rep = certify.run_certification(KOMATU, P12, order=128, with_curves=True)
    c = rep.curves
    assert len(c["t"]) == len(c["pi"]) == len(c["l_at_argmin"])
    assert np.all(np.isfinite(c["pi"]))
    assert len(c["theta"]) == len(c["re_zkprime_over_k"])


def test_report_condition_margins_none_at_xi_zero():
    p = pc.ParameterSet.from_mu_nu(1.0, 2.0, sigma=0.0, xi=0.0)
    rep = certify.run_certification(BERNARDI, p, order=128)
    assert rep.condition_margins["monotone"] is None
    assert rep.condition_margins["growth"] is None
