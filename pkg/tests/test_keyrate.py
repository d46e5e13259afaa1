"""Entropy ingredients and the finite-size key rate assembly.

The Holevo bound is checked against two independently coded oracles: the
textbook closed form for a coherent source, and an explicit three-mode
beamsplitter dilation for lossy channels without excess noise.
"""

import math

import numpy as np
import pytest

from cvqkd import (
    ChannelParams,
    SourceParams,
    ModulationParams,
    ProtocolParams,
    ConfidenceBounds,
    CovarianceMatrix2Mode,
    SymplecticSpectrum,
    build_eb_covariance,
    symplectic_eigenvalues,
    von_neumann_entropy,
    mutual_information,
    holevo_bound,
    asymptotic_key_rate,
    finite_size_correction,
    worst_case_corner,
    finite_key_rate,
    ideal_bounds,
    theoretical_noise_limit,
    veps_up_approx,
    theoretical_key_rate_limit,
    channel_at_distance,
    OptimizationProblem,
    optimize_key_rate,
)
from cvqkd.keyrate import optimal_asymptotic_rate


def _g(x):
    if x <= 0.0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def _chi_coherent_oracle(T, veps, V):
    """Closed-form Holevo bound for a coherent source modulated in both
    quadratures, written from the standard two-mode determinant recipe."""
    a = V + 1.0
    b = T * (a - 1.0) + 1.0 + veps
    c = math.sqrt(T * (a * a - 1.0))
    delta = a * a + b * b - 2.0 * c * c
    d = a * b - c * c
    disc = math.sqrt(max(delta * delta - 4.0 * d * d, 0.0))
    nu1 = math.sqrt((delta + disc) / 2.0)
    nu2 = math.sqrt((delta - disc) / 2.0)
    nu3 = math.sqrt(a * (a - c * c / b))
    return (_g((nu1 - 1.0) / 2.0) + _g((nu2 - 1.0) / 2.0)
            - _g((nu3 - 1.0) / 2.0))


def _chi_dilation_oracle(T, vs, vmx, vmp):
    """Holevo bound from an explicit purification: mode A purifies the
    prepared ensemble, a beamsplitter of transmittance T splits the signal
    into the receiver mode B and the environment mode C. Exact only for
    zero excess noise, where the dilation covers the whole channel."""
    vx = vs + vmx
    vp = 1.0 / vs + vmp
    mu = math.sqrt(vx * vp)
    corr = math.sqrt(max(mu * mu - 1.0, 0.0))
    cx = corr * math.sqrt(vx / mu)
    cp = -corr * math.sqrt(vp / mu)
    st, sr = math.sqrt(T), math.sqrt(1.0 - T)
    gx = np.array([
        [mu, st * cx, -sr * cx],
        [st * cx, T * vx + 1.0 - T, st * sr * (1.0 - vx)],
        [-sr * cx, st * sr * (1.0 - vx), (1.0 - T) * vx + T],
    ])
    gp = np.array([
        [mu, st * cp, -sr * cp],
        [st * cp, T * vp + 1.0 - T, st * sr * (1.0 - vp)],
        [-sr * cp, st * sr * (1.0 - vp), (1.0 - T) * vp + T],
    ])

    def entropy_of(gx_s, gp_s):
        m = gx_s @ gp_s
        nus = np.sqrt(np.maximum(np.linalg.eigvals(m).real, 1.0))
        return float(sum(_g((nu - 1.0) / 2.0) for nu in nus))

    s_e = entropy_of(gx[2:, 2:], gp[2:, 2:])
    # x homodyne on B, then reduce to the environment mode alone
    keep = [0, 2]
    gx_c = gx[np.ix_(keep, keep)] - np.outer(gx[keep, 1], gx[keep, 1]) / gx[1, 1]
    gp_c = gp[np.ix_(keep, keep)]
    s_e_cond = entropy_of(gx_c[1:, 1:], gp_c[1:, 1:])
    return s_e - s_e_cond


# --------------------------------------------------------------------------
# covariance construction


def test_eb_covariance_vacuum_identity():
    gamma = build_eb_covariance(ChannelParams(1.0, 0.0), SourceParams(1.0),
                                0.0, 0.0)
    assert np.allclose(gamma.entries, np.eye(4), atol=1e-12)


def test_eb_covariance_two_mode_squeezed():
    gamma = build_eb_covariance(ChannelParams(1.0, 0.0), SourceParams(1.0),
                                3.0, 3.0)
    e = gamma.entries
    assert e[0, 0] == pytest.approx(4.0, abs=1e-12)
    assert e[2, 2] == pytest.approx(4.0, abs=1e-12)
    assert e[0, 2] == pytest.approx(math.sqrt(15.0), abs=1e-12)
    assert e[1, 3] == pytest.approx(-math.sqrt(15.0), abs=1e-12)


def test_eb_covariance_receiver_block():
    gamma = build_eb_covariance(ChannelParams(0.5, 0.01), SourceParams(0.5),
                                3.0, 0.0)
    assert gamma.entries[2, 2] == pytest.approx(2.26, abs=1e-12)
    assert gamma.entries[3, 3] == pytest.approx(1.51, abs=1e-12)


def test_eb_covariance_asymmetric_modulation_keeps_sender_isotropic():
    gamma = build_eb_covariance(ChannelParams(0.7, 0.0), SourceParams(0.1),
                                3.0, 0.0)
    assert gamma.entries[0, 0] == pytest.approx(gamma.entries[1, 1], rel=1e-14)


def test_covariance_matrix_validation():
    with pytest.raises(ValueError):
        CovarianceMatrix2Mode(np.zeros((3, 3)))
    bad = np.eye(4)
    bad[0, 2] = 1.0  # asymmetric
    with pytest.raises(ValueError):
        CovarianceMatrix2Mode(bad)


# --------------------------------------------------------------------------
# entropies


def test_entropy_of_pure_state_vanishes():
    assert von_neumann_entropy(SymplecticSpectrum((1.0, 1.0))) == 0.0


def test_entropy_reference_values():
    assert von_neumann_entropy(SymplecticSpectrum((3.0,))) == pytest.approx(
        2.0, abs=1e-12)
    assert von_neumann_entropy(SymplecticSpectrum((2.0, 5.0))) == pytest.approx(
        4.132331253245202, abs=1e-12)


def test_symplectic_spectrum_rejects_sub_vacuum():
    with pytest.raises(ValueError):
        SymplecticSpectrum((0.5,))


def test_lossless_channel_keeps_state_pure():
    gamma = build_eb_covariance(ChannelParams(1.0, 0.0), SourceParams(0.3),
                                3.0, 0.0)
    spec = symplectic_eigenvalues(gamma)
    assert all(nu == pytest.approx(1.0, abs=1e-9) for nu in spec.nus)


# --------------------------------------------------------------------------
# information quantities


def test_mutual_information_values():
    got = mutual_information(ChannelParams(0.1, 0.0), SourceParams(1.0), 3.0)
    assert got == pytest.approx(0.5 * math.log2(1.3), abs=1e-15)
    assert got == pytest.approx(0.18925581162686492, abs=1e-15)
    assert mutual_information(ChannelParams(1.0, 0.0), SourceParams(1.0),
                              3.0) == pytest.approx(1.0, abs=1e-15)


def test_holevo_matches_coherent_closed_form():
    worst = 0.0
    count = 0
    for T in np.linspace(0.02, 1.0, 25):
        for veps in (0.0, 0.005, 0.02, 0.05):
            for v in (0.3, 1.0, 1.5, 3.0, 10.0, 40.0):
                mine = holevo_bound(ChannelParams(float(T), veps),
                                    SourceParams(1.0), v, v)
                oracle = _chi_coherent_oracle(float(T), veps, v)
                worst = max(worst, abs(mine - oracle))
                count += 1
    assert count >= 500
    assert worst < 1e-9


def test_holevo_matches_beamsplitter_dilation():
    worst = 0.0
    for T in (0.05, 0.2, 0.5, 0.9):
        for vs in (0.1, 0.5, 1.0, 2.0):
            for (vmx, vmp) in ((3.0, 0.0), (3.0, 3.0), (0.7, 0.0)):
                mine = holevo_bound(ChannelParams(T, 0.0), SourceParams(vs),
                                    vmx, vmp)
                oracle = _chi_dilation_oracle(T, vs, vmx, vmp)
                worst = max(worst, abs(mine - oracle))
    assert worst < 1e-9


def test_holevo_vanishes_without_eavesdropping_channel():
    assert holevo_bound(ChannelParams(1.0, 0.0), SourceParams(1.0),
                        3.0, 3.0) < 1e-9
    # a channel that transmits nothing also leaks essentially nothing
    assert holevo_bound(ChannelParams(1e-9, 0.0), SourceParams(1.0),
                        3.0, 3.0) < 1e-6


def test_asymptotic_rate_identity_and_values():
    ch, src = ChannelParams(1.0, 0.0), SourceParams(1.0)
    mod = ModulationParams("single", v=3.0)
    k, i_ab, chi = asymptotic_key_rate(ch, src, mod, beta=1.0)
    assert k == pytest.approx(1.0, abs=1e-9)
    k95, _, _ = asymptotic_key_rate(ch, src, mod, beta=0.95)
    assert k95 == pytest.approx(0.95, abs=1e-9)

    ch = ChannelParams(0.4, 0.01)
    k, i_ab, chi = asymptotic_key_rate(ch, SourceParams(0.5),
                                       ModulationParams("single", v=2.0),
                                       beta=0.9)
    assert k == pytest.approx(0.9 * i_ab - chi, abs=1e-15)


def test_asymptotic_rate_double_uses_key_displacement_only():
    ch, src = ChannelParams(0.3, 0.003), SourceParams(1.0)
    as_double = asymptotic_key_rate(ch, src,
                                    ModulationParams("double", v1=3.0, v2=10.0))
    as_single = asymptotic_key_rate(ch, src, ModulationParams("single", v=3.0))
    assert as_double == as_single


# --------------------------------------------------------------------------
# finite-size pieces


def test_finite_size_correction_values():
    assert finite_size_correction(1e6, 1e-10) == pytest.approx(
        0.040948074026684184, rel=1e-12)
    n = 2.5e5
    assert finite_size_correction(4.0 * n) == pytest.approx(
        finite_size_correction(n) / 2.0, rel=1e-14)
    assert finite_size_correction(1e18) < 1e-7


def test_finite_size_correction_validation():
    with pytest.raises(ValueError):
        finite_size_correction(0.5)
    with pytest.raises(ValueError):
        finite_size_correction(1e6, delta_star=0.0)


def test_worst_case_corner_default_is_the_minimizer():
    ch, src = ChannelParams(0.2, 0.002), SourceParams(1.0)
    mod = ModulationParams("single", v=3.0)
    bounds = ConfidenceBounds(T_low=0.18, veps_up=0.004, z=6.5, delta=1e-10,
                              T_up=0.22, veps_low=0.0)
    t_c, v_c, agrees = worst_case_corner(bounds, ch, src, mod, exhaustive=True)
    assert agrees
    assert (t_c, v_c) == (0.18, 0.004)


def test_finite_key_rate_reduces_to_asymptotic():
    ch, src = ChannelParams(0.5, 0.005), SourceParams(1.0)
    mod = ModulationParams("single", v=3.0)
    protocol = ProtocolParams(src, mod, N=10**6, r=0.0)
    report = finite_key_rate(protocol, ch, ideal_bounds(ch),
                             with_correction=False)
    k_inf, i_ab, chi = asymptotic_key_rate(ch, src, mod, protocol.beta)
    assert report.K == pytest.approx(k_inf, abs=1e-15)
    assert report.I_AB == i_ab and report.chi_BE == chi
    assert report.Delta_n == 0.0


def test_finite_key_rate_assembly():
    ch, src = ChannelParams(0.5, 0.005), SourceParams(1.0)
    mod = ModulationParams("single", v=3.0)
    protocol = ProtocolParams(src, mod, N=10**6, r=0.25)
    bounds = ConfidenceBounds(T_low=0.49, veps_up=0.006, z=6.5, delta=1e-10)
    report = finite_key_rate(protocol, ch, bounds)
    assert report.n == 0.75e6 and report.m == 0.25e6
    assert report.K == pytest.approx(
        (report.n / protocol.N) * (report.K_inf - report.Delta_n), abs=1e-15)
    assert report.T_eval == 0.49 and report.veps_eval == 0.006


def test_finite_key_rate_nothing_left_to_distill():
    ch, src = ChannelParams(0.5, 0.0), SourceParams(1.0)
    mod = ModulationParams("single", v=3.0)
    protocol = ProtocolParams(src, mod, N=10**6, r=1.0)
    report = finite_key_rate(protocol, ch, ideal_bounds(ch))
    assert report.K == 0.0 and report.n == 0.0


def test_finite_key_rate_rejects_uncertain_bounds_without_disclosure():
    ch, src = ChannelParams(0.5, 0.0), SourceParams(1.0)
    mod = ModulationParams("single", v=3.0)
    protocol = ProtocolParams(src, mod, N=10**6, r=0.0)
    bounds = ConfidenceBounds(T_low=0.49, veps_up=0.001, z=6.5, delta=1e-10)
    with pytest.raises(ValueError):
        finite_key_rate(protocol, ch, bounds)


def test_finite_key_rate_clamps_corner_into_physical_range():
    ch, src = ChannelParams(0.01, 0.0), SourceParams(1.0)
    mod = ModulationParams("single", v=3.0)
    protocol = ProtocolParams(src, mod, N=10**4, r=0.5)
    bounds = ConfidenceBounds(T_low=-0.05, veps_up=-0.002, z=6.5, delta=1e-10)
    report = finite_key_rate(protocol, ch, bounds)
    assert report.T_eval == 0.0 and report.veps_eval == 0.0
    assert math.isfinite(report.K)


# --------------------------------------------------------------------------
# idealised benchmarks


def test_theoretical_noise_limit_and_approx():
    ch = ChannelParams(0.5, 0.0)
    got = veps_up_approx(ch, SourceParams(1.0), 0.0, 1e6)
    assert got == pytest.approx(math.sqrt(2.0) / 1000.0, rel=1e-12)
    # halving the usable samples must cost accuracy against the full-block floor
    assert veps_up_approx(ch, SourceParams(1.0), 0.0, 5e5) > \
        theoretical_noise_limit(ch, 1e6)


def test_theoretical_key_rate_limit_assembly():
    ch, N = ChannelParams(0.5, 0.0), 1e6
    floor = theoretical_noise_limit(ch, N)
    k_inf, _, _ = asymptotic_key_rate(ChannelParams(0.5, floor),
                                      SourceParams(1.0),
                                      ModulationParams("single", v=3.0),
                                      beta=0.95)
    got = theoretical_key_rate_limit(ch, N, beta=0.95, v_s=1.0, v_mod=3.0)
    assert got == pytest.approx(k_inf - finite_size_correction(N), abs=1e-14)


def test_theoretical_key_rate_limit_monotone_in_noise():
    N = 1e8
    clean = theoretical_key_rate_limit(ChannelParams(0.3, 0.0), N)
    noisy = theoretical_key_rate_limit(ChannelParams(0.3, 0.01), N)
    assert clean > noisy


def test_optimal_asymptotic_rate_deep_loss():
    k_opt, v_opt = optimal_asymptotic_rate(ChannelParams(0.03, 3e-4),
                                           v_s=0.1)
    assert k_opt > 1e-3
    assert 0.01 <= v_opt <= 100.0


def test_optimal_asymptotic_rate_lossless_prefers_strong_modulation():
    k_opt, v_opt = optimal_asymptotic_rate(ChannelParams(1.0, 0.0), beta=1.0,
                                           v_s=1.0)
    assert v_opt > 50.0
    assert k_opt > 2.0


# --------------------------------------------------------------------------
# a published operating point that the model does not reproduce


def test_double_modulation_rate_at_76km_small_block():
    # 76 km, coherent-boundary squeezing 0.1, N = 1e6: the optimized
    # double-modulation rate is claimed positive, but the finite-block
    # penalty (0.0409 at N = 1e6) exceeds the best achievable asymptotic
    # rate (about 0.030) at this loss, so the assembled rate is negative.
    channel = channel_at_distance(76.0)
    problem = OptimizationProblem(channel=channel, source=SourceParams(0.1),
                                  N=10**6, kind="double")
    result = optimize_key_rate(problem)
    assert result.K > 0.0
