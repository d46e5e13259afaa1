"""Covariance construction, Holevo bound, asymptotic and finite-size rates.

Security is evaluated against Gaussian collective attacks in the
entanglement-based picture: the prepare-and-measure modulation is replaced
by an equivalent two-mode state shared between sender and channel input,
the eavesdropper is given the channel purification, and the Holevo bound
is computed from symplectic spectra of the joint and conditional
covariance matrices.

The finite-size rate prices in two effects on top of the asymptotic
formula: the channel parameters are only known inside a confidence box, so
the rate is taken at the pessimistic corner, and a penalty shrinking as
``1/sqrt(n)`` accounts for using ``n`` rather than infinitely many
symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numeric
from .estimation import ConfidenceBounds
from .model import (
    DEFAULT_BETA,
    DEFAULT_DELTA_STAR,
    SINGLE,
    ChannelParams,
    ModulationParams,
    ProtocolParams,
    SourceParams,
    _finite,
    _require,
    aggregated_noise_variance,
)

_LOG2 = math.log(2.0)

# Symplectic eigenvalues may land below 1 by floating error on (near-)pure
# states; anything within this tolerance is treated as exactly 1, anything
# further below is rejected as unphysical.
NU_TOLERANCE = 1e-9

# Source variance used as a stand-in for arbitrarily strong squeezing when
# evaluating idealised benchmark rates.
SQUEEZING_LIMIT_VS = 1e-7


def _thermal_entropy_bits(x: float) -> float:
    # (x+1) log2(x+1) - x log2(x), continuously extended by 0 at x <= 0
    if x <= 0.0:
        return 0.0
    return ((x + 1.0) * math.log1p(x) - x * math.log(x)) / _LOG2


@dataclass(frozen=True)
class CovarianceMatrix2Mode:
    """4x4 quadrature covariance matrix in mode order (A_x, A_p, B_x, B_p)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.float64)  # defensive copy
        _require(m.shape == (4, 4), "a two-mode covariance matrix must be 4x4")
        _require(bool(np.all(np.isfinite(m))), "covariance entries must be finite")
        scale = max(1.0, float(np.max(np.abs(m))))
        _require(bool(np.allclose(m, m.T, rtol=0.0, atol=1e-9 * scale)),
                 "covariance matrix must be symmetric")
        m = 0.5 * (m + m.T)
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @classmethod
    def from_xp_blocks(cls, a_x: float, a_p: float, b_x: float, b_p: float,
                       c_x: float, c_p: float) -> "CovarianceMatrix2Mode":
        """Build a matrix whose x and p sectors are uncoupled, which is the
        case for every state this package constructs."""
        m = np.zeros((4, 4))
        m[0, 0] = a_x
        m[1, 1] = a_p
        m[2, 2] = b_x
        m[3, 3] = b_p
        m[0, 2] = m[2, 0] = c_x
        m[1, 3] = m[3, 1] = c_p
        return cls(m)

    @property
    def block_a(self) -> np.ndarray:
        return self.entries[:2, :2]

    @property
    def block_b(self) -> np.ndarray:
        return self.entries[2:, 2:]

    @property
    def block_c(self) -> np.ndarray:
        return self.entries[:2, 2:]

    def sector_split(self):
        """Return the (x, p) 2x2 sector matrices when the two quadrature
        sectors are exactly uncoupled, else None."""
        m = self.entries
        if m[0, 1] == 0.0 and m[0, 3] == 0.0 and m[1, 2] == 0.0 and m[2, 3] == 0.0:
            gx = np.array([[m[0, 0], m[0, 2]], [m[0, 2], m[2, 2]]])
            gp = np.array([[m[1, 1], m[1, 3]], [m[1, 3], m[3, 3]]])
            return gx, gp
        return None


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues of a bona fide covariance matrix."""

    nus: tuple[float, ...]

    def __post_init__(self):
        _require(len(self.nus) >= 1, "a spectrum cannot be empty")
        for nu in self.nus:
            _require(_finite(nu), "symplectic eigenvalues must be finite")
            _require(nu >= 1.0 - NU_TOLERANCE,
                     f"symplectic eigenvalue {nu!r} below 1; state is not bona fide")


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def symplectic_eigenvalues(gamma) -> SymplecticSpectrum:
    """Symplectic spectrum of a one- or two-mode covariance matrix.

    Accepts a :class:`CovarianceMatrix2Mode` or a symmetric 2x2 / 4x4
    array. For two-mode input with uncoupled x/p sectors the two invariants
    are evaluated from the product of the sector matrices, whose
    discriminant stays numerically exact when the state is pure; the
    generic determinant formula loses that cancellation and is only used
    as the fallback for coupled input.
    """
    if isinstance(gamma, CovarianceMatrix2Mode):
        cov = gamma
    else:
        m = np.asarray(gamma, dtype=np.float64)
        if m.shape == (2, 2):
            _require(bool(np.allclose(m, m.T, rtol=0.0,
                                      atol=1e-9 * max(1.0, float(np.max(np.abs(m)))))),
                     "covariance matrix must be symmetric")
            det = _det2(m)
            _require(det >= 0.0, "single-mode covariance has negative determinant")
            return SymplecticSpectrum((math.sqrt(det),))
        cov = CovarianceMatrix2Mode(m)

    split = cov.sector_split()
    if split is not None:
        gx, gp = split
        # invariants of M = gx @ gp, whose eigenvalues are the nu^2
        m11 = gx[0, 0] * gp[0, 0] + gx[0, 1] * gp[1, 0]
        m12 = gx[0, 0] * gp[0, 1] + gx[0, 1] * gp[1, 1]
        m21 = gx[1, 0] * gp[0, 0] + gx[1, 1] * gp[1, 0]
        m22 = gx[1, 0] * gp[0, 1] + gx[1, 1] * gp[1, 1]
        delta = m11 + m22
        disc = (m11 - m22) ** 2 + 4.0 * m12 * m21
        det_gamma = max(_det2(gx), 0.0) * max(_det2(gp), 0.0)
    else:
        e = cov.entries
        delta = _det2(e[:2, :2]) + _det2(e[2:, 2:]) + 2.0 * _det2(e[:2, 2:])
        det_gamma = float(np.linalg.det(e))
        disc = delta * delta - 4.0 * det_gamma
    if disc < 0.0:
        _require(disc >= -1e-9 * max(1.0, delta * delta),
                 "two-mode covariance has complex symplectic invariants")
        disc = 0.0
    nu_sq_plus = 0.5 * (delta + math.sqrt(disc))
    _require(nu_sq_plus > 0.0, "two-mode covariance is singular")
    nu_plus = math.sqrt(nu_sq_plus)
    # the small eigenvalue via the determinant, which avoids cancellation
    # in (delta - sqrt(disc)) when the eigenvalues are far apart
    nu_minus = math.sqrt(max(det_gamma, 0.0)) / nu_plus
    return SymplecticSpectrum((nu_plus, nu_minus))


def von_neumann_entropy(spectrum: SymplecticSpectrum) -> float:
    """Entropy in bits of the Gaussian state with the given spectrum."""
    return sum(_thermal_entropy_bits((nu - 1.0) / 2.0) for nu in spectrum.nus)


def quadrature_split(source: SourceParams, v_key: float,
                     modulate_both: bool | None = None) -> tuple[float, float]:
    """Distribute the key modulation over the quadratures.

    A coherent (or anti-squeezed) source modulates both quadratures
    symmetrically; a squeezed source by default puts all modulation on the
    squeezed quadrature and leaves the conjugate one untouched. Passing
    ``modulate_both`` overrides the default.
    """
    if modulate_both is None:
        modulate_both = source.v_s >= 1.0
    if modulate_both:
        return v_key, v_key
    return v_key, 0.0


def build_eb_covariance(channel: ChannelParams, source: SourceParams,
                        v_mod_x: float, v_mod_p: float) -> CovarianceMatrix2Mode:
    """Entanglement-based covariance matrix equivalent to modulating the
    source with independent Gaussian displacements of the given variances
    and sending it through the channel.

    The sender-side mode is isotropic with variance
    ``mu = sqrt((v_s + v_mod_x) * (1/v_s + v_mod_p))``; the asymmetry of
    the prepared ensemble moves into the cross correlations.
    """
    _require(_finite(v_mod_x) and v_mod_x >= 0.0,
             f"x modulation variance must be >= 0, got {v_mod_x!r}")
    _require(_finite(v_mod_p) and v_mod_p >= 0.0,
             f"p modulation variance must be >= 0, got {v_mod_p!r}")
    vx = source.v_s + v_mod_x
    vp = 1.0 / source.v_s + v_mod_p
    mu = math.sqrt(vx * vp)
    _require(mu >= 1.0 - 1e-9,
             "prepared ensemble violates the uncertainty bound (mu < 1)")
    T, veps = channel.T, channel.v_eps
    corr = math.sqrt(T * max(mu * mu - 1.0, 0.0))
    t = math.sqrt(vx / mu)
    return CovarianceMatrix2Mode.from_xp_blocks(
        a_x=mu,
        a_p=mu,
        b_x=T * vx + 1.0 - T + veps,
        b_p=T * vp + 1.0 - T + veps,
        c_x=corr * t,
        c_p=-corr / t,
    )


def mutual_information(channel: ChannelParams, source: SourceParams,
                       v_key: float) -> float:
    """Shannon information per symbol between the key displacement and the
    receiver's homodyne outcome, in bits."""
    _require(_finite(v_key) and v_key >= 0.0,
             f"key modulation variance must be >= 0, got {v_key!r}")
    vn = aggregated_noise_variance(channel, source)
    _require(vn > 0.0, "aggregated noise variance must be positive")
    return 0.5 * math.log1p(channel.T * v_key / vn) / _LOG2


def holevo_bound(channel: ChannelParams, source: SourceParams,
                 v_mod_x: float, v_mod_p: float) -> float:
    """Holevo information of the eavesdropper about the receiver's x
    quadrature, for reverse reconciliation.

    Computed as S(joint) - S(sender | receiver outcome); the channel
    purification gives the eavesdropper everything outside the two-mode
    state, so those entropies coincide with the eavesdropper's.
    """
    gamma = build_eb_covariance(channel, source, v_mod_x, v_mod_p)
    s_joint = von_neumann_entropy(symplectic_eigenvalues(gamma))
    e = gamma.entries
    mu, b_x, c_x = e[0, 0], e[2, 2], e[0, 2]
    _require(b_x > 0.0, "receiver x variance must be positive")
    # sender covariance conditioned on a homodyne x outcome at the receiver
    a_cond = mu - c_x * c_x / b_x
    det_cond = a_cond * mu
    _require(det_cond >= -NU_TOLERANCE, "conditional state is not bona fide")
    nu_cond = math.sqrt(max(det_cond, 0.0))
    s_cond = _thermal_entropy_bits((nu_cond - 1.0) / 2.0)
    return s_joint - s_cond


def asymptotic_key_rate(channel: ChannelParams, source: SourceParams,
                        modulation: ModulationParams, beta: float = DEFAULT_BETA,
                        modulate_both: bool | None = None) -> tuple[float, float, float]:
    """Collective-attack rate ``beta * I_AB - chi_BE`` for an infinitely
    long block. Returns ``(rate, I_AB, chi_BE)``.

    For the double modulation only the key displacement enters: the probe
    displacement is public, so the receiver removes it and it neither
    carries information nor strengthens the eavesdropper.
    """
    v_key = modulation.v_key
    v_mod_x, v_mod_p = quadrature_split(source, v_key, modulate_both)
    i_ab = mutual_information(channel, source, v_key)
    chi = holevo_bound(channel, source, v_mod_x, v_mod_p)
    return beta * i_ab - chi, i_ab, chi


def finite_size_correction(n: float, delta_star: float = DEFAULT_DELTA_STAR) -> float:
    """Rate penalty for distilling from ``n`` rather than infinitely many
    symbols, with failure budget ``delta_star``."""
    _require(_finite(n) and n >= 1.0, f"usable block must have n >= 1, got {n!r}")
    _require(_finite(delta_star) and 0.0 < delta_star < 1.0,
             f"delta_star must lie in (0, 1), got {delta_star!r}")
    return 7.0 * math.sqrt(math.log2(2.0 / delta_star) / n)


def worst_case_corner(bounds: ConfidenceBounds, channel: ChannelParams,
                      source: SourceParams, modulation: ModulationParams,
                      beta: float = DEFAULT_BETA,
                      modulate_both: bool | None = None,
                      exhaustive: bool = False) -> tuple[float, float, bool]:
    """Select the corner of the confidence box the rate is evaluated at.

    The default is the analytically pessimistic one: lowest transmittance,
    highest excess noise. With ``exhaustive=True`` all four corners are
    evaluated and the minimizer returned, along with a flag telling whether
    it agrees with the default choice.
    """
    if not exhaustive:
        return bounds.T_low, bounds.veps_up, True
    t_up = bounds.T_up if bounds.T_up is not None else channel.T
    v_low = bounds.veps_low if bounds.veps_low is not None else channel.v_eps
    corners = [
        (bounds.T_low, bounds.veps_up),
        (bounds.T_low, v_low),
        (t_up, bounds.veps_up),
        (t_up, v_low),
    ]
    rates = []
    for t_c, v_c in corners:
        ch = ChannelParams(min(max(t_c, 0.0), 1.0), max(v_c, 0.0))
        k, _, _ = asymptotic_key_rate(ch, source, modulation, beta, modulate_both)
        rates.append(k)
    i_min = min(range(4), key=lambda i: rates[i])
    return corners[i_min][0], corners[i_min][1], i_min == 0


@dataclass(frozen=True)
class KeyRateReport:
    """Finite-size evaluation broken into its ingredients.

    ``K == (n / N) * (K_inf - Delta_n)`` holds exactly as assembled;
    ``K_inf`` is the asymptotic rate at the worst-case corner, evaluated at
    the clamped point ``(T_eval, veps_eval)``.
    """

    K: float
    K_inf: float
    I_AB: float
    chi_BE: float
    Delta_n: float
    T_low: float
    veps_up: float
    T_eval: float
    veps_eval: float
    n: float
    m: float
    N: int
    corner_agrees: bool = True

    def as_dict(self) -> dict:
        return {
            "K": self.K,
            "K_inf": self.K_inf,
            "I_AB": self.I_AB,
            "chi_BE": self.chi_BE,
            "Delta_n": self.Delta_n,
            "T_low": self.T_low,
            "veps_up": self.veps_up,
            "T_eval": self.T_eval,
            "veps_eval": self.veps_eval,
            "n": self.n,
            "m": self.m,
            "N": self.N,
            "corner_agrees": self.corner_agrees,
        }


def finite_key_rate(protocol: ProtocolParams, channel: ChannelParams,
                    bounds: ConfidenceBounds,
                    modulate_both: bool | None = None,
                    corner_search: bool = False,
                    with_correction: bool = True) -> KeyRateReport:
    """Finite-size secure key rate per block symbol.

    The asymptotic formula is evaluated at the pessimistic corner of the
    confidence box (transmittance clamped into [0, 1], excess noise
    clamped at 0), the finite-block penalty is subtracted, and the result
    is scaled by the fraction of the block that remains for key.
    ``with_correction=False`` drops the penalty; together with degenerate
    bounds and ``r = 0`` that reproduces the asymptotic rate exactly.
    """
    mod = protocol.modulation
    n = protocol.n
    m = protocol.m
    if mod.scheme == SINGLE and m <= 0.0 and bounds.z != 0.0:
        raise ValueError("single-modulation estimation consumed no samples; "
                         "r must be > 0 when bounds carry real uncertainty")
    t_corner, v_corner = bounds.T_low, bounds.veps_up
    corner_agrees = True
    if corner_search:
        t_corner, v_corner, corner_agrees = worst_case_corner(
            bounds, channel, protocol.source, mod, protocol.beta,
            modulate_both, exhaustive=True)
    t_eval = min(max(float(t_corner), 0.0), 1.0)
    veps_eval = max(float(v_corner), 0.0)
    ch_eval = ChannelParams(t_eval, veps_eval)
    k_inf, i_ab, chi = asymptotic_key_rate(ch_eval, protocol.source, mod,
                                           protocol.beta, modulate_both)
    if n >= 1.0:
        delta_n = finite_size_correction(n, protocol.delta_star) if with_correction else 0.0
        key_rate = (n / protocol.N) * (k_inf - delta_n)
    else:
        # nothing left to distill from
        delta_n = 0.0
        key_rate = 0.0
    return KeyRateReport(K=key_rate, K_inf=k_inf, I_AB=i_ab, chi_BE=chi,
                         Delta_n=delta_n, T_low=bounds.T_low,
                         veps_up=bounds.veps_up, T_eval=t_eval,
                         veps_eval=veps_eval, n=n, m=m, N=protocol.N,
                         corner_agrees=corner_agrees)


# --------------------------------------------------------------------------
# idealised benchmarks


def theoretical_noise_limit(channel: ChannelParams, N: float) -> float:
    """Statistical floor on the excess-noise uncertainty from ``N``
    samples, reached in the limit of strong probe modulation."""
    _require(_finite(N) and N >= 1.0, f"sample count must be >= 1, got {N!r}")
    return math.sqrt(2.0) * (1.0 + channel.v_eps - channel.T) / math.sqrt(N)


def veps_up_approx(channel: ChannelParams, source: SourceParams,
                   v_withheld: float, m: float) -> float:
    """Leading-order excess-noise uncertainty of an ``m``-sample
    estimation that keeps ``v_withheld`` of modulation variance hidden
    inside the noise. Approaches :func:`theoretical_noise_limit` when the
    withheld variance and the source variance are negligible."""
    _require(_finite(m) and m >= 1.0, f"sample count must be >= 1, got {m!r}")
    _require(_finite(v_withheld) and v_withheld >= 0.0,
             f"withheld variance must be >= 0, got {v_withheld!r}")
    vn = 1.0 + channel.v_eps + channel.T * (v_withheld + source.v_s - 1.0)
    return math.sqrt(2.0) * vn / math.sqrt(m)


def optimal_asymptotic_rate(channel: ChannelParams, beta: float = DEFAULT_BETA,
                            v_s: float | None = None,
                            modulate_both: bool | None = None) -> tuple[float, float]:
    """Asymptotic rate maximised over the modulation variance.

    ``v_s = None`` evaluates the strong-squeezing limit. Returns
    ``(rate, v_opt)``.
    """
    if v_s is None:
        source = SourceParams(SQUEEZING_LIMIT_VS)
        if modulate_both is None:
            modulate_both = False
    else:
        source = SourceParams(v_s)

    def rate_of(v: float) -> float:
        mod = ModulationParams(SINGLE, v=v)
        k, _, _ = asymptotic_key_rate(channel, source, mod, beta, modulate_both)
        return k

    grid = numeric.log_grid(1e-2, 1e2, 25)
    v_opt, k_opt = numeric.grid_then_golden_max(rate_of, grid, tol=1e-10)
    return k_opt, v_opt


def theoretical_key_rate_limit(channel: ChannelParams, N: float,
                               beta: float = DEFAULT_BETA,
                               delta_star: float = DEFAULT_DELTA_STAR,
                               v_s: float | None = None,
                               v_mod: float | None = None,
                               modulate_both: bool | None = None) -> float:
    """Upper benchmark on any finite-size rate from a block of ``N``.

    Parameter uncertainty is reduced to its statistical floor: the excess
    noise is evaluated at the larger of its true value and the noise
    limit, the transmittance is taken as known. Defaults correspond to an
    arbitrarily strongly squeezed source with optimised modulation.
    """
    veps_eval = max(channel.v_eps, theoretical_noise_limit(channel, N))
    ch = ChannelParams(channel.T, veps_eval)
    if v_mod is None:
        k_inf, _ = optimal_asymptotic_rate(ch, beta, v_s, modulate_both)
    else:
        source = SourceParams(SQUEEZING_LIMIT_VS if v_s is None else v_s)
        if v_s is None and modulate_both is None:
            modulate_both = False
        mod = ModulationParams(SINGLE, v=v_mod)
        k_inf, _, _ = asymptotic_key_rate(ch, source, mod, beta, modulate_both)
    return k_inf - finite_size_correction(N, delta_star)
