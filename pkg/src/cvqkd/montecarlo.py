"""Sampled transmissions validating the analytic estimator variance models.

The receiver quadrature of one transmission decomposes into the modulation
displacements, the transmitted source fluctuation, the vacuum share and
the excess noise. The terms no estimator ever observes individually (the
source fluctuation, the vacuum, the excess noise) are drawn as their
Gaussian sum, which leaves every observable joint distribution unchanged
and keeps the draw count down.

Bulk draws are single precision; every reduction accumulates in double
precision, which sits orders of magnitude below the statistical
tolerances validated here. Each trial derives its generator from
``(seed, trial_index)`` alone, so results are independent of how trials
are distributed over worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .estimation import (
    EstimationScheme,
    SampleSet,
    VarianceModel,
    estimate_T,
    estimate_Veps,
    modified_double_arms,
    variance_double,
    variance_modified_double,
    variance_single,
)
from .keyrate import theoretical_noise_limit
from .model import (
    DOUBLE,
    MODIFIED,
    SINGLE,
    ChannelParams,
    FiberModel,
    ModulationParams,
    SourceParams,
    _finite,
    _require,
    excess_noise_from_fiber,
)

_DTYPE = np.float32


@dataclass(frozen=True)
class TrialConfig:
    """One repeatable simulation setup."""

    channel: ChannelParams
    source: SourceParams
    modulation: ModulationParams
    scheme: EstimationScheme
    N: int
    trials: int
    seed: int

    def __post_init__(self):
        _require(isinstance(self.N, int) and self.N >= 2,
                 f"block size N must be an integer >= 2, got {self.N!r}")
        _require(isinstance(self.trials, int) and self.trials >= 1,
                 f"trial count must be an integer >= 1, got {self.trials!r}")
        _require(isinstance(self.seed, int) and self.seed >= 0,
                 f"seed must be a non-negative integer, got {self.seed!r}")
        kind = self.scheme.kind
        if kind == SINGLE:
            _require(self.modulation.scheme == SINGLE,
                     "single-scheme trials need a single modulation")
            _require(round(self.scheme.r * self.N) >= 1,
                     "single-scheme trials need at least one disclosed sample")
        else:
            _require(self.modulation.scheme == DOUBLE,
                     f"{kind}-scheme trials need a double modulation")
        if kind == MODIFIED:
            mc = round(self.scheme.r * self.N)
            _require(1 <= mc <= self.N - 1,
                     "modified-scheme trials need both block subsets non-empty")
            _require(self.channel.T > 0.0,
                     "modified-scheme trials need T > 0 to weight the sub-estimates")


@dataclass(frozen=True)
class EmpiricalStats:
    """Reduction of one batch of trials against the analytic model.

    Standard deviations and relative errors are None when a single trial
    makes them meaningless.
    """

    mean_T: float
    std_T: float | None
    mean_Veps: float
    std_Veps: float | None
    model: VarianceModel
    rel_err_T: float | None
    rel_err_Veps: float | None


@dataclass(frozen=True)
class ValidationRow:
    """One point of the variance-model validation grid."""

    scheme: str
    T: float
    samples: float       # disclosed samples for single, block size otherwise
    s_analytic: float
    s_empirical: float
    rel_err_s: float
    sigma_analytic: float
    sigma_empirical: float
    rel_err_sigma: float
    veps_th: float       # statistical floor on the noise uncertainty at this T


def _trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.PCG64(ss))


def _draw_scaled(rng: np.random.Generator, sd: float, out: np.ndarray) -> np.ndarray:
    rng.standard_normal(out=out, dtype=_DTYPE)
    out *= _DTYPE(sd)
    return out


def _hidden_noise_sd(config: TrialConfig) -> float:
    T = config.channel.T
    return math.sqrt(T * config.source.v_s + (1.0 - T) + config.channel.v_eps)


def _probe_only_noise_sd(config: TrialConfig) -> float:
    # the probe regression never sees the key displacement; it acts as noise
    T = config.channel.T
    return math.sqrt(T * (config.source.v_s + config.modulation.v1)
                     + (1.0 - T) + config.channel.v_eps)


def _lean_buffers(config: TrialConfig) -> list[np.ndarray]:
    if config.scheme.kind == SINGLE:
        m = round(config.scheme.r * config.N)
        return [np.empty(m, dtype=_DTYPE) for _ in range(2)]
    if config.scheme.kind == DOUBLE:
        return [np.empty(config.N, dtype=_DTYPE) for _ in range(2)]
    mc = round(config.scheme.r * config.N)
    return [np.empty(config.N, dtype=_DTYPE),
            np.empty(mc, dtype=_DTYPE),
            np.empty(config.N, dtype=_DTYPE)]


def _simulate_lean(config: TrialConfig, trial_index: int,
                   buffers: list[np.ndarray]):
    """Distribution-identical transmission that only materialises what the
    estimators read: unseen displacements are folded into the noise draw,
    cutting the raw normals per trial by up to a third. Draw order is
    fixed: revealed displacements first, then noise."""
    rng = _trial_rng(config.seed, trial_index)
    st = _DTYPE(math.sqrt(config.channel.T))
    if config.scheme.kind == SINGLE:
        m_buf, b_buf = buffers
        m_arr = _draw_scaled(rng, math.sqrt(config.modulation.v), m_buf)
        b_arr = _draw_scaled(rng, _hidden_noise_sd(config), b_buf)
        b_arr += st * m_arr
        return m_arr, None, b_arr
    if config.scheme.kind == DOUBLE:
        m2_buf, b_buf = buffers
        m2 = _draw_scaled(rng, math.sqrt(config.modulation.v2), m2_buf)
        b_arr = _draw_scaled(rng, _probe_only_noise_sd(config), b_buf)
        b_arr += st * m2
        return m2, None, b_arr
    m2_buf, m1b_buf, b_buf = buffers
    mc = m1b_buf.size
    m2 = _draw_scaled(rng, math.sqrt(config.modulation.v2), m2_buf)
    m1b = _draw_scaled(rng, math.sqrt(config.modulation.v1), m1b_buf)
    _draw_scaled(rng, _hidden_noise_sd(config), b_buf[:mc])
    _draw_scaled(rng, _probe_only_noise_sd(config), b_buf[mc:])
    b_buf[:mc] += st * (m1b + m2[:mc])
    b_buf[mc:] += st * m2[mc:]
    return m2, m1b, b_buf


def _simulate_into(config: TrialConfig, trial_index: int,
                   buffers: list[np.ndarray]):
    """Fill ``buffers`` with one transmission; see simulate_transmission."""
    rng = _trial_rng(config.seed, trial_index)
    st = math.sqrt(config.channel.T)
    noise_sd = _hidden_noise_sd(config)
    if config.scheme.kind == SINGLE:
        m_buf, b_buf = buffers
        m_arr = _draw_scaled(rng, math.sqrt(config.modulation.v), m_buf)
        b_arr = _draw_scaled(rng, noise_sd, b_buf)
        b_arr += _DTYPE(st) * m_arr
        return SampleSet(m_arr, b_arr), None
    m1_buf, m2_buf, b_buf = buffers
    m1 = _draw_scaled(rng, math.sqrt(config.modulation.v1), m1_buf)
    m2 = _draw_scaled(rng, math.sqrt(config.modulation.v2), m2_buf)
    b_arr = _draw_scaled(rng, noise_sd, b_buf)
    total = m1 + m2
    total *= _DTYPE(st)
    b_arr += total
    return SampleSet(m2, b_arr), m1


def simulate_transmission(config: TrialConfig, trial_index: int):
    """One transmission of a block through the channel.

    Returns ``(samples, hidden)``. For the single scheme the sample set is
    the disclosed subset of ``round(r * N)`` pairs and ``hidden`` is None.
    For the double and modified schemes the sample set pairs the public
    probe displacements with the received quadratures over the full block,
    and ``hidden`` is the key-displacement record (revealed later for the
    first ``round(r * N)`` samples of the modified scheme).

    Deterministic in ``(config.seed, trial_index)``: the draw order is
    fixed (modulations first, then the aggregated hidden noise).
    """
    if config.scheme.kind == SINGLE:
        m = round(config.scheme.r * config.N)
        buffers = [np.empty(m, dtype=_DTYPE) for _ in range(2)]
    else:
        buffers = [np.empty(config.N, dtype=_DTYPE) for _ in range(3)]
    return _simulate_into(config, trial_index, buffers)


def _one_trial(config: TrialConfig, trial_index: int, buffers: list[np.ndarray],
               scratch: dict) -> tuple[float, float]:
    m_rev, m1b, b_arr = _simulate_lean(config, trial_index, buffers)
    kind = config.scheme.kind
    mod = config.modulation
    if kind == SINGLE:
        samples = SampleSet(m_rev, b_arr)
        t_hat = estimate_T(samples, mod.v)
        v_hat = estimate_Veps(samples, t_hat, config.source)
        return t_hat, v_hat
    if kind == DOUBLE:
        samples = SampleSet(m_rev, b_arr)
        t_hat = estimate_T(samples, mod.v2)
        v_hat = estimate_Veps(samples, t_hat, scratch["source_eff"])
        return t_hat, v_hat
    mc = scratch["mc"]
    both = SampleSet(m1b + m_rev[:mc], b_arr[:mc])
    probe_only = SampleSet(m_rev[mc:], b_arr[mc:])
    t_b = estimate_T(both, mod.v1 + mod.v2)
    t_a = estimate_T(probe_only, mod.v2)
    w_a, w_b = scratch["t_weights"]
    t_hat = t_a * w_a + t_b * w_b
    v_a = estimate_Veps(probe_only, t_hat, scratch["source_eff"])
    v_b = estimate_Veps(both, t_hat, config.source)
    u_a, u_b = scratch["v_weights"]
    return t_hat, v_a * u_a + v_b * u_b


def _trial_scratch(config: TrialConfig) -> dict:
    """Per-config constants shared by every trial."""
    scratch: dict = {}
    if config.scheme.kind in (DOUBLE, MODIFIED):
        # everything the probe-only regression cannot see acts as source noise
        scratch["source_eff"] = SourceParams(config.source.v_s + config.modulation.v1)
    if config.scheme.kind == MODIFIED:
        scratch["mc"] = round(config.scheme.r * config.N)
        sig_a, sig_b, _, s_a, s_b, _ = modified_double_arms(
            config.channel, config.source, config.modulation,
            float(config.N), config.scheme.r)
        # inverse-variance weights from the analytic model at the true
        # parameters; normalised once here
        wa, wb = 1.0 / sig_a, 1.0 / sig_b
        scratch["t_weights"] = (wa / (wa + wb), wb / (wa + wb))
        ua, ub = 1.0 / s_a, 1.0 / s_b
        scratch["v_weights"] = (ua / (ua + ub), ub / (ua + ub))
    return scratch


def analytic_model(config: TrialConfig) -> VarianceModel:
    """Analytic variance model matching the trial setup."""
    kind = config.scheme.kind
    if kind == SINGLE:
        m = round(config.scheme.r * config.N)
        return variance_single(config.channel, config.source,
                               config.modulation.v, float(m))
    if kind == DOUBLE:
        return variance_double(config.channel, config.source,
                               config.modulation, float(config.N))
    return variance_modified_double(config.channel, config.source,
                                    config.modulation, float(config.N),
                                    config.scheme.r)


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("CVQKD_THREADS", "").strip()
        if env:
            threads = int(env)
        else:
            threads = os.cpu_count() or 1
    return max(1, int(threads))


def run_trials(config: TrialConfig, threads: int | None = None) -> EmpiricalStats:
    """Simulate, estimate and reduce ``config.trials`` transmissions.

    Thread count (argument, else ``CVQKD_THREADS``, else the CPU count)
    affects wall time only: every trial owns a generator derived from its
    index, and the reduction runs over the index-ordered arrays.
    """
    threads = _resolve_threads(threads)
    scratch = _trial_scratch(config)
    t_hat = np.empty(config.trials, dtype=np.float64)
    v_hat = np.empty(config.trials, dtype=np.float64)

    def worker(index_range) -> None:
        buffers = _lean_buffers(config)
        for k in index_range:
            t_hat[k], v_hat[k] = _one_trial(config, k, buffers, scratch)

    if threads == 1 or config.trials == 1:
        worker(range(config.trials))
    else:
        chunk = max(1, math.ceil(config.trials / threads))
        ranges = [range(lo, min(lo + chunk, config.trials))
                  for lo in range(0, config.trials, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            # propagate the first worker exception, if any
            for future in [pool.submit(worker, rg) for rg in ranges]:
                future.result()

    model = analytic_model(config)
    mean_t = float(np.mean(t_hat))
    mean_v = float(np.mean(v_hat))
    if config.trials >= 2:
        std_t = float(np.std(t_hat, ddof=1))
        std_v = float(np.std(v_hat, ddof=1))
        rel_t = abs(std_t - model.sigma) / model.sigma if model.sigma > 0.0 else None
        rel_v = abs(std_v - model.s) / model.s if model.s > 0.0 else None
    else:
        std_t = std_v = rel_t = rel_v = None
    return EmpiricalStats(mean_T=mean_t, std_T=std_t, mean_Veps=mean_v,
                          std_Veps=std_v, model=model,
                          rel_err_T=rel_t, rel_err_Veps=rel_v)


def _row_seed(base_seed: int, scheme_index: int, t_index: int) -> int:
    ss = np.random.SeedSequence(base_seed, spawn_key=(scheme_index, t_index))
    lo, hi = (int(w) for w in ss.generate_state(2))
    return (hi << 32) | lo


def validate_variance_models(t_grid, template: TrialConfig,
                             fiber: FiberModel = FiberModel(),
                             schemes: tuple[str, ...] = (SINGLE, DOUBLE, MODIFIED),
                             threads: int | None = None) -> list[ValidationRow]:
    """Run the trial batch for every (scheme, transmittance) pair.

    The channel at each grid point takes its excess noise from the fiber
    model. The template supplies block size, trial count, disclosed
    fraction and all modulation variances; single-scheme rows use the
    template's single-modulation variance ``v``. Row seeds derive from the
    template seed and the row position, so the full table is reproducible
    and rows are independent.
    """
    rows: list[ValidationRow] = []
    for s_idx, kind in enumerate(schemes):
        _require(kind in (SINGLE, DOUBLE, MODIFIED), f"unknown scheme {kind!r}")
        for t_idx, T in enumerate(t_grid):
            channel = ChannelParams(float(T), excess_noise_from_fiber(float(T), fiber))
            if kind == SINGLE:
                modulation = ModulationParams(SINGLE, v=template.modulation.v)
                scheme = EstimationScheme(SINGLE, template.scheme.r)
                samples = float(round(scheme.r * template.N))
            elif kind == DOUBLE:
                modulation = ModulationParams(DOUBLE, v1=template.modulation.v1,
                                              v2=template.modulation.v2)
                scheme = EstimationScheme(DOUBLE, 0.0)
                samples = float(template.N)
            else:
                modulation = ModulationParams(DOUBLE, v1=template.modulation.v1,
                                              v2=template.modulation.v2)
                scheme = EstimationScheme(MODIFIED, template.scheme.r)
                samples = float(template.N)
            config = replace(template, channel=channel, modulation=modulation,
                             scheme=scheme, seed=_row_seed(template.seed, s_idx, t_idx))
            stats = run_trials(config, threads=threads)
            rows.append(ValidationRow(
                scheme=kind,
                T=channel.T,
                samples=samples,
                s_analytic=stats.model.s,
                s_empirical=stats.std_Veps,
                rel_err_s=stats.rel_err_Veps,
                sigma_analytic=stats.model.sigma,
                sigma_empirical=stats.std_T,
                rel_err_sigma=stats.rel_err_T,
                veps_th=theoretical_noise_limit(channel, float(template.N)),
            ))
    return rows
