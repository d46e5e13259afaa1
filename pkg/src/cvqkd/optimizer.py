"""Protocol parameter optimization and empirical scaling fits.

The objective is always the planning-mode finite-size key rate: expected
confidence bounds from the analytic variance models, no sampling. That
makes every optimization deterministic, cheap, and exactly reproducible.

The search is deliberately simple: a coarse geometric grid locates the
basin, then cyclic per-coordinate golden-section refinement polishes the
optimum to the requested tolerance. Points where the rate is undefined
(for example a disclosed fraction too small to estimate from) score
negative infinity and are simply never selected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import numeric
from .estimation import EstimationScheme, expected_bounds
from .keyrate import (
    KeyRateReport,
    finite_key_rate,
    finite_size_correction,
    optimal_asymptotic_rate,
)
from .model import (
    DEFAULT_BETA,
    DEFAULT_DELTA,
    DEFAULT_DELTA_STAR,
    DOUBLE,
    MODIFIED,
    SINGLE,
    ChannelParams,
    FiberModel,
    ModulationParams,
    ProtocolParams,
    SourceParams,
    _finite,
    _require,
    channel_at_distance,
)

_GRID_V = 13
_GRID_R = 12
_LEGACY_POINT = {"v": 1.5, "r": 0.5}  # classic single-modulation working point


def _default_free(kind: str) -> tuple[str, ...]:
    if kind == SINGLE:
        return ("v", "r")
    if kind == DOUBLE:
        return ("v1",)
    return ("v1", "r")


@dataclass(frozen=True)
class OptimizationProblem:
    """Key-rate maximisation over a subset of the protocol parameters.

    ``free`` defaults to the scheme's natural knobs: modulation variance
    and disclosed fraction for ``single`` and ``modified``, the key
    modulation variance alone for ``double``. ``fixed`` overrides the
    default value of any variable that is not free (``v2`` defaults to
    10, ``r`` to 0 where it is not searched).
    """

    channel: ChannelParams
    source: SourceParams
    N: int
    kind: str = SINGLE
    beta: float = DEFAULT_BETA
    delta: float = DEFAULT_DELTA
    delta_star: float = DEFAULT_DELTA_STAR
    free: tuple[str, ...] | None = None
    box: dict = field(default_factory=dict)
    fixed: dict = field(default_factory=dict)
    tol: float = 1e-4

    def __post_init__(self):
        _require(self.kind in (SINGLE, DOUBLE, MODIFIED),
                 f"unknown scheme kind {self.kind!r}")
        _require(isinstance(self.N, int) and self.N >= 2,
                 f"block size N must be an integer >= 2, got {self.N!r}")
        _require(_finite(self.tol) and self.tol > 0.0, "tol must be > 0")
        free = self.free if self.free is not None else _default_free(self.kind)
        allowed = ("v", "r") if self.kind == SINGLE else ("v1", "v2", "r")
        for name in free:
            _require(name in allowed,
                     f"{name!r} is not a free variable of the {self.kind} scheme")
        _require(self.kind != DOUBLE or "r" not in free,
                 "the double scheme has no disclosed fraction to optimise")
        object.__setattr__(self, "free", tuple(free))

    def variable_box(self, name: str) -> tuple[float, float]:
        if name in self.box:
            lo, hi = self.box[name]
            return float(lo), float(hi)
        if name in ("v", "v1"):
            return 0.01, 100.0
        if name == "v2":
            return 0.1, 50.0
        # r: keep both subsets usable
        return 0.0, 0.9

    def fixed_value(self, name: str) -> float:
        if name in self.fixed:
            return float(self.fixed[name])
        if name == "v2":
            return 10.0
        if name == "r":
            return 0.0
        raise ValueError(f"no default for fixed variable {name!r}")


@dataclass(frozen=True)
class OptimizationResult:
    point: dict
    K: float
    report: KeyRateReport
    status: str          # "ok" or "no_positive_rate"
    evaluations: int


def evaluate_point(problem: OptimizationProblem, point: dict) -> KeyRateReport:
    """Planning-mode finite-size rate at one parameter point."""

    def value(name: str) -> float:
        if name in point:
            return float(point[name])
        return problem.fixed_value(name)

    if problem.kind == SINGLE:
        mod = ModulationParams(SINGLE, v=value("v"))
        r = value("r")
        scheme = EstimationScheme(SINGLE, r)
    else:
        mod = ModulationParams(DOUBLE, v1=value("v1"), v2=value("v2"))
        r = 0.0 if problem.kind == DOUBLE else value("r")
        scheme = EstimationScheme(problem.kind, r)
    bounds = expected_bounds(problem.channel, problem.source, mod, scheme,
                             float(problem.N), problem.delta)
    protocol = ProtocolParams(problem.source, mod, problem.N, r, problem.beta,
                              problem.delta, problem.delta_star)
    return finite_key_rate(protocol, problem.channel, bounds)


def _coordinate_grid(problem: OptimizationProblem, name: str) -> list[float]:
    lo, hi = problem.variable_box(name)
    if name == "r":
        r_min = max(lo, 2.0 / problem.N, 1e-6)
        grid = numeric.log_grid(r_min, hi, _GRID_R)
        if problem.kind == MODIFIED and lo == 0.0:
            grid = [0.0] + grid
        return grid
    return numeric.log_grid(lo, hi, _GRID_V)


def optimize_key_rate(problem: OptimizationProblem) -> OptimizationResult:
    """Deterministic grid-plus-refinement maximisation of the key rate.

    Grid ties resolve to the earliest point in iteration order (variables
    iterate in declaration order, each grid ascending), so repeated runs
    pick identical optima. A modified-scheme optimum is snapped to r = 0
    when disclosing nothing is within tolerance of the best value found,
    since the pure double scheme is operationally simpler.
    """
    evaluations = 0

    def objective(point: dict) -> float:
        nonlocal evaluations
        evaluations += 1
        try:
            return evaluate_point(problem, point).K
        except ValueError:
            return -math.inf

    free = problem.free
    grids = {name: _coordinate_grid(problem, name) for name in free}

    best_point: dict = {}
    best_value = -math.inf

    def consider(point: dict) -> None:
        nonlocal best_point, best_value
        value = objective(point)
        if value > best_value:
            best_point, best_value = dict(point), value

    def scan(names: list[str], point: dict) -> None:
        if not names:
            consider(point)
            return
        name = names[0]
        for x in grids[name]:
            point[name] = x
            scan(names[1:], point)
        del point[name]

    scan(list(free), {})
    if problem.kind == SINGLE and all(n in free for n in ("v", "r")):
        lo_v, hi_v = problem.variable_box("v")
        lo_r, hi_r = problem.variable_box("r")
        if lo_v <= _LEGACY_POINT["v"] <= hi_v and lo_r <= _LEGACY_POINT["r"] <= hi_r:
            consider(dict(_LEGACY_POINT))
    _require(bool(best_point),
             "every grid point was infeasible; check the channel and block size")

    scale = max(abs(best_value), 1e-12)
    for _ in range(30):
        improved = best_value
        for name in free:
            xs = sorted(set(grids[name]) | {best_point[name]})
            i = xs.index(best_point[name])
            lo = xs[max(i - 1, 0)]
            hi = xs[min(i + 1, len(xs) - 1)]
            if hi <= lo:
                continue

            def along(x: float, _name=name) -> float:
                trial = dict(best_point)
                trial[_name] = x
                return objective(trial)

            x_ref, f_ref = numeric.golden_section_max(
                along, lo, hi, tol=1e-7 * max(1.0, abs(hi)))
            if f_ref > best_value:
                best_point[name] = x_ref
                best_value = f_ref
        if best_value - improved <= problem.tol * scale:
            break

    if problem.kind == MODIFIED and "r" in free and best_point.get("r", 0.0) > 0.0:
        at_zero = dict(best_point)
        at_zero["r"] = 0.0
        if objective(at_zero) >= best_value - problem.tol * scale:
            best_point = at_zero
            best_value = objective(at_zero)

    report = evaluate_point(problem, best_point)
    status = "ok" if report.K > 0.0 else "no_positive_rate"
    return OptimizationResult(best_point, report.K, report, status, evaluations)


# --------------------------------------------------------------------------
# empirical scaling fits


@dataclass(frozen=True)
class PowerLawFit:
    """Fit of ``y = alpha * x ** gamma`` on log-log axes."""

    alpha: float
    gamma: float
    residual: float  # largest |log10 deviation| over the fitted points


@dataclass(frozen=True)
class ExponentialFit:
    """Fit of ``y = a * 10 ** (-kappa * x)``."""

    a: float
    kappa: float
    fit_range: tuple[float, float]
    residual: float  # largest |log10 deviation| over the fitted points


def fit_power_law(x_values, y_values) -> PowerLawFit:
    """Least squares on the logs. All values must be positive."""
    x = np.asarray(x_values, dtype=np.float64)
    y = np.asarray(y_values, dtype=np.float64)
    _require(x.size == y.size and x.size >= 2, "a fit needs at least 2 points")
    _require(bool(np.all(x > 0.0)) and bool(np.all(y > 0.0)),
             "power-law fitting needs positive values")
    lx = np.log10(x)
    ly = np.log10(y)
    gamma, intercept = np.polyfit(lx, ly, 1)
    residual = float(np.max(np.abs(ly - (gamma * lx + intercept))))
    return PowerLawFit(alpha=float(10.0 ** intercept), gamma=float(gamma),
                       residual=residual)


def fit_exponential_decay(x_values, y_values) -> ExponentialFit:
    """Least squares of ``log10 y`` against ``x``. Values must be positive."""
    x = np.asarray(x_values, dtype=np.float64)
    y = np.asarray(y_values, dtype=np.float64)
    _require(x.size == y.size and x.size >= 2, "a fit needs at least 2 points")
    _require(bool(np.all(y > 0.0)), "exponential fitting needs positive values")
    ly = np.log10(y)
    slope, intercept = np.polyfit(x, ly, 1)
    residual = float(np.max(np.abs(ly - (slope * x + intercept))))
    return ExponentialFit(a=float(10.0 ** intercept), kappa=float(-slope),
                          fit_range=(float(np.min(x)), float(np.max(x))),
                          residual=residual)


def optimal_ratio_curve(problem_template: OptimizationProblem,
                        n_values) -> tuple[PowerLawFit, list[tuple[float, float]]]:
    """Optimal disclosed fraction as a function of block size.

    Runs the optimizer at every block size and fits a power law through
    the points with a positive rate and a positive optimal fraction;
    points outside that domain (rate dead, or fraction snapped to zero)
    cannot enter a log-log fit and are excluded. Returns the fit and all
    usable ``(N, r_opt)`` points.
    """
    points: list[tuple[float, float]] = []
    for n_val in n_values:
        problem = replace(problem_template, N=int(round(float(n_val))))
        result = optimize_key_rate(problem)
        r_opt = result.point.get("r", 0.0)
        if result.status == "ok" and r_opt > 0.0:
            points.append((float(problem.N), float(r_opt)))
    _require(len(points) >= 2, "fewer than 2 usable block sizes; cannot fit")
    fit = fit_power_law([p[0] for p in points], [p[1] for p in points])
    return fit, points


def optimal_ratio_zero_crossing(problem_template: OptimizationProblem,
                                t_range: tuple[float, float] = (0.01, 1.0),
                                r_tol: float = 1e-3,
                                iterations: int = 30) -> float:
    """Transmittance below which the modified scheme stops disclosing.

    At high transmittance the optimum reveals part of the key modulation
    (``r_opt > 0``); toward low transmittance the probe arm alone wins and
    ``r_opt`` snaps to zero.  Scans a geometric transmittance grid from the
    top down for that switch and bisects it.  Grid points whose best rate
    is not positive are skipped: their arg-max is degenerate (the prefactor
    pushes ``r`` to the box ceiling), so they carry no ratio information.
    The channel's excess noise follows the template's ratio of excess
    noise to transmittance.
    """
    _require(problem_template.kind == MODIFIED,
             "the zero crossing is a property of the modified scheme")
    base = problem_template.channel
    eps_ratio = base.v_eps / base.T if base.T > 0.0 else 0.0

    def probe(T: float) -> tuple[bool, float]:
        problem = replace(problem_template,
                          channel=ChannelParams(T, eps_ratio * T))
        result = optimize_key_rate(problem)
        return result.status == "ok", result.point.get("r", 0.0)

    grid = numeric.log_grid(t_range[0], t_range[1], 13)
    top_ok, top_r = probe(grid[-1])
    _require(top_ok and top_r > r_tol,
             "no disclosure at the top of the range; nothing to bracket")
    lo = None
    hi = grid[-1]
    for T in reversed(grid[:-1]):
        ok, r_opt = probe(T)
        if not ok:
            break
        if r_opt <= r_tol:
            lo = T
            break
        hi = T
    _require(lo is not None,
             "disclosure persists down to the dead zone; no crossing")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        ok, r_opt = probe(mid)
        # a dead midpoint counts as the no-disclosure side
        if ok and r_opt > r_tol:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def fit_exponential_keyrate(fiber: FiberModel = FiberModel(),
                            beta: float = DEFAULT_BETA,
                            v_s: float | None = None,
                            d_range: tuple[float, float] = (30.0, 150.0),
                            points: int = 13) -> ExponentialFit:
    """Exponential model of the asymptotic rate over fiber distance.

    At each distance the rate is maximised over the modulation variance;
    the source defaults to the strong-squeezing limit. The fitted decay
    constant feeds :func:`max_distance`.
    """
    _require(points >= 2, "a fit needs at least 2 points")
    _require(d_range[1] > d_range[0] > 0.0, "distance window must be increasing and positive")
    ds = np.linspace(d_range[0], d_range[1], points)
    ks = []
    for d in ds:
        channel = channel_at_distance(float(d), fiber)
        k_opt, _ = optimal_asymptotic_rate(channel, beta, v_s)
        _require(k_opt > 0.0,
                 f"asymptotic rate is dead at {d:.1f} km; shrink the window")
        ks.append(k_opt)
    return fit_exponential_decay(ds, ks)


def max_distance(fit: ExponentialFit, N: float,
                 delta_star: float = DEFAULT_DELTA_STAR) -> float:
    """Distance at which the fitted rate falls to the finite-size penalty.

    Solving ``a * 10^(-kappa d) = 7 sqrt(log2(2/delta_star) / N)`` for d:
    the reach grows by ``1 / (2 kappa)`` kilometres per decade of block
    size.
    """
    _require(fit.kappa > 0.0, "the fitted rate must decay with distance")
    _require(_finite(N) and N >= 1.0, f"block size must be >= 1, got {N!r}")
    c = 7.0 * math.sqrt(math.log2(2.0 / delta_star))
    return (0.5 / fit.kappa) * math.log10(N) - (1.0 / fit.kappa) * math.log10(c / fit.a)
