"""Parameter estimation from return series.

Two estimators are provided:

* a closed-form method of moments for equidistant returns, inverting the
  mean and variance of squared returns together with a fitted exponential
  autocorrelation (level k, rate p) back to (theta, eta, phi, gamma);
* a pseudo maximum likelihood estimator for possibly irregular returns,
  maximizing a Gaussian likelihood built from model-implied conditional
  variances.

The moment inversion assumes the driver's fourth moment S is known; the
default convention takes S = 3 (the value for normal increments), which
mirrors what pseudo likelihood does for the innovation law.  Pass the
driver's true moment for simulation studies.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.optimize import minimize

from .errors import (
    AcfFitError,
    InfeasibleMomentsError,
    NonstationaryModelError,
    RootSelectionError,
)
from .model import ParamSet, _x_minus_one_plus_exp_neg, return_moments_explicit
from .simulate import ReturnSeries

__all__ = [
    "MomentSummary",
    "MomIntermediates",
    "EstimateReport",
    "forward_summary",
    "empirical_moments",
    "mom_invert",
    "mom_fit",
    "mom_roundtrip",
    "pmle_variance_recursion",
    "pmle_objective",
    "pmle_fit",
]


@dataclass(frozen=True)
class MomentSummary:
    """Moment statistics of an equidistant squared-return series.

    ``sq_mean`` and ``sq_var`` are mean and variance of Y_i^2; the
    autocorrelation of squared returns is modelled as
    cor(Y_i^2, Y_{i+h}^2) = acf_level * exp(-delta*h*acf_decay).
    ``s_moment`` records the fourth-moment convention the summary is
    meant to be inverted under.
    """

    sq_mean: float
    sq_var: float
    acf_level: float
    acf_decay: float
    delta: float
    s_moment: float = 3.0

    def __post_init__(self):
        for name in ("sq_mean", "sq_var", "acf_level", "acf_decay", "delta", "s_moment"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v}")


@dataclass(frozen=True)
class MomIntermediates:
    """Intermediate quantities of the moment inversion, kept for audit."""

    e_factor: float
    m1: float
    m2: float
    m3: float
    gamma_tilde_roots: tuple
    residuals: tuple
    gamma_tilde: float
    m4: float


@dataclass
class EstimateReport:
    """Fitted parameters plus method-specific diagnostics."""

    params: ParamSet
    method: str
    diagnostics: dict = field(default_factory=dict)
    standard_errors: dict | None = None


def forward_summary(params: ParamSet, delta: float, s_moment: float = 3.0) -> MomentSummary:
    """Exact moment summary implied by the model for grid step ``delta``.

    This is the forward map that the inversion undoes; it requires the
    fourth return moment to exist under ``s_moment``.
    """
    rm = return_moments_explicit(params, delta, 1.0, s_moment)
    sq_var = rm.fourth - rm.second**2
    return MomentSummary(
        sq_mean=rm.second,
        sq_var=sq_var,
        acf_level=rm.sq_cov_prefactor / sq_var,
        acf_decay=rm.decay_rate,
        delta=delta,
        s_moment=s_moment,
    )


def _acf(x: np.ndarray, max_lag: int) -> np.ndarray:
    xc = x - x.mean()
    var = float(xc @ xc) / len(x)
    out = np.empty(max_lag)
    for lag in range(1, max_lag + 1):
        out[lag - 1] = float(xc[:-lag] @ xc[lag:]) / len(x) / var
    return out


def empirical_moments(
    series: ReturnSeries,
    s_moment: float = 3.0,
    max_lag: int | None = None,
    fit_lags: tuple[int, int] | None = None,
    return_diagnostics: bool = False,
):
    """Empirical moment summary of an equidistant return series.

    The squared-return autocorrelation is fitted as log-linear in the
    lag by weighted least squares over lags with positive sample
    correlation, with weights rho(h)^2 so that noisy near-zero
    correlations carry little weight.  The default lag range is
    1..min(50, N/100).

    Raises AcfFitError when no exponential decay can be fitted (fewer
    than two usable lags, or a non-positive fitted decay rate) and
    ValueError for non-equidistant input.
    """
    if not series.equidistant:
        raise ValueError("the moment estimator needs an equidistant return series")
    y2 = series.returns**2
    n = len(y2)
    if max_lag is None:
        max_lag = min(50, max(2, n // 100))
    if max_lag >= n - 1:
        raise ValueError(f"max_lag {max_lag} too large for series of length {n}")
    rho = _acf(y2, max_lag)

    lo, hi = (1, max_lag) if fit_lags is None else fit_lags
    if not 1 <= lo <= hi <= max_lag:
        raise ValueError(f"fit_lags {(lo, hi)} must satisfy 1 <= lo <= hi <= {max_lag}")
    lags = np.arange(lo, hi + 1)
    vals = rho[lo - 1 : hi]
    usable = vals > 0
    if not np.any(usable):
        raise AcfFitError(
            f"no positive squared-return autocorrelations among lags {lo}..{hi}"
        )
    if np.count_nonzero(usable) < 2:
        raise AcfFitError("fewer than two positive autocorrelations; cannot fit a decay")
    lags_u = lags[usable].astype(float)
    log_rho = np.log(vals[usable])
    w = vals[usable] ** 2
    # weighted least squares of log rho on lag
    sw = w.sum()
    mx = (w * lags_u).sum() / sw
    my = (w * log_rho).sum() / sw
    sxx = (w * (lags_u - mx) ** 2).sum()
    slope = (w * (lags_u - mx) * (log_rho - my)).sum() / sxx
    intercept = my - slope * mx
    p_hat = -slope / series.delta
    if not p_hat > 0:
        raise AcfFitError(
            f"fitted autocorrelation does not decay (rate {p_hat:.3g} <= 0)"
        )
    k_hat = math.exp(intercept)
    resid = log_rho - (intercept + slope * lags_u)
    tss = (w * (log_rho - my) ** 2).sum()
    r2 = 1.0 - (w * resid**2).sum() / tss if tss > 0 else 1.0

    summary = MomentSummary(
        sq_mean=float(y2.mean()),
        sq_var=float(y2.var(ddof=1)),
        acf_level=k_hat,
        acf_decay=p_hat,
        delta=series.delta,
        s_moment=s_moment,
    )
    if return_diagnostics:
        return summary, {
            "acf_fit_r2": float(r2),
            "acf_lags_used": int(usable.sum()),
            "acf_values": rho,
        }
    return summary


# Snap width around the symmetric boundary gamma_tilde = 1; sample noise
# and rounding can land marginally on either side of it.
_GT_SNAP = 1e-9


def mom_invert(
    summary: MomentSummary, residual_tol: float = 0.5
) -> tuple[ParamSet, MomIntermediates]:
    """Invert a moment summary to model parameters in closed form.

    Solves the quadratic for the squared-asymmetry shift
    gamma_tilde = 1 + gamma^2, picks the admissible root by the sign
    identity the true shift must satisfy, and maps back through

        theta = p*mu/delta,  phi = -p/gt + sqrt(M4),
        gamma = sqrt(gt - 1),  eta = p + phi*gt.

    Raises InfeasibleMomentsError when the summary lies off the model
    manifold (non-positive M1 or M2, negative discriminant, shift
    outside [1, 2)) and RootSelectionError when no root passes
    selection.  ``residual_tol`` bounds the relative residual of the
    selection identity; the correct root sits at rounding level on exact
    summaries while the spurious one sits at 1.
    """
    mu, gam, k, p = summary.sq_mean, summary.sq_var, summary.acf_level, summary.acf_decay
    delta, s = summary.delta, summary.s_moment
    dp = delta * p

    e_factor = (-math.expm1(-dp)) * math.expm1(dp)
    m1 = gam - 6.0 * k * gam / e_factor * _x_minus_one_plus_exp_neg(dp) - 2.0 * mu**2
    if not m1 > 0:
        raise InfeasibleMomentsError(
            f"M1 = {m1:.6g} <= 0; the summary is outside the model manifold"
        )
    m2 = 1.0 - mu**2 * s / (delta * m1)
    if not m2 > 0:
        raise InfeasibleMomentsError(
            f"M2 = {m2:.6g} <= 0; the summary is outside the model manifold"
        )
    m3 = delta * k * gam * p**2 * s / (m1 * e_factor)

    ps = p * s
    denom = 2.0 * ps - m2
    if denom == 0.0:
        raise InfeasibleMomentsError("degenerate root equation: 2*p*S equals M2")
    disc = 8.0 * ps * m2**2 * m3 + 32.0 * ps**2 * m2**2 + 2.0 * ps * m2 * m3**2 - 8.0 * ps * m2**3
    if disc < 0:
        raise InfeasibleMomentsError(
            f"negative discriminant {disc:.6g} in the asymmetry-shift quadratic"
        )
    center = (-m3 - 4.0 * ps) / denom
    half = math.sqrt(disc) / (m2 * denom)
    roots = (center + half, center - half)

    def m4_of(gt):
        hh = gt * gt + 4.0 * gt - 4.0
        if gt == 0.0 or hh == 0.0:
            return math.nan, hh
        return p**2 / gt**2 + 2.0 * delta * k * gam * p**3 / (gt * m1 * e_factor * hh), hh

    residuals = []
    candidates = []
    for gt in roots:
        m4, hh = m4_of(gt)
        if not (math.isfinite(m4) and m4 > 0):
            residuals.append(math.inf)
            continue
        lhs = math.sqrt(m4) * hh * s * gt
        rhs = -m2 * gt**2 + m3 * gt + hh * s * p
        scale = abs(lhs) + abs(rhs)
        res = 0.0 if scale == 0.0 else abs(lhs - rhs) / scale
        residuals.append(res)
        # the shift is 1 + gamma^2, so a non-positive root can never be
        # the true one even when it happens to satisfy the identity
        if gt > 0:
            candidates.append((res, gt, m4))
    if not candidates:
        raise RootSelectionError(
            f"no positive root of the asymmetry-shift quadratic has positive M4 "
            f"(roots {roots})"
        )
    best_res, gt, m4 = min(candidates)
    if best_res > residual_tol:
        raise RootSelectionError(
            f"best root residual {best_res:.3g} exceeds tolerance {residual_tol:g} "
            f"(roots {roots}, residuals {tuple(residuals)})"
        )
    if abs(gt - 1.0) <= _GT_SNAP:
        gt = 1.0
        m4, _ = m4_of(gt)
    if not 1.0 <= gt < 2.0:
        raise InfeasibleMomentsError(
            f"selected asymmetry shift {gt:.6g} outside [1, 2); "
            f"no gamma in [0, 1) reproduces the summary"
        )

    phi = -p / gt + math.sqrt(m4)
    if not phi > 0:
        raise InfeasibleMomentsError(f"implied phi = {phi:.6g} is not positive")
    gamma = math.sqrt(gt - 1.0)
    theta = p * mu / delta
    eta = p + phi * gt

    # internal consistency: the reconstruction must sit in the stationary
    # region it was derived under
    psi2_abs = 2.0 * p - phi**2 * (gt * gt + 4.0 * gt - 4.0) * s
    if not psi2_abs > 0:
        raise InfeasibleMomentsError(
            f"reconstructed |Psi(2)| = {psi2_abs:.6g} is not positive"
        )

    params = ParamSet(theta=theta, eta=eta, phi=phi, gamma=gamma)
    inter = MomIntermediates(
        e_factor=e_factor,
        m1=m1,
        m2=m2,
        m3=m3,
        gamma_tilde_roots=roots,
        residuals=tuple(residuals),
        gamma_tilde=gt,
        m4=m4,
    )
    return params, inter


def _block_resample(rng, n, block):
    starts = rng.integers(0, n - block + 1, size=int(np.ceil(n / block)))
    idx = (starts[:, None] + np.arange(block)[None, :]).ravel()[:n]
    return idx


def mom_fit(
    series: ReturnSeries,
    s_moment: float = 3.0,
    max_lag: int | None = None,
    fit_lags: tuple[int, int] | None = None,
    bootstrap: int = 0,
    seed: int = 0,
) -> EstimateReport:
    """Method-of-moments estimate with diagnostics.

    With ``bootstrap`` > 0, standard errors come from a moving-block
    bootstrap of the return series (block length about ten decay times);
    replicates whose summaries are infeasible are dropped and counted.
    """
    summary, diag = empirical_moments(
        series, s_moment=s_moment, max_lag=max_lag, fit_lags=fit_lags, return_diagnostics=True
    )
    params, inter = mom_invert(summary)
    diagnostics = {
        "acf_fit_r2": diag["acf_fit_r2"],
        "acf_lags_used": diag["acf_lags_used"],
        "sq_mean": summary.sq_mean,
        "sq_var": summary.sq_var,
        "acf_level": summary.acf_level,
        "acf_decay": summary.acf_decay,
        "s_moment": s_moment,
        "gamma_tilde": inter.gamma_tilde,
        "root_residuals": inter.residuals,
        "psi1": -summary.acf_decay,
        "psi2": -(2.0 * summary.acf_decay
                  - params.phi**2
                  * (inter.gamma_tilde**2 + 4 * inter.gamma_tilde - 4)
                  * s_moment),
    }
    report = EstimateReport(params=params, method="mom", diagnostics=diagnostics)

    if bootstrap > 0:
        rng = np.random.Generator(np.random.Philox(key=seed))
        n = len(series)
        block = int(np.clip(round(10.0 / (summary.acf_decay * series.delta)), 10, n // 2))
        draws = []
        failures = 0
        for _ in range(bootstrap):
            idx = _block_resample(rng, n, block)
            rep = ReturnSeries.from_equidistant(series.returns[idx], series.delta)
            try:
                rep_summary = empirical_moments(
                    rep, s_moment=s_moment, max_lag=max_lag, fit_lags=fit_lags
                )
                rep_params, _ = mom_invert(rep_summary)
            except (InfeasibleMomentsError, RootSelectionError, AcfFitError):
                failures += 1
                continue
            draws.append([rep_params.theta, rep_params.eta, rep_params.phi, rep_params.gamma])
        diagnostics["bootstrap_failures"] = failures
        if len(draws) >= 2:
            se = np.std(np.array(draws), axis=0, ddof=1)
            report.standard_errors = dict(zip(("theta", "eta", "phi", "gamma"), map(float, se)))
    return report


def mom_roundtrip(
    deltas=(0.1, 1.0, 5.0), s_moment: float = 3.0, min_sets: int = 500
) -> dict:
    """Forward-then-invert consistency sweep over a stationary grid.

    Builds a deterministic grid of parameter sets whose fourth return
    moments exist under ``s_moment``, maps each through the exact
    forward summary and back through the inversion, and records the
    worst relative parameter error (absolute for gamma = 0, where the
    relative scale degenerates).
    """
    thetas = (0.01, 0.04, 0.2, 1.0)
    gammas = (0.0, 0.1, 0.3, 0.5, 0.7, 0.9)
    decay_rates = (0.005, 0.05, 0.5)
    phi_fractions = (0.25, 0.5, 0.9)
    records = []
    max_rel = 0.0
    for delta in deltas:
        for theta in thetas:
            for gamma in gammas:
                gt = 1.0 + gamma**2
                hw = 1.0 + 6.0 * gamma**2 + gamma**4
                for p in decay_rates:
                    phi_max = math.sqrt(2.0 * p / (hw * s_moment))
                    for frac in phi_fractions:
                        phi = frac * phi_max
                        true = ParamSet(theta=theta, eta=p + phi * gt, phi=phi, gamma=gamma)
                        summary = forward_summary(true, delta, s_moment)
                        est, _ = mom_invert(summary)
                        rel = max(
                            abs(est.theta - true.theta) / true.theta,
                            abs(est.eta - true.eta) / true.eta,
                            abs(est.phi - true.phi) / true.phi,
                            abs(est.gamma - true.gamma) / max(true.gamma, 1.0),
                        )
                        max_rel = max(max_rel, rel)
                        records.append(
                            (delta, true.theta, true.eta, true.phi, true.gamma, rel)
                        )
    if len(records) < min_sets:
        raise ValueError(
            f"grid produced only {len(records)} parameter sets, fewer than {min_sets}"
        )
    return {"n_sets": len(records), "max_rel_error": max_rel, "records": records}


# ---------------------------------------------------------------------------
# Pseudo maximum likelihood
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _pmle_filter(y, dts, theta, eta, phi, gamma, floor):
    n = y.shape[0]
    rho2 = np.empty(n)
    sig2 = np.empty(n + 1)
    p = eta - phi * (1.0 + gamma * gamma)
    level = theta / p
    v = level
    sig2[0] = v
    n_floored = 0
    for i in range(n):
        dt = dts[i]
        r2 = (v - level) * np.expm1(dt * p) / p + level * dt
        if r2 < floor:
            r2 = floor
            n_floored += 1
        rho2[i] = r2
        y_prev = y[i - 1] if i >= 1 else 0.0
        hy = abs(y_prev) - gamma * y_prev
        damp = np.exp(-eta * dt)
        v = theta * dt + damp * v + phi * damp * hy * hy
        sig2[i + 1] = v
    return rho2, sig2, n_floored


def pmle_variance_recursion(
    series: ReturnSeries, params: ParamSet, floor_scale: float = 1e-12
):
    """Model-implied conditional variances rho_i^2 of the returns.

    Starting from the stationary mean, the volatility state is filtered
    through

        sigma_{t_i}^2 = theta*dt_i + exp(-eta*dt_i)*sigma_{t_{i-1}}^2
                        + phi*exp(-eta*dt_i)*(|Y_{i-1}| - gamma*Y_{i-1})^2

    (the return before the sample start is taken as zero) and each
    rho_i^2 follows from the state at t_{i-1}:

        rho_i^2 = (sigma_{t_{i-1}}^2 - m) * (exp(dt_i*p) - 1)/p + m*dt_i

    with p = eta - phi*(1+gamma^2) and m = theta/p.  A positivity floor
    of ``floor_scale`` times the mean squared return protects the
    likelihood from non-positive values in deep low-volatility states.

    Returns (rho2, sigma2_states, n_floored); requires p > 0.
    """
    p = params.eta - params.phi * params.gamma_tilde
    if not p > 0:
        raise NonstationaryModelError(
            f"conditional variances need eta - phi*(1+gamma^2) > 0, got {p:.6g}"
        )
    y = np.ascontiguousarray(series.returns, dtype=float)
    dts = np.ascontiguousarray(series.dts, dtype=float)
    floor = floor_scale * float(np.mean(y**2))
    rho2, sig2, n_floored = _pmle_filter(
        y, dts, params.theta, params.eta, params.phi, params.gamma, floor
    )
    return rho2, sig2, int(n_floored)


def pmle_objective(series: ReturnSeries, params: ParamSet) -> float:
    """Gaussian pseudo log-likelihood of the return series:

        L_N = -1/2 sum log rho_i^2 - N/2 log(2 pi) - 1/2 sum Y_i^2 / rho_i^2
    """
    rho2, _, _ = pmle_variance_recursion(series, params)
    n = len(series)
    y = series.returns
    return float(
        -0.5 * np.sum(np.log(rho2)) - 0.5 * n * math.log(2 * math.pi) - 0.5 * np.sum(y**2 / rho2)
    )


def _pack(params: ParamSet, fix_gamma) -> np.ndarray:
    p = params.eta - params.phi * params.gamma_tilde
    x = [math.log(params.theta), math.log(params.phi), math.log(p)]
    if fix_gamma is None:
        g = min(max(params.gamma, 1e-4), 0.999)
        x.append(math.log(g / (1.0 - g)))
    return np.array(x)


def _unpack(x: np.ndarray, fix_gamma) -> ParamSet:
    theta = math.exp(x[0])
    phi = math.exp(x[1])
    p = math.exp(x[2])
    gamma = fix_gamma if fix_gamma is not None else 1.0 / (1.0 + math.exp(-x[3]))
    eta = p + phi * (1.0 + gamma * gamma)
    return ParamSet(theta=theta, eta=eta, phi=phi, gamma=gamma)


def _ensure_stationary_init(params: ParamSet) -> ParamSet:
    phi = params.phi
    while params.eta - phi * params.gamma_tilde <= 0:
        phi *= 0.5
        if phi < 1e-300:
            raise NonstationaryModelError("could not shrink phi into the stationary region")
    if phi != params.phi:
        params = ParamSet(theta=params.theta, eta=params.eta, phi=phi, gamma=params.gamma)
    return params


def pmle_fit(
    series: ReturnSeries,
    init: ParamSet | str = "mom",
    s_moment: float = 3.0,
    fix_gamma: float | None = None,
    max_iter: int | None = None,
    n_restarts: int = 2,
    bootstrap: int = 0,
    seed: int = 0,
    threads: int | None = None,
) -> EstimateReport:
    """Maximize the pseudo log-likelihood over the stationary region.

    The search runs a derivative-free simplex on an unconstrained
    reparameterization (log theta, log phi, log of the stationarity
    margin eta - phi*(1+gamma^2), logistic gamma), so every visited
    point satisfies theta, eta, phi > 0, gamma in [0, 1) and the
    stationarity constraint by construction.  The simplex is restarted
    from its best point until no further improvement.

    ``init`` is a ParamSet or "mom" for a method-of-moments start (an
    initialization outside the stationary region is pulled back by
    shrinking phi).  ``fix_gamma`` profiles the likelihood at a fixed
    asymmetry (such as 0 for the symmetric submodel).  Non-convergence
    is reported in the diagnostics, not raised.  With ``bootstrap`` > 0,
    standard errors come from moving-block bootstrap refits.
    """
    if isinstance(init, str):
        if init != "mom":
            raise ValueError(f"unknown init mode {init!r}")
        init_report = mom_fit(series, s_moment=s_moment)
        init_params = init_report.params
    else:
        init_params = init
    init_params = _ensure_stationary_init(init_params)
    if fix_gamma is not None and not 0.0 <= fix_gamma < 1.0:
        raise ValueError(f"fix_gamma must lie in [0,1), got {fix_gamma}")

    def neg_loglik(x):
        try:
            params = _unpack(x, fix_gamma)
        except (OverflowError, ValueError):
            return 1e12
        val = pmle_objective(series, params)
        return -val if np.isfinite(val) else 1e12

    x0 = _pack(init_params, fix_gamma)
    if max_iter is None:
        max_iter = 400 * len(x0)
    total_iters = 0
    total_evals = 0
    converged = False
    restarts_used = 0
    best_x, best_f = x0, neg_loglik(x0)
    for attempt in range(n_restarts + 1):
        res = minimize(
            neg_loglik,
            best_x,
            method="Nelder-Mead",
            options={"maxiter": max_iter, "xatol": 1e-8, "fatol": 1e-10, "adaptive": True},
        )
        total_iters += res.nit
        total_evals += res.nfev
        improved = res.fun < best_f - 1e-10
        if res.fun < best_f:
            best_x, best_f = res.x, res.fun
        converged = bool(res.success)
        restarts_used = attempt
        if not improved and attempt > 0:
            break

    params = _unpack(best_x, fix_gamma)
    rho2, _, n_floored = pmle_variance_recursion(series, params)
    report = EstimateReport(
        params=params,
        method="pmle",
        diagnostics={
            "loglik": -best_f,
            "iterations": total_iters,
            "n_evaluations": total_evals,
            "converged": converged,
            "restarts": restarts_used,
            "n_floored": n_floored,
            "init_theta": init_params.theta,
            "init_eta": init_params.eta,
            "init_phi": init_params.phi,
            "init_gamma": init_params.gamma,
            "stationarity_margin": params.eta - params.phi * params.gamma_tilde,
            "mean_scaled_sq_return": float(np.mean(series.returns**2 / rho2)),
        },
    )

    if bootstrap > 0:
        rng = np.random.Generator(np.random.Philox(key=seed))
        n = len(series)
        p_hat = params.eta - params.phi * params.gamma_tilde
        mean_dt = float(np.mean(series.dts))
        block = int(np.clip(round(10.0 / (p_hat * mean_dt)), 10, n // 2))
        seeds = [rng.integers(0, 2**63) for _ in range(bootstrap)]

        def one(rep_seed):
            rep_rng = np.random.Generator(np.random.Philox(key=int(rep_seed)))
            idx = _block_resample(rep_rng, n, block)
            rep = ReturnSeries.from_equidistant(series.returns[idx], mean_dt)
            try:
                rep_report = pmle_fit(
                    rep, init=params, s_moment=s_moment, fix_gamma=fix_gamma,
                    max_iter=max_iter, n_restarts=0,
                )
            except (NonstationaryModelError, ValueError):
                return None
            q = rep_report.params
            return [q.theta, q.eta, q.phi, q.gamma]

        if threads and threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                draws = [d for d in pool.map(one, seeds) if d is not None]
        else:
            draws = [d for d in map(one, seeds) if d is not None]
        report.diagnostics["bootstrap_failures"] = bootstrap - len(draws)
        if len(draws) >= 2:
            se = np.std(np.array(draws), axis=0, ddof=1)
            report.standard_errors = dict(zip(("theta", "eta", "phi", "gamma"), map(float, se)))
    return report
