"""Independent validators for the coefficient-recursion pricer.

Two desk-scale cross-checks that deliberately avoid the coefficient
recursion, the overlap/strike tables, and the bisection machinery:

* ``quadrature_dp_price``: dynamic programming on a state grid.  The
  pricing operator is applied by numerical integration of the transition
  density expansion p_t(x, y) = sum_n e^{-phi(lambda_n) t} phi_n(x)
  phi_n(y) against the speed measure; decisions are taken nodewise.
  Shares only the model layer (eigenfunctions, closed-form bonds) with the
  main pricer.

* ``mc_zero_coupon``: Monte Carlo discounting along simulated paths, with
  the subordinated models sampled through their inverse Gaussian clock.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DensityTruncationError, ValidationError
from .models import CIRModel, DiffusionModel, ThreeHalvesModel, VasicekModel
from .pricer import BondSchedule
from .subordinators import (
    SubordinatorSpec,
    laplace_exponent,
    short_rate_map,
)

__all__ = ["QuadratureGrid", "build_grid", "quadrature_dp_price", "mc_zero_coupon"]

_TAIL_MASS = 1e-11
_DENSITY_TAIL = 1e-12


class QuadratureGrid:
    """State abscissas and weights against the speed measure m(x) dx."""

    def __init__(self, nodes: np.ndarray, weights: np.ndarray, bounds: tuple[float, float]):
        if np.any(weights <= 0.0):
            raise ValidationError("quadrature weights must be positive")
        self.nodes = nodes
        self.weights = weights
        self.bounds = bounds


def build_grid(model: DiffusionModel, grid_size: int) -> QuadratureGrid:
    """Gauss-Legendre grid over stationary-quantile bounds, weighted by m(x).

    The CIR speed density has an integrable singularity x^{b-1} at the
    origin when b < 1; the left panel is built in the substituted variable
    u = x^b, which absorbs the singularity into the Jacobian exactly.
    """
    dist = model.stationary_distribution()
    lo = float(dist.ppf(_TAIL_MASS))
    hi = float(dist.ppf(1.0 - _TAIL_MASS))
    half = grid_size // 2

    if isinstance(model, CIRModel):
        b = model.b
        split = model.theta
        nodes_l, wts_l = np.polynomial.legendre.leggauss(half)
        u = 0.5 * split**b * (nodes_l + 1.0)
        x_l = u ** (1.0 / b)
        w_l = 0.5 * split**b * wts_l * (1.0 / b) * u ** (1.0 / b - 1.0)
        w_l = w_l * model.speed_density(x_l)
        nodes_r, wts_r = np.polynomial.legendre.leggauss(grid_size - half)
        x_r = 0.5 * (hi - split) * nodes_r + 0.5 * (hi + split)
        w_r = 0.5 * (hi - split) * wts_r * model.speed_density(x_r)
        nodes = np.concatenate([x_l, x_r])
        weights = np.concatenate([w_l, w_r])
        lo = 0.0
    else:
        nodes_g, wts_g = np.polynomial.legendre.leggauss(grid_size)
        nodes = 0.5 * (hi - lo) * nodes_g + 0.5 * (hi + lo)
        weights = 0.5 * (hi - lo) * wts_g * model.speed_density(nodes)

    return QuadratureGrid(nodes=nodes, weights=weights, bounds=(lo, hi))


def _density_matrix(
    eig_matrix: np.ndarray, philam: np.ndarray, t: float
) -> np.ndarray:
    """p_t(x_i, y_j) via the eigenfunction expansion on the grid."""
    damp = np.exp(-philam * t)
    return (eig_matrix * damp) @ eig_matrix.T


def _check_density_tail(philam: np.ndarray, t_min: float) -> None:
    tail = math.exp(-float(philam[-1]) * t_min)
    if tail > _DENSITY_TAIL:
        t_ok = -math.log(_DENSITY_TAIL) / float(philam[-1])
        raise DensityTruncationError(
            f"density truncation too coarse for t={t_min}: raise n_density "
            f"(currently valid only for t >= {t_ok:.3f})"
        )


def quadrature_dp_price(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    schedule: BondSchedule,
    x0: float,
    grid_size: int = 400,
    n_density: int = 120,
) -> float:
    """Bond value by grid dynamic programming on the transition density.

    Exercise decisions are applied nodewise; expectations are quadrature
    sums against the density expansion.  No expansion coefficients are
    carried and no boundaries are located, which makes this an independent
    check of the recursion pricer at the cost of grid-level accuracy.
    """
    if grid_size < 200:
        raise ValidationError("grid_size must be at least 200")
    sched = schedule
    k = sched.n_coupons
    grid = build_grid(model, grid_size)
    y, w = grid.nodes, grid.weights

    philam = np.asarray(laplace_exponent(sub, model.eigenvalues(n_density)), dtype=float)
    steps = [
        sched.coupon_time(k) - sched.decision_time(k - 1)
        if i == k - 1
        else sched.decision_time(i + 1) - sched.decision_time(i)
        for i in range(sched.protection_index, k)
    ]
    if steps:
        _check_density_tail(philam, min(steps))
    eig = model.eigenfunction_matrix(n_density, y)

    # zero-coupon P(delta, y) on the grid for the strike comparisons
    n_bond = 300
    philam_b = np.asarray(laplace_exponent(sub, model.eigenvalues(n_bond)), dtype=float)
    p_b = model.unit_payoff_coefficients(n_bond)
    eig_b = model.eigenfunction_matrix(n_bond, y)
    p_delta = eig_b @ (p_b * np.exp(-philam_b * sched.notice_delta))

    value = np.full(grid_size, 1.0 + sched.coupon)
    for i in range(k - 1, sched.protection_index - 1, -1):
        if i == k - 1:
            h = sched.coupon_time(k) - sched.decision_time(k - 1)
        else:
            h = sched.decision_time(i + 1) - sched.decision_time(i)
        density = _density_matrix(eig, philam, h)
        cont = density @ (w * value)
        value = cont.copy()
        k_call, k_put = sched.call_price(i), sched.put_price(i)
        if k_call is not None:
            value = np.minimum(k_call * p_delta, value)
        if k_put is not None:
            value = np.maximum(k_put * p_delta, value)
        value = value + sched.coupon * p_delta

    # discount the first decision-date value function back to issue
    if sched.protection_index < k:
        start_t = sched.decision_time(sched.protection_index)
    else:
        start_t = sched.maturity
    proj = eig.T @ (w * value)
    phi0 = model.eigenfunctions(n_density, x0)
    v0 = float(np.sum(np.exp(-philam * start_t) * proj * phi0))
    for i in range(1, sched.protection_index):
        t_i = sched.coupon_time(i)
        pv = float(
            np.sum(
                model.unit_payoff_coefficients(n_bond)
                * np.exp(-philam_b * t_i)
                * model.eigenfunctions(n_bond, x0)
            )
        )
        v0 += sched.coupon * pv
    return v0


# ---------------------------------------------------------------------------
# Monte Carlo zero-coupon validator
# ---------------------------------------------------------------------------


def _euler_diffusion_discount(
    model: DiffusionModel, t: float, x0: float, n_paths: int, steps: int, rng
) -> np.ndarray:
    """exp(-int r) along full-truncation Euler paths of the diffusion."""
    dt = t / steps
    sqdt = math.sqrt(dt)
    x = np.full(n_paths, float(x0))
    integral = np.zeros(n_paths)
    for _ in range(steps):
        if isinstance(model, CIRModel):
            pos = np.maximum(x, 0.0)
            rate = pos
            x_new = x + model.kappa * (model.theta - pos) * dt + model.sigma * np.sqrt(
                pos
            ) * sqdt * rng.standard_normal(n_paths)
        elif isinstance(model, VasicekModel):
            rate = x
            x_new = x + model.kappa * (model.theta - x) * dt + model.sigma * sqdt * rng.standard_normal(n_paths)
        elif isinstance(model, ThreeHalvesModel):
            pos = np.maximum(x, 1e-12)
            rate = pos
            x_new = x + model.kappa * (model.theta - pos) * pos * dt + model.sigma * pos**1.5 * sqdt * rng.standard_normal(n_paths)
        else:
            raise ValidationError(f"no Monte Carlo scheme for {model.kind}")
        if isinstance(model, CIRModel):
            rate_new = np.maximum(x_new, 0.0)
        elif isinstance(model, ThreeHalvesModel):
            rate_new = np.maximum(x_new, 1e-12)
        else:
            rate_new = x_new
        integral += 0.5 * (rate + rate_new) * dt
        x = x_new
    return np.exp(-integral)


def _subordinated_discount(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    t: float,
    x0: float,
    n_paths: int,
    steps_per_year: int,
    rng,
) -> np.ndarray:
    """exp(-int r_phi(Y_u) du) along time-changed paths.

    The inverse Gaussian clock is sampled on the calendar grid; the
    diffusion is advanced between clock readings by Euler substeps no
    longer than the calendar resolution.  The running discount uses the
    left-point rule in the short-rate map, interpolated from a precomputed
    monotone table.
    """
    if sub.family != "ig":
        raise ValidationError("subordinated Monte Carlo supports the ig family only")
    n_steps = max(1, int(round(t * steps_per_year)))
    du = t / n_steps
    dt_x = 1.0 / steps_per_year

    # short-rate map table over a generous state range
    dist = model.stationary_distribution()
    lo = model.state_lo if math.isfinite(model.state_lo) else float(dist.ppf(1e-12))
    lo = max(lo, float(dist.ppf(1e-14))) if isinstance(model, ThreeHalvesModel) else lo
    hi = max(float(dist.ppf(1.0 - 1e-12)), x0 * 1.5 + 0.5)
    xs = np.linspace(lo, hi, 600)
    rphi = np.array([short_rate_map(model, sub, float(v)) for v in xs])

    def rate_of(state):
        return np.interp(np.clip(state, lo, hi), xs, rphi)

    # IG increments over du: mean mu*du, shape mu^3 du^2 / nu
    ig_mean = sub.mu * du
    ig_shape = sub.mu**3 * du**2 / sub.nu_var

    x = np.full(n_paths, float(x0))
    integral = np.zeros(n_paths)
    for _ in range(n_steps):
        integral += rate_of(x) * du
        jump = rng.wald(ig_mean, ig_shape, size=n_paths) + sub.drift * du
        # advance the diffusion by the clock increment in bounded substeps
        remaining = jump.copy()
        while True:
            step = np.minimum(remaining, dt_x)
            active = step > 0.0
            if not np.any(active):
                break
            dt_vec = step[active]
            if isinstance(model, CIRModel):
                pos = np.maximum(x[active], 0.0)
                x[active] = (
                    x[active]
                    + model.kappa * (model.theta - pos) * dt_vec
                    + model.sigma * np.sqrt(pos * dt_vec) * rng.standard_normal(dt_vec.size)
                )
            elif isinstance(model, VasicekModel):
                decay = np.exp(-model.kappa * dt_vec)
                sd = model.sigma * np.sqrt(
                    (1.0 - np.exp(-2.0 * model.kappa * dt_vec)) / (2.0 * model.kappa)
                )
                x[active] = (
                    model.theta
                    + (x[active] - model.theta) * decay
                    + sd * rng.standard_normal(dt_vec.size)
                )
            else:
                pos = np.maximum(x[active], 1e-12)
                x[active] = (
                    x[active]
                    + model.kappa * (model.theta - pos) * pos * dt_vec
                    + model.sigma * pos**1.5 * np.sqrt(dt_vec) * rng.standard_normal(dt_vec.size)
                )
            remaining = remaining - step
    return np.exp(-integral)


def mc_zero_coupon(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    t: float,
    x0: float,
    n_paths: int = 100_000,
    steps_per_year: int = 250,
    seed: int = 0,
) -> tuple[float, float]:
    """Monte Carlo zero-coupon price estimate with its standard error.

    Deterministic for a fixed seed.  Paths are generated in chunks drawn
    from spawned child streams so the memory footprint stays bounded.
    """
    if steps_per_year < 250:
        raise ValidationError("steps_per_year must be at least 250")
    if n_paths < 1:
        raise ValidationError("need at least one path")
    if not model.contains(x0):
        raise ValidationError(f"state {x0} outside the {model.kind} state space")
    steps = max(1, int(round(t * steps_per_year)))
    chunk = 20_000
    n_chunks = (n_paths + chunk - 1) // chunk
    streams = np.random.default_rng(seed).spawn(n_chunks)
    total = 0.0
    total_sq = 0.0
    done = 0
    for rng in streams:
        m = min(chunk, n_paths - done)
        if sub.is_trivial:
            disc = _euler_diffusion_discount(model, t, x0, m, steps, rng)
        else:
            disc = _subordinated_discount(model, sub, t, x0, m, steps_per_year, rng)
        total += float(np.sum(disc))
        total_sq += float(np.sum(disc * disc))
        done += m
    mean = total / n_paths
    var = max(total_sq / n_paths - mean * mean, 0.0)
    return mean, math.sqrt(var / n_paths)
