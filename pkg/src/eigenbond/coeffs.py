"""Closed-form recursions for truncated-interval eigenfunction integrals.

The backward recursion for callable/putable bonds needs, at every decision
date, the Gram ("overlap") integrals of pairs of eigenfunctions over the
hold region and the projections of the discounted strike onto each
eigenfunction over the exercise regions:

    overlap_{m,n}(x, y) = int_x^y phi_m phi_n m(z) dz
    strike_n(x, y)      = int_x^y P(delta, z) phi_n(z) m(z) dz

Both reduce, model by model, to two families of weighted polynomial
integrals evaluated at the mapped interval endpoints:

    pair_{m,n}(x) = int_0^x  L_m L_n e^{-y} y^alpha dy      (Laguerre models)
                    int_-inf^x H_m H_n e^{-y^2} dy          (Hermite model)
    exp_n(s, x)   = int_0^x  y^alpha e^{-s y} L_n dy
                    int_-inf^x e^{s y - y^2} H_n dy

Off-diagonal pair integrals have closed forms; the diagonal ones and the
exp integrals satisfy recursions that step *down* in the polynomial order
while stepping up in degree, so each is built as a two-dimensional table
seeded at elevated order (alpha + N descending to alpha).  The state-space
endpoints are first-class interval values: they select the orthogonality /
Gamma-integral limits instead of the finite-x recursions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from . import series
from .errors import UnsupportedModelError, ValidationError
from .models import CIRModel, DiffusionModel, ThreeHalvesModel, VasicekModel
from .specfun import hermite_sequence, laguerre_sequence_table
from .subordinators import SubordinatorSpec, laplace_exponent

__all__ = [
    "laguerre_pair_integrals",
    "laguerre_pair_integrals_at_infinity",
    "laguerre_exp_integrals",
    "laguerre_exp_integrals_at_infinity",
    "hermite_pair_integrals",
    "hermite_pair_integrals_at_infinity",
    "hermite_exp_integrals",
    "hermite_exp_integrals_at_infinity",
    "OverlapMatrix",
    "StrikeProjection",
    "overlap_matrix",
    "strike_projection",
    "max_table_degree",
]

_HERMITE_DEGREE_CAP = 140  # sqrt(pi) 2^n n! overflows doubles shortly beyond


def max_table_degree(model: DiffusionModel) -> int:
    """Largest degree whose integral tables stay inside double range.

    Hermite orthogonality constants sqrt(pi) 2^n n! and the Gamma(alpha+n+1)
    seeds of the Laguerre chains overflow past these degrees; callers that
    grow coefficient vectors adaptively must stop here.
    """
    if isinstance(model, VasicekModel):
        return _HERMITE_DEGREE_CAP
    return int(168.0 - model.laguerre_order)


def _lower_gamma_vec(a: np.ndarray, x: float) -> np.ndarray:
    """Non-regularized lower incomplete gamma for a vector of parameters."""
    return sp.gammainc(a, x) * np.exp(sp.gammaln(a))


def _check_laguerre_degree(n_max: int, alpha: float) -> None:
    if alpha + n_max + 1.0 > 170.0:
        raise ValidationError(
            f"Laguerre integral tables limited to alpha + n + 1 <= 170 "
            f"(Gamma overflows double precision); got alpha={alpha}, n_max={n_max}"
        )


# ---------------------------------------------------------------------------
# Laguerre family
# ---------------------------------------------------------------------------


def laguerre_pair_integrals(n_max: int, alpha: float, x: float) -> np.ndarray:
    """Table [m, n] = int_0^x L_m^(alpha) L_n^(alpha) e^{-y} y^alpha dy.

    Off-diagonal entries from the closed form; diagonal entries from the
    descending-order chain seeded by lower incomplete gammas at orders
    alpha + n_max .. alpha.
    """
    if not alpha > -1.0:
        raise ValidationError(f"Laguerre order must satisfy alpha > -1, got {alpha}")
    _check_laguerre_degree(n_max, alpha)
    if x < 0.0:
        raise ValidationError(f"endpoint must be >= 0, got {x}")
    size = n_max + 1
    if x == 0.0:
        return np.zeros((size, size))

    js = np.arange(n_max + 2, dtype=float)
    lag = laguerre_sequence_table(n_max + 1, alpha + js, x)  # [degree, order offset]
    log_x = math.log(x)

    # Diagonal chain: diag[j, n] = a_{n,n}^(alpha+j)(x), needed for n <= n_max - j.
    diag = np.zeros((n_max + 1, n_max + 1))
    diag[:, 0] = _lower_gamma_vec(alpha + js[:-1] + 1.0, x)
    for j in range(n_max - 1, -1, -1):
        k = n_max - j
        n = np.arange(1, k + 1, dtype=float)
        weight = math.exp(-x + (alpha + j + 1.0) * log_x)
        diag[j, 1 : k + 1] = (
            lag[1 : k + 1, j] * lag[0:k, j + 1] * weight + diag[j + 1, 0:k]
        ) / n

    # Off-diagonal closed form; L_{-1}^(alpha+1) := 0 absorbs the m or n = 0 rows.
    weight0 = math.exp(-x + (alpha + 1.0) * log_x)
    shifted = np.concatenate(([0.0], lag[: n_max, 1]))  # L_{m-1}^(alpha+1)
    cross = np.outer(lag[: size, 0], shifted)
    idx = np.arange(size, dtype=float)
    denom = idx[None, :] - idx[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        table = weight0 * (cross - cross.T) / denom
    table[np.diag_indices(size)] = diag[0, : size]
    return table


def laguerre_pair_integrals_at_infinity(n_max: int, alpha: float) -> np.ndarray:
    """Full-line limit: Gamma(alpha + n + 1) / n! on the diagonal, zero off it."""
    if not alpha > -1.0:
        raise ValidationError(f"Laguerre order must satisfy alpha > -1, got {alpha}")
    n = np.arange(n_max + 1, dtype=float)
    return np.diag(np.exp(sp.gammaln(alpha + n + 1.0) - sp.gammaln(n + 1.0)))


def laguerre_exp_integrals(n_max: int, alpha: float, s: float, x: float) -> np.ndarray:
    """Vector [n] = int_0^x y^alpha e^{-s y} L_n^(alpha)(y) dy, s > 0."""
    if not alpha > -1.0:
        raise ValidationError(f"Laguerre order must satisfy alpha > -1, got {alpha}")
    _check_laguerre_degree(n_max, alpha)
    if not s > 0.0:
        raise ValidationError(f"exponential tilt must satisfy s > 0, got {s}")
    if x < 0.0:
        raise ValidationError(f"endpoint must be >= 0, got {x}")
    if x == 0.0:
        return np.zeros(n_max + 1)

    js = np.arange(n_max + 2, dtype=float)
    lag = laguerre_sequence_table(n_max + 1, alpha + js, x)
    log_x = math.log(x)
    log_s = math.log(s)

    table = np.zeros((n_max + 1, n_max + 1))
    a_seed = alpha + js[:-1] + 1.0
    table[:, 0] = np.exp(-a_seed * log_s) * _lower_gamma_vec(a_seed, s * x)
    for j in range(n_max - 1, -1, -1):
        k = n_max - j
        n = np.arange(1, k + 1, dtype=float)
        weight = math.exp(-s * x + (alpha + j + 1.0) * log_x)
        table[j, 1 : k + 1] = (
            weight * lag[0:k, j + 1] + (s - 1.0) * table[j + 1, 0:k]
        ) / n
    return table[0]


def laguerre_exp_integrals_at_infinity(n_max: int, alpha: float, s: float) -> np.ndarray:
    """Full-line limit Gamma(alpha + n + 1) (s - 1)^n / (n! s^{alpha + n + 1})."""
    if not alpha > -1.0:
        raise ValidationError(f"Laguerre order must satisfy alpha > -1, got {alpha}")
    if not s > 0.0:
        raise ValidationError(f"exponential tilt must satisfy s > 0, got {s}")
    n = np.arange(n_max + 1, dtype=float)
    if s == 1.0:
        out = np.zeros(n_max + 1)
        out[0] = math.gamma(alpha + 1.0)
        return out
    sign = np.where(n % 2 == 0, 1.0, -1.0) if s < 1.0 else np.ones(n_max + 1)
    log_mag = (
        sp.gammaln(alpha + n + 1.0)
        - sp.gammaln(n + 1.0)
        + n * math.log(abs(s - 1.0))
        - (alpha + n + 1.0) * math.log(s)
    )
    return sign * np.exp(log_mag)


# ---------------------------------------------------------------------------
# Hermite family
# ---------------------------------------------------------------------------


def _check_hermite_degree(n_max: int) -> None:
    if n_max > _HERMITE_DEGREE_CAP:
        raise ValidationError(
            f"Hermite integral tables limited to degree {_HERMITE_DEGREE_CAP} "
            "(the orthogonality constants overflow double precision beyond)"
        )


def hermite_pair_integrals(n_max: int, x: float) -> np.ndarray:
    """Table [m, n] = int_{-inf}^x H_m H_n e^{-y^2} dy."""
    _check_hermite_degree(n_max)
    size = n_max + 1
    herm = hermite_sequence(n_max + 1, x)
    damp = math.exp(-x * x)

    diag = np.empty(size)
    diag[0] = math.sqrt(math.pi) * sp.ndtr(math.sqrt(2.0) * x)
    for n in range(1, size):
        diag[n] = -herm[n - 1] * herm[n] * damp + 2.0 * n * diag[n - 1]

    cross = np.outer(herm[:size], herm[1 : size + 1])  # H_n H_{m+1}
    idx = np.arange(size, dtype=float)
    denom = 2.0 * (idx[None, :] - idx[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        table = damp * (cross - cross.T) / denom
    table[np.diag_indices(size)] = diag
    return table


def hermite_pair_integrals_at_infinity(n_max: int) -> np.ndarray:
    """Full-line limit: sqrt(pi) 2^n n! on the diagonal, zero off it."""
    _check_hermite_degree(n_max)
    n = np.arange(n_max + 1, dtype=float)
    return np.diag(
        np.exp(0.5 * math.log(math.pi) + n * math.log(2.0) + sp.gammaln(n + 1.0))
    )


def hermite_exp_integrals(n_max: int, s: float, x: float) -> np.ndarray:
    """Vector [n] = int_{-inf}^x e^{s y - y^2} H_n(y) dy."""
    _check_hermite_degree(n_max)
    herm = hermite_sequence(max(n_max, 1), x)
    boundary = math.exp(s * x - x * x)
    out = np.empty(n_max + 1)
    out[0] = (
        0.5
        * math.exp(0.25 * s * s)
        * math.sqrt(math.pi)
        * (sp.erf(0.5 * (2.0 * x - s)) + 1.0)
    )
    for n in range(1, n_max + 1):
        out[n] = -boundary * herm[n - 1] + s * out[n - 1]
    return out


def hermite_exp_integrals_at_infinity(n_max: int, s: float) -> np.ndarray:
    """Full-line limit e^{s^2/4} sqrt(pi) s^n (the recursion limit of the above)."""
    _check_hermite_degree(n_max)
    n = np.arange(n_max + 1)
    return math.exp(0.25 * s * s) * math.sqrt(math.pi) * s**n.astype(float)


# ---------------------------------------------------------------------------
# Model-level assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OverlapMatrix:
    """Gram matrix of eigenfunctions restricted to a state interval."""

    entries: np.ndarray
    interval: tuple[float, float]
    model_kind: str


@dataclass(frozen=True)
class StrikeProjection:
    """Projections of the delta-discounted unit payoff onto eigenfunctions."""

    entries: np.ndarray
    interval: tuple[float, float]
    notice_delta: float
    route: str


def _check_interval(model: DiffusionModel, x_lo: float, x_hi: float) -> None:
    if not (model.state_lo <= x_lo <= model.state_hi):
        raise ValidationError(f"x_lo={x_lo} outside closure of the state space")
    if not (model.state_lo <= x_hi <= model.state_hi):
        raise ValidationError(f"x_hi={x_hi} outside closure of the state space")
    if x_lo > x_hi:
        raise ValidationError(f"interval endpoints out of order: {x_lo} > {x_hi}")


def _laguerre_pair_at_state(model, n_max: int, x: float) -> np.ndarray:
    """Pair-integral table at the mapped coordinate of a state-space point."""
    alpha = model.laguerre_order
    if isinstance(model, ThreeHalvesModel):
        # reciprocal coordinate: state 0+ maps to +inf, state +inf maps to 0
        if x == 0.0:
            return laguerre_pair_integrals_at_infinity(n_max, alpha)
        if math.isinf(x):
            return np.zeros((n_max + 1, n_max + 1))
        return laguerre_pair_integrals(n_max, alpha, model.poly_coordinate(x))
    if math.isinf(x):
        return laguerre_pair_integrals_at_infinity(n_max, alpha)
    return laguerre_pair_integrals(n_max, alpha, model.poly_coordinate(x))


def _pair_difference(model: DiffusionModel, n_max: int, x_lo: float, x_hi: float) -> np.ndarray:
    """Mapped pair-table difference over [x_lo, x_hi] in state space."""
    if isinstance(model, (CIRModel, ThreeHalvesModel)):
        upper = _laguerre_pair_at_state(model, n_max, x_hi)
        lower = _laguerre_pair_at_state(model, n_max, x_lo)
        if isinstance(model, ThreeHalvesModel):
            return lower - upper  # orientation flips under v = beta / x
        return upper - lower
    if isinstance(model, VasicekModel):
        if math.isinf(x_hi):
            upper = hermite_pair_integrals_at_infinity(n_max)
        else:
            upper = hermite_pair_integrals(n_max, model.poly_coordinate(x_hi))
        if math.isinf(x_lo):
            lower = np.zeros((n_max + 1, n_max + 1))
        else:
            lower = hermite_pair_integrals(n_max, model.poly_coordinate(x_lo))
        return upper - lower
    raise UnsupportedModelError(f"overlap matrices unavailable for {model.kind}")


def _overlap_prefactor(model: DiffusionModel, n_rows: int, n_cols: int) -> np.ndarray:
    log_n = model.log_norm_constants(max(n_rows, n_cols))
    if isinstance(model, CIRModel):
        const = (model.b - 1.0) * math.log(model.sigma**2 / (2.0 * model.gamma)) - math.log(
            model.gamma
        )
    elif isinstance(model, VasicekModel):
        const = math.log(2.0) - math.log(model.sigma) - 0.5 * math.log(model.kappa)
    elif isinstance(model, ThreeHalvesModel):
        const = math.log(2.0 / model.sigma**2) - (
            2.0 * model.order_m + 1.0
        ) * math.log(model.beta)
    else:
        raise UnsupportedModelError(f"overlap matrices unavailable for {model.kind}")
    return np.exp(log_n[: n_rows + 1, None] + log_n[None, : n_cols + 1] + const)


def overlap_matrix(
    model: DiffusionModel, n_max: int, x_lo: float, x_hi: float
) -> OverlapMatrix:
    """Gram matrix overlap_{m,n}(x_lo, x_hi) for m, n = 0..n_max.

    The endpoints may be the state-space boundaries; the full interval
    yields the identity (orthonormality) and an empty interval the zero
    matrix.
    """
    _check_interval(model, x_lo, x_hi)
    if x_lo == x_hi:
        entries = np.zeros((n_max + 1, n_max + 1))
    else:
        entries = _overlap_prefactor(model, n_max, n_max) * _pair_difference(
            model, n_max, x_lo, x_hi
        )
    return OverlapMatrix(entries=entries, interval=(x_lo, x_hi), model_kind=model.kind)


def _overlap_block(
    model: DiffusionModel, n_rows: int, n_cols: int, x_lo: float, x_hi: float
) -> np.ndarray:
    """Rectangular overlap block (rows 0..n_rows, cols 0..n_cols)."""
    if x_lo == x_hi:
        return np.zeros((n_rows + 1, n_cols + 1))
    n_max = max(n_rows, n_cols)
    diff = _pair_difference(model, n_max, x_lo, x_hi)[: n_rows + 1, : n_cols + 1]
    return _overlap_prefactor(model, n_rows, n_cols)[: n_rows + 1, : n_cols + 1] * diff


def _closed_form_strike(
    model: DiffusionModel, n_max: int, x_lo: float, x_hi: float, delta: float
) -> np.ndarray:
    a_fac, b_fac = model.affine_bond_factors(delta)
    log_n = model.log_norm_constants(n_max)
    if isinstance(model, CIRModel):
        g, s2 = model.gamma, model.sigma**2
        tilt = b_fac * s2 / (2.0 * g) + (model.kappa + g) / (2.0 * g)
        alpha = model.laguerre_order

        def vec(x):
            if math.isinf(x):
                return laguerre_exp_integrals_at_infinity(n_max, alpha, tilt)
            return laguerre_exp_integrals(n_max, alpha, tilt, model.poly_coordinate(x))

        pref = a_fac * np.exp(
            log_n + (model.b - 1.0) * math.log(s2 / (2.0 * g)) - math.log(g)
        )
        return pref * (vec(x_hi) - vec(x_lo))
    if isinstance(model, VasicekModel):
        a = model.hermite_shift
        tilt = a - b_fac * model.sigma / math.sqrt(model.kappa)

        def vec(x):
            if math.isinf(x):
                if x > 0:
                    return hermite_exp_integrals_at_infinity(n_max, tilt)
                return np.zeros(n_max + 1)
            return hermite_exp_integrals(n_max, tilt, model.poly_coordinate(x))

        pref = (
            2.0
            * a_fac
            * np.exp(log_n)
            / (model.sigma * math.sqrt(model.kappa))
            * math.exp(
                -0.5 * a * a
                - b_fac * (model.theta - a * model.sigma / math.sqrt(model.kappa))
            )
        )
        return pref * (vec(x_hi) - vec(x_lo))
    raise UnsupportedModelError(
        f"closed-form strike projection unavailable for {model.kind}"
    )


def _expansion_strike(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    n_max: int,
    x_lo: float,
    x_hi: float,
    delta: float,
    eps: float,
    rule: str,
) -> np.ndarray:
    def weights(m_hi: int) -> np.ndarray:
        lam = laplace_exponent(sub, model.eigenvalues(m_hi))
        return model.unit_payoff_coefficients(m_hi) * np.exp(-lam * delta)

    m_cut = series.weight_cutoff(weights, eps, rule=rule)
    w = weights(m_cut)
    block = _overlap_block(model, n_max, m_cut, x_lo, x_hi)
    return block @ w


def strike_projection(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    n_max: int,
    x_lo: float,
    x_hi: float,
    delta: float,
    eps: float = 1e-10,
    route: str = "auto",
    rule: str = series.TWO_TERM,
) -> StrikeProjection:
    """Projections strike_n(x_lo, x_hi) of the delta-discounted unit payoff.

    ``route="closed_form"`` integrates the exponential-affine bond directly
    (plain CIR/Vasicek only); ``route="expansion"`` expands the bond in
    eigenfunctions with the inner sum cut by the same adaptive rule as the
    pricer.  ``"auto"`` picks the closed form whenever it exists.
    """
    _check_interval(model, x_lo, x_hi)
    if delta < 0.0:
        raise ValidationError(f"notice period must be >= 0, got {delta}")
    affine = isinstance(model, (CIRModel, VasicekModel))
    if route == "auto":
        route = "closed_form" if (sub.is_trivial and affine) else "expansion"
    if route == "closed_form":
        if not sub.is_trivial or not affine:
            raise UnsupportedModelError(
                "closed-form strike projections require a plain CIR or Vasicek model"
            )
        entries = (
            np.zeros(n_max + 1)
            if x_lo == x_hi
            else _closed_form_strike(model, n_max, x_lo, x_hi, delta)
        )
    elif route == "expansion":
        entries = (
            np.zeros(n_max + 1)
            if x_lo == x_hi
            else _expansion_strike(model, sub, n_max, x_lo, x_hi, delta, eps, rule)
        )
    else:
        raise ValidationError(f"unknown strike projection route {route!r}")
    return StrikeProjection(
        entries=entries, interval=(x_lo, x_hi), notice_delta=delta, route=route
    )
