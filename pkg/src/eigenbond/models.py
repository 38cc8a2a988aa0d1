"""Short-rate diffusion models and their spectral data.

Three mean-reverting diffusions drive the short rate r_t = r(X_t) = X_t:

* square-root (CIR): dX = kappa (theta - X) dt + sigma sqrt(X) dW on [0, inf)
* Ornstein-Uhlenbeck (Vasicek): dX = kappa (theta - X) dt + sigma dW on R
* 3/2: dX = kappa (theta - X) X dt + sigma X^{3/2} dW on (0, inf)

For each model the pricing semigroup has a purely discrete spectrum with an
affine eigenvalue ladder; the eigenfunctions are weighted Laguerre or
Hermite polynomials, orthonormal in L2 against the speed density m(x).
This module provides eigenvalues, normalized eigenfunctions, unit-payoff
projection coefficients p_n = (1, phi_n), speed densities, stationary
distributions, and the exponential-affine closed-form zero-coupon bonds
where they exist (CIR and Vasicek).

Eigenfunction values are produced by running the polynomial recursion in a
normalized scaling (the norm constant folded into the recursion), which
keeps every intermediate O(1) and remains finite at degrees where the raw
polynomial and the norm constant would separately overflow or underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import gammaln

from .errors import UnsupportedModelError, ValidationError

__all__ = [
    "DiffusionModel",
    "CIRModel",
    "VasicekModel",
    "ThreeHalvesModel",
    "make_model",
    "MODEL_KINDS",
]

MODEL_KINDS = ("cir", "vasicek", "three_halves")


@dataclass(frozen=True)
class DiffusionModel:
    """Base for the three short-rate diffusions; holds kappa, theta, sigma."""

    kappa: float
    theta: float
    sigma: float

    kind = "base"

    def __post_init__(self):
        for name in ("kappa", "theta", "sigma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValidationError(f"{name} must be finite and > 0, got {value}")

    # --- state space -----------------------------------------------------

    @property
    def state_lo(self) -> float:
        raise NotImplementedError

    @property
    def state_hi(self) -> float:
        raise NotImplementedError

    def contains(self, x: float) -> bool:
        return self.state_lo <= x <= self.state_hi

    def _require_state(self, x: float) -> None:
        if not self.contains(x):
            raise ValidationError(
                f"state {x} outside the {self.kind} state space "
                f"[{self.state_lo}, {self.state_hi}]"
            )

    # --- spectral data ----------------------------------------------------

    def eigenvalue(self, n) -> float | np.ndarray:
        """n-th eigenvalue of the negated pricing generator (affine in n)."""
        raise NotImplementedError

    def eigenvalues(self, n_max: int) -> np.ndarray:
        return self.eigenvalue(np.arange(n_max + 1))

    def log_norm_constants(self, n_max: int) -> np.ndarray:
        """log N_n for n = 0..n_max (N_n > 0 for all three models)."""
        raise NotImplementedError

    def unit_payoff_coefficients(self, n_max: int) -> np.ndarray:
        """Projections p_n = (1, phi_n) of the unit payoff for n = 0..n_max."""
        raise NotImplementedError

    def eigenfunctions(self, n_max: int, x: float) -> np.ndarray:
        """phi_0(x) .. phi_{n_max}(x), orthonormal against m(x) dx."""
        raise NotImplementedError

    def eigenfunction_matrix(self, n_max: int, xs: np.ndarray) -> np.ndarray:
        """Matrix [j, n] = phi_n(xs[j]); vectorized over the abscissas."""
        raise NotImplementedError

    # --- densities and bonds ----------------------------------------------

    def speed_density(self, x: float):
        """Speed density m(x); the stationary density up to normalization."""
        raise NotImplementedError

    def speed_mass(self) -> float:
        """Total mass integral of m over the state space (finite by assumption)."""
        raise NotImplementedError

    def stationary_distribution(self):
        """Normalized stationary law as a frozen scipy.stats distribution."""
        raise NotImplementedError

    def closed_form_bond(self, t: float, x) -> float | np.ndarray:
        """Exponential-affine zero-coupon bond A(t) e^{-B(t) x} where available."""
        raise UnsupportedModelError(
            f"no affine closed-form zero-coupon bond for the {self.kind} model"
        )

    def affine_bond_factors(self, t: float) -> tuple[float, float]:
        raise UnsupportedModelError(
            f"no affine closed-form zero-coupon bond for the {self.kind} model"
        )


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CIRModel(DiffusionModel):
    """Square-root diffusion; eigenfunctions are weighted Laguerre polynomials."""

    kind = "cir"

    @property
    def gamma(self) -> float:
        """sqrt(kappa^2 + 2 sigma^2); the eigenvalue gap."""
        return math.sqrt(self.kappa**2 + 2.0 * self.sigma**2)

    @property
    def b(self) -> float:
        """2 kappa theta / sigma^2; Feller boundary parameter."""
        return 2.0 * self.kappa * self.theta / self.sigma**2

    @property
    def state_lo(self) -> float:
        return 0.0

    @property
    def state_hi(self) -> float:
        return math.inf

    @property
    def laguerre_order(self) -> float:
        return self.b - 1.0

    def poly_coordinate(self, x) -> float | np.ndarray:
        """Map state to the Laguerre abscissa u = 2 gamma x / sigma^2."""
        return 2.0 * self.gamma * np.asarray(x, dtype=float) / self.sigma**2

    def eigenvalue(self, n):
        return self.gamma * np.asarray(n) + 0.5 * self.b * (self.gamma - self.kappa)

    def log_norm_constants(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1)
        s2 = self.sigma**2
        return 0.5 * (
            math.log(s2) + gammaln(n + 1.0) - math.log(2.0) - gammaln(self.b + n)
        ) + 0.5 * self.b * math.log(2.0 * self.gamma / s2)

    def unit_payoff_coefficients(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1)
        g, b, s2 = self.gamma, self.b, self.sigma**2
        log_p = (
            math.log(2.0 / s2)
            + self.log_norm_constants(n_max)
            + gammaln(b + n)
            - gammaln(n + 1.0)
            + b * math.log(s2 / (g + self.kappa))
            + n * math.log((g - self.kappa) / (g + self.kappa))
        )
        # (kappa - gamma) < 0 always, so the sign alternates with n.
        return np.where(n % 2 == 0, 1.0, -1.0) * np.exp(log_p)

    def _scaled_laguerre(self, n_max: int, u) -> np.ndarray:
        """N_n L_n^(b-1)(u) via the recursion with the norm folded in."""
        u = np.asarray(u, dtype=float)
        b = self.b
        out = np.empty((n_max + 1,) + u.shape)
        n0 = math.sqrt(self.sigma**2 / (2.0 * math.gamma(b))) * (
            2.0 * self.gamma / self.sigma**2
        ) ** (0.5 * b)
        out[0] = n0
        if n_max >= 1:
            out[1] = (-u + b) * math.sqrt(1.0 / b) * n0
        for n in range(2, n_max + 1):
            r1 = math.sqrt(n / (b + n - 1.0))
            r2 = math.sqrt(n * (n - 1.0) / ((b + n - 1.0) * (b + n - 2.0)))
            out[n] = (2.0 + (b - 2.0 - u) / n) * r1 * out[n - 1] - (
                1.0 + (b - 2.0) / n
            ) * r2 * out[n - 2]
        return out

    def eigenfunctions(self, n_max: int, x: float) -> np.ndarray:
        self._require_state(x)
        prefactor = math.exp((self.kappa - self.gamma) * x / self.sigma**2)
        return prefactor * self._scaled_laguerre(n_max, self.poly_coordinate(x))

    def eigenfunction_matrix(self, n_max: int, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        pref = np.exp((self.kappa - self.gamma) * xs / self.sigma**2)
        return (pref * self._scaled_laguerre(n_max, self.poly_coordinate(xs))).T

    def speed_density(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0):
            raise ValidationError("CIR speed density requires x >= 0")
        s2 = self.sigma**2
        return (2.0 / s2) * x ** (self.b - 1.0) * np.exp(-2.0 * self.kappa * x / s2)

    def speed_mass(self) -> float:
        s2 = self.sigma**2
        return (2.0 / s2) * math.gamma(self.b) * (s2 / (2.0 * self.kappa)) ** self.b

    def stationary_distribution(self):
        return stats.gamma(self.b, scale=self.sigma**2 / (2.0 * self.kappa))

    def affine_bond_factors(self, t: float) -> tuple[float, float]:
        g, k, b = self.gamma, self.kappa, self.b
        egt = math.expm1(g * t)  # e^{gt} - 1
        denom = (g + k) * egt + 2.0 * g
        a_fac = (2.0 * g * math.exp(0.5 * (k + g) * t) / denom) ** b
        b_fac = 2.0 * egt / denom
        return a_fac, b_fac

    def closed_form_bond(self, t: float, x):
        if t < 0.0:
            raise ValidationError("maturity must be >= 0")
        a_fac, b_fac = self.affine_bond_factors(t)
        return a_fac * np.exp(-b_fac * np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VasicekModel(DiffusionModel):
    """Ornstein-Uhlenbeck short rate; eigenfunctions are weighted Hermite polynomials."""

    kind = "vasicek"

    @property
    def hermite_shift(self) -> float:
        """a = sigma / kappa^{3/2}; offset of the Hermite argument."""
        return self.sigma / self.kappa**1.5

    @property
    def state_lo(self) -> float:
        return -math.inf

    @property
    def state_hi(self) -> float:
        return math.inf

    def xi(self, x) -> float | np.ndarray:
        return math.sqrt(self.kappa) / self.sigma * (np.asarray(x, dtype=float) - self.theta)

    def poly_coordinate(self, x) -> float | np.ndarray:
        """Map state to the Hermite abscissa w = xi(x) + a."""
        return self.xi(x) + self.hermite_shift

    def eigenvalue(self, n):
        return self.theta - self.sigma**2 / (2.0 * self.kappa**2) + self.kappa * np.asarray(n)

    def log_norm_constants(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1)
        return 0.5 * (
            0.5 * math.log(self.kappa / math.pi)
            + math.log(self.sigma)
            - (n + 1.0) * math.log(2.0)
            - gammaln(n + 1.0)
        )

    def unit_payoff_coefficients(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1)
        a = self.hermite_shift
        log_p = (
            math.log(2.0 / self.sigma)
            + 0.5 * math.log(math.pi / self.kappa)
            + self.log_norm_constants(n_max)
            + n * math.log(a)
            - 0.25 * a * a
        )
        return np.exp(log_p)

    def _scaled_hermite(self, n_max: int, w) -> np.ndarray:
        """N_n H_n(w) via the recursion with the norm folded in."""
        w = np.asarray(w, dtype=float)
        out = np.empty((n_max + 1,) + w.shape)
        n0 = math.sqrt(math.sqrt(self.kappa / math.pi) * self.sigma / 2.0)
        out[0] = np.full(w.shape, n0)
        if n_max >= 1:
            out[1] = w * math.sqrt(2.0) * n0
        for n in range(2, n_max + 1):
            out[n] = w * math.sqrt(2.0 / n) * out[n - 1] - math.sqrt(
                (n - 1.0) / n
            ) * out[n - 2]
        return out

    def eigenfunctions(self, n_max: int, x: float) -> np.ndarray:
        a = self.hermite_shift
        xi = self.xi(x)
        prefactor = math.exp(-a * xi - 0.5 * a * a)
        return prefactor * self._scaled_hermite(n_max, xi + a)

    def eigenfunction_matrix(self, n_max: int, xs: np.ndarray) -> np.ndarray:
        a = self.hermite_shift
        xi = self.xi(np.asarray(xs, dtype=float))
        pref = np.exp(-a * xi - 0.5 * a * a)
        return (pref * self._scaled_hermite(n_max, xi + a)).T

    def speed_density(self, x):
        x = np.asarray(x, dtype=float)
        s2 = self.sigma**2
        return (2.0 / s2) * np.exp(-self.kappa * (self.theta - x) ** 2 / s2)

    def speed_mass(self) -> float:
        return 2.0 / self.sigma * math.sqrt(math.pi / self.kappa)

    def stationary_distribution(self):
        return stats.norm(self.theta, self.sigma / math.sqrt(2.0 * self.kappa))

    def affine_bond_factors(self, t: float) -> tuple[float, float]:
        k, s2 = self.kappa, self.sigma**2
        b_fac = -math.expm1(-k * t) / k  # (1 - e^{-kt}) / k
        a_fac = math.exp(
            (b_fac - t) * (k * k * self.theta - 0.5 * s2) / (k * k)
            - s2 * b_fac * b_fac / (4.0 * k)
        )
        return a_fac, b_fac

    def closed_form_bond(self, t: float, x):
        if t < 0.0:
            raise ValidationError("maturity must be >= 0")
        a_fac, b_fac = self.affine_bond_factors(t)
        return a_fac * np.exp(-b_fac * np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreeHalvesModel(DiffusionModel):
    """3/2 diffusion; Laguerre eigenfunctions in the reciprocal coordinate beta/x."""

    kind = "three_halves"

    @property
    def alpha(self) -> float:
        """kappa / sigma^2 + 1; exponent parameter of the speed density."""
        return self.kappa / self.sigma**2 + 1.0

    @property
    def beta(self) -> float:
        """2 kappa theta / sigma^2; scale of the reciprocal coordinate."""
        return 2.0 * self.kappa * self.theta / self.sigma**2

    @property
    def order_m(self) -> float:
        """sqrt((kappa/sigma^2 + 1/2)^2 + 2/sigma^2); half the Laguerre order."""
        return math.sqrt((self.kappa / self.sigma**2 + 0.5) ** 2 + 2.0 / self.sigma**2)

    @property
    def state_lo(self) -> float:
        return 0.0

    @property
    def state_hi(self) -> float:
        return math.inf

    def contains(self, x: float) -> bool:
        return self.state_lo < x <= self.state_hi

    @property
    def laguerre_order(self) -> float:
        return 2.0 * self.order_m

    def poly_coordinate(self, x) -> float | np.ndarray:
        """Map state to the Laguerre abscissa v = beta / x (orientation reversed)."""
        return self.beta / np.asarray(x, dtype=float)

    def eigenvalue(self, n):
        gap = self.kappa * self.theta
        return gap * (np.asarray(n) + self.order_m - self.alpha + 0.5)

    def log_norm_constants(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1)
        two_m = 2.0 * self.order_m
        return 0.5 * (
            math.log(self.sigma**2)
            + (two_m + 1.0) * math.log(self.beta)
            + gammaln(n + 1.0)
            - math.log(2.0)
            - gammaln(two_m + n + 1.0)
        )

    def unit_payoff_coefficients(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1)
        m, al = self.order_m, self.alpha
        log_p = (
            math.log(2.0 / self.sigma**2)
            + self.log_norm_constants(n_max)
            - (al + m + 0.5) * math.log(self.beta)
            + math.lgamma(al + m + 0.5)
            + gammaln(m + n - al + 0.5)
            - gammaln(n + 1.0)
            - math.lgamma(m - al + 0.5)
        )
        return np.exp(log_p)

    def _scaled_laguerre(self, n_max: int, v) -> np.ndarray:
        """N_n L_n^(2m)(v) via the recursion with the norm folded in."""
        v = np.asarray(v, dtype=float)
        two_m = 2.0 * self.order_m
        out = np.empty((n_max + 1,) + v.shape)
        n0 = math.exp(
            0.5
            * (
                math.log(self.sigma**2)
                + (two_m + 1.0) * math.log(self.beta)
                - math.log(2.0)
                - math.lgamma(two_m + 1.0)
            )
        )
        out[0] = np.full(v.shape, n0)
        if n_max >= 1:
            out[1] = (-v + two_m + 1.0) * math.sqrt(1.0 / (two_m + 1.0)) * n0
        for n in range(2, n_max + 1):
            r1 = math.sqrt(n / (two_m + n))
            r2 = math.sqrt(n * (n - 1.0) / ((two_m + n) * (two_m + n - 1.0)))
            out[n] = (2.0 + (two_m - 1.0 - v) / n) * r1 * out[n - 1] - (
                1.0 + (two_m - 1.0) / n
            ) * r2 * out[n - 2]
        return out

    def eigenfunctions(self, n_max: int, x: float) -> np.ndarray:
        self._require_state(x)
        prefactor = x ** (self.alpha - self.order_m - 0.5)
        return prefactor * self._scaled_laguerre(n_max, self.poly_coordinate(x))

    def eigenfunction_matrix(self, n_max: int, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        pref = xs ** (self.alpha - self.order_m - 0.5)
        return (pref * self._scaled_laguerre(n_max, self.poly_coordinate(xs))).T

    def speed_density(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0.0):
            raise ValidationError("3/2 speed density requires x > 0")
        s2 = self.sigma**2
        return (2.0 / s2) * x ** (-2.0 * self.alpha - 1.0) * np.exp(-self.beta / x)

    def speed_mass(self) -> float:
        # substitute v = beta/x: (2/sigma^2) beta^{-2 alpha} Gamma(2 alpha)
        return (
            2.0
            / self.sigma**2
            * math.exp(math.lgamma(2.0 * self.alpha) - 2.0 * self.alpha * math.log(self.beta))
        )

    def stationary_distribution(self):
        return stats.invgamma(2.0 * self.alpha, scale=self.beta)


# ---------------------------------------------------------------------------

_MODEL_CLASSES = {
    "cir": CIRModel,
    "vasicek": VasicekModel,
    "three_halves": ThreeHalvesModel,
}


def make_model(kind: str, kappa: float, theta: float, sigma: float) -> DiffusionModel:
    """Construct a model by kind name ('cir', 'vasicek', 'three_halves')."""
    try:
        cls = _MODEL_CLASSES[kind.lower()]
    except KeyError:
        raise ValidationError(
            f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}"
        ) from None
    return cls(kappa=kappa, theta=theta, sigma=sigma)
