"""Levy subordinators: Laplace exponents and the induced short-rate map.

A subordinator (nondecreasing Levy process) with drift gamma and Levy
measure nu(ds) time-changes a short-rate diffusion into a jump-diffusion
(gamma > 0) or pure-jump (gamma = 0) model.  Computationally the change is
tiny: each eigenvalue lambda_n of the pricing semigroup is replaced by
phi(lambda_n), where phi is the subordinator's Laplace exponent, while the
eigenfunctions are untouched.  The short rate of the time-changed model is
no longer the state itself but

    r_phi(x) = gamma * r(x) + integral (1 - P(s, x)) nu(ds),

with P(s, x) the zero-coupon bond of the *diffusion* model.

Supported families (lowercase names used in configs):

* ``"none"``            trivial clock, phi(lam) = lam
* ``"ig"``              inverse Gaussian, parameterized by the mean mu and
                        variance nu_var of the process at unit time
* ``"gamma"``           Levy density C s^{-1} e^{-eta s}
* ``"tempered_stable"`` Levy density C s^{-p-1} e^{-eta s}, p < 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ValidationError
from .models import CIRModel, DiffusionModel, VasicekModel

__all__ = [
    "SubordinatorSpec",
    "laplace_exponent",
    "subordinate_eigenvalue",
    "subordinate_eigenvalues",
    "levy_mean",
    "mean_rate",
    "short_rate_map",
    "invert_short_rate",
]

FAMILIES = ("none", "ig", "gamma", "tempered_stable")


@dataclass(frozen=True)
class SubordinatorSpec:
    """Subordinator family plus parameters.

    ``drift`` is the deterministic clock speed gamma >= 0.  The inverse
    Gaussian family uses (mu, nu_var) = mean and variance at unit time; the
    gamma and tempered-stable families use the Levy-density parameters
    (c, eta) and additionally p for tempered stable.
    """

    family: str = "none"
    drift: float = 0.0
    mu: float | None = None
    nu_var: float | None = None
    c: float | None = None
    p: float | None = None
    eta: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(
                f"unknown subordinator family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.family != "none" and not self.drift >= 0.0:
            raise ValidationError(f"drift must be >= 0, got {self.drift}")
        if self.family == "ig":
            if self.mu is None or self.nu_var is None:
                raise ValidationError("ig subordinator requires mu and nu_var")
            if not (self.mu > 0.0 and self.nu_var > 0.0):
                raise ValidationError("ig subordinator requires mu > 0 and nu_var > 0")
        elif self.family == "gamma":
            if self.c is None or self.eta is None:
                raise ValidationError("gamma subordinator requires c and eta")
            if not (self.c > 0.0 and self.eta > 0.0):
                raise ValidationError("gamma subordinator requires c > 0 and eta > 0")
        elif self.family == "tempered_stable":
            if self.c is None or self.p is None or self.eta is None:
                raise ValidationError("tempered_stable subordinator requires c, p, eta")
            if not self.c > 0.0:
                raise ValidationError("tempered_stable requires c > 0")
            if not self.p < 1.0:
                raise ValidationError(f"tempered_stable requires p < 1, got {self.p}")
            if self.eta < 0.0:
                raise ValidationError("tempered_stable requires eta >= 0")
            if self.eta == 0.0 and not 0.0 < self.p:
                raise ValidationError("eta = 0 (stable limit) needs 0 < p < 1")

    # Convenience constructors ------------------------------------------------

    @staticmethod
    def none() -> "SubordinatorSpec":
        return SubordinatorSpec(family="none")

    @staticmethod
    def inverse_gaussian(drift: float, mu: float, nu_var: float) -> "SubordinatorSpec":
        return SubordinatorSpec(family="ig", drift=drift, mu=mu, nu_var=nu_var)

    @staticmethod
    def gamma_process(drift: float, c: float, eta: float) -> "SubordinatorSpec":
        return SubordinatorSpec(family="gamma", drift=drift, c=c, eta=eta)

    @staticmethod
    def tempered_stable(drift: float, c: float, p: float, eta: float) -> "SubordinatorSpec":
        return SubordinatorSpec(family="tempered_stable", drift=drift, c=c, p=p, eta=eta)

    @property
    def is_trivial(self) -> bool:
        return self.family == "none"


def laplace_exponent(sub: SubordinatorSpec, lam):
    """phi(lam) = gamma lam + int (1 - e^{-lam s}) nu(ds), elementwise in lam."""
    lam = np.asarray(lam, dtype=float)
    if sub.family == "none":
        return lam + 0.0
    if sub.family == "ig":
        arg = 1.0 + 2.0 * (sub.nu_var / sub.mu) * lam
        if np.any(arg < 0.0):
            raise ValidationError(
                "inverse Gaussian Laplace exponent undefined: 1 + 2 (nu/mu) lam < 0"
            )
        return sub.drift * lam + sub.mu**2 / sub.nu_var * (np.sqrt(arg) - 1.0)
    if sub.family == "gamma":
        ratio = 1.0 + lam / sub.eta
        if np.any(ratio <= 0.0):
            raise ValidationError("gamma Laplace exponent undefined: 1 + lam/eta <= 0")
        return sub.drift * lam + sub.c * np.log(ratio)
    # tempered stable, p != 0
    shifted = lam + sub.eta
    if np.any(shifted < 0.0):
        raise ValidationError("tempered-stable Laplace exponent undefined: lam + eta < 0")
    g = math.gamma(-sub.p)
    return sub.drift * lam - sub.c * g * (shifted**sub.p - sub.eta**sub.p)


def subordinate_eigenvalue(model: DiffusionModel, sub: SubordinatorSpec, n):
    """phi(lambda_n) of the time-changed pricing semigroup."""
    return laplace_exponent(sub, model.eigenvalue(n))


def subordinate_eigenvalues(model: DiffusionModel, sub: SubordinatorSpec, n_max: int):
    return laplace_exponent(sub, model.eigenvalues(n_max))


def levy_density(sub: SubordinatorSpec, s):
    """Levy density nu(s) of the jump measure (zero for the trivial clock)."""
    s = np.asarray(s, dtype=float)
    if sub.family == "none":
        return np.zeros_like(s)
    if sub.family == "ig":
        coef = sub.mu * math.sqrt(sub.mu / (2.0 * math.pi * sub.nu_var))
        return coef * s**-1.5 * np.exp(-0.5 * sub.mu / sub.nu_var * s)
    if sub.family == "gamma":
        return sub.c * s**-1.0 * np.exp(-sub.eta * s)
    return sub.c * s ** (-sub.p - 1.0) * np.exp(-sub.eta * s)


def levy_mean(sub: SubordinatorSpec) -> float:
    """First moment int s nu(ds) of the jump measure."""
    if sub.family == "none":
        return 0.0
    if sub.family == "ig":
        return sub.mu
    if sub.family == "gamma":
        return sub.c / sub.eta
    if sub.eta == 0.0:
        raise ValidationError(
            "stable limit eta = 0 has a divergent first moment; cannot normalize"
        )
    return sub.c * math.gamma(1.0 - sub.p) * sub.eta ** (sub.p - 1.0)


def mean_rate(sub: SubordinatorSpec) -> float:
    """Expected clock speed E[T_1] = gamma + int s nu(ds); 1 for the trivial clock."""
    if sub.family == "none":
        return 1.0
    return sub.drift + levy_mean(sub)


# ---------------------------------------------------------------------------
# Short-rate map of the time-changed model
# ---------------------------------------------------------------------------

_TAIL_CUTOFF = 1e-18


def _jump_tail_limit(sub: SubordinatorSpec) -> float:
    """Upper integration limit where the exponential tilt kills the density."""
    if sub.family == "ig":
        eta = 0.5 * sub.mu / sub.nu_var
    else:
        eta = sub.eta
    if eta <= 0.0:
        raise ValidationError("short-rate map requires an exponentially tilted family")
    return max(2.0, -math.log(_TAIL_CUTOFF) / eta)


def _jump_rate_integral_quadrature(model, sub, x: float) -> float:
    """int (1 - P(s, x)) nu(ds) using the closed-form bond of the diffusion.

    The density is integrably singular at s = 0 (s^{-p-1} with p < 1, or
    s^{-3/2} for inverse Gaussian); substituting s = u^2 on (0, 1] makes the
    integrand bounded there since 1 - P(s, x) vanishes linearly in s.
    """

    def near(u):
        s = u * u
        return 2.0 * u * (1.0 - model.closed_form_bond(s, x)) * levy_density(sub, s)

    def far(s):
        return (1.0 - model.closed_form_bond(s, x)) * levy_density(sub, s)

    s_max = _jump_tail_limit(sub)
    near_part, _ = integrate.quad(near, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=200)
    far_part, _ = integrate.quad(far, 1.0, s_max, epsabs=1e-13, epsrel=1e-11, limit=200)
    return near_part + far_part


def _jump_rate_integral_expansion(model, sub, x: float, tol: float = 1e-11) -> float:
    """Same integral through the eigenfunction expansion of 1 - P(s, x).

    Termwise integration gives sum_n p_n (phi(lambda_n) - gamma lambda_n)
    phi_n(x); used where no closed-form bond exists (3/2 family).
    """
    block = 64
    total = 0.0
    n_lo = 0
    flat_runs = 0
    while n_lo < 20000:
        n_hi = n_lo + block - 1
        lam = model.eigenvalue(np.arange(n_lo, n_hi + 1))
        jump_part = laplace_exponent(sub, lam) - sub.drift * lam
        p = model.unit_payoff_coefficients(n_hi)[n_lo:]
        phi_x = model.eigenfunctions(n_hi, x)[n_lo:]
        terms = p * jump_part * phi_x
        total += float(np.sum(terms))
        if np.max(np.abs(terms)) <= tol * max(abs(total), 1e-3):
            flat_runs += 1
            if flat_runs >= 2:
                return total
        else:
            flat_runs = 0
        n_lo = n_hi + 1
    raise ValidationError(
        "short-rate map expansion did not converge; state too close to the boundary"
    )


def short_rate_map(model: DiffusionModel, sub: SubordinatorSpec, x: float) -> float:
    """Short rate r_phi(x) of the time-changed model at state x."""
    if not model.contains(x):
        raise ValidationError(f"state {x} outside the {model.kind} state space")
    if sub.is_trivial:
        return float(x)
    if isinstance(model, (CIRModel, VasicekModel)):
        jump = _jump_rate_integral_quadrature(model, sub, x)
    else:
        jump = _jump_rate_integral_expansion(model, sub, x)
    return sub.drift * float(x) + jump


def invert_short_rate(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    rate: float,
    tol: float = 1e-12,
) -> float:
    """State x with r_phi(x) = rate; r_phi is strictly increasing in x."""
    if sub.is_trivial:
        return float(rate)
    lo, hi = rate - 0.5, rate + 0.5
    lo = max(lo, model.state_lo + 1e-12) if math.isfinite(model.state_lo) else lo
    while short_rate_map(model, sub, hi) < rate:
        hi += 0.5
        if hi > 50.0:
            raise ValidationError(f"cannot bracket state for short rate {rate}")
    while short_rate_map(model, sub, lo) > rate:
        step = 0.5 if math.isfinite(model.state_lo) else 0.5
        new_lo = lo / 2.0 if math.isfinite(model.state_lo) else lo - step
        if math.isfinite(model.state_lo) and lo < 1e-10:
            break
        lo = new_lo
        if lo < -50.0:
            raise ValidationError(f"cannot bracket state for short rate {rate}")
    from scipy.optimize import brentq

    return float(
        brentq(lambda x: short_rate_map(model, sub, x) - rate, lo, hi, xtol=tol)
    )
