"""Backward recursion pricing of callable, putable, and straight bonds.

The bond value at issue is built in three moves:

1.  Terminal coefficients c_n = (1 + coupon) p_n expand the redemption
    payment in the eigenbasis.
2.  At each decision date, stepping backward, the hold value is the
    eigenfunction series with coefficients c_n e^{-phi(lambda_n) h}.  The
    issuer calls below the state x_c where the discounted call price drops
    under the hold value, the holder puts above the state x_p where the
    discounted put price rises above it; both break-even states are found
    by bisection.  The new coefficient vector is assembled in closed form
    from strike projections over the exercise regions, the overlap matrix
    over the hold region, and the coupon term.
3.  At issue the value is the series at the first decision time plus the
    closed-form (or expansion) present value of the protected coupons.

Every series evaluation is truncated adaptively (see ``series``).  The
carried coefficient vectors are cut separately, by the decay of their own
next-stage term weights: exercise kinks give the assembled value function
slower coefficient decay than the series evaluations that located the
boundaries, so the two depths are controlled independently (see
``ASSEMBLY_TAIL_MARGIN``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import coeffs as coeffs_mod
from . import series
from .errors import BracketError, ConvergenceError, ValidationError
from .models import CIRModel, DiffusionModel, ThreeHalvesModel, VasicekModel
from .subordinators import SubordinatorSpec, laplace_exponent, short_rate_map

__all__ = [
    "BondSchedule",
    "CoefficientState",
    "DateRecord",
    "PricingResult",
    "zero_coupon_price",
    "continuation_value",
    "find_break_even",
    "price_bond",
]

_POOL_CAP = 2000  # hard ceiling for uncapped series before declaring failure
_DEFAULT_BRACKET_SIGMAS = 4.0
_CIR_BRACKET_CAP = 50.0  # upper search bound as a multiple of theta

# The carried coefficient vector is cut where the next stage's term weights
# |c_n| e^{-phi(lambda_n) h} drop below ASSEMBLY_TAIL_MARGIN * eps relative
# to their running sum.  The margin is calibrated so the per-date
# truncation-level profile lands on benchmark.MAX_TRUNCATION; the discarded
# tail stays invisible at the eps-level tolerances of every value and
# break-even benchmark (tighten eps to deepen everything coherently).
ASSEMBLY_TAIL_MARGIN = 100.0


# ---------------------------------------------------------------------------
# Schedules and result containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BondSchedule:
    """Coupon and exercise schedule of a (possibly) callable/putable bond.

    Face value is normalized to one.  ``coupon_times`` are the payment
    dates t_1 < ... < t_k with t_k the maturity, each paying ``coupon``.
    Exercise is possible at t_i for i = protection_index..k-1 (1-based),
    decided at tau_i = t_i - notice_delta; ``call_prices`` / ``put_prices``
    hold the strike ladders over exactly those dates.
    """

    coupon: float
    coupon_times: tuple[float, ...]
    protection_index: int
    notice_delta: float
    call_prices: tuple[float, ...] | None = None
    put_prices: tuple[float, ...] | None = None

    def __post_init__(self):
        times = tuple(float(t) for t in self.coupon_times)
        object.__setattr__(self, "coupon_times", times)
        if len(times) == 0:
            raise ValidationError("schedule needs at least one coupon/redemption date")
        if self.coupon < 0.0:
            raise ValidationError("coupon must be >= 0")
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])) or times[0] <= 0.0:
            raise ValidationError("coupon times must be positive and strictly increasing")
        if self.notice_delta < 0.0:
            raise ValidationError("notice period must be >= 0")
        spacing = min(
            [times[0]] + [t2 - t1 for t1, t2 in zip(times, times[1:])]
        )
        if self.notice_delta >= spacing:
            raise ValidationError("notice period must be shorter than the coupon spacing")
        k = len(times)
        if not 1 <= self.protection_index <= k:
            raise ValidationError(
                f"protection index must lie in [1, {k}], got {self.protection_index}"
            )
        n_ex = k - self.protection_index
        for name, ladder in (("call_prices", self.call_prices), ("put_prices", self.put_prices)):
            if ladder is not None:
                ladder = tuple(float(v) for v in ladder)
                object.__setattr__(self, name, ladder)
                if len(ladder) != n_ex:
                    raise ValidationError(
                        f"{name} must list one strike per exercisable date "
                        f"({n_ex} expected, got {len(ladder)})"
                    )
                if any(v <= 0.0 for v in ladder):
                    raise ValidationError(f"{name} must be positive")
        if self.call_prices is not None and self.put_prices is not None:
            if any(c <= p for c, p in zip(self.call_prices, self.put_prices)):
                raise ValidationError("call prices must exceed put prices datewise")

    @property
    def maturity(self) -> float:
        return self.coupon_times[-1]

    @property
    def n_coupons(self) -> int:
        return len(self.coupon_times)

    @property
    def exercise_indices(self) -> range:
        """1-based coupon indices with an embedded decision."""
        return range(self.protection_index, self.n_coupons)

    def coupon_time(self, i: int) -> float:
        """t_i for the 1-based coupon index."""
        return self.coupon_times[i - 1]

    def decision_time(self, i: int) -> float:
        return self.coupon_time(i) - self.notice_delta

    def call_price(self, i: int) -> float | None:
        if self.call_prices is None:
            return None
        return self.call_prices[i - self.protection_index]

    def put_price(self, i: int) -> float | None:
        if self.put_prices is None:
            return None
        return self.put_prices[i - self.protection_index]


@dataclass(frozen=True)
class CoefficientState:
    """Expansion coefficients carried between decision dates."""

    coefficients: np.ndarray
    decision_index: int
    truncation_used: int

    def __post_init__(self):
        if not np.all(np.isfinite(self.coefficients)):
            raise ConvergenceError(
                f"non-finite expansion coefficients at decision index {self.decision_index}"
            )


@dataclass
class DateRecord:
    """Per-decision-date diagnostics of the backward recursion."""

    index: int
    decision_time: float
    call_state: float | None = None
    put_state: float | None = None
    call_rate: float | None = None
    put_rate: float | None = None
    eval_levels: list[int] = field(default_factory=list)
    assembled: int = 0

    @property
    def average_level(self) -> float:
        return float(np.mean(self.eval_levels)) if self.eval_levels else float("nan")

    @property
    def max_level(self) -> int:
        return max(self.eval_levels) if self.eval_levels else 0


@dataclass
class PricingResult:
    """Bond values plus break-even and truncation diagnostics."""

    initial_states: np.ndarray
    values: np.ndarray
    dates: list[DateRecord]
    value_levels: list[int]
    eps: float

    @property
    def break_even_states(self):
        return [(d.call_state, d.put_state) for d in self.dates]

    @property
    def break_even_short_rates(self):
        return [(d.call_rate, d.put_rate) for d in self.dates]


# ---------------------------------------------------------------------------
# Spectral supply
# ---------------------------------------------------------------------------


class SpectralBasis:
    """Grow-on-demand eigenvalues, subordinate eigenvalues, and unit coefficients."""

    def __init__(self, model: DiffusionModel, sub: SubordinatorSpec):
        self.model = model
        self.sub = sub
        try:
            lam0 = float(model.eigenvalue(0))
            laplace_exponent(sub, lam0)
        except ValidationError as exc:
            raise ValidationError(
                f"subordinator undefined at the bottom eigenvalue lambda_0 = "
                f"{model.eigenvalue(0):.6g}: {exc}"
            ) from exc
        self._grow(64)

    def _grow(self, n_hi: int) -> None:
        self.lam = np.asarray(self.model.eigenvalues(n_hi), dtype=float)
        self.philam = np.asarray(laplace_exponent(self.sub, self.lam), dtype=float)
        self.p = self.model.unit_payoff_coefficients(n_hi)

    def ensure(self, n_hi: int) -> None:
        if n_hi >= self.lam.size:
            self._grow(max(n_hi, 2 * (self.lam.size - 1)))

    def unit_weights(self, t: float, n_hi: int) -> np.ndarray:
        """p_n e^{-phi(lambda_n) t} for n = 0..n_hi."""
        self.ensure(n_hi)
        return self.p[: n_hi + 1] * np.exp(-self.philam[: n_hi + 1] * t)

    def decay(self, t: float, n_hi: int) -> np.ndarray:
        self.ensure(n_hi)
        return np.exp(-self.philam[: n_hi + 1] * t)


def _series_eval_capped(
    basis: SpectralBasis, weights: np.ndarray, x: float, eps: float, rule: str
) -> tuple[float, int]:
    """Truncated sum_n weights_n phi_n(x) with a fixed coefficient supply.

    Returns (value, stop level).  When the rule does not fire within the
    supply, every available term is used.
    """
    n_hi = weights.size - 1
    phi = basis.model.eigenfunctions(n_hi, x)
    terms = weights * phi
    value, level, _ = series.truncate_terms(terms, eps, rule)
    return value, level


def _series_eval_pool(
    basis: SpectralBasis, t: float, x: float, eps: float, rule: str, scale: float = 1.0
) -> tuple[float, int]:
    """Truncated sum_n scale p_n e^{-phi(lambda_n) t} phi_n(x), growing supply."""
    n_hi = 32
    while True:
        weights = scale * basis.unit_weights(t, n_hi)
        phi = basis.model.eigenfunctions(n_hi, x)
        value, level, converged = series.truncate_terms(weights * phi, eps, rule)
        if converged:
            return value, level
        if n_hi >= _POOL_CAP:
            raise ConvergenceError(
                f"eigenfunction series at t={t}, x={x} not converged by n={_POOL_CAP}"
            )
        n_hi = min(2 * n_hi, _POOL_CAP)


# ---------------------------------------------------------------------------
# Public series operations
# ---------------------------------------------------------------------------


def zero_coupon_price(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    t: float,
    x: float,
    eps: float = 1e-9,
    rule: str = series.TWO_TERM,
) -> float:
    """Zero-coupon bond by the (subordinate) eigenfunction expansion."""
    if not t > 0.0:
        raise ValidationError("maturity must be positive")
    if not model.contains(x):
        raise ValidationError(f"state {x} outside the {model.kind} state space")
    basis = SpectralBasis(model, sub)
    value, _ = _series_eval_pool(basis, t, x, eps, rule)
    return value


def continuation_value(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    coefficients: np.ndarray,
    h: float,
    x: float,
    eps: float = 1e-9,
    rule: str = series.TWO_TERM,
) -> float:
    """Hold value sum_n c_n e^{-phi(lambda_n) h} phi_n(x) under truncation."""
    if not h > 0.0:
        raise ValidationError("time step must be positive")
    coefficients = np.asarray(coefficients, dtype=float)
    basis = SpectralBasis(model, sub)
    weights = coefficients * basis.decay(h, coefficients.size - 1)
    value, _ = _series_eval_capped(basis, weights, x, eps, rule)
    return value


# ---------------------------------------------------------------------------
# Break-even search
# ---------------------------------------------------------------------------


def _search_interval(
    model: DiffusionModel, n_supply: int, bracket_sigmas: float
) -> tuple[float, float]:
    """State interval over which truncated series are trustworthy.

    Lower ends: the CIR origin is an admissible reflecting/entrance point
    and poses no resolution problem; the 3/2 left end maps to a huge
    Laguerre abscissa, so it is pulled in to keep the mapped coordinate
    inside the resolvable (oscillatory) range of the available degrees.
    Vasicek searches a symmetric band of ``bracket_sigmas`` stationary
    standard deviations, for the same resolvability reason.
    """
    if isinstance(model, VasicekModel):
        half = bracket_sigmas * model.sigma / math.sqrt(2.0 * model.kappa)
        return model.theta - half, model.theta + half
    if isinstance(model, ThreeHalvesModel):
        v_max = 4.0 * max(n_supply, 16) + 2.0 * model.laguerre_order + 2.0
        return model.beta / v_max, model.theta * _CIR_BRACKET_CAP
    return 0.0, model.theta * _CIR_BRACKET_CAP


def _bisect_root(
    difference, lo: float, hi: float, f_lo: float, f_hi: float, tol_x: float
) -> float:
    while hi - lo > tol_x:
        mid = 0.5 * (lo + hi)
        if difference(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class _RootFinder:
    """Locates one date's break-even states against a continuation function."""

    def __init__(
        self,
        model: DiffusionModel,
        cont,
        discounted_strike,
        search_lo: float,
        search_hi: float,
        tol_x: float,
        decision_index: int,
    ):
        self.model = model
        self.cont = cont
        self.discounted_strike = discounted_strike
        self.search_lo = search_lo
        self.search_hi = search_hi
        self.tol_x = tol_x
        self.decision_index = decision_index

    def _difference(self, strike: float):
        return lambda x: strike * self.discounted_strike(x) - self.cont(x)

    def _grown_upper(self, diff, start: float) -> tuple[float, float]:
        """Grow the upper end geometrically until the difference turns positive."""
        hi = start
        f_hi = diff(hi)
        while f_hi <= 0.0 and hi < self.search_hi:
            hi = min(2.0 * hi, self.search_hi)
            f_hi = diff(hi)
        return hi, f_hi

    def find(self, kind: str, strike: float) -> float | None:
        """Break-even state, or None when the exercise region is empty.

        The difference K P(delta, x) - C(x) is increasing with a single
        crossing: exercise regions are the low-rate side for calls and the
        high-rate side for puts.
        """
        diff = self._difference(strike)
        lo = self.search_lo
        f_lo = diff(lo)
        if isinstance(self.model, VasicekModel):
            hi, f_hi = self.search_hi, diff(self.search_hi)
        else:
            hi, f_hi = self._grown_upper(diff, max(self.model.theta, lo + self.tol_x))
        if kind == "call":
            if f_lo > 0.0:
                return None  # strike too dear even at the lowest rates
            if f_hi <= 0.0:
                raise BracketError(
                    "call region covers the whole search interval",
                    decision_index=self.decision_index,
                )
        elif kind == "put":
            if f_hi <= 0.0:
                return None  # hold value dominates everywhere reachable
            if f_lo > 0.0:
                raise BracketError(
                    "put region covers the whole search interval",
                    decision_index=self.decision_index,
                )
        else:
            raise ValidationError(f"unknown option kind {kind!r}")
        return _bisect_root(diff, lo, hi, f_lo, f_hi, self.tol_x)

    def scan_single_crossing(self, strike: float, has_root: bool) -> None:
        """64-point sign scan guarding the single-root assumption."""
        xs = np.linspace(self.search_lo, self.search_hi, 64)
        diff = self._difference(strike)
        signs = np.sign([diff(x) for x in xs])
        signs = signs[signs != 0.0]
        crossings = int(np.sum(signs[1:] != signs[:-1]))
        expected = 1 if has_root else 0
        if crossings != expected:
            raise BracketError(
                f"sign scan found {crossings} crossings where {expected} expected",
                decision_index=self.decision_index,
            )


def find_break_even(
    kind: str,
    strike: float,
    coefficients: np.ndarray,
    h: float,
    delta: float,
    model: DiffusionModel,
    sub: SubordinatorSpec,
    eps: float = 1e-9,
    tol_x: float = 1e-7,
    rule: str = series.TWO_TERM,
    bracket_sigmas: float = _DEFAULT_BRACKET_SIGMAS,
) -> float | None:
    """Solve strike * P(delta, x) = continuation(x) for a single date.

    Returns the break-even state, or None when the corresponding exercise
    region is empty (the sentinel endpoints substitute in the recursion).
    """
    if not strike > 0.0:
        raise ValidationError("strike must be positive")
    coefficients = np.asarray(coefficients, dtype=float)
    basis = SpectralBasis(model, sub)
    weights = coefficients * basis.decay(h, coefficients.size - 1)

    def cont(x):
        return _series_eval_capped(basis, weights, x, eps, rule)[0]

    pdelta = _make_discounted_bond(basis, delta, eps, rule)
    lo, hi = _search_interval(model, coefficients.size - 1, bracket_sigmas)
    finder = _RootFinder(model, cont, pdelta, lo, hi, tol_x, decision_index=-1)
    return finder.find(kind, strike)


def _make_discounted_bond(basis: SpectralBasis, delta: float, eps: float, rule: str):
    """P(delta, x) evaluator: affine closed form when exact, else expansion."""
    model, sub = basis.model, basis.sub
    if sub.is_trivial and isinstance(model, (CIRModel, VasicekModel)):
        a_fac, b_fac = model.affine_bond_factors(delta)
        return lambda x: a_fac * math.exp(-b_fac * x)
    return lambda x: _series_eval_pool(basis, delta, x, eps, rule)[0]


# ---------------------------------------------------------------------------
# The backward recursion
# ---------------------------------------------------------------------------


class _Engine:
    def __init__(
        self,
        model: DiffusionModel,
        sub: SubordinatorSpec,
        schedule: BondSchedule,
        eps: float,
        rule: str,
        tol_x: float,
        check_single_crossing: bool,
        bracket_sigmas: float,
    ):
        if not 0.0 < eps <= 1e-3:
            raise ValidationError(f"eps must lie in (0, 1e-3], got {eps}")
        if schedule.protection_index < schedule.n_coupons:
            tau_first = schedule.decision_time(schedule.protection_index)
            if tau_first <= 0.0:
                raise ValidationError("first decision time must be positive")
        self.model = model
        self.sub = sub
        self.schedule = schedule
        self.eps = eps
        self._eps_assembly = ASSEMBLY_TAIL_MARGIN * eps
        self.rule = rule
        self.tol_x = tol_x
        self.check_single_crossing = check_single_crossing
        self.bracket_sigmas = bracket_sigmas
        self.basis = SpectralBasis(model, sub)
        self.pdelta = _make_discounted_bond(self.basis, schedule.notice_delta, eps, rule)
        self.dates: list[DateRecord] = []

    # -- continuation evaluators ------------------------------------------

    def _capped_cont(self, weights: np.ndarray, record: DateRecord | None):
        def cont(x: float) -> float:
            value, level = _series_eval_capped(
                self.basis, weights, x, self.eps, self.rule
            )
            if record is not None:
                record.eval_levels.append(level)
            return value

        return cont

    def _terminal_cont(self, h: float, scale: float, record: DateRecord | None):
        def cont(x: float) -> float:
            value, level = _series_eval_pool(
                self.basis, h, x, self.eps, self.rule, scale=scale
            )
            if record is not None:
                record.eval_levels.append(level)
            return value

        return cont

    # -- one decision date ---------------------------------------------------

    def _step(self, i: int, prev: CoefficientState | None) -> CoefficientState:
        sched = self.schedule
        k = sched.n_coupons
        if i == k - 1:
            h = sched.coupon_time(k) - sched.decision_time(k - 1)
        else:
            h = sched.decision_time(i + 1) - sched.decision_time(i)
        record = DateRecord(index=i, decision_time=sched.decision_time(i))

        if prev is None:
            # terminal stage: c_n = (1 + coupon) p_n, unbounded supply
            scale = 1.0 + sched.coupon
            cont = self._terminal_cont(h, scale, record)
            cont_silent = self._terminal_cont(h, scale, None)
        else:
            weights = prev.coefficients * self.basis.decay(
                h, prev.coefficients.size - 1
            )
            cont = self._capped_cont(weights, record)
            cont_silent = self._capped_cont(weights, None)

        supply = _POOL_CAP if prev is None else prev.coefficients.size - 1
        lo, hi = _search_interval(self.model, supply, self.bracket_sigmas)
        finder = _RootFinder(
            self.model, cont, self.pdelta, lo, hi, self.tol_x, decision_index=i
        )
        scan_finder = _RootFinder(
            self.model, cont_silent, self.pdelta, lo, hi, self.tol_x, decision_index=i
        )

        k_call = sched.call_price(i)
        k_put = sched.put_price(i)
        x_call = x_put = None
        if k_call is not None:
            x_call = finder.find("call", k_call)
            if self.check_single_crossing:
                scan_finder.scan_single_crossing(k_call, x_call is not None)
        if k_put is not None:
            x_put = finder.find("put", k_put)
            if self.check_single_crossing:
                scan_finder.scan_single_crossing(k_put, x_put is not None)
        if x_call is not None and x_put is not None and not x_call < x_put:
            raise BracketError(
                f"break-even ordering violated: x_call={x_call} >= x_put={x_put}",
                decision_index=i,
            )
        record.call_state, record.put_state = x_call, x_put

        # -- assembly -------------------------------------------------------
        # The carried coefficient vector is cut where the *next* stage's
        # term weights |c_n| e^{-phi(lambda_n) h_next} become negligible,
        # independent of the levels the bisection happened to touch:
        # exercise kinks give the assembled value function a slower
        # coefficient decay than the function it was built from, so the
        # next date may need deeper coefficients than this date's
        # evaluations used.
        if i > sched.protection_index:
            h_next = sched.decision_time(i) - sched.decision_time(i - 1)
        else:
            h_next = sched.decision_time(i)
        x_c_eff = self.model.state_lo if x_call is None else x_call
        x_p_eff = self.model.state_hi if x_put is None else x_put

        if prev is None:
            majorant = lambda m_hi: (1.0 + sched.coupon) * self.basis.unit_weights(
                h, m_hi
            )
            m_cols = series.weight_cutoff(majorant, self.eps, rule=self.rule)
            prev_weights = (1.0 + sched.coupon) * self.basis.unit_weights(h, m_cols)
        else:
            prev_weights = prev.coefficients * self.basis.decay(
                h, prev.coefficients.size - 1
            )
            m_cols = prev.coefficients.size - 1

        degree_cap = coeffs_mod.max_table_degree(self.model)
        n_rows = min(max(16, m_cols), degree_cap)
        while True:
            new = self._assemble(
                i, n_rows, m_cols, x_call, x_put, x_c_eff, x_p_eff, prev_weights
            )
            decay_next = self.basis.decay(h_next, n_rows)
            level, converged = series.stop_level(
                np.abs(new) * decay_next, self._eps_assembly, self.rule
            )
            if converged:
                new = new[: level + 3]  # keep the two look-ahead terms
                break
            if n_rows >= degree_cap:
                # Integral tables cannot be built deeper; the remaining tail
                # is already damped by e^{-phi(lambda_n) h} at the next stage.
                break
            n_rows = min(2 * n_rows, degree_cap)

        record.assembled = new.size - 1
        self.dates.append(record)
        return CoefficientState(
            coefficients=new, decision_index=i, truncation_used=new.size - 1
        )

    def _assemble(
        self, i, n_rows, m_cols, x_call, x_put, x_c_eff, x_p_eff, prev_weights
    ) -> np.ndarray:
        sched = self.schedule
        if x_call is None and x_put is None:
            hold = prev_weights[: n_rows + 1].copy()
            if hold.size < n_rows + 1:
                hold = np.pad(hold, (0, n_rows + 1 - hold.size))
        else:
            block = coeffs_mod._overlap_block(
                self.model, n_rows, m_cols, x_c_eff, x_p_eff
            )
            hold = block @ prev_weights

        new = hold
        k_call, k_put = sched.call_price(i), sched.put_price(i)
        if k_call is not None and x_call is not None:
            leg = coeffs_mod.strike_projection(
                self.model,
                self.sub,
                n_rows,
                self.model.state_lo,
                x_c_eff,
                sched.notice_delta,
                eps=self.eps,
                rule=self.rule,
            )
            new = new + k_call * leg.entries
        if k_put is not None and x_put is not None:
            leg = coeffs_mod.strike_projection(
                self.model,
                self.sub,
                n_rows,
                x_p_eff,
                self.model.state_hi,
                sched.notice_delta,
                eps=self.eps,
                rule=self.rule,
            )
            new = new + k_put * leg.entries
        return new + sched.coupon * self.basis.unit_weights(sched.notice_delta, n_rows)

    # -- full run --------------------------------------------------------------

    def run(self, initial_states: np.ndarray) -> PricingResult:
        sched = self.schedule
        k = sched.n_coupons
        state: CoefficientState | None = None
        for i in range(k - 1, sched.protection_index - 1, -1):
            try:
                state = self._step(i, state)
            except ConvergenceError as exc:
                raise ConvergenceError(f"at decision index {i}: {exc}") from exc
        self.dates.sort(key=lambda d: d.index)

        if state is not None:
            start_t = sched.decision_time(sched.protection_index)
            weights0 = state.coefficients * self.basis.decay(
                start_t, state.coefficients.size - 1
            )

        values = np.empty(len(initial_states))
        value_levels: list[int] = []
        for j, x0 in enumerate(initial_states):
            if not self.model.contains(x0):
                raise ValidationError(
                    f"initial state {x0} outside the {self.model.kind} state space"
                )
            if state is None:
                value, level = _series_eval_pool(
                    self.basis,
                    sched.maturity,
                    x0,
                    self.eps,
                    self.rule,
                    scale=1.0 + sched.coupon,
                )
            else:
                value, level = _series_eval_capped(
                    self.basis, weights0, x0, self.eps, self.rule
                )
            coupon_leg = 0.0
            for i in range(1, sched.protection_index):
                coupon_leg += self._protected_coupon_bond(sched.coupon_time(i), x0)
            values[j] = value + sched.coupon * coupon_leg
            value_levels.append(level)

        self._map_break_even_rates()
        return PricingResult(
            initial_states=np.asarray(initial_states, dtype=float),
            values=values,
            dates=self.dates,
            value_levels=value_levels,
            eps=self.eps,
        )

    def _protected_coupon_bond(self, t: float, x: float) -> float:
        if self.sub.is_trivial and isinstance(self.model, (CIRModel, VasicekModel)):
            return float(self.model.closed_form_bond(t, x))
        return _series_eval_pool(self.basis, t, x, self.eps, self.rule)[0]

    def _map_break_even_rates(self) -> None:
        for record in self.dates:
            if record.call_state is not None:
                record.call_rate = short_rate_map(self.model, self.sub, record.call_state)
            if record.put_state is not None:
                record.put_rate = short_rate_map(self.model, self.sub, record.put_state)


def price_bond(
    model: DiffusionModel,
    sub: SubordinatorSpec,
    schedule: BondSchedule,
    initial_states,
    eps: float = 1e-7,
    rule: str = series.TWO_TERM,
    tol_x: float = 1e-7,
    check_single_crossing: bool = False,
    bracket_sigmas: float = _DEFAULT_BRACKET_SIGMAS,
) -> PricingResult:
    """Value a callable/putable bond at one or more initial states.

    The backward recursion over decision dates runs once; each initial
    state then costs a single series evaluation plus the protected-coupon
    leg.  ``check_single_crossing`` adds the 64-point sign scan behind the
    one-root-per-date policy (slower; meant for validation runs).
    """
    initial_states = np.atleast_1d(np.asarray(initial_states, dtype=float))
    if initial_states.size == 0:
        raise ValidationError("need at least one initial state")
    engine = _Engine(
        model,
        sub,
        schedule,
        eps=eps,
        rule=rule,
        tol_x=tol_x,
        check_single_crossing=check_single_crossing,
        bracket_sigmas=bracket_sigmas,
    )
    return engine.run(initial_states)
