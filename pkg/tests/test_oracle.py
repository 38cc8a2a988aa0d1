import numpy as np
import pytest

from eigenbond import benchmark
from eigenbond.errors import DensityTruncationError, ValidationError
from eigenbond.oracle import build_grid, mc_zero_coupon, quadrature_dp_price
from eigenbond.pricer import BondSchedule, price_bond, zero_coupon_price
from eigenbond.subordinators import SubordinatorSpec

CIR = benchmark.benchmark_model("cir")
VAS = benchmark.benchmark_model("vasicek")
NONE = SubordinatorSpec.none()

REDUCED = BondSchedule(
    coupon=0.0425,
    coupon_times=tuple(float(i + 1) for i in range(6)),
    protection_index=3,
    notice_delta=0.1666,
    call_prices=(1.02, 1.01, 1.00),
)


@pytest.mark.parametrize("model", (CIR, VAS), ids=lambda m: m.kind)
def test_grid_weights_recover_speed_mass(model):
    grid = build_grid(model, 400)
    assert np.all(grid.weights > 0.0)
    assert float(np.sum(grid.weights)) == pytest.approx(model.speed_mass(), rel=1e-6)


def test_zero_option_schedule_matches_expansion():
    sched = BondSchedule(coupon=0.0, coupon_times=(4.0,), protection_index=1, notice_delta=0.0)
    for model in (CIR, VAS):
        dp = quadrature_dp_price(model, NONE, sched, 0.05)
        ref = zero_coupon_price(model, NONE, 4.0, 0.05, eps=1e-10)
        assert dp == pytest.approx(ref, abs=1e-6)


@pytest.mark.parametrize("model", (CIR, VAS), ids=lambda m: m.kind)
def test_reduced_schedule_cross_method_agreement(model):
    dp = quadrature_dp_price(model, NONE, REDUCED, 0.05)
    rec = price_bond(model, NONE, REDUCED, [0.05], eps=1e-9).values[0]
    assert abs(dp - rec) <= 1e-4


def test_grid_refinement_improves_agreement():
    ref = price_bond(VAS, NONE, REDUCED, [0.05], eps=1e-10).values[0]
    coarse = quadrature_dp_price(VAS, NONE, REDUCED, 0.05, grid_size=200)
    fine = quadrature_dp_price(VAS, NONE, REDUCED, 0.05, grid_size=400)
    assert abs(fine - ref) <= 0.5 * abs(coarse - ref) + 1e-9


def test_density_truncation_guard():
    fast = BondSchedule(
        coupon=0.0425,
        coupon_times=(0.05, 0.10, 0.15),
        protection_index=1,
        notice_delta=0.01,
        call_prices=(1.0, 1.0),
    )
    with pytest.raises(DensityTruncationError):
        quadrature_dp_price(CIR, NONE, fast, 0.05, n_density=40)


def test_grid_size_floor():
    with pytest.raises(ValidationError):
        quadrature_dp_price(CIR, NONE, REDUCED, 0.05, grid_size=100)


def test_mc_is_deterministic_under_seed():
    a = mc_zero_coupon(CIR, NONE, 0.5, 0.05, n_paths=4000, steps_per_year=250, seed=9)
    b = mc_zero_coupon(CIR, NONE, 0.5, 0.05, n_paths=4000, steps_per_year=250, seed=9)
    assert a == b


def test_mc_short_maturity_limit():
    mean, se = mc_zero_coupon(CIR, NONE, 0.004, 0.05, n_paths=4000, steps_per_year=250, seed=3)
    assert mean == pytest.approx(1.0, abs=1e-3)
    assert se < 1e-5


def test_mc_cir_against_closed_form():
    mean, se = mc_zero_coupon(CIR, NONE, 1.0, 0.05, n_paths=40_000, steps_per_year=250, seed=12)
    ref = float(CIR.closed_form_bond(1.0, 0.05))
    assert abs(mean - ref) <= 3.0 * se + 2e-4  # Euler bias allowance at dt=1/250


def test_mc_parameter_validation():
    with pytest.raises(ValidationError):
        mc_zero_coupon(CIR, NONE, 1.0, 0.05, n_paths=1000, steps_per_year=100)
    with pytest.raises(ValidationError):
        mc_zero_coupon(CIR, NONE, 1.0, -0.05, n_paths=1000, steps_per_year=250)


def test_mc_subordinated_runs_and_is_sane():
    jd = SubordinatorSpec.inverse_gaussian(drift=0.5, mu=0.5, nu_var=1.0)
    mean, se = mc_zero_coupon(CIR, jd, 0.1666, 0.05, n_paths=4000, steps_per_year=250, seed=5)
    ref = zero_coupon_price(CIR, jd, 0.1666, 0.05, eps=1e-10)
    assert abs(mean - ref) <= 4.0 * se + 5e-4
