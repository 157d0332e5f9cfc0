import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairfeas.errors import DomainError, SingularDenominator, ZeroEpsP
from fairfeas.relations import (
    AccRelaxation,
    PpvRelaxation,
    RegionSpec,
    acc_identity,
    fairness_area_acc,
    fpr_from_relation,
    offset_bounds,
    relaxed_fnr_acc,
    relaxed_fnr_ppv,
    residual_acc_balance,
    residual_ppv_balance,
)

unit_open = st.floats(0.05, 0.95)
small_eps = st.floats(-0.2, 0.2)


def acc_relaxations():
    return st.builds(
        dict,
        p=unit_open,
        eps_p=st.floats(0.01, 0.3) | st.floats(-0.3, -0.01),
        eps_fpr=small_eps,
        eps_fnr=small_eps,
        eps_acc=small_eps,
    ).filter(lambda d: 0.0 < d["p"] + d["eps_p"] < 1.0).map(lambda d: AccRelaxation(
        eps_fpr=d["eps_fpr"], eps_fnr=d["eps_fnr"], eps_acc=d["eps_acc"],
        eps_p=d["eps_p"], p=d["p"],
    ))


def ppv_relaxations():
    return st.builds(
        dict,
        p=unit_open,
        v=unit_open,
        eps_p=small_eps,
        eps_v=small_eps,
        eps_fpr=small_eps,
        eps_fnr=small_eps,
    ).filter(
        lambda d: 0.0 < d["p"] + d["eps_p"] < 1.0 and 0.0 < d["v"] + d["eps_v"] < 1.0
    ).map(lambda d: PpvRelaxation(
        eps_fpr=d["eps_fpr"], eps_fnr=d["eps_fnr"], eps_v=d["eps_v"],
        eps_p=d["eps_p"], p=d["p"], v=d["v"],
    ))


def test_fpr_from_relation_value():
    # p=0.5 cancels the odds factor; ppv=0.5 doubles; fnr=0.2 scales
    assert math.isclose(fpr_from_relation(0.5, 0.5, 0.2), 0.8, abs_tol=1e-15)


def test_fpr_from_relation_can_exceed_one():
    assert fpr_from_relation(0.8, 0.2, 0.0) > 1.0


def test_acc_identity_value():
    assert math.isclose(acc_identity(0.5, 0.4, 0.2), 0.7, abs_tol=1e-15)


def test_relaxed_fnr_acc_known_point():
    r = AccRelaxation(eps_fpr=0.0, eps_fnr=0.0, eps_acc=0.1, eps_p=0.2, p=0.3)
    assert math.isclose(relaxed_fnr_acc(r, fpr1=0.2), 0.7, abs_tol=1e-12)


def test_acc_relaxation_rejects_zero_eps_p():
    with pytest.raises(ZeroEpsP):
        AccRelaxation(eps_fpr=0.0, eps_fnr=0.0, eps_acc=0.0, eps_p=0.0, p=0.5)


@given(acc_relaxations(), st.floats(0.0, 1.0))
@settings(max_examples=300)
def test_acc_solution_zeroes_residual(r, fpr1):
    fnr1 = relaxed_fnr_acc(r, fpr1)
    assert abs(residual_acc_balance(r, fpr1, fnr1)) < 1e-9


def test_offset_bounds_symmetric():
    spec = RegionSpec(gamma=0.05, eps_p=0.2, p=0.3)
    ob = offset_bounds(spec)
    assert ob.c_max == pytest.approx(0.5)
    assert ob.c_min == pytest.approx(-0.5)


def test_area_formula_value():
    assert fairness_area_acc(RegionSpec(gamma=0.05, eps_p=0.2, p=0.3)) == pytest.approx(0.75)


def test_area_saturates_at_one():
    assert fairness_area_acc(RegionSpec(gamma=0.05, eps_p=0.1, p=0.3)) == pytest.approx(1.0)


def test_area_matches_unclamped_form_when_small():
    spec = RegionSpec(gamma=0.03, eps_p=0.25, p=0.3)
    g, e = spec.gamma, spec.eps_p
    assert fairness_area_acc(spec) == pytest.approx(4 * g / e - 4 * g * g / (e * e))


@given(st.floats(0.001, 0.2), st.floats(0.01, 0.45))
def test_area_within_unit_interval(gamma, eps_p):
    area = fairness_area_acc(RegionSpec(gamma=gamma, eps_p=eps_p, p=0.5))
    assert 0.0 < area <= 1.0


def test_region_spec_domain_checks():
    with pytest.raises(ZeroEpsP):
        RegionSpec(gamma=0.1, eps_p=0.0, p=0.5)
    with pytest.raises(DomainError):
        RegionSpec(gamma=0.0, eps_p=0.1, p=0.5)
    with pytest.raises(DomainError):
        RegionSpec(gamma=0.1, eps_p=0.6, p=0.5)


def test_relaxed_fnr_ppv_degenerate_tolerances():
    # all tolerances zero except a prevalence gap: only beta = 1 balances
    r = PpvRelaxation(eps_fpr=0.0, eps_fnr=0.0, eps_v=0.0, eps_p=0.2, p=0.3, v=0.5)
    assert math.isclose(relaxed_fnr_ppv(r), 1.0, abs_tol=1e-12)


def test_relaxed_fnr_ppv_known_point():
    r = PpvRelaxation(eps_fpr=0.05, eps_fnr=0.0, eps_v=0.1, eps_p=0.0, p=0.5, v=0.5)
    assert math.isclose(relaxed_fnr_ppv(r), 0.85, abs_tol=1e-12)


def test_relaxed_fnr_ppv_singular():
    r = PpvRelaxation(eps_fpr=0.1, eps_fnr=0.1, eps_v=0.0, eps_p=0.0, p=0.4, v=0.6)
    with pytest.raises(SingularDenominator):
        relaxed_fnr_ppv(r)


@given(ppv_relaxations())
@settings(max_examples=300)
def test_ppv_solution_zeroes_residual(r):
    try:
        beta = relaxed_fnr_ppv(r)
    except SingularDenominator:
        return
    assert abs(residual_ppv_balance(r, beta)) < 1e-9
