"""Python smoke tests for the fls module (spec dicts in, report dicts out)."""

import math

import pytest

import fls

ONES = {"kind": "regular_formula", "params": {"name": "ones"}}
ONE_MINUS_Z = {"kind": "finite", "params": {"coeffs": [[0, 1, 0], [1, -1, 0]]}}
S_ONE = {"kind": "finite", "params": {"coeffs": [[0, 1, 0]]}}
ALT = {"kind": "regular_formula", "params": {"name": "alt_inv_sqrt"}}


def test_classify_constant():
    rep = fls.classify({"kind": "constant", "params": {"value": [3, 0]}})
    assert rep["classification"] == "NoInverse"
    assert rep["method"] == "ClosedForm"


def test_invert_ones_gives_one_minus_z():
    rep = fls.invert(ONES, window=16, depths=(16, 32, 64, 128, 256))
    assert rep["classification"] == "Unique"
    coeffs = {e[0]: e[1] for e in rep["witness"]["coefficients"]}
    assert abs(coeffs[0] - 1.0) < 1e-9
    assert abs(coeffs[1] + 1.0) < 1e-9


def test_invert_family():
    rep = fls.invert(ONE_MINUS_Z, window=16, depths=(16, 32, 64, 128, 256))
    assert rep["classification"] == "Family"
    assert rep["parameter_arity"] == 1
    assert len(rep["homogeneous"]) == 1


def test_multiply_unit():
    rep = fls.multiply(ONE_MINUS_Z, ONES, lo=-8, hi=8)
    assert rep["all_converged"]
    assert rep["coefficients"] == [[0, 1.0, 0.0]]


def test_eval_and_sum():
    assert fls.eval_coeff(ONE_MINUS_Z, 1) == (-1.0, 0.0)
    out = fls.bilateral_sum(ALT)
    assert out["state"] == "Converged"
    assert abs(out["value"][0] + 1.2097972868432607) < 1e-9


def test_radii_two_sided():
    spec = {"kind": "sum", "params": {"terms": [
        {"spec": ONES},
        {"spec": {"kind": "principal_geometric", "params": {"c0": [1, 0], "q": [0.5, 0]}}},
    ]}}
    rep = fls.radii(spec)
    assert abs(rep["r"] - 0.5) < 0.025
    assert abs(rep["R"] - 1.0) < 0.05


def test_rd_split_verdicts():
    galt = {"kind": "sum", "params": {"terms": [{"scale": [2, 0], "spec": ALT}]}}
    rep = fls.check_rd(ALT, galt, S_ONE, hinv=S_ONE, lo=-2, hi=2)
    assert rep["left_exists"] is True
    assert rep["right_exists"] is False


def test_compose_constant_sum():
    rep = fls.compose(ALT, S_ONE, finv=S_ONE, lo=0, hi=0)
    value = rep["coefficients"][0]["outcome"]["value"][0]
    assert math.isclose(value, -1.2097972868432607, abs_tol=1e-9)


def test_rejected_input():
    with pytest.raises(fls.InvalidInput):
        fls.classify({"kind": "mystery", "params": {}})
