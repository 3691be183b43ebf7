from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dwpgeom.contact import (
    DIVIDED_KEYS,
    AlmostContactStructure,
    CoefficientPreset,
    Coefficients,
    GeneralizedKMSpaceForm,
    PointwiseStructure,
    assemble_curvature,
    assemble_pointwise,
    basis_tensor_eval,
    contact_residual,
    fundamental_form,
    lie_derivative_h,
    nabla_xi,
    preset_coefficients,
    random_pointwise_structure,
    sasakian_residual,
    standard_sasakian,
    verify_almost_contact,
    xi_curvature_prefactors,
    xi_curvature_residual,
)
from dwpgeom.errors import KappaOne, UnknownTensorName
from dwpgeom.geometry import MetricField, euclidean, plane_sectional, riemann


def line_structure(eta_scale=1.0):
    return AlmostContactStructure(
        1,
        phi=lambda x: [[0.0 * x[0]]],
        xi=lambda x: [1.0 + 0 * x[0]],
        eta=lambda x: [eta_scale + 0 * x[0]],
        metric=euclidean(1),
    )


# axioms

def test_standard_model_axioms(rng):
    form = standard_sasakian(2)
    for p in rng.uniform(-2, 2, size=(5, 5)):
        rep = verify_almost_contact(form.structure, p)
        assert rep.passed
        assert max(rep.residuals.values()) <= 1e-12
        assert rep.contact_residual <= 1e-12


def test_one_dimensional_structure_passes():
    assert verify_almost_contact(line_structure(), [0.3]).passed


def test_scaled_eta_fails():
    rep = verify_almost_contact(line_structure(2.0), [0.3])
    assert not rep.passed
    assert rep.residuals["eta_xi"] == pytest.approx(1.0)


def test_fundamental_form_antisymmetric(rng):
    ps, _ = random_pointwise_structure(rng, 3)
    Phi = fundamental_form(ps)
    assert np.abs(Phi + Phi.T).max() <= 1e-12


# the tensor h

def test_h_vanishes_for_standard_model(rng):
    s = standard_sasakian(2).structure
    assert np.abs(lie_derivative_h(s, rng.uniform(-1, 1, size=5))).max() <= 1e-10


def test_h_raw_fields_on_r3():
    s = AlmostContactStructure(
        3,
        phi=lambda x: [[0.0, 0.0, 0.0], [1 + x[2], 0.0, 0.0], [0.0, 0.0, 0.0]],
        xi=lambda x: [0.0, 0.0, 1.0 + 0 * x[0]],
        eta=lambda x: [0.0, 0.0, 1.0 + 0 * x[0]],
        metric=euclidean(3),
    )
    h = lie_derivative_h(s, [0.2, 0.4, 0.7])
    np.testing.assert_allclose(h @ [1, 0, 0], [0, 0.5, 0])


def test_h_zero_for_xi_invariant_phi():
    s = AlmostContactStructure(
        3,
        phi=lambda x: [[0.0, -1.0, 0.0], [1.0 + x[0] ** 2, 0.0, 0.0], [0.0, 0.0, 0.0 * x[0]]],
        xi=lambda x: [0.0, 0.0, 1.0 + 0 * x[0]],
        eta=lambda x: [0.0, 0.0, 1.0 + 0 * x[0]],
        metric=euclidean(3),
    )
    assert not lie_derivative_h(s, [0.5, 0.1, 0.2]).any()


def test_analytic_h_agrees_with_lie_derivative(rng):
    s = standard_sasakian(1).structure
    with_h = AlmostContactStructure(s.dim, s.phi, s.xi, s.eta, s.metric, h=lambda x: np.zeros((3, 3)))
    p = rng.uniform(-1, 1, size=3)
    assert np.abs(with_h.at(p).h - lie_derivative_h(s, p)).max() <= 1e-9


def test_synthetic_h_identities(rng):
    for _ in range(20):
        ps, _ = random_pointwise_structure(rng, int(rng.integers(1, 4)))
        assert np.abs(ps.h @ ps.xi).max() <= 1e-9
        assert np.abs(ps.h @ ps.phi + ps.phi @ ps.h).max() <= 1e-9
        assert abs(np.trace(ps.h)) <= 1e-9 and abs(np.trace(ps.phi @ ps.h)) <= 1e-9
        gh = ps.g @ ps.h
        assert np.abs(gh - gh.T).max() <= 1e-9


# basis tensors

def test_basis_tensor_examples(rng):
    ps, F = random_pointwise_structure(rng, 2, with_h=False)
    e1, e2, xi = F[:, 0], F[:, 1], F[:, -1]
    np.testing.assert_allclose(basis_tensor_eval("R1", ps, e1, e2, e2), e1, atol=1e-12)
    np.testing.assert_allclose(basis_tensor_eval("R3", ps, xi, e1, xi), e1, atol=1e-12)
    assert not basis_tensor_eval("R51", ps, e1, e2, xi).any()
    with pytest.raises(UnknownTensorName):
        basis_tensor_eval("R7", ps, e1, e2, xi)


def test_r5_split_identity(rng):
    ps, _ = random_pointwise_structure(rng, 3)
    X, Y, Z = rng.normal(size=(3, ps.dim))
    r5 = basis_tensor_eval("R5", ps, X, Y, Z)
    split = basis_tensor_eval("R51", ps, X, Y, Z) - basis_tensor_eval("R52", ps, X, Y, Z)
    assert np.abs(r5 - split).max() <= 1e-12 * max(1.0, np.abs(r5).max())


@pytest.mark.parametrize("name", ["R1", "R2", "R3", "R4", "R51", "R52", "R6"])
def test_basis_tensors_multilinear(rng, name):
    ps, _ = random_pointwise_structure(rng, 2)
    X, X2, Y, Z = rng.normal(size=(4, ps.dim))
    a, b = 1.7, -0.4
    lhs = basis_tensor_eval(name, ps, a * X + b * X2, Y, Z)
    rhs = a * basis_tensor_eval(name, ps, X, Y, Z) + b * basis_tensor_eval(name, ps, X2, Y, Z)
    assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(lhs).max())


# assembly

def test_assembly_zero_coefficients(rng):
    ps, _ = random_pointwise_structure(rng, 2)
    zero = dict.fromkeys(DIVIDED_KEYS, 0.0)
    assert not assemble_pointwise(zero, ps, *rng.normal(size=(3, ps.dim))).any()


def test_generalized_sasakian_reduces_to_r1(rng):
    ps, F = random_pointwise_structure(rng, 2)
    coeffs = preset_coefficients(CoefficientPreset("generalized_sasakian", {"f1": 1, "f2": 0, "f3": 0})).values()
    X, Y = F[:, 0], F[:, 1]
    np.testing.assert_allclose(assemble_pointwise(coeffs, ps, X, Y, Y), X, atol=1e-12)


def test_divided_view_equals_undivided(rng):
    ps, _ = random_pointwise_structure(rng, 3)
    und = Coefficients(f1=0.3, f2=-1.1, f3=0.7, f4=0.2, f5=1.9, f6=-0.5)
    div = Coefficients(f1=0.3, f2=-1.1, f3=0.7, f4=0.2, f51=1.9, f52=-1.9, f6=-0.5, divided=True)
    assert und.values() == div.values()
    X, Y, Z = rng.normal(size=(3, ps.dim))
    direct = sum(float(c) * basis_tensor_eval(n, ps, X, Y, Z)
                 for c, n in zip((0.3, -1.1, 0.7, 0.2, 1.9, -0.5), ("R1", "R2", "R3", "R4", "R5", "R6")))
    assert np.abs(assemble_pointwise(div.values(), ps, X, Y, Z) - direct).max() <= 1e-12 * max(1, np.abs(direct).max())


def test_coefficient_validation():
    with pytest.raises(ValueError):
        Coefficients(f5=1, f51=1)
    with pytest.raises(ValueError):
        Coefficients(f5=1, divided=True)


def test_variable_coefficients_evaluate_pointwise():
    c = Coefficients(f1=lambda x: x[0] ** 2, f5=lambda x: x[1])
    vals = c.values([3.0, 2.0])
    assert vals["f1"] == 9.0 and vals["f51"] == 2.0 and vals["f52"] == -2.0


# presets

def test_preset_km_space_form_c_minus_3():
    c = preset_coefficients(CoefficientPreset("km_space_form", {"c": -3, "kappa": 1, "mu": 0}))
    assert c.as_tuple() == (0, -1, -1, 1, Fraction(1, 2), 1)
    assert all(isinstance(v, Fraction) for v in c.as_tuple())


def test_preset_non_sasakian_divided():
    c = preset_coefficients(CoefficientPreset("non_sasakian_km_divided", {"kappa": 0, "mu": 0}))
    assert c.as_tuple() == (1, 0, 1, 1, 1, 0, 1)


def test_preset_generalized_sasakian():
    c = preset_coefficients(CoefficientPreset("generalized_sasakian", {"f1": 2, "f2": "1/3", "f3": -1}))
    assert c.as_tuple() == (2, Fraction(1, 3), -1, 0, 0, 0)


def test_preset_kappa_one_rejected():
    with pytest.raises(KappaOne):
        preset_coefficients(CoefficientPreset("non_sasakian_km_divided", {"kappa": 1, "mu": 0}))
    with pytest.raises(ValueError):
        preset_coefficients(CoefficientPreset("unknown", {}))


@given(st.fractions(-5, 5), st.fractions(-5, 5), st.fractions(-5, 5))
def test_km_preset_prefactors_are_kappa_mu(c, kappa, mu):
    coeffs = preset_coefficients(CoefficientPreset("km_space_form", {"c": c, "kappa": kappa, "mu": mu}))
    v = coeffs.divided_view()
    assert (v["f1"] - v["f3"], v["f4"] - v["f6"]) == (kappa, mu)


# R(X, Y)xi

def test_xi_identity_on_synthetic_structures(rng):
    worst = 0.0
    for _ in range(100):
        ps, _ = random_pointwise_structure(rng, int(rng.integers(1, 4)))
        coeffs = dict(zip(DIVIDED_KEYS, rng.normal(size=7)))
        X, Y = rng.normal(size=(2, ps.dim))
        worst = max(worst, xi_curvature_residual(coeffs, ps, X, Y))
    assert worst <= 1e-10


def test_xi_prefactors_for_presets():
    for params in ({"c": 2, "kappa": "1/2", "mu": 3}, {"c": -3, "kappa": 1, "mu": 0}):
        vals = preset_coefficients(CoefficientPreset("km_space_form", params)).values()
        kappa, mu = xi_curvature_prefactors(vals)
        assert kappa == pytest.approx(float(Fraction(str(params["kappa"]))))
        assert mu == pytest.approx(float(params["mu"]))


# standard Sasakian model

def test_standard_model_phi_sectional(rng):
    form = standard_sasakian(1)
    for p in rng.uniform(-1, 1, size=(5, 3)):
        ps = form.structure.at(p)
        R = riemann(form.metric, p)
        X = rng.normal(size=3)
        X = X - (ps.eta @ X) * ps.xi
        X /= np.sqrt(ps.inner(X, X))
        assert plane_sectional(R, X, ps.phi @ X) == pytest.approx(-3.0, abs=1e-8)


def test_standard_model_sasakian_residual(rng):
    s = standard_sasakian(2).structure
    p = rng.uniform(-1, 1, size=5)
    for X, Y in rng.normal(size=(5, 2, 5)):
        assert np.abs(sasakian_residual(s, p, X, Y)).max() <= 1e-9
    xi = s.at(p).xi
    assert np.abs(sasakian_residual(s, p, xi, xi)).max() <= 1e-9


def test_nabla_xi_identity(rng):
    s = standard_sasakian(2).structure
    p = rng.uniform(-1, 1, size=5)
    ps = s.at(p)
    assert np.abs(nabla_xi(s, p) - (-ps.phi - ps.phi @ ps.h)).max() <= 1e-9


def test_assembled_matches_jet_riemann(rng):
    form = standard_sasakian(2)
    p = rng.uniform(-1, 1, size=5)
    R = riemann(form.metric, p)
    for X, Y, Z in rng.normal(size=(20, 3, 5)):
        assert np.abs(R.apply(X, Y, Z) - assemble_curvature(form, p, X, Y, Z)).max() <= 1e-8


def test_constant_phi_on_flat_chart_is_not_sasakian():
    J = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    s = AlmostContactStructure(
        3, phi=lambda x: J, xi=lambda x: [0.0, 0.0, 1.0], eta=lambda x: [0.0, 0.0, 1.0], metric=euclidean(3)
    )
    assert verify_almost_contact(s, [0.1, 0.2, 0.3]).passed
    assert np.linalg.norm(sasakian_residual(s, [0.1, 0.2, 0.3], [1, 0, 0], [1, 0, 0])) > 0.5


def test_standard_model_rejects_bad_m():
    with pytest.raises(ValueError):
        standard_sasakian(0)


def test_form_metric_property():
    form = standard_sasakian(1)
    assert isinstance(form, GeneralizedKMSpaceForm)
    assert isinstance(form.metric, MetricField) and form.metric.dim == 3
    assert isinstance(form.structure.at([0, 0, 0]), PointwiseStructure)
    assert contact_residual(form.structure, [0.5, -0.5, 1.0]) <= 1e-12
