import numpy as np
import pytest

from whittaker import (
    DiffSpec,
    EigenvalueInconsistency,
    HalfPlanePoint,
    LanglandsParams,
    ScalarField,
    UnsupportedOrder,
    casimir_apply,
    casimir_eigenvalue,
    directional_derivative,
    power_field,
    rho,
    tuple_compose,
)
from whittaker.casimir import constant_field, default_diff_spec


def harish_chandra(alpha: LanglandsParams) -> float:
    """Quadratic Casimir eigenvalue |alpha|^2 - |rho|^2 for sum-zero alpha."""
    a = alpha.array()
    return complex(np.sum(a * a) - np.sum(rho(alpha.n) ** 2))


def test_diffspec_validation():
    with pytest.raises(ValueError):
        DiffSpec(h=0.0)
    with pytest.raises(ValueError):
        DiffSpec(richardson_levels=5)
    with pytest.raises(ValueError):
        DiffSpec.from_json({"step": 0.1})
    assert DiffSpec.from_json({"h": 0.02}).h == 0.02


def test_first_derivatives_of_y_power():
    s = 0.8
    F = power_field(LanglandsParams([0.3, -0.3]))
    g = HalfPlanePoint.from_y([1.7]).matrix()
    base = 1.7**s
    # diag(e^t, 1) scales y by e^t
    assert directional_derivative(F, g, 1, 1) == pytest.approx(s * base, rel=1e-8)
    assert abs(directional_derivative(F, g, 1, 2)) < 1e-8
    assert abs(directional_derivative(F, g, 2, 1)) < 1e-8


def test_gl2_laplace_eigenvalue():
    # the classical eigenvalue s(s - 1) of y^s, doubled by the trace-form normalization
    s = 0.8
    F = power_field(LanglandsParams([0.3, -0.3]))
    g = HalfPlanePoint(2, [[0, 0.35], [0, 0]], [1.7]).matrix()
    assert casimir_apply(F, g, 2) / F(g) == pytest.approx(2 * s * (s - 1), rel=1e-7)


def test_order_one_vanishes():
    lam, res = casimir_eigenvalue(3, 1, LanglandsParams([0.2, 0.1, -0.3]), return_residual=True)
    assert abs(lam) < 1e-8 and res < 1e-6


@pytest.mark.parametrize(
    "alpha",
    [[0.3, -0.3], [0.25j, -0.25j], [0.2, 0.1, -0.3], [0.5, 0.1j, -0.5 - 0.1j], [1.5, 0.5, -0.5, -1.5]],
)
def test_quadratic_eigenvalue_matches_harish_chandra(alpha):
    a = LanglandsParams(alpha)
    lam, res = casimir_eigenvalue(a.n, 2, a, return_residual=True)
    assert res < 1e-6
    assert abs(lam - harish_chandra(a)) / max(abs(harish_chandra(a)), 1) < 1e-7


def test_eigenfunction_at_generic_point():
    a = LanglandsParams([0.4, 0.1, -0.5])
    F = power_field(a)
    z = HalfPlanePoint(3, [[0, 0.3, -0.2], [0, 0, 0.45], [0, 0, 0]], [1.3, 0.8])
    lam = casimir_eigenvalue(3, 3, a)
    assert casimir_apply(F, z.matrix(), 3) / F(z.matrix()) == pytest.approx(lam, rel=1e-5, abs=1e-5)


def test_base_point_independence():
    for ell in (1, 2, 3):
        _, res = casimir_eigenvalue(3, ell, LanglandsParams([0.6, -0.1, -0.5]), return_residual=True)
        assert res < 1e-6


def test_inconsistency_reported(monkeypatch):
    import whittaker.casimir as cas

    def mixed(alpha, shifted=True):
        # a sum of two powers is not an eigenfunction
        a, b = power_field(LanglandsParams([0.3, -0.3])), power_field(LanglandsParams([1.2, -1.2]))
        return ScalarField(lambda g: a(g) + b(g), 2)

    monkeypatch.setattr(cas, "power_field", mixed)
    with pytest.raises(EigenvalueInconsistency) as info:
        casimir_eigenvalue(2, 2, LanglandsParams([0.3, -0.3]))
    assert info.value.residual > 1e-12


def test_constant_field_is_annihilated():
    F = constant_field(3, 2.0)
    g = np.eye(3)
    for ell in (1, 2, 3):
        assert abs(casimir_apply(F, g, ell)) < 1e-12


def test_order_limits():
    F = constant_field(2)
    with pytest.raises(UnsupportedOrder):
        casimir_apply(F, np.eye(2), 3)
    with pytest.raises(UnsupportedOrder):
        tuple_compose(F, np.eye(2), (1, 2, 1, 2, 1))


def test_field_shape_check():
    F = ScalarField(lambda g: 1.0, 2)
    with pytest.raises(ValueError):
        F(np.eye(3))


def test_order_four_default_is_consistent():
    a = LanglandsParams([0.7, 0.2, -0.1, -0.8])
    lam, res = casimir_eigenvalue(4, 4, a, return_residual=True)
    ref = casimir_eigenvalue(4, 4, a, DiffSpec(0.1, 4))
    assert res < 1e-6 and abs(lam - ref) < 1e-5 * abs(ref)
    assert default_diff_spec(2) == DiffSpec()


def test_weyl_symmetry_gl2():
    lam_p = casimir_eigenvalue(2, 2, LanglandsParams([0.3, -0.3]))
    lam_m = casimir_eigenvalue(2, 2, LanglandsParams([-0.3, 0.3]))
    assert abs(lam_p - lam_m) < 1e-6


def test_minus_rho_gives_zero():
    for n in (2, 3):
        a = LanglandsParams(-rho(n))
        for ell in range(1, n + 1):
            assert abs(casimir_eigenvalue(n, ell, a)) < 1e-12


def test_tighter_step_oracle():
    a = LanglandsParams([1, 0, -1])
    lam = casimir_eigenvalue(3, 2, a)
    fine = casimir_eigenvalue(3, 2, a, DiffSpec(1e-3, 4))
    assert abs(lam - fine) / max(abs(fine), 1) < 1e-6


def test_linearity():
    rng = np.random.default_rng(2)
    F, G = power_field(LanglandsParams([0.3, 0.1, -0.4])), power_field(LanglandsParams([0.6, -0.2, -0.4]))
    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    H = ScalarField(lambda g: a * F(g) + b * G(g), 3)
    g = HalfPlanePoint(3, [[0, 0.1, 0.2], [0, 0, -0.3], [0, 0, 0]], [1.2, 1.5]).matrix()
    lhs = casimir_apply(H, g, 2)
    rhs = a * casimir_apply(F, g, 2) + b * casimir_apply(G, g, 2)
    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)
