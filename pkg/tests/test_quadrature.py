import math

import numpy as np
import pytest

from whittaker.quadrature import fourier_rule, ooura_mori, sinh_sinh, tan_gauss_legendre


def test_sinh_sinh_cauchy():
    x, w = sinh_sinh(0.05)
    assert np.sum(w / (1 + x * x)) == pytest.approx(math.pi, rel=1e-12)


def test_ooura_dirichlet_integral():
    x, w = ooura_mori(1.0, 0.05, "sin")
    assert np.sum(w / x) == pytest.approx(math.pi / 2, rel=1e-10)


def test_ooura_cos_laplace_integral():
    # int_0^inf cos(w x)/(1 + x^2) dx = pi e^{-w}/2
    for omega in (1.0, 2 * math.pi):
        x, w = ooura_mori(omega, 0.05, "cos")
        assert np.sum(w / (1 + x * x)) == pytest.approx(0.5 * math.pi * math.exp(-omega), rel=1e-9)


@pytest.mark.parametrize("xi", [1.0, -1.0, 2.0])
def test_fourier_rule_odd_and_even(xi):
    # int (1 + u)/(1 + u^2) e^{-2 pi i xi u} du = pi e^{-2 pi |xi|} (1 - i sign(xi))
    u, w = fourier_rule(xi, 0.05)
    got = np.sum(w * (1 + u) / (1 + u * u))
    want = math.pi * math.exp(-2 * math.pi * abs(xi)) * (1 - 1j * math.copysign(1, xi))
    assert got == pytest.approx(want, rel=1e-8)


def test_fourier_rule_zero_frequency():
    u, w = fourier_rule(0.0, 0.05)
    assert np.sum(w / (1 + u * u)) == pytest.approx(math.pi, rel=1e-12)


def test_tan_gauss_legendre():
    u, w = tan_gauss_legendre(101)
    assert np.sum(w / (1 + u * u) ** 2) == pytest.approx(math.pi / 2, rel=1e-12)


def test_rules_are_read_only():
    x, w = sinh_sinh(0.1)
    with pytest.raises(ValueError):
        x[0] = 1.0


def test_bad_arguments():
    with pytest.raises(ValueError):
        ooura_mori(-1.0, 0.1)
    with pytest.raises(ValueError):
        ooura_mori(1.0, 0.1, "tan")
