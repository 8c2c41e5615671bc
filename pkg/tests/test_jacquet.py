import math

import numpy as np
import pytest
from scipy import integrate, special

from whittaker import (
    CharacterTuple,
    ConvergenceFailure,
    DimensionMismatch,
    HalfPlanePoint,
    IrregularParameters,
    LanglandsParams,
    QuadratureSpec,
    UnipotentElement,
    WhittakerConfig,
    integrand,
    psi_eval,
    whittaker_eval,
    whittaker_eval_y,
    whittaker_field,
)
from whittaker.jacquet import _level_meshes, _w3_de, bessel_reference

# W for alpha = (1, 0, -1), N = (1, 1) at x = 0, from a nested scipy QAWF
# integration on the real contour (no shared code with the package)
ORACLE_W3 = {(0.6, 0.8): 2.2334924683568207e-04, (1.0, 1.0): 1.2175685424220789e-06}


def gl2_exact(s, N, x, y):
    """Fourier transform of (y/(y^2 + u^2))^s at frequency N, real order."""
    return (
        np.exp(2j * np.pi * N * x)
        * 2 * np.pi**s * abs(N) ** (s - 0.5) * np.sqrt(y)
        * special.kv(s - 0.5, 2 * np.pi * abs(N) * y) / special.gamma(s)
    )


@pytest.mark.parametrize("N", [1, 2, -1])
@pytest.mark.parametrize("x,y", [(0.0, 0.5), (0.3, 1.0), (-0.45, 2.0)])
def test_gl2_exact(N, x, y):
    cfg = WhittakerConfig(2, LanglandsParams([0.3, -0.3]), CharacterTuple([N]))
    got = whittaker_eval(cfg, HalfPlanePoint(2, [[0, x], [0, 0]], [y])).value
    assert got == pytest.approx(gl2_exact(0.8, N, x, y), rel=1e-9)


def test_gl2_complex_order():
    mpmath = pytest.importorskip("mpmath")
    a = 0.2 + 0.5j
    cfg = WhittakerConfig(2, LanglandsParams([a, -a]), CharacterTuple([1]))
    s, y = a + 0.5, 1.2
    want = complex(
        2 * mpmath.pi**s * mpmath.sqrt(y) * mpmath.besselk(s - 0.5, 2 * mpmath.pi * y) / mpmath.gamma(s)
    )
    assert whittaker_eval_y(cfg, [y]).value == pytest.approx(want, rel=1e-9)
    assert bessel_reference(cfg.alpha, 1, y) * complex(2 * mpmath.pi**s / mpmath.gamma(s)) == pytest.approx(want, rel=1e-9)


@pytest.mark.parametrize("y", list(ORACLE_W3))
def test_gl3_against_independent_oracle(cfg3, y):
    v = whittaker_eval_y(cfg3, y)
    assert v.value == pytest.approx(ORACLE_W3[y], rel=1e-9)
    assert v.est_rel_err < 1e-6


def test_literal_integrand_closed_form(cfg3):
    # det^s1 D1^-sigma D2^-tau with D1, D2 from the bottom rows of w u z
    rng = np.random.default_rng(5)
    s1, s2 = cfg3.shifted()[:2]
    tau, sigma = (s1 - s2) / 2, (s1 + 2 * s2) / 2
    for _ in range(5):
        y1, y2 = rng.uniform(0.5, 2.0, 2)
        x = np.triu(rng.uniform(-0.5, 0.5, (3, 3)), 1)
        u = np.triu(rng.uniform(-2, 2, (3, 3)), 1)
        z = HalfPlanePoint(3, x, [y1, y2])
        v = (np.eye(3) + u) @ (np.eye(3) + x) - np.eye(3)
        v12, v13, v23 = v[0, 1], v[0, 2], v[1, 2]
        A = y1 * y2
        D1 = A * A + y1 * y1 * v12 * v12 + v13 * v13
        D2 = y1 * y1 * (A * A + y2 * y2 * v23 * v23 + (v12 * v23 - v13) ** 2)
        phase = np.exp(-2j * np.pi * (u[0, 1] + u[1, 2]))
        want = (y1 * y1 * y2) ** s1 * D1**-sigma * D2**-tau * phase
        got = integrand(cfg3, UnipotentElement(3, u), z)
        assert got == pytest.approx(want, rel=1e-12)


def test_inner_fourier_transform_identity():
    # int D2^-tau e^{-2 pi i N2 v23} dv23 against its Bessel closed form
    y1, y2, v12, v13, tau, N2 = 0.9, 1.3, 0.4, -0.7, 1.0, 1
    A = y1 * y2
    D2 = lambda t: y1 * y1 * (A * A + y2 * y2 * t * t + (v12 * t - v13) ** 2)
    w = 2 * math.pi * N2
    even = lambda t: D2(t) ** -tau + D2(-t) ** -tau
    odd = lambda t: D2(t) ** -tau - D2(-t) ** -tau
    re = integrate.quad(even, 0, np.inf, weight="cos", wvar=w)[0]
    im = -integrate.quad(odd, 0, np.inf, weight="sin", wvar=w)[0]
    P = y2 * y2 + v12 * v12
    c = v12 * v13 / P
    B = math.sqrt((A * A * P + y2 * y2 * v13 * v13) / P**2)
    F = 2 * math.pi**tau * N2 ** (tau - 0.5) * B ** (0.5 - tau) * special.kv(tau - 0.5, 2 * math.pi * N2 * B) / special.gamma(tau)
    closed = (y1 * y1 * P) ** -tau * np.exp(-2j * math.pi * N2 * c) * F
    assert complex(re, im) == pytest.approx(closed, rel=1e-8)


def test_routing_matches_direct_rule(cfg3):
    # just above y1 = y2 the unrouted nested rule is still accurate
    q = QuadratureSpec()
    h, hin = _level_meshes(q)[-1]
    for x in ([0, 0, 0], [0.1, -0.2, 0.3], [-0.4, 0.25, 0.05]):
        z = HalfPlanePoint(3, [[0, x[0], x[1]], [0, 0, x[2]], [0, 0, 0]], [1.1, 1.0])
        direct, _ = _w3_de(cfg3.shifted(), cfg3.N.N, x[0], x[1], x[2], 1.1, 1.0, h, hin)
        assert whittaker_eval(cfg3, z, q).value == pytest.approx(direct, rel=1e-9)


@pytest.mark.parametrize("y", [(1.3, 0.9), (0.9, 1.3), (2.0, 1.0)])
def test_gl3_equivariance(cfg3, y):
    rng = np.random.default_rng(11)
    z = HalfPlanePoint(3, np.triu(rng.uniform(-0.5, 0.5, (3, 3)), 1), y)
    u = UnipotentElement(3, np.triu(rng.uniform(-1, 1, (3, 3)), 1))
    uz = HalfPlanePoint(3, u.matrix() @ z.unipotent() - np.eye(3), y)
    lhs = whittaker_eval(cfg3, uz).value
    rhs = psi_eval(cfg3.N, u) * whittaker_eval(cfg3, z).value
    assert lhs == pytest.approx(rhs, rel=1e-7)


def test_tan_agrees_with_de_when_flat():
    # N = 0: no oscillation, so the literal tan rule converges
    cfg = WhittakerConfig(2, LanglandsParams([0.3, -0.3]), CharacterTuple([0]))
    s, y = 0.8, 1.4
    exact = math.sqrt(math.pi) * special.gamma(s - 0.5) / special.gamma(s) * y ** (1 - s)
    de = whittaker_eval_y(cfg, [y]).value
    tan = whittaker_eval_y(cfg, [y], QuadratureSpec(257, 2, "tan", 1e-3)).value
    assert de == pytest.approx(exact, rel=1e-9)
    assert tan == pytest.approx(de, rel=1e-3)


def test_tan_agrees_with_de_gl3_flat():
    cfg = WhittakerConfig(3, LanglandsParams([1, 0, -1]), CharacterTuple([0, 0]))
    de = whittaker_eval_y(cfg, [1.2, 0.9]).value
    tan = whittaker_eval_y(cfg, [1.2, 0.9], QuadratureSpec(65, 2, "tan", 1e-1)).value
    assert tan == pytest.approx(de, rel=1e-2)


def test_field_matches_eval(cfg3):
    z = HalfPlanePoint(3, [[0, 0.2, 0.1], [0, 0, -0.3], [0, 0, 0]], [0.9, 1.2])
    W = whittaker_field(cfg3)
    g = 3.0 * z.matrix() @ np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1.0]])
    assert W(g) == pytest.approx(whittaker_eval(cfg3, z).value, rel=1e-12)


def test_gl2_decreasing_scan(cfg2):
    vals = [abs(whittaker_eval_y(cfg2, [y]).value) for y in (1, 2, 4, 8)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_convergence_failure_carries_result(cfg3):
    with pytest.raises(ConvergenceFailure) as info:
        whittaker_eval_y(cfg3, [1.0, 1.0], QuadratureSpec(9, 2, "de", 1e-14))
    assert info.value.result.evaluations > 0
    assert info.value.code == "E_CONVERGENCE"


def test_config_validation():
    with pytest.raises(IrregularParameters):
        WhittakerConfig(3, LanglandsParams([0, 0, 0]), CharacterTuple([1, 1]))
    with pytest.raises(IrregularParameters):
        # alpha_1 + 1/2 <= 1/2: the integral diverges
        WhittakerConfig(2, LanglandsParams([0.0, -0.5]), CharacterTuple([1]))
    with pytest.raises(DimensionMismatch):
        WhittakerConfig(3, LanglandsParams([1, 0]), CharacterTuple([1, 1]))
    cfg4 = WhittakerConfig(4, LanglandsParams([1.5, 0.5, -0.5, -1.5]), CharacterTuple([1, 1, 1]))
    with pytest.raises(DimensionMismatch):
        whittaker_eval(cfg4, HalfPlanePoint.identity(4))


def test_quadrature_spec_validation():
    for bad in (dict(nodes_per_dim=256), dict(levels=1), dict(nodes_per_dim=259, levels=3), dict(substitution="gauss")):
        with pytest.raises(ValueError):
            QuadratureSpec(**bad)
    with pytest.raises(ValueError):
        QuadratureSpec.from_json({"nodes": 3})
    assert QuadratureSpec.from_json({"levels": 2}).to_json()["levels"] == 2
