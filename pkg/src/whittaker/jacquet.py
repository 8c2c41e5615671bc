"""Jacquet's Whittaker function by oscillatory quadrature.

``W(z) = int_{U(n,R)} |w_n u z|^(alpha + rho) conj(psi_N(u)) du`` for
``n = 2`` and ``n = 3``.

Two substitutions are available through :class:`QuadratureSpec`:

``"de"`` (default)
    Double-exponential rules.  The ``u_{1,2}`` integral uses the
    Ooura-Mori Fourier rule on a line shifted into the complex plane,
    which removes most of the cancellation that makes ``W`` exponentially
    small.  For ``n = 3`` the ``u_{2,3}`` integral is done in closed form
    (a Bessel-K Fourier transform) and ``u_{1,3}`` by a sinh-sinh rule.
``"tan"``
    Literal tensor product: ``u = tan(theta)`` per coordinate with
    Gauss-Legendre nodes, evaluating the integrand through the Iwasawa
    decomposition.  Slow and only modestly accurate for ``n = 3``; kept as
    an independent reference path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import kve as _kve
from scipy.special import loggamma as _loggamma

from .errors import ConvergenceFailure, DimensionMismatch, IrregularParameters
from .geometry import HalfPlanePoint, iwasawa_decompose, iwasawa_y_batch, long_weyl_element, outer_involution
from .langlands import (
    CharacterTuple,
    LanglandsParams,
    UnipotentElement,
    effective_params,
    power_from_y,
    power_function,
    psi_eval,
    rho,
)
from .quadrature import fourier_rule, sinh_sinh, tan_gauss_legendre

SUBSTITUTIONS = ("de", "tan")
T_OUTER = 8.0
T_INNER = 3.0
INNER_REFINE = 4
CHUNK = 48
_DEAD = -700.0


@dataclass(frozen=True)
class WhittakerConfig:
    """Dimension, Langlands parameters and character of a Whittaker function.

    Raises
    ------
    IrregularParameters
        If ``alpha`` is not regular, or the effective exponents fall outside
        the region where the Jacquet integral converges absolutely.
    """

    n: int
    alpha: LanglandsParams
    N: CharacterTuple

    def __post_init__(self):
        if self.alpha.n != self.n or self.N.n != self.n:
            raise DimensionMismatch(
                f"n={self.n} needs {self.n} parameters and {self.n - 1} character entries"
            )
        if not self.alpha.regular():
            raise IrregularParameters(
                f"alpha={self.alpha.values} is not regular (Re(alpha_i - alpha_(i+1)) > 0 fails)"
            )
        if self.n in (2, 3):
            exps = _convergence_exponents(self.shifted())
            if min(e.real for e in exps) <= 0.5:
                raise IrregularParameters(
                    "the Jacquet integral does not converge absolutely for "
                    f"alpha={self.alpha.values} (effective exponents {exps})"
                )

    def shifted(self) -> np.ndarray:
        """Exponent tuple ``alpha + rho``."""
        return self.alpha.array() + rho(self.n)

    def to_json(self) -> dict:
        return {"n": self.n, "alpha": self.alpha.to_json()["values"], "N": list(self.N.N)}


def _convergence_exponents(s: np.ndarray) -> tuple:
    """Exponents whose real parts must exceed 1/2 for absolute convergence."""
    if s.size == 2:
        return (complex(s[0]),)
    s1, s2 = complex(s[0]), complex(s[1])
    return ((s1 - s2) / 2.0, (s1 + 2.0 * s2) / 2.0)


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature controls.

    Attributes
    ----------
    nodes_per_dim : int
        Odd.  For ``"de"`` the finest outer mesh is ``2 T/(nodes_per_dim - 1)``
        with ``T = 8``; the inner sinh-sinh mesh is four times finer.  For
        ``"tan"`` it is the Gauss-Legendre order per coordinate.
    levels : int
        Number of refinement levels (each halves the mesh); at least 2.
    substitution : {"de", "tan"}
    target_rel_err : float
        A :class:`ConvergenceFailure` is raised when the last two levels
        differ by more than ten times this.
    """

    nodes_per_dim: int = 257
    levels: int = 3
    substitution: str = "de"
    target_rel_err: float = 1e-6

    def __post_init__(self):
        if self.nodes_per_dim < 5 or self.nodes_per_dim % 2 == 0:
            raise ValueError("nodes_per_dim must be odd and at least 5")
        if self.levels < 2:
            raise ValueError("levels must be at least 2 so an error estimate exists")
        if (self.nodes_per_dim - 1) % (2 ** (self.levels - 1)) != 0:
            raise ValueError("nodes_per_dim - 1 must be divisible by 2^(levels - 1)")
        if self.substitution not in SUBSTITUTIONS:
            raise ValueError(f"substitution must be one of {SUBSTITUTIONS}")
        if not self.target_rel_err > 0:
            raise ValueError("target_rel_err must be positive")

    @classmethod
    def from_json(cls, obj: dict | None) -> "QuadratureSpec":
        obj = dict(obj or {})
        unknown = set(obj) - {"nodes_per_dim", "levels", "substitution", "target_rel_err"}
        if unknown:
            raise ValueError(f"unknown QuadratureSpec keys: {sorted(unknown)}")
        return cls(**obj)

    def to_json(self) -> dict:
        return {
            "nodes_per_dim": self.nodes_per_dim,
            "levels": self.levels,
            "substitution": self.substitution,
            "target_rel_err": self.target_rel_err,
        }


@dataclass(frozen=True)
class WhittakerValue:
    """A quadrature result with its refinement-based error estimate."""

    value: complex
    est_rel_err: float
    evaluations: int
    levels: tuple = field(default=(), compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "est_rel_err": self.est_rel_err,
            "evaluations": self.evaluations,
        }


# ---------------------------------------------------------------------------
# literal integrand


def integrand(cfg: WhittakerConfig, u: UnipotentElement, z: HalfPlanePoint) -> complex:
    """``|w_n u z|^(alpha + rho) * conj(psi_N(u))`` through the Iwasawa decomposition."""
    if u.n != cfg.n or z.n != cfg.n:
        raise DimensionMismatch("integrand arguments must match the config dimension")
    g = long_weyl_element(cfg.n) @ u.matrix() @ z.matrix()
    p = iwasawa_decompose(g).point
    value = power_function(p, LanglandsParams(cfg.shifted()))
    return value * psi_eval(cfg.N, u).conjugate()


def _integrand_batch(cfg: WhittakerConfig, entries: np.ndarray, z: HalfPlanePoint) -> np.ndarray:
    """Vectorized :func:`integrand` for ``entries`` of shape ``(k, n(n-1)/2)``.

    Columns follow row-major order of the strictly upper triangle.
    """
    n = cfg.n
    iu = np.triu_indices(n, 1)
    k = entries.shape[0]
    U = np.broadcast_to(np.eye(n), (k, n, n)).copy()
    U[:, iu[0], iu[1]] = entries
    G = long_weyl_element(n) @ U @ z.matrix()
    vals = power_from_y(iwasawa_y_batch(G), cfg.shifted())
    sup = [c for c, (i, j) in enumerate(zip(*iu)) if j == i + 1]
    phase = entries[:, sup] @ np.asarray(cfg.N.N, dtype=float)
    return vals * np.exp(-2j * np.pi * phase)


# ---------------------------------------------------------------------------
# special functions


def _kve_any(nu: complex, z: np.ndarray) -> np.ndarray:
    """``exp(z) K_nu(z)`` for complex ``z`` with ``Re z > 0`` and any order."""
    nu = complex(nu)
    if nu.imag == 0.0:
        return _kve(nu.real, z)
    # K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt; the trapezoid rule is
    # spectrally accurate for this entire, doubly-exponentially decaying integrand
    zr = np.maximum(np.min(z.real), 1e-3)
    T = math.acosh(1.0 + (60.0 + abs(nu.real) * 10.0) / zr) + 1.0
    step = 0.05
    t = np.arange(0.0, T + step, step)
    w = np.full(t.size, step)
    w[0] = 0.5 * step
    flat = z.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    cm1 = np.cosh(t) - 1.0
    ch = np.cosh(nu * t) * w
    for start in range(0, flat.size, 4096):
        block = flat[start : start + 4096]
        out[start : start + 4096] = np.exp(-block[:, None] * cm1[None, :]) @ ch
    return out.reshape(z.shape)


def _gamma_ratio(a: complex, b: complex) -> complex:
    return complex(np.exp(_loggamma(a) - _loggamma(b)))


def _shift_fraction(y: float) -> float:
    """Depth of the contour shift as a fraction of the nearest singularity distance."""
    return min(0.85, max(0.5, 1.0 - 2.5 / y))


# ---------------------------------------------------------------------------
# n = 2


def _w2_de(s1: complex, N1: int, x: float, y: float, h: float):
    u, w = fourier_rule(float(N1), h, T_OUTER)
    eta = _shift_fraction(y) * y * np.sign(N1)
    v = u - 1j * eta + x
    vals = (y / (y * y + v * v)) ** s1
    total = np.sum(w * vals) * math.exp(-2.0 * math.pi * N1 * eta)
    return complex(total), u.size


# ---------------------------------------------------------------------------
# n = 3


def _w3_de(s: np.ndarray, N: tuple, x12: float, x13: float, x23: float, y1: float, y2: float, h: float, hin: float):
    """Nested rule at the point with the given coordinates.

    ``u_{1,2}`` runs over ``R - i eta`` (Ooura-Mori), ``u_{1,3}`` over the real
    line (sinh-sinh, scaled per outer node) and ``u_{2,3}`` is integrated
    exactly.  Writing ``v = u x`` the integrand is
    ``det^s1 * D1^(-sigma) * D2^(-tau)`` with
    ``D1 = A^2 + y1^2 v12^2 + v13^2`` and
    ``D2 = y1^2 (A^2 + y2^2 v23^2 + (v12 v23 - v13)^2)``, ``A = y1 y2``.
    """
    N1, N2 = int(N[0]), int(N[1])
    s1, s2 = complex(s[0]), complex(s[1])
    tau = 0.5 * (s1 - s2)
    sigma = 0.5 * (s1 + 2.0 * s2)
    A = y1 * y2
    u12, w12 = fourier_rule(float(N1), h, T_OUTER)
    eta = _shift_fraction(y2) * y2 * np.sign(N1)
    u12 = u12 - 1j * eta
    w12 = w12 * math.exp(-2.0 * math.pi * N1 * eta)
    t, wt = sinh_sinh(hin, T_INNER)
    prefactor = (y1 * y1 * y2) ** s1 * np.exp(2j * np.pi * N2 * x23)
    xi = abs(N2)
    if xi:
        fourier_const = 2.0 * np.pi**tau * xi ** (tau - 0.5) / _gamma(tau)
    else:
        fourier_const = math.sqrt(math.pi) * _gamma_ratio(tau - 0.5, tau)
    total = 0.0 + 0.0j
    for start in range(0, u12.size, CHUNK):
        uc = u12[start : start + CHUNK, None]
        v12 = uc + x12
        R = np.sqrt(A * A + y1 * y1 * np.abs(v12) ** 2)
        # u_{1,3} real; v13 = u13 + u12 x23 + x13, centred on the real part
        v13 = R * t[None, :] + 1j * uc.imag * x23
        P = y2 * y2 + v12 * v12
        B = np.sqrt((A * A * P + y2 * y2 * v13 * v13) / (P * P))
        D1 = A * A + y1 * y1 * v12 * v12 + v13 * v13
        base = R * wt[None, :] * D1 ** (-sigma) * (y1 * y1 * P) ** (-tau)
        if xi:
            c = v12 * v13 / P
            Z = 2.0 * np.pi * xi * B
            expo = -2j * np.pi * N2 * c - Z
            dead = expo.real < _DEAD
            Z = np.where(dead, 1.0, Z)
            bessel = _kve_any(tau - 0.5, Z) * np.exp(np.where(dead, 0.0, expo))
            inner = np.where(dead, 0.0, B ** (0.5 - tau) * bessel)
        else:
            inner = B ** (1.0 - 2.0 * tau)
        G = np.sum(base * inner, axis=1)
        total += np.sum(w12[start : start + CHUNK] * G)
    return complex(total * prefactor * fourier_const), u12.size * t.size


def _orient(cfg: WhittakerConfig, z: HalfPlanePoint):
    """Return ``(s, N, point)`` with ``y1 <= y2``.

    The outer automorphism ``g -> w g^{-T} w^{-1}`` swaps ``y1`` and ``y2``;
    the Whittaker function transforms into the one with parameters
    ``-reverse(alpha)`` and character ``(N2, -N1)`` (the involution sends
    ``x12`` to ``-x23``).  The nested rule is far
    better conditioned along ``y2``, so points with ``y1 > y2`` are mapped.
    """
    y1, y2 = z.y
    if y1 <= y2:
        return cfg.shifted(), cfg.N.N, z
    eff = effective_params(cfg.alpha).array()
    s = -eff[::-1] + rho(3)
    p = iwasawa_decompose(outer_involution(z.matrix())).point
    return s, (cfg.N.N[1], -cfg.N.N[0]), p


# ---------------------------------------------------------------------------
# tan substitution (literal integrand)


def _tan_eval(cfg: WhittakerConfig, z: HalfPlanePoint, nodes: int):
    u, w = tan_gauss_legendre(nodes)
    dim = cfg.n * (cfg.n - 1) // 2
    grids = np.meshgrid(*([u] * dim), indexing="ij")
    weights = np.ones(grids[0].shape)
    for axis in range(dim):
        shape = [1] * dim
        shape[axis] = -1
        weights = weights * w.reshape(shape)
    entries = np.stack([g.reshape(-1) for g in grids], axis=1)
    weights = weights.reshape(-1)
    total = 0.0 + 0.0j
    for start in range(0, entries.shape[0], 200_000):
        block = entries[start : start + 200_000]
        total += np.sum(weights[start : start + 200_000] * _integrand_batch(cfg, block, z))
    return complex(total), entries.shape[0]


# ---------------------------------------------------------------------------
# public evaluators


def _level_meshes(q: QuadratureSpec):
    """Outer and inner mesh sizes from coarsest to finest."""
    finest = 2.0 * T_OUTER / (q.nodes_per_dim - 1)
    inner = 2.0 * T_INNER / (INNER_REFINE * (q.nodes_per_dim - 1))
    return [(finest * 2**k, inner * 2**k) for k in reversed(range(q.levels))]


def _rel_change(fine: complex, coarse: complex) -> float:
    if fine == coarse:
        return 0.0
    if fine == 0:
        return math.inf
    return abs(fine - coarse) / abs(fine)


def whittaker_eval(cfg: WhittakerConfig, z: HalfPlanePoint, q: QuadratureSpec = QuadratureSpec()) -> WhittakerValue:
    """Evaluate ``W_{alpha,N}`` at ``z``.

    Every refinement level is computed and the finest is returned; the
    error estimate is the relative change between the two finest levels.

    Raises
    ------
    DimensionMismatch
        If ``n`` is not 2 or 3, or ``z`` has the wrong dimension.
    ConvergenceFailure
        If the estimate exceeds ``10 * q.target_rel_err``.  The result is
        attached to the exception.
    """
    if cfg.n not in (2, 3):
        raise DimensionMismatch(f"direct quadrature supports n = 2 and 3, not {cfg.n}")
    if z.n != cfg.n:
        raise DimensionMismatch(f"point has n={z.n}, config has n={cfg.n}")
    values, evals = [], 0
    if q.substitution == "tan":
        for k in reversed(range(q.levels)):
            nodes = (q.nodes_per_dim - 1) // 2**k + 1
            v, e = _tan_eval(cfg, z, nodes)
            values.append(v)
            evals += e
    elif cfg.n == 2:
        s1 = complex(cfg.shifted()[0])
        for h, _ in _level_meshes(q):
            v, e = _w2_de(s1, cfg.N.N[0], float(z.x[0, 1]), float(z.y[0]), h)
            values.append(v)
            evals += e
    else:
        s, N, p = _orient(cfg, z)
        x12, x13, x23 = p.x[0, 1], p.x[0, 2], p.x[1, 2]
        for h, hin in _level_meshes(q):
            v, e = _w3_de(s, N, x12, x13, x23, p.y[0], p.y[1], h, hin)
            values.append(v)
            evals += e
    est = _rel_change(values[-1], values[-2])
    result = WhittakerValue(values[-1], est, evals, tuple(values))
    if not est <= 10.0 * q.target_rel_err:
        raise ConvergenceFailure(
            f"refinement levels disagree by {est:.3e} (target {q.target_rel_err:.1e})",
            result=result,
        )
    return result


def whittaker_eval_y(cfg: WhittakerConfig, y, q: QuadratureSpec = QuadratureSpec()) -> WhittakerValue:
    """:func:`whittaker_eval` at the point with the given ``y`` and zero ``x``."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != cfg.n - 1:
        raise DimensionMismatch(f"n={cfg.n} needs {cfg.n - 1} y coordinates")
    return whittaker_eval(cfg, HalfPlanePoint.from_y(y), q)


def whittaker_field(cfg: WhittakerConfig, q: QuadratureSpec = QuadratureSpec()):
    """``g -> W(iwasawa(g))`` as a :class:`~whittaker.casimir.ScalarField`."""
    from .casimir import ScalarField

    def fn(g):
        return whittaker_eval(cfg, iwasawa_decompose(g).point, q).value

    return ScalarField(fn, cfg.n, name=f"W{cfg.n}")


def bessel_reference(alpha: LanglandsParams, N: int, y: float) -> complex:
    """``sqrt(y) K_{s - 1/2}(2 pi |N| y)`` with ``s = alpha_1 + 1/2``: the GL(2) shape."""
    from scipy.special import kv

    nu = complex(alpha.values[0])
    if nu.imag != 0:
        z = np.array([2.0 * math.pi * abs(N) * y], dtype=complex)
        return complex(math.sqrt(y) * _kve_any(nu, z)[0] * np.exp(-z[0]))
    return complex(math.sqrt(y) * kv(nu.real, 2.0 * math.pi * abs(N) * y))
