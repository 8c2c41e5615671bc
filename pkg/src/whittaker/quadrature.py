"""One-dimensional quadrature rules used by the Whittaker evaluator.

All rules return ``(nodes, weights)`` arrays for a fixed mesh size, so a
tensor or nested product is just a broadcast.  Nothing here adapts; the
caller controls refinement by halving ``h``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def _frozen(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


@lru_cache(maxsize=64)
def sinh_sinh(h: float, T: float = 4.0) -> tuple[np.ndarray, np.ndarray]:
    """Double-exponential rule for ``int_R f(x) dx`` with ``x = sinh(pi/2 sinh t)``.

    Suited to integrands with algebraic decay at both ends.
    """
    J = int(round(T / h))
    t = np.arange(-J, J + 1) * h
    inner = 0.5 * math.pi * np.sinh(t)
    x = np.sinh(inner)
    w = h * 0.5 * math.pi * np.cosh(t) * np.cosh(inner)
    return _frozen(x, w)


@lru_cache(maxsize=64)
def ooura_mori(omega: float, h: float, kind: str = "sin", T: float = 8.0) -> tuple[np.ndarray, np.ndarray]:
    """Ooura-Mori rule for ``int_0^inf f(x) sin(omega x) dx`` (or cos).

    The substitution ``x = M phi(t)/omega`` with ``M = pi/h`` puts the
    nodes asymptotically on the zeros of the oscillatory factor, so the
    rule converges for integrands that decay only algebraically.

    Parameters
    ----------
    omega : float
        Positive angular frequency.
    h : float
        Mesh size in the ``t`` variable.
    kind : {"sin", "cos"}
    T : float
        Truncation ``|t| <= T``.  The negative side decays slowly, which
        is why the default is generous.

    Returns
    -------
    nodes, weights : ndarray
        Weights already include the oscillatory factor.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    if kind not in ("sin", "cos"):
        raise ValueError("kind must be 'sin' or 'cos'")
    M = math.pi / h
    beta = 0.25
    alpha = beta / math.sqrt(1.0 + M * math.log1p(M) / (4.0 * math.pi))
    J = int(round(T / h))
    n = np.arange(-J, J + 1)
    if kind == "sin":
        t = n * h
        zero = n == 0
    else:
        t = (n - 0.5) * h
        zero = np.zeros(n.shape, dtype=bool)
    tt = np.where(zero, 1.0, t)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        g = -2.0 * tt + alpha * np.expm1(-tt) - beta * np.expm1(tt)
        dg = -2.0 - alpha * np.exp(-tt) - beta * np.exp(tt)
        q = -np.expm1(g)
        e = np.exp(g)
        phi = tt / q
        dphi = (q + tt * e * dg) / q**2
        # phi - t, kept separate to avoid cancellation in sin(M phi)
        delta = tt * e / q
        # t = 0 limits of phi and phi'
        c1 = 2.0 + alpha + beta
        phi = np.where(zero, 1.0 / c1, phi)
        dphi = np.where(zero, (0.5 * (alpha - beta) + 0.5 * c1**2) / c1**2, dphi)
        sign = np.where(n % 2 == 0, 1.0, -1.0)
        # sin(M phi) and cos(M phi) both reduce to (-1)^n sin(M (phi - t)) off t = 0
        osc = sign * np.sin(M * delta)
        if kind == "sin":
            osc = np.where(zero, math.sin(M / c1), osc)
        ok = np.isfinite(phi) & np.isfinite(dphi) & np.isfinite(osc) & (phi > 0)
        x = np.where(ok, M * phi / omega, 0.0)
        w = np.where(ok, (M / omega) * h * dphi * osc, 0.0)
    keep = w != 0.0
    return _frozen(np.ascontiguousarray(x[keep]), np.ascontiguousarray(w[keep]))


@lru_cache(maxsize=64)
def fourier_rule(xi: float, h: float, T: float = 8.0, T_flat: float = 4.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and complex weights for ``int_R f(u) exp(-2 pi i xi u) du``.

    Splits ``f`` into even and odd parts and applies the Ooura-Mori cos and
    sin rules.  For ``xi = 0`` the sinh-sinh rule is returned instead.
    """
    if xi == 0:
        x, w = sinh_sinh(h, T_flat)
        return _frozen(x.copy(), w.astype(complex))
    omega = 2.0 * math.pi * abs(xi)
    xs, ws = ooura_mori(omega, h, "sin", T)
    xc, wc = ooura_mori(omega, h, "cos", T)
    u = np.concatenate([xc, -xc, xs, -xs])
    w = np.concatenate([wc, wc, -1j * ws, 1j * ws]).astype(complex)
    if xi < 0:
        u = -u
    return _frozen(u, w)


@lru_cache(maxsize=64)
def tan_gauss_legendre(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """``u = tan(theta)`` with Gauss-Legendre nodes on ``(-pi/2, pi/2)``."""
    t, w = np.polynomial.legendre.leggauss(int(nodes))
    theta = 0.5 * math.pi * t
    u = np.tan(theta)
    wu = 0.5 * math.pi * w / np.cos(theta) ** 2
    return _frozen(u, wu)


def pairwise_sum(values: np.ndarray, axis: int = -1):
    """Sum in a fixed order regardless of threading (numpy's pairwise reduction)."""
    return np.add.reduce(values, axis=axis)
