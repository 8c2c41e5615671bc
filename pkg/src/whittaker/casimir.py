"""Directional derivatives, composed operators and Casimir operators.

Derivatives are tensor-product central differences in each composition
parameter, refined by Richardson extrapolation in powers of ``h^2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EigenvalueInconsistency, EvaluationFailure, UnsupportedOrder
from .geometry import HalfPlanePoint, iwasawa_decompose
from .langlands import LanglandsParams, power_function, rho

MAX_ORDER = 4
EIGEN_CROSSCHECK_TOL = 1e-6


class ScalarField:
    """A complex-valued function on ``GL(n, R)``.

    Parameters
    ----------
    fn : callable
        Maps an ``n x n`` array to a complex number.  Must be safe to call
        from several threads.
    n : int
        Matrix dimension.
    name : str, optional
        Label used in reports.
    """

    def __init__(self, fn: Callable[[np.ndarray], complex], n: int, name: str = "field"):
        self._fn = fn
        self.n = int(n)
        self.name = name

    def __call__(self, g) -> complex:
        g = np.asarray(g, dtype=float)
        if g.shape != (self.n, self.n):
            raise ValueError(f"{self.name} expects {self.n}x{self.n} input, got {g.shape}")
        return complex(self._fn(g))

    def at_point(self, z: HalfPlanePoint) -> complex:
        return self(z.matrix())

    def __repr__(self) -> str:
        return f"ScalarField({self.name!r}, n={self.n})"


def constant_field(n: int, value: complex = 1.0) -> ScalarField:
    return ScalarField(lambda g: value, n, name="constant")


def power_field(alpha: LanglandsParams, shifted: bool = True) -> ScalarField:
    """``g -> |g|^(alpha + rho)`` (or ``|g|^alpha`` if ``shifted`` is false)."""
    exps = LanglandsParams(alpha.array() + rho(alpha.n)) if shifted else alpha

    def fn(g):
        return power_function(iwasawa_decompose(g).point, exps)

    return ScalarField(fn, alpha.n, name="power")


@dataclass(frozen=True)
class DiffSpec:
    """Finite-difference controls.

    Attributes
    ----------
    h : float
        Base step, in ``(0, 0.5]``.
    richardson_levels : int
        Number of step halvings combined by extrapolation, 1 to 4.
    """

    h: float = 1e-2
    richardson_levels: int = 2

    def __post_init__(self):
        if not 0 < self.h <= 0.5:
            raise ValueError(f"step h must lie in (0, 0.5], got {self.h}")
        if not 1 <= int(self.richardson_levels) <= 4:
            raise ValueError("richardson_levels must be between 1 and 4")

    @classmethod
    def from_json(cls, obj: dict | None) -> "DiffSpec":
        obj = obj or {}
        unknown = set(obj) - {"h", "richardson_levels"}
        if unknown:
            raise ValueError(f"unknown DiffSpec keys: {sorted(unknown)}")
        return cls(**obj)

    def to_json(self) -> dict:
        return {"h": self.h, "richardson_levels": self.richardson_levels}


def _richardson(estimates: Sequence[complex]) -> complex:
    """Eliminate ``h^2, h^4, ...`` terms from estimates at ``h, h/2, h/4, ...``."""
    table = list(estimates)
    k = 1
    while len(table) > 1:
        f = 4.0**k
        table = [(f * table[i + 1] - table[i]) / (f - 1.0) for i in range(len(table) - 1)]
        k += 1
    return table[0]


def _elementary(n: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((n, n))
    e[i - 1, j - 1] = 1.0
    return e


def _check_index(n: int, *idx: int) -> None:
    for i in idx:
        if not 1 <= i <= n:
            raise IndexError(f"index {i} outside 1..{n}")


def _mixed_difference(F: ScalarField, g: np.ndarray, mats: Sequence[np.ndarray], h: float) -> complex:
    """Central tensor difference for ``d^l/dt_l...dt_1 F(g (I+t_l E_l)...(I+t_1 E_1))``.

    ``mats`` lists the ``E`` matrices leftmost first, so ``mats[0]`` carries
    ``t_l``.
    """
    ell = len(mats)
    n = g.shape[0]
    eye = np.eye(n)
    total = 0.0 + 0.0j
    for signs in itertools.product((1.0, -1.0), repeat=ell):
        m = g.copy()
        for s, e in zip(signs, mats):
            m = m @ (eye + s * h * e)
        val = F(m)
        if not np.isfinite(val):
            raise EvaluationFailure(f"{F.name} returned {val} at a stencil point")
        total += np.prod(signs) * val
    return total / (2.0 * h) ** ell


def _composed(F: ScalarField, g: np.ndarray, mats: Sequence[np.ndarray], spec: DiffSpec) -> complex:
    steps = [spec.h / 2.0**k for k in range(spec.richardson_levels)]
    return complex(_richardson([_mixed_difference(F, g, mats, h) for h in steps]))


def directional_derivative(F: ScalarField, g, i: int, j: int, spec: DiffSpec = DiffSpec()) -> complex:
    """Estimate ``d/dt F(g (I + t E_{i,j}))`` at ``t = 0`` (1-based indices)."""
    g = np.asarray(g, dtype=float)
    _check_index(F.n, i, j)
    return _composed(F, g, [_elementary(F.n, i, j)], spec)


def tuple_compose(F: ScalarField, g, t: Sequence[int], spec: DiffSpec = DiffSpec()) -> complex:
    """Apply ``D_{i_1,i_2} o ... o D_{i_l,i_1}`` to ``F`` at ``g``.

    Computed as the mixed derivative of
    ``F(g (I + t_l E_{i_l,i_1}) ... (I + t_1 E_{i_1,i_2}))`` at zero, with
    the ``t_l`` factor leftmost.

    Raises
    ------
    UnsupportedOrder
        For compositions longer than four.
    """
    t = tuple(int(v) for v in t)
    ell = len(t)
    if not 1 <= ell <= MAX_ORDER:
        raise UnsupportedOrder(f"composition length {ell} outside 1..{MAX_ORDER}")
    _check_index(F.n, *t)
    g = np.asarray(g, dtype=float)
    pairs = [(t[k], t[(k + 1) % ell]) for k in range(ell)]
    mats = [_elementary(F.n, a, b) for a, b in reversed(pairs)]
    return _composed(F, g, mats, spec)


def index_tuples(n: int, ell: int):
    """All tuples in ``[n]^ell`` in lexicographic order."""
    return itertools.product(range(1, n + 1), repeat=ell)


def casimir_apply(F: ScalarField, g, ell: int, spec: DiffSpec = DiffSpec(), indices: int | None = None) -> complex:
    """Casimir operator of order ``ell`` applied to ``F`` at ``g``.

    Parameters
    ----------
    indices : int, optional
        Sum only over ``[indices]^ell`` instead of ``[n]^ell``.  Used for
        operators of a top-left block subgroup acting on a larger field.
    """
    k = F.n if indices is None else int(indices)
    if not 1 <= ell <= min(k, MAX_ORDER):
        raise UnsupportedOrder(f"order {ell} outside 1..min({k}, {MAX_ORDER})")
    total = 0.0 + 0.0j
    for t in index_tuples(k, ell):
        total += tuple_compose(F, g, t, spec)
    return complex(total)


def default_diff_spec(ell: int) -> DiffSpec:
    """Stencil settings for an order-``ell`` operator.

    The tensor stencil divides by ``h^ell``, so at order 4 the default step
    is dominated by roundoff (about 1e-5 absolute on the power function).
    A five times larger base step with one more Richardson level keeps the
    smallest step near ``h`` while restoring about 1e-8 consistency.
    """
    return DiffSpec(h=0.05, richardson_levels=3) if ell >= 4 else DiffSpec()


def _diag_point(n: int, value: float) -> np.ndarray:
    return HalfPlanePoint.from_y([value] * (n - 1)).matrix()


def casimir_eigenvalue(
    n: int,
    ell: int,
    alpha: LanglandsParams,
    spec: DiffSpec | None = None,
    *,
    return_residual: bool = False,
    tol: float = EIGEN_CROSSCHECK_TOL,
):
    """Eigenvalue of the order-``ell`` Casimir on ``|.|^(alpha + rho)``.

    Evaluated at the point with every ``y_i = 2`` and cross-checked at
    every ``y_i = 3``.  ``spec`` defaults to :func:`default_diff_spec`.

    Returns
    -------
    complex or (complex, float)
        The eigenvalue, plus the relative cross-check residual when
        ``return_residual`` is true.

    Raises
    ------
    EigenvalueInconsistency
        If the two base points disagree beyond ``tol``.
    """
    if alpha.n != n:
        raise ValueError(f"parameters have length {alpha.n}, expected {n}")
    spec = default_diff_spec(ell) if spec is None else spec
    if not 1 <= ell <= min(n, MAX_ORDER):
        raise UnsupportedOrder(f"order {ell} outside 1..min({n}, {MAX_ORDER})")
    F = power_field(alpha)
    vals = []
    for base in (2.0, 3.0):
        g = _diag_point(n, base)
        vals.append(casimir_apply(F, g, ell, spec) / F(g))
    lam, other = vals
    residual = abs(lam - other) / max(abs(lam), 1.0)
    if residual > tol:
        raise EigenvalueInconsistency(
            f"eigenvalue differs between base points by {residual:.3e} (tolerance {tol:.1e})",
            residual=residual,
        )
    return (lam, residual) if return_residual else lam
