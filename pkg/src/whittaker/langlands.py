"""Langlands parameters, the rho shift, power functions and characters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .geometry import HalfPlanePoint, iwasawa_decompose, iwasawa_y_batch

EXACT_TOL = 1e-12


def _complex_tuple(values) -> tuple[complex, ...]:
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError(f"complex entries must be [re, im] pairs, got {v!r}")
            out.append(complex(float(v[0]), float(v[1])))
        else:
            out.append(complex(v))
    return tuple(out)


@dataclass(frozen=True)
class LanglandsParams:
    """A tuple ``alpha`` of ``n`` complex numbers.

    Validity is advisory: :meth:`sum_zero` and :meth:`regular` report the
    two standard constraints but construction never rejects a tuple.
    """

    values: tuple[complex, ...]

    def __init__(self, values):
        object.__setattr__(self, "values", _complex_tuple(values))
        if len(self.values) < 1:
            raise DimensionMismatch("Langlands parameters need at least one entry")

    @property
    def n(self) -> int:
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    def sum_zero(self, tol: float = EXACT_TOL) -> bool:
        return abs(sum(self.values)) < tol

    def regular(self) -> bool:
        """``Re(alpha_i - alpha_{i+1}) > 0`` for every consecutive pair."""
        a = self.array()
        return bool(np.all((a[:-1] - a[1:]).real > 0))

    def __add__(self, other: "LanglandsParams") -> "LanglandsParams":
        if other.n != self.n:
            raise DimensionMismatch("cannot add parameter tuples of different length")
        return LanglandsParams(self.array() + other.array())

    def to_json(self) -> dict:
        return {"values": [[v.real, v.imag] for v in self.values]}

    @classmethod
    def from_json(cls, obj) -> "LanglandsParams":
        """Accept ``{"values": [...]}`` or a bare list of entries."""
        if isinstance(obj, dict):
            obj = obj.get("values")
        if not isinstance(obj, (list, tuple)):
            raise ValueError("Langlands parameters must be a list of [re, im] pairs")
        return cls(obj)


@dataclass(frozen=True)
class CharacterTuple:
    """Integers ``N_1, ..., N_{n-1}`` defining the character ``psi_N``."""

    N: tuple[int, ...]

    def __init__(self, N):
        vals = []
        for v in N:
            if isinstance(v, bool) or float(v) != int(v):
                raise ValueError(f"character entries must be integers, got {v!r}")
            vals.append(int(v))
        object.__setattr__(self, "N", tuple(vals))

    @property
    def n(self) -> int:
        return len(self.N) + 1

    def prefix(self, m: int) -> "CharacterTuple":
        return CharacterTuple(self.N[: m - 1])

    def to_json(self) -> dict:
        return {"N": list(self.N)}

    @classmethod
    def from_json(cls, obj) -> "CharacterTuple":
        if isinstance(obj, dict):
            obj = obj.get("N")
        if not isinstance(obj, (list, tuple)):
            raise ValueError("character must be a list of integers")
        return cls(obj)


@dataclass(frozen=True, eq=False)
class UnipotentElement:
    """Upper unipotent ``n x n`` matrix stored by its strictly upper part."""

    n: int
    u: np.ndarray

    def __post_init__(self):
        u = np.triu(np.asarray(self.u, dtype=float), 1)
        if u.shape != (self.n, self.n):
            raise DimensionMismatch(f"expected shape ({self.n},{self.n}), got {u.shape}")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @classmethod
    def identity(cls, n: int) -> "UnipotentElement":
        return cls(n, np.zeros((n, n)))

    def matrix(self) -> np.ndarray:
        return np.eye(self.n) + self.u

    def __matmul__(self, other: "UnipotentElement") -> "UnipotentElement":
        if other.n != self.n:
            raise DimensionMismatch("dimension mismatch in unipotent product")
        return UnipotentElement(self.n, self.matrix() @ other.matrix())


def rho(n: int) -> np.ndarray:
    """The shift ``((n + 1)/2 - i)`` for ``i = 1..n``."""
    if n < 1:
        raise DimensionMismatch("n must be at least 1")
    return (n + 1) / 2.0 - np.arange(1, n + 1, dtype=float)


def _exponents(alpha) -> np.ndarray:
    a = alpha.array() if isinstance(alpha, LanglandsParams) else np.asarray(alpha, dtype=complex)
    return a


def power_from_y(y: np.ndarray, alpha) -> np.ndarray | complex:
    """Power function evaluated from ``y`` coordinates (last axis).

    ``prod_{i<n} prod_{j<=n-i} y_j^{alpha_i}``, computed as
    ``exp(sum_i alpha_i * log(y_1...y_{n-i}))``.
    """
    a = _exponents(alpha)
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != a.size - 1:
        raise DimensionMismatch(
            f"{a.size} parameters need {a.size - 1} y coordinates, got {y.shape[-1]}"
        )
    logs = np.cumsum(np.log(y), axis=-1)[..., ::-1]
    return np.exp(logs @ a[:-1])


def power_function(z: HalfPlanePoint, alpha: LanglandsParams) -> complex:
    """The power function ``|z|^alpha``; only the ``y`` part of ``z`` enters."""
    if z.n != alpha.n:
        raise DimensionMismatch(f"point has n={z.n}, parameters have n={alpha.n}")
    return complex(power_from_y(z.y, alpha))


def matrix_power(g, alpha) -> complex:
    """``|g|^alpha`` for an invertible matrix, through its Iwasawa point."""
    return power_function(iwasawa_decompose(g).point, alpha if isinstance(alpha, LanglandsParams) else LanglandsParams(alpha))


def matrix_power_batch(g: np.ndarray, alpha) -> np.ndarray:
    """Vectorized :func:`matrix_power` over a stack of matrices."""
    return power_from_y(iwasawa_y_batch(g), alpha)


def psi_eval(N: CharacterTuple, u) -> complex:
    """``exp(2 pi i sum_i N_i u_{i,i+1})``.

    ``u`` may be a :class:`UnipotentElement`, a :class:`HalfPlanePoint`
    (its ``x`` part is used) or a square array.
    """
    if isinstance(u, (UnipotentElement,)):
        mat, n = u.u, u.n
    elif isinstance(u, HalfPlanePoint):
        mat, n = u.x, u.n
    else:
        mat = np.asarray(u, dtype=float)
        n = mat.shape[0]
    if n != N.n:
        raise DimensionMismatch(f"character has n={N.n}, element has n={n}")
    phase = float(np.dot(N.N, np.diagonal(mat, 1))) if N.N else 0.0
    return complex(np.exp(2j * np.pi * phase))


def _check_m(n: int, m: int) -> None:
    if not 2 <= m < n:
        raise DimensionMismatch(f"need 2 <= m < n, got m={m}, n={n}")


def shift_params(alpha: LanglandsParams, m: int) -> LanglandsParams:
    """``beta_i = alpha_i + (n - m)/2`` for ``i = 1..m``."""
    _check_m(alpha.n, m)
    return LanglandsParams(alpha.array()[:m] + (alpha.n - m) / 2.0)


def condition_residual(alpha: LanglandsParams, m: int) -> complex:
    """``sum_{i<=m} alpha_i - m(m - n)/2``; zero exactly when the restriction hypothesis holds."""
    _check_m(alpha.n, m)
    return complex(sum(alpha.values[:m]) - m * (m - alpha.n) / 2.0)


def effective_params(alpha: LanglandsParams) -> LanglandsParams:
    """The sum-zero tuple with the same power function.

    The power function never sees ``alpha_n``; replacing it by
    ``-sum_{i<n} alpha_i`` changes nothing and restores the sum-zero form.
    """
    a = alpha.array().copy()
    a[-1] = -np.sum(a[:-1])
    return LanglandsParams(a)
