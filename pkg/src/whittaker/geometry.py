"""Points of the generalized upper half-plane and the Iwasawa decomposition.

A point of ``h^n`` is stored through its coordinates: a strictly upper
triangular array ``x`` and positive reals ``y_1, ..., y_{n-1}``.  The
associated matrix is ``x @ diag(y_1...y_{n-1}, ..., y_1, 1)`` with ``x``
taken unipotent.  Indices exposed to users (JSON, ``E_{i,j}``) are 1-based;
arrays are 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, SingularMatrix

PIVOT_FLOOR = 1e-300


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HalfPlanePoint:
    """Coordinates ``(x, y)`` of a point of ``h^n``.

    Parameters
    ----------
    n : int
        Matrix dimension.
    x : ndarray, shape (n, n)
        Strictly upper triangular part of the unipotent factor.  Entries on
        or below the diagonal are ignored and zeroed.
    y : ndarray, shape (n - 1,)
        Positive coordinates.
    """

    n: int
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        x = np.triu(np.asarray(self.x, dtype=float), 1)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if n < 1:
            raise DimensionMismatch("dimension must be at least 1")
        if x.shape != (n, n) or y.shape != (n - 1,):
            raise DimensionMismatch(
                f"expected x of shape ({n},{n}) and y of length {n - 1}, "
                f"got {x.shape} and {y.shape}"
            )
        if np.any(~np.isfinite(y)) or np.any(y <= 0):
            raise ValueError("all y coordinates must be finite and positive")
        if np.any(~np.isfinite(x)):
            raise ValueError("x coordinates must be finite")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "x", _readonly(x))
        object.__setattr__(self, "y", _readonly(y))

    @classmethod
    def identity(cls, n: int) -> "HalfPlanePoint":
        return cls(n, np.zeros((n, n)), np.ones(n - 1))

    @classmethod
    def from_y(cls, y: Sequence[float]) -> "HalfPlanePoint":
        """Point with zero ``x`` part."""
        y = np.asarray(y, dtype=float).reshape(-1)
        n = y.size + 1
        return cls(n, np.zeros((n, n)), y)

    @property
    def diagonal(self) -> np.ndarray:
        """Diagonal of the y-factor: ``(y_1...y_{n-1}, ..., y_1, 1)``."""
        return suffix_products(self.y)

    def unipotent(self) -> np.ndarray:
        return np.eye(self.n) + self.x

    def matrix(self) -> np.ndarray:
        """The matrix ``x y``."""
        return self.unipotent() * self.diagonal[None, :]

    def superdiagonal(self) -> np.ndarray:
        return np.diagonal(self.x, 1).copy()

    def with_y(self, y: Sequence[float]) -> "HalfPlanePoint":
        return HalfPlanePoint(self.n, self.x, y)

    def to_json(self) -> dict:
        entries = [
            [i + 1, j + 1, float(self.x[i, j])]
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if self.x[i, j] != 0.0
        ]
        return {"n": self.n, "x": entries, "y": [float(v) for v in self.y]}

    @classmethod
    def from_json(cls, obj: dict) -> "HalfPlanePoint":
        """Inverse of :meth:`to_json`; missing ``x`` entries are zero."""
        try:
            n = int(obj["n"])
            y = [float(v) for v in obj["y"]]
            entries = obj.get("x", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed point JSON: {exc}") from None
        x = np.zeros((n, n))
        for item in entries:
            i, j, v = item
            i, j = int(i), int(j)
            if not 1 <= i < j <= n:
                raise ValueError(f"x index ({i},{j}) is not strictly upper triangular")
            x[i - 1, j - 1] = float(v)
        return cls(n, x, y)

    def __repr__(self) -> str:
        return f"HalfPlanePoint(n={self.n}, x={self.x.tolist()}, y={self.y.tolist()})"


@dataclass(frozen=True, eq=False)
class IwasawaCoords:
    """Result of :func:`iwasawa_decompose`.

    ``point.matrix() @ orthogonal * scale`` reconstructs the input.
    """

    point: HalfPlanePoint
    orthogonal: np.ndarray
    scale: float

    def reconstruct(self) -> np.ndarray:
        return self.point.matrix() @ self.orthogonal * self.scale


@dataclass(frozen=True)
class SiegelSet:
    """Points with every ``|x_{i,j}| <= b`` and every ``y_i > a``."""

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("Siegel bounds must be nonnegative")


def suffix_products(y: np.ndarray) -> np.ndarray:
    """Return ``(y_1...y_{n-1}, y_1...y_{n-2}, ..., y_1, 1)`` along the last axis."""
    y = np.asarray(y)
    ones = np.ones(y.shape[:-1] + (1,), dtype=y.dtype)
    prefix = np.cumprod(y, axis=-1)
    return np.concatenate([prefix[..., ::-1], ones], axis=-1)


def _as_square(g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {g.shape}")
    return g


def _flipped_ldl(gram: np.ndarray):
    """Factor ``gram = u diag(d) u^T`` with ``u`` upper unipotent.

    Works on stacks.  Reversing rows and columns turns the upper variant
    into an ordinary lower Cholesky factorization.
    """
    flipped = gram[..., ::-1, ::-1]
    try:
        c = np.linalg.cholesky(flipped)
    except np.linalg.LinAlgError:
        raise SingularMatrix("Gram matrix is not positive definite") from None
    diag = np.diagonal(c, axis1=-2, axis2=-1)
    if np.any(~(diag**2 > PIVOT_FLOOR)):
        raise SingularMatrix("pivot underflow in Iwasawa factorization")
    lower = c / diag[..., None, :]
    u = lower[..., ::-1, ::-1]
    d = (diag**2)[..., ::-1]
    return u, d


def iwasawa_decompose(g) -> IwasawaCoords:
    """Iwasawa decomposition ``g = x y k c``.

    Parameters
    ----------
    g : array_like, shape (n, n)
        Invertible real matrix.

    Returns
    -------
    IwasawaCoords
        Half-plane point ``x y``, the orthogonal factor ``k`` and the
        positive scalar ``c``.

    Raises
    ------
    SingularMatrix
        If ``g g^T`` is not numerically positive definite.
    """
    g = _as_square(g)
    n = g.shape[0]
    if not np.all(np.isfinite(g)):
        raise SingularMatrix("matrix has non-finite entries")
    u, d = _flipped_ldl(g @ g.T)
    root = np.sqrt(d)
    scale = float(root[-1])
    y = root[:-1] / root[1:]
    y = y[::-1]
    k = solve_triangular(u * root[None, :], g, lower=False)
    point = HalfPlanePoint(n, u, y)
    return IwasawaCoords(point=point, orthogonal=k, scale=scale)


def iwasawa_y_batch(g: np.ndarray) -> np.ndarray:
    """Iwasawa ``y`` coordinates for a stack of matrices.

    Parameters
    ----------
    g : ndarray, shape (..., n, n)

    Returns
    -------
    ndarray, shape (..., n - 1)
    """
    g = np.asarray(g, dtype=float)
    _, d = _flipped_ldl(g @ np.swapaxes(g, -1, -2))
    root = np.sqrt(d)
    return (root[..., :-1] / root[..., 1:])[..., ::-1]


def long_weyl_element(n: int) -> np.ndarray:
    """Anti-diagonal Weyl element with top-right entry ``(-1)^(n // 2)``.

    The interior anti-diagonal entries are 1.  Other sign patterns differ
    by a diagonal orthogonal matrix and give the same power function.
    """
    if n < 2:
        raise DimensionMismatch("the long Weyl element needs n >= 2")
    w = np.fliplr(np.eye(n))
    w[0, n - 1] = (-1.0) ** (n // 2)
    return w


def block_embed_matrix(a, n: int) -> np.ndarray:
    """Place the ``m x m`` matrix ``a`` in the top-left block of ``I_n``."""
    a = _as_square(a)
    m = a.shape[0]
    if m >= n:
        raise DimensionMismatch(f"cannot embed dimension {m} into dimension {n}")
    g = np.eye(n)
    g[:m, :m] = a
    return g


def block_embed(z: HalfPlanePoint, n: int) -> np.ndarray:
    """Embed the matrix of ``z`` block-diagonally into ``GL(n)``."""
    if z.n >= n:
        raise DimensionMismatch(f"cannot embed dimension {z.n} into dimension {n}")
    return block_embed_matrix(z.matrix(), n)


def measure_weight(z: HalfPlanePoint) -> float:
    """Density ``prod_i y_i^(-i(n-i)-1)`` of the invariant measure in ``(x, y)``."""
    n = z.n
    i = np.arange(1, n)
    return float(np.prod(z.y ** (-i * (n - i) - 1.0)))


def siegel_contains(s: SiegelSet, z: HalfPlanePoint) -> bool:
    """Membership with ``y_i > a`` strict and ``|x_{i,j}| <= b`` inclusive."""
    iu = np.triu_indices(z.n, 1)
    return bool(np.all(np.abs(z.x[iu]) <= s.b) and np.all(z.y > s.a))


def outer_involution(g) -> np.ndarray:
    """``w g^{-T} w^{-1}``: the outer automorphism fixing the standard Borel."""
    g = _as_square(g)
    w = long_weyl_element(g.shape[0])
    return w @ np.linalg.inv(g).T @ w.T


def unipotent_from_entries(n: int, entries: Iterable[tuple[int, int, float]]) -> np.ndarray:
    """Unipotent matrix from 1-based ``(i, j, value)`` triples."""
    u = np.eye(n)
    for i, j, v in entries:
        if not 1 <= i < j <= n:
            raise DimensionMismatch(f"entry ({i},{j}) is not strictly upper triangular")
        u[i - 1, j - 1] = v
    return u


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix (sign-corrected QR)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))[None, :]
