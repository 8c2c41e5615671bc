"""Restriction of a ``GL(n)`` Whittaker function to block-embedded ``GL(m)``.

``V(z) = W(iwasawa(diag(z, I_{n-m})))`` together with the Whittaker data
it is predicted to carry: parameters shifted by ``(n - m)/2`` and the
character truncated to its first ``m - 1`` entries.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .casimir import ScalarField
from .errors import DimensionMismatch
from .geometry import HalfPlanePoint, block_embed, block_embed_matrix, iwasawa_decompose
from .jacquet import QuadratureSpec, WhittakerConfig, WhittakerValue, whittaker_eval
from .langlands import CharacterTuple, LanglandsParams, condition_residual, shift_params

CACHE_DIGITS = 12
CACHE_CAPACITY = 4096


@dataclass(frozen=True)
class RestrictionConfig:
    """Source Whittaker data plus the predicted data on ``GL(m)``."""

    source: WhittakerConfig
    m: int
    predicted_params: LanglandsParams
    predicted_character: CharacterTuple
    hypothesis_residual: complex

    @property
    def n(self) -> int:
        return self.source.n

    def to_json(self) -> dict:
        r = self.hypothesis_residual
        return {
            "n": self.n,
            "m": self.m,
            "alpha": self.source.alpha.to_json()["values"],
            "N": list(self.source.N.N),
            "predicted_params": self.predicted_params.to_json()["values"],
            "predicted_character": list(self.predicted_character.N),
            "hypothesis_residual": [r.real, r.imag],
        }


def restrict(source: WhittakerConfig, m: int) -> RestrictionConfig:
    """Assemble the predicted ``GL(m)`` data; the hypothesis residual is recorded, not enforced."""
    if not 2 <= m < source.n:
        raise DimensionMismatch(f"need 2 <= m < n, got m={m}, n={source.n}")
    return RestrictionConfig(
        source=source,
        m=m,
        predicted_params=shift_params(source.alpha, m),
        predicted_character=source.N.prefix(m),
        hypothesis_residual=condition_residual(source.alpha, m),
    )


def embedded_point(r: RestrictionConfig, z: HalfPlanePoint) -> HalfPlanePoint:
    if z.n != r.m:
        raise DimensionMismatch(f"point has n={z.n}, restriction target is m={r.m}")
    return iwasawa_decompose(block_embed(z, r.n)).point


def v_eval(r: RestrictionConfig, z: HalfPlanePoint, q: QuadratureSpec = QuadratureSpec()) -> WhittakerValue:
    """Value of the source Whittaker function at the embedded point of ``z``."""
    return whittaker_eval(r.source, embedded_point(r, z), q)


class _MemoCache:
    """Bounded insert-once cache; safe for concurrent use."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        with self._lock:
            if key in self._data:
                self.hits += 1
                return self._data[key]
            self.misses += 1
            return None

    def put(self, key, value):
        with self._lock:
            # first writer wins, so concurrent callers all see the same value
            existing = self._data.get(key)
            if existing is not None:
                return existing
            self._data[key] = value
            if len(self._data) > self.capacity:
                self._data.popitem(last=False)
            return value

    def __len__(self) -> int:
        return len(self._data)


def _cache_key(p: HalfPlanePoint) -> tuple:
    iu = np.triu_indices(p.n, 1)
    coords = np.concatenate([p.x[iu], p.y])
    return tuple(np.round(coords, CACHE_DIGITS).tolist())


def v_field(r: RestrictionConfig, q: QuadratureSpec = QuadratureSpec(), capacity: int = CACHE_CAPACITY) -> ScalarField:
    """``a -> W(iwasawa(diag(a, I)))`` on ``m x m`` matrices, memoized.

    The matrix is embedded as given.  No ``GL(m)`` scale is removed, because
    the embedded value depends on it whenever the hypothesis residual is
    nonzero.  Cache keys are the embedded Iwasawa coordinates rounded to
    12 decimals.
    """
    cache = _MemoCache(capacity)

    def fn(a):
        p = iwasawa_decompose(block_embed_matrix(a, r.n)).point
        key = _cache_key(p)
        hit = cache.get(key)
        if hit is not None:
            return hit
        return cache.put(key, whittaker_eval(r.source, p, q).value)

    field = ScalarField(fn, r.m, name=f"V{r.n}->{r.m}")
    field.cache = cache
    return field
