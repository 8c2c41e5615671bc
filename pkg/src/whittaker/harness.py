"""Reproducible numerical checks of the restriction statements.

Each check returns a :class:`VerificationReport`.  Every residual compares
two quantities computed along separate code paths; randomness comes from
``numpy.random.default_rng`` (PCG64) seeded explicitly.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .casimir import DiffSpec, ScalarField, casimir_apply, casimir_eigenvalue, tuple_compose, index_tuples
from .errors import ConfigError, ConvergenceFailure, DegenerateFit, WhittakerError
from .geometry import HalfPlanePoint, block_embed_matrix, iwasawa_decompose, measure_weight
from .jacquet import (
    QuadratureSpec,
    WhittakerConfig,
    WhittakerValue,
    whittaker_eval,
    whittaker_eval_y,
    whittaker_field,
)
from .langlands import CharacterTuple, LanglandsParams, UnipotentElement, psi_eval
from .restriction import RestrictionConfig, restrict, v_eval, v_field

SIEGEL_A = math.sqrt(3.0) / 2.0
SIEGEL_B = 0.5
BOX_Y_MAX = 3.0
RESOLVED = 0.5

TIERS = {"algebra": 1e-8, "quadrature": 1e-6, "finite-difference": 1e-3}


def worker_count() -> int:
    """Thread cap from ``WHITTAKER_THREADS``; defaults to the CPU count."""
    raw = os.environ.get("WHITTAKER_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def ordered_map(fn: Callable, items: Sequence) -> list:
    """``[fn(x) for x in items]``, possibly threaded, always in input order."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _c(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


@dataclass
class VerificationReport:
    """Outcome of one check.

    ``passed`` is true exactly when ``max_rel_residual <= tolerance``.
    ``expect_pass`` is false for negative controls, which are supposed to
    fail.
    """

    check_name: str
    samples: int
    max_rel_residual: float
    tolerance: float
    details: list = field(default_factory=list)
    seed: int | None = None
    tier: str = "quadrature"
    expect_pass: bool = True
    notes: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_rel_residual <= self.tolerance)

    @property
    def as_expected(self) -> bool:
        return self.passed == self.expect_pass

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        out["as_expected"] = self.as_expected
        return sanitize(out)


@dataclass
class L2Estimate:
    """Partial integrals of ``|V|^2`` over truncated Siegel boxes."""

    truncations: list
    partial_integrals: list
    extrapolated: float | str
    increments: list = field(default_factory=list)
    increment_ratios: list = field(default_factory=list)
    last_relative_increment: float = math.nan
    evaluations: int = 0
    unresolved_points: int = 0

    def to_json(self) -> dict:
        return asdict(self)


def _rel(a: complex, b: complex) -> float:
    """``|a - b| / max(|a|, |b|)``, zero when both vanish."""
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def _eig_rel(a: complex, b: complex) -> float:
    """Relative difference of eigenvalue-sized numbers, floored at scale 1."""
    return abs(a - b) / max(abs(b), 1.0)


def random_box_point(m: int, rng: np.random.Generator, y_lo: float = SIEGEL_A, y_hi: float = BOX_Y_MAX) -> HalfPlanePoint:
    """Point with ``x`` entries in ``[-1/2, 1/2]`` and ``y_i`` in ``[y_lo, y_hi]``."""
    x = np.triu(rng.uniform(-SIEGEL_B, SIEGEL_B, (m, m)), 1)
    y = rng.uniform(y_lo, y_hi, m - 1)
    return HalfPlanePoint(m, x, y)


def random_unipotent(m: int, rng: np.random.Generator) -> UnipotentElement:
    return UnipotentElement(m, np.triu(rng.uniform(-1.0, 1.0, (m, m)), 1))


# ---------------------------------------------------------------------------
# equivariance


def check_equivariance(
    r: RestrictionConfig,
    samples: int = 20,
    seed: int = 0,
    tol: float = 1e-5,
    q: QuadratureSpec = QuadratureSpec(),
    character: CharacterTuple | None = None,
    expect_pass: bool = True,
) -> VerificationReport:
    """Compare ``V(u z)`` with ``psi(u) V(z)`` at random pairs.

    ``character`` replaces the predicted character on the right-hand side;
    negative controls use it.
    """
    rng = np.random.default_rng(seed)
    chi = r.predicted_character if character is None else character
    pairs = [(random_unipotent(r.m, rng), random_box_point(r.m, rng)) for _ in range(samples)]

    def one(pair):
        u, z = pair
        uz = iwasawa_decompose(u.matrix() @ z.matrix()).point
        rec = {"u": u.u[np.triu_indices(r.m, 1)].tolist(), "z": z.to_json()}
        try:
            lhs = v_eval(r, uz, q).value
            rhs = psi_eval(chi, u) * v_eval(r, z, q).value
            rec.update(lhs=_c(lhs), rhs=_c(rhs), residual=abs(lhs - rhs) / abs(rhs))
        except WhittakerError as exc:
            rec.update(error=f"{exc.code}: {exc}", residual=math.inf)
        return rec

    details = ordered_map(one, pairs)
    worst = max((d["residual"] for d in details), default=0.0)
    return VerificationReport(
        "equivariance" if character is None else "equivariance[character=" + ",".join(map(str, chi.N)) + "]",
        samples, worst, tol, details, seed, "quadrature", expect_pass,
    )


# ---------------------------------------------------------------------------
# eigenfunction and two-route Casimir


def eigen_base_points(m: int, count: int, seed: int) -> list[HalfPlanePoint]:
    """Generic base points; ``y`` kept in ``[1, 2.5]`` where stencils are well resolved."""
    rng = np.random.default_rng(seed)
    return [random_box_point(m, rng, 1.0, 2.5) for _ in range(count)]


def check_eigenfunction(
    r: RestrictionConfig,
    ell: int = 2,
    points: int = 3,
    spec: DiffSpec = DiffSpec(),
    tol: float = 1e-3,
    q: QuadratureSpec = QuadratureSpec(),
    params: LanglandsParams | None = None,
    seed: int = 0,
    expect_pass: bool = True,
) -> VerificationReport:
    """Casimir ratio of the restricted field against the predicted eigenvalue.

    The residual is the larger of the pairwise spread of the ratios and
    their distance from ``casimir_eigenvalue(m, ell, params)``, both
    relative with the scale floored at 1 (the order-one eigenvalue
    vanishes identically).
    """
    beta = r.predicted_params if params is None else params
    lam = casimir_eigenvalue(r.m, ell, beta, spec)
    V = v_field(r, q)
    base = eigen_base_points(r.m, points, seed)

    def one(z):
        a = z.matrix()
        try:
            ratio = casimir_apply(V, a, ell, spec) / V(a)
            return {"z": z.to_json(), "ratio": _c(ratio), "lambda": _c(lam), "residual": _eig_rel(ratio, lam), "_r": ratio}
        except WhittakerError as exc:
            return {"z": z.to_json(), "error": f"{exc.code}: {exc}", "residual": math.inf, "_r": None}

    details = ordered_map(one, base)
    ratios = [d.pop("_r") for d in details]
    spread = math.inf
    if all(x is not None for x in ratios):
        spread = max((_eig_rel(a, b) for a in ratios for b in ratios), default=0.0)
    details.append({"constancy_spread": spread})
    worst = max([spread] + [d["residual"] for d in details[:-1]])
    name = f"eigenfunction[l={ell}]" if params is None else f"eigenfunction[l={ell},params={[_c(v) for v in beta.values]}]"
    return VerificationReport(name, points, worst, tol, details, seed, "finite-difference", expect_pass)


def check_two_route_casimir(
    r: RestrictionConfig,
    ell: int,
    spec: DiffSpec = DiffSpec(),
    tol: float = 1e-6,
    q: QuadratureSpec = QuadratureSpec(),
    z: HalfPlanePoint | None = None,
    fields: tuple[ScalarField, ScalarField] | None = None,
) -> VerificationReport:
    """``m``-dimensional stencils on ``V`` against ``n``-dimensional stencils on ``W``.

    Parameters
    ----------
    fields : (ScalarField, ScalarField), optional
        Replace ``(V, W)``; used to run the check on synthetic fields.
    """
    if not 1 <= ell <= 3:
        raise ValueError("two-route check supports orders 1 to 3")
    if z is None:
        z = HalfPlanePoint(r.m, np.triu(np.full((r.m, r.m), 0.2), 1), np.full(r.m - 1, 1.4))
    V, W = fields if fields is not None else (v_field(r, q), whittaker_field(r.source, q))
    a = z.matrix()
    g = block_embed_matrix(a, r.n)
    left = casimir_apply(V, a, ell, spec)
    right = 0.0 + 0.0j
    for t in index_tuples(r.m, ell):
        right += tuple_compose(W, g, t, spec)
    res = _rel(left, right)
    details = [{"z": z.to_json(), "m_side": _c(left), "n_side": _c(right), "residual": res}]
    return VerificationReport(f"two_route[l={ell}]", 1, res, tol, details, None, "quadrature")


# ---------------------------------------------------------------------------
# factorization


def default_factor_y(n: int) -> np.ndarray:
    return np.array([1.3]) if n == 2 else np.array([1.1, 1.3])


def check_factorization(
    cfg: WhittakerConfig,
    samples: int = 10,
    tol: float = 1e-6,
    q: QuadratureSpec = QuadratureSpec(),
    seed: int = 0,
    y: Sequence[float] | None = None,
) -> VerificationReport:
    """Spread of ``W(x y) / (psi(x) W(y))`` over random ``x`` at fixed ``y``.

    Samples are skipped when ``|W(y)|`` is below ``1e-12`` times the
    largest ``|W(x y)|`` seen.
    """
    rng = np.random.default_rng(seed)
    y = default_factor_y(cfg.n) if y is None else np.asarray(y, dtype=float)
    base = whittaker_eval_y(cfg, y, q).value
    xs = [np.triu(rng.uniform(-SIEGEL_B, SIEGEL_B, (cfg.n, cfg.n)), 1) for _ in range(samples)]

    def one(x):
        p = HalfPlanePoint(cfg.n, x, y)
        return whittaker_eval(cfg, p, q).value, psi_eval(cfg.N, p)

    vals = ordered_map(one, xs)
    scale = max([abs(v) for v, _ in vals], default=0.0)
    details, ratios, skipped = [], [], 0
    for x, (v, psi) in zip(xs, vals):
        rec = {"x": x[np.triu_indices(cfg.n, 1)].tolist(), "W_xy": _c(v), "psi": _c(psi)}
        if abs(base) < 1e-12 * scale:
            skipped += 1
            rec["skipped"] = True
        else:
            ratio = v / (psi * base)
            ratios.append(ratio)
            rec["ratio"] = _c(ratio)
        details.append(rec)
    if ratios:
        mean = sum(ratios) / len(ratios)
        spread = max(abs(r - mean) for r in ratios) / abs(mean)
        for rec in details:
            if "ratio" in rec:
                rec["residual"] = abs(complex(*rec["ratio"]) - mean) / abs(mean)
    else:
        spread = math.inf
    details.append({"y": y.tolist(), "W_y": _c(base), "skipped": skipped})
    tier = "algebra" if cfg.n == 2 else "quadrature"
    return VerificationReport(f"factorization[n={cfg.n}]", samples, spread, tol, details, seed, tier)


# ---------------------------------------------------------------------------
# decay


def _ray_point(n: int, ray: int, value: float) -> np.ndarray:
    y = np.ones(n - 1)
    y[ray - 1] = value
    return y


def _tolerant_eval(cfg: WhittakerConfig, y, q: QuadratureSpec) -> WhittakerValue:
    """Evaluate, accepting unconverged results (their error estimate says so)."""
    try:
        return whittaker_eval_y(cfg, y, q)
    except ConvergenceFailure as exc:
        return exc.result


def decay_scan(cfg: WhittakerConfig, ray: int, grid: Sequence[float], q: QuadratureSpec = QuadratureSpec()) -> list[dict]:
    """``|W|`` along coordinate ray ``ray`` (1-based) with the other ``y_j = 1``."""
    if not 1 <= ray <= cfg.n - 1:
        raise ValueError(f"ray must lie in 1..{cfg.n - 1}")
    vals = ordered_map(lambda t: _tolerant_eval(cfg, _ray_point(cfg.n, ray, t), q), list(grid))
    out = []
    for t, v in zip(grid, vals):
        a = abs(v.value)
        resolved = bool(a > 0 and math.isfinite(a) and v.est_rel_err <= RESOLVED)
        out.append({"y": float(t), "abs": a, "est_rel_err": v.est_rel_err, "resolved": resolved})
    return out


def fit_decay_exponent(
    cfg: WhittakerConfig,
    ray: int,
    grid: Sequence[float] = (1.0, 2.0, 4.0, 8.0),
    q: QuadratureSpec = QuadratureSpec(),
    scan: list[dict] | None = None,
) -> float:
    """Least-squares ``M = -slope`` of ``log|W|`` against ``log y`` along a ray.

    Only points whose refinement estimate is below 0.5 enter the fit.

    Raises
    ------
    DegenerateFit
        If fewer than two grid points are resolved.
    """
    if any(t < 1 for t in grid):
        raise ValueError("decay grid values must be at least 1")
    scan = decay_scan(cfg, ray, grid, q) if scan is None else scan
    pts = [(math.log(s["y"]), math.log(s["abs"])) for s in scan if s["resolved"]]
    if len(pts) < 2:
        raise DegenerateFit(f"only {len(pts)} resolved grid points on ray {ray}")
    X, Y = np.array(pts).T
    slope = np.polyfit(X, Y, 1)[0]
    return float(-slope)


def check_decay(
    cfg: WhittakerConfig,
    grid: Sequence[float] = (1.0, 2.0, 4.0, 8.0),
    tol: float = 10.0,
    q: QuadratureSpec = QuadratureSpec(),
) -> VerificationReport:
    """Fitted decay exponents on every ray and boundedness of ``|W| (prod y)^M``.

    The residual is the largest value of ``|W(y)| (prod y)^M / |W(1,...,1)|``
    over the ray grids, with ``M`` the smallest fitted exponent; it is
    infinite when some fitted ``M`` is not positive.  Unresolved points
    contribute ``|W| (1 + est)`` as an upper bound.
    """
    details, Ms, worst = [], [], 0.0
    scans = {}
    for ray in range(1, cfg.n):
        scan = decay_scan(cfg, ray, grid, q)
        scans[ray] = scan
        try:
            M = fit_decay_exponent(cfg, ray, grid, q, scan=scan)
        except DegenerateFit as exc:
            M = math.nan
            details.append({"ray": ray, "error": str(exc)})
        Ms.append(M)
        details.append({"ray": ray, "fitted_M": M, "scan": scan})
    if not all(M > 0 for M in Ms):
        worst = math.inf
    else:
        M = min(Ms)
        for scan in scans.values():
            for s in scan:
                bound = s["abs"] * (1.0 + (0.0 if s["resolved"] else s["est_rel_err"]))
                s["bounded_product"] = s["y"] ** M * bound
        ref = scans[1][0]["bounded_product"]
        worst = max(s["bounded_product"] / ref for scan in scans.values() for s in scan)
        details.append({"M_used": M, "reference": ref, "max_product_ratio": worst})
    return VerificationReport(f"decay[n={cfg.n}]", len(grid) * (cfg.n - 1), worst, tol, details, None, "quadrature")


# ---------------------------------------------------------------------------
# Siegel L2


def _panels(lo: float, hi: float, width: float) -> list[tuple[float, float]]:
    k = max(1, math.ceil((hi - lo) / width - 1e-12))
    edges = np.linspace(lo, hi, k + 1)
    return list(zip(edges[:-1], edges[1:]))


def siegel_l2_estimate(
    r: RestrictionConfig,
    truncations: Sequence[float] = (2.0, 4.0, 8.0, 16.0),
    q: QuadratureSpec = QuadratureSpec(),
    order: int = 8,
) -> L2Estimate:
    """Partial integrals of ``|V|^2`` against the invariant measure of ``h^2``.

    Integrates ``|V(y)|^2 y^(-2)`` over ``(sqrt(3)/2, Y]`` by composite
    Gauss-Legendre panels (width 1/2 below 4, width 1 above) and
    multiplies by the unit volume of the ``x`` box.  ``|V|`` does not
    depend on ``x`` by equivariance.  Unconverged evaluations are used with
    their error estimate folded in as an upper bound.
    """
    if r.m != 2:
        raise ValueError("the Siegel L2 estimate is implemented for m = 2")
    truncations = sorted(float(t) for t in truncations)
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = [SIEGEL_A] + truncations
    increments, evals, unresolved = [], 0, 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        panels = []
        for a, b in _panels(lo, hi, 0.5 if hi <= 4.0 else 1.0):
            panels.extend((0.5 * (b - a) * xg + 0.5 * (a + b), 0.5 * (b - a) * wg))
        nodes = np.concatenate(panels[0::2])
        weights = np.concatenate(panels[1::2])

        def one(y):
            try:
                v = v_eval(r, HalfPlanePoint.from_y([y]), q)
            except ConvergenceFailure as exc:
                v = exc.result
            return v

        vals = ordered_map(one, nodes)
        evals += len(vals)
        mags = []
        for v in vals:
            bound = abs(v.value)
            if not v.est_rel_err <= RESOLVED:
                unresolved += 1
                bound *= 1.0 + min(v.est_rel_err, 1e300)
            mags.append(bound)
        weight = np.array([measure_weight(HalfPlanePoint.from_y([y])) for y in nodes])
        # band contributions are kept separately; differencing partial sums would lose the tail
        increments.append(float(np.sum(weights * np.array(mags) ** 2 * weight)))
    partial = np.cumsum(increments).tolist()
    ratios = [a / b if b > 0 else math.inf for a, b in zip(increments[1:-1], increments[2:])]
    last_rel = increments[-1] / partial[-1] if partial[-1] > 0 else math.nan
    converging = bool(ratios) and all(x >= 4.0 for x in ratios) and last_rel < 0.01
    if converging:
        rho_ = 1.0 / ratios[-1] if math.isfinite(ratios[-1]) else 0.0
        extrapolated = partial[-1] + increments[-1] * rho_ / (1.0 - rho_)
    else:
        extrapolated = "divergent"
    return L2Estimate(truncations, partial, extrapolated, increments, ratios, last_rel, evals, unresolved)


def check_l2(r: RestrictionConfig, truncations: Sequence[float] = (2.0, 4.0, 8.0, 16.0), q: QuadratureSpec = QuadratureSpec()) -> VerificationReport:
    """Residual ``max 4/ratio`` over successive increment ratios; passes when every ratio is at least 4."""
    est = siegel_l2_estimate(r, truncations, q)
    worst = max((4.0 / x if x > 0 else math.inf for x in est.increment_ratios), default=math.inf)
    return VerificationReport("siegel_l2", len(truncations), worst, 1.0, [est.to_json()], None, "quadrature",
                              notes="heuristic verdict from increment ratios, not a proof")


# ---------------------------------------------------------------------------
# suite


DEFAULT_CHECKS = ["equivariance", "eigenfunction", "two_route", "factorization", "decay", "l2"]
CONTROLS = {"wrong_character", "unshifted"}


@dataclass
class SuiteConfig:
    n: int
    m: int
    alpha: LanglandsParams
    N: CharacterTuple
    checks: list
    seed: int = 42
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    diff: DiffSpec = field(default_factory=DiffSpec)

    @classmethod
    def from_json(cls, obj: dict) -> "SuiteConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        allowed = {"n", "m", "alpha", "N", "checks", "seed", "quad", "diff"}
        unknown = set(obj) - allowed
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            checks = obj.get("checks", DEFAULT_CHECKS)
            if not isinstance(checks, list):
                raise ConfigError("checks must be a list")
            n = int(obj.get("n", 3))
            return cls(
                n=n,
                m=int(obj.get("m", 2)),
                alpha=LanglandsParams.from_json(obj.get("alpha", [[1, 0], [0, 0], [-1, 0]])),
                N=CharacterTuple.from_json(obj.get("N", [1, 1])),
                checks=[_normalize_check(c) for c in checks],
                seed=int(obj.get("seed", 42)),
                quad=QuadratureSpec.from_json(obj.get("quad")),
                diff=DiffSpec.from_json(obj.get("diff")),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from None


def _normalize_check(c) -> dict:
    if isinstance(c, str):
        c = {"name": c}
    if not isinstance(c, dict) or "name" not in c:
        raise ConfigError(f"malformed check entry {c!r}")
    if c["name"] not in DEFAULT_CHECKS:
        raise ConfigError(f"unknown check {c['name']!r}; expected one of {DEFAULT_CHECKS}")
    control = c.get("control")
    if control is not None and control not in CONTROLS:
        raise ConfigError(f"unknown control {control!r}")
    return dict(c)


def run_checks(cfg: SuiteConfig) -> list[VerificationReport]:
    """Run the configured checks in order."""
    try:
        source = WhittakerConfig(cfg.n, cfg.alpha, cfg.N)
        r = restrict(source, cfg.m) if cfg.checks else None
    except (WhittakerError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    q, d = cfg.quad, cfg.diff
    reports: list[VerificationReport] = []
    for c in cfg.checks:
        name, control = c["name"], c.get("control")
        seed = int(c.get("seed", cfg.seed))
        if name == "equivariance":
            chi = None
            if control == "wrong_character":
                chi = CharacterTuple((r.predicted_character.N[0] + 1,) + r.predicted_character.N[1:])
            reports.append(check_equivariance(r, int(c.get("samples", 20)), seed, float(c.get("tol", 1e-5)), q,
                                              character=chi, expect_pass=control is None))
        elif name == "eigenfunction":
            params = LanglandsParams(source.alpha.values[: cfg.m]) if control == "unshifted" else None
            reports.append(check_eigenfunction(r, int(c.get("ell", 2)), int(c.get("points", 3)), d,
                                               float(c.get("tol", 1e-3)), q, params, seed, expect_pass=control is None))
        elif name == "two_route":
            ells = c.get("ell", [1, 2])
            for ell in ells if isinstance(ells, list) else [ells]:
                reports.append(check_two_route_casimir(r, int(ell), d, float(c.get("tol", 1e-6)), q))
        elif name == "factorization":
            reports.append(check_factorization(source, int(c.get("samples", 10)), float(c.get("tol", 1e-6)), q, seed,
                                               c.get("y")))
        elif name == "decay":
            reports.append(check_decay(source, c.get("grid", [1.0, 2.0, 4.0, 8.0]), float(c.get("tol", 10.0)), q))
        elif name == "l2":
            reports.append(check_l2(r, c.get("truncations", [2.0, 4.0, 8.0, 16.0]), q))
    return reports


def summary_table(reports: Sequence[VerificationReport]) -> str:
    head = f"{'check':<44} {'samples':>7} {'max_rel_residual':>17} {'tolerance':>10} {'tier':<18} result"
    lines = [head, "-" * len(head)]
    for rep in reports:
        verdict = "PASS" if rep.passed else "FAIL"
        if not rep.expect_pass:
            verdict += " (control, expected FAIL)"
        lines.append(
            f"{rep.check_name:<44} {rep.samples:>7} {rep.max_rel_residual:>17.3e} {rep.tolerance:>10.1e} {rep.tier:<18} {verdict}"
        )
    ok = all(rep.as_expected for rep in reports)
    lines.append("")
    lines.append("overall: " + ("all checks behaved as expected" if ok else "some checks failed"))
    return "\n".join(lines) + "\n"


def run_suite(config_path: str | os.PathLike, out_dir: str | os.PathLike = ".") -> list[VerificationReport]:
    """Load a JSON config, run it, and write ``report.json`` and ``report.txt``.

    Raises
    ------
    ConfigError
        On unreadable or malformed configs.
    """
    try:
        obj = json.loads(Path(config_path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    cfg = SuiteConfig.from_json(obj)
    reports = run_checks(cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    bundle = {
        "config": obj,
        "reports": [rep.to_json() for rep in reports],
        "all_as_expected": all(rep.as_expected for rep in reports),
    }
    bundle = sanitize(bundle)
    (out / "report.json").write_text(json.dumps(bundle, indent=2, allow_nan=False, default=_json_default) + "\n")
    (out / "report.txt").write_text(summary_table(reports))
    return reports


def sanitize(obj):
    """Make ``obj`` strict-JSON safe: non-finite floats become strings."""
    if isinstance(obj, dict):
        return {k: sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    raise TypeError(f"cannot serialize {type(o)}")
