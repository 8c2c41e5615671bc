import json
import math
import threading

import numpy as np
import pytest

from whittaker import CharacterTuple, ConfigError, DegenerateFit, ScalarField
from whittaker.harness import (
    SuiteConfig,
    VerificationReport,
    check_equivariance,
    check_factorization,
    check_two_route_casimir,
    fit_decay_exponent,
    ordered_map,
    random_box_point,
    run_suite,
    sanitize,
    siegel_l2_estimate,
    summary_table,
)


def test_ordered_map_keeps_order(monkeypatch):
    monkeypatch.setenv("WHITTAKER_THREADS", "4")
    seen = set()

    def f(i):
        seen.add(threading.get_ident())
        return i * i

    assert ordered_map(f, list(range(50))) == [i * i for i in range(50)]


def test_random_points_in_box():
    rng = np.random.default_rng(0)
    for _ in range(20):
        z = random_box_point(3, rng)
        assert np.all(z.y >= math.sqrt(3) / 2) and np.all(z.y <= 3)
        assert np.all(np.abs(z.x) <= 0.5)


def test_sanitize():
    out = sanitize({"a": math.inf, "b": [1 + 2j, np.float64(0.5)], "c": (math.nan,)})
    assert out == {"a": "inf", "b": [[1.0, 2.0], 0.5], "c": ["nan"]}
    json.dumps(out, allow_nan=False)


def test_report_flags():
    rep = VerificationReport("x", 1, 2.0, 1.0, expect_pass=False)
    assert not rep.passed and rep.as_expected
    assert rep.to_json()["as_expected"] is True
    assert "control, expected FAIL" in summary_table([rep])


def test_equivariance_and_control(r32):
    good = check_equivariance(r32, samples=4, seed=3)
    assert good.passed and good.max_rel_residual < 1e-5
    bad = check_equivariance(r32, samples=4, seed=3, character=CharacterTuple([2]), expect_pass=False)
    assert not bad.passed and bad.as_expected


def test_equivariance_reproducible(r32):
    a = check_equivariance(r32, samples=3, seed=9).to_json()
    b = check_equivariance(r32, samples=3, seed=9).to_json()
    assert json.dumps(a) == json.dumps(b)


def test_factorization(cfg2, cfg3):
    assert check_factorization(cfg2, samples=5, seed=1).max_rel_residual < 1e-8
    assert check_factorization(cfg3, samples=4, seed=1).max_rel_residual < 1e-6


def test_two_route_wiring_on_synthetic_fields(r32):
    f = lambda a: np.exp(a[0, 0] - 0.3 * a[0, 1] + 0.2 * a[1, 0] * a[1, 1])
    V = ScalarField(f, 2)
    W = ScalarField(lambda g: f(g[:2, :2]) * (1 + 0.1 * g[2, 2] ** 2), 3)
    rep = check_two_route_casimir(r32, 2, fields=(V, W))
    # W carries a factor 1.1 on the embedded block, so the two routes differ by it
    assert rep.max_rel_residual == pytest.approx(0.1 / 1.1, rel=1e-6)
    W_same = ScalarField(lambda g: f(g[:2, :2]), 3)
    assert check_two_route_casimir(r32, 2, fields=(V, W_same)).max_rel_residual < 1e-9


def test_decay_fit(cfg2):
    assert fit_decay_exponent(cfg2, 1, [1.0, 2.0, 4.0]) > 0
    with pytest.raises(DegenerateFit):
        fit_decay_exponent(cfg2, 1, [2.0])
    with pytest.raises(ValueError):
        fit_decay_exponent(cfg2, 1, [0.5, 2.0])


def test_l2_increments_shrink(r32):
    est = siegel_l2_estimate(r32, (2.0, 4.0, 8.0))
    assert len(est.partial_integrals) == 3
    assert all(b >= a for a, b in zip(est.partial_integrals, est.partial_integrals[1:]))
    assert est.increments[1] > 0 and all(x >= 4 for x in est.increment_ratios)


def test_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig.from_json({"n": 3, "bogus": 1})
    with pytest.raises(ConfigError):
        SuiteConfig.from_json({"checks": ["nonsense"]})
    with pytest.raises(ConfigError):
        SuiteConfig.from_json({"checks": [{"name": "equivariance", "control": "other"}]})
    with pytest.raises(ConfigError):
        SuiteConfig.from_json({"quad": {"nodes_per_dim": 4}})
    cfg = SuiteConfig.from_json({"checks": ["factorization"], "seed": 7})
    assert cfg.n == 3 and cfg.m == 2 and cfg.seed == 7


def test_run_suite_writes_strict_json(tmp_path):
    config = {
        "n": 3, "m": 2, "alpha": [[1, 0], [0, 0], [-1, 0]], "N": [1, 1], "seed": 5,
        "checks": [
            {"name": "equivariance", "samples": 3},
            {"name": "equivariance", "samples": 3, "control": "wrong_character"},
            {"name": "factorization", "samples": 3},
        ],
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    reports = run_suite(path, tmp_path / "out")
    assert [r.as_expected for r in reports] == [True, True, True]
    bundle = json.loads((tmp_path / "out" / "report.json").read_text())
    assert bundle["all_as_expected"] is True and len(bundle["reports"]) == 3
    assert "overall: all checks behaved as expected" in (tmp_path / "out" / "report.txt").read_text()


def test_run_suite_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        run_suite(bad, tmp_path)
    with pytest.raises(ConfigError):
        run_suite(tmp_path / "missing.json", tmp_path)
