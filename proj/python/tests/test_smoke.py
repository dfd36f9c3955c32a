import json
import math
import os
from pathlib import Path

import pytest

import berryphase as bp

CONFIGS = Path(os.environ.get("BERRYPHASE_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))
C = bp.Coordinate


def test_alpha_circle_is_minus_twice_the_area():
    loop = bp.circle_loop(bp.ParamPoint(), C.alpha1, C.alpha2, 0.0, 0.0, 0.5, 400)
    for g in bp.wilson_loop_phases([0, 1, 2], loop, 60):
        assert abs(g + math.pi / 2) < 1e-3


def test_beta_circle_against_sinh_squared():
    loop = bp.circle_loop(bp.ParamPoint(), C.beta1, C.beta2, 0.0, 0.0, 0.3, 400)
    unit = 2 * math.pi * math.sinh(0.3) ** 2
    reports = bp.total_phases([0, 1], loop, 80, check_convergence=False)
    for r in reports:
        assert abs(r.gamma_wilson + (r.n + 0.5) * unit) < 1e-3
        assert r.discrepancy < 1e-3
    assert abs(bp.hannay_angle(loop, 80) - unit) < 1e-3


def test_multiphoton_and_coherence():
    loop = bp.circle_loop(bp.ParamPoint(), C.beta1, C.beta2, 0.0, 0.0, 0.3, 400)
    (rep,) = bp.multiphoton_phases([1], loop, 80)
    assert abs(rep.gamma_wilson + 2.5 * 2 * math.pi * math.sinh(0.3) ** 2) < 1e-3
    beta = 0.3 + 0.2j
    expected = beta / (2 * abs(beta)) * math.tanh(abs(beta))
    assert abs(bp.squeezed_vacuum_eigenvalue(beta) - expected) < 1e-8 * abs(expected)


def test_composed_loop_and_grid():
    base = bp.ParamPoint()
    parts = [bp.circle_loop(base, C.alpha1, C.alpha2, 0, 0, 0.4, 190),
             bp.circle_loop(base, C.beta1, C.beta2, 0, 0, 0.25, 190)]
    loop = bp.compose_loops(parts, 10)
    assert loop.segments == 400
    g = bp.wilson_loop_phases([0, 1, 2], loop, 120)
    assert abs((g[2] - g[1]) - (g[1] - g[0])) < 1e-5
    alpha = parts[0]
    assert abs(bp.gamma0_grid(alpha) - bp.wilson_loop_phases([0], alpha, 60)[0]) < 2e-3


def test_errors_are_typed():
    with pytest.raises(bp.BerryError):
        bp.circle_loop(bp.ParamPoint(), C.alpha1, C.alpha2, 0, 0, 0.5, 8)
    with pytest.raises(bp.BerryError):
        bp.ParamPoint(m=-1.0)


def test_run_config_round_trip():
    csv, report, passed = bp.run_config(str(CONFIGS / "beta_circle.json"))
    assert passed
    assert csv.startswith("n,gamma_wilson,gamma_closed,gamma_D,gamma_S,discrepancy,dim,K,converged\n")
    doc = json.loads(report)
    assert abs(doc["hannay"] - 0.58266) < 1e-4
    with pytest.raises(bp.ValidationError):
        bp.run_config(str(CONFIGS / "beta_circle.json"), segments=8)
