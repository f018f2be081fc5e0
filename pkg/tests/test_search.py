import csv
import io
import json
import math

import mpmath
import numpy as np
import pytest

from qwalk.errors import CapacityError, DimensionError
from qwalk.search import (
    amplified_success,
    curve_csv,
    grover_reference,
    probability_curve,
    run_search,
    t_final,
)
from qwalk.statevec_full import WalkConfig

from oracles import dense_walk

# marked-node probability after t_f = 18 steps at n = 8, from repeated
# multiplication by the dense 2048x2048 U' oracle
P_EXACT_N8 = 0.43447149924738


def test_t_final_examples():
    assert t_final(8) == 18
    assert t_final(2) == 2
    assert t_final(16) == 284
    assert t_final(8, "stated") == round(math.pi / 2 * 16)
    with pytest.raises(ValueError):
        t_final(8, "other")
    with pytest.raises(DimensionError):
        t_final(1)


def test_t_final_rounding_matches_formula():
    for n in range(2, 40):
        x = math.pi / 2 * math.sqrt(2 ** (n - 1))
        assert t_final(n) == math.floor(x + 0.5)


def test_p_exact_n8_dense_oracle():
    n = 8
    u = dense_walk(n)
    v = np.full(n * 2**n, 1 / math.sqrt(n * 2**n), dtype=complex)
    for _ in range(t_final(n)):
        v = u @ v
    p = float(np.sum(np.abs(v.reshape(n, -1)[:, 0]) ** 2))
    assert p == pytest.approx(P_EXACT_N8, abs=1e-12)


@pytest.mark.parametrize("backend", ["full", "collapsed"])
def test_run_search_n8(backend):
    out = run_search(WalkConfig(8, seed=3), backend=backend, trials=1000)
    assert out.t_f == 18
    assert out.p_exact == pytest.approx(P_EXACT_N8, abs=1e-12)
    assert 0.375 <= out.p_exact <= 0.5
    assert out.backend == backend


def test_relabeled_target_same_probability():
    a = run_search(WalkConfig(8, target=0), backend="full", trials=10)
    b = run_search(WalkConfig(8, target=137), backend="full", trials=10)
    assert abs(a.p_exact - b.p_exact) <= 1e-12
    c = run_search(WalkConfig(8, target=137), backend="collapsed", trials=10)
    assert abs(a.p_exact - c.p_exact) <= 1e-12


def test_zero_steps_gives_uniform_probability():
    for backend in ("full", "collapsed"):
        out = run_search(WalkConfig(6), backend=backend, trials=10, t_f=0)
        assert out.p_exact == pytest.approx(2.0**-6, rel=1e-12)


@pytest.mark.parametrize("n", range(4, 15, 2))
def test_backend_agreement(n):
    full = run_search(WalkConfig(n), backend="full", trials=1)
    small = run_search(WalkConfig(n), backend="collapsed", trials=1)
    assert abs(full.p_exact - small.p_exact) <= 1e-9


def test_odd_n_runs():
    out = run_search(WalkConfig(7), backend="collapsed", trials=100)
    full = run_search(WalkConfig(7), backend="full", trials=100)
    assert abs(out.p_exact - full.p_exact) <= 1e-12


@pytest.mark.parametrize("backend", ["full", "collapsed"])
def test_empirical_frequency(backend):
    out = run_search(WalkConfig(8, seed=12345), backend=backend, trials=100_000)
    assert abs(out.p_empirical - out.p_exact) <= 4 * math.sqrt(out.p_exact * (1 - out.p_exact) / out.trials)
    again = run_search(WalkConfig(8, seed=12345), backend=backend, trials=100_000)
    assert again.to_json() == out.to_json()


def test_search_errors():
    with pytest.raises(CapacityError):
        run_search(WalkConfig(21), backend="full")
    with pytest.raises(ValueError):
        run_search(WalkConfig(4), backend="gpu")
    with pytest.raises(ValueError):
        run_search(WalkConfig(4), trials=0)
    with pytest.raises(ValueError):
        run_search(WalkConfig(2, marking_coin=np.eye(2)), backend="collapsed")


def test_custom_marking_coin_full_backend():
    out = run_search(WalkConfig(4, marking_coin=np.eye(4)), backend="full", trials=10)
    # identity marking coin at node 0 still perturbs the walk; result is a valid probability
    assert 0 <= out.p_exact <= 1


def test_curve_basics():
    cfg = WalkConfig(8)
    curve = probability_curve(cfg, 54)
    assert len(curve) == 55
    assert curve[0] == (0, pytest.approx(2.0**-8))
    assert curve[18][1] == pytest.approx(P_EXACT_N8, abs=1e-12)
    with pytest.raises(ValueError):
        probability_curve(cfg, 0)


def test_curve_periodicity_n8():
    tf = t_final(8)
    ps = [p for _, p in probability_curve(WalkConfig(8), 3 * tf)]
    peak = int(np.argmax(ps))
    assert abs(peak - tf) <= 2
    # falls after the peak, then rises again
    trough = peak + int(np.argmin(ps[peak : peak + 2 * tf]))
    assert ps[trough] < 0.05
    assert max(ps[trough:]) > 0.3


def test_curve_backends_agree():
    full = probability_curve(WalkConfig(6, target=9), 30, backend="full")
    small = probability_curve(WalkConfig(6), 30, backend="collapsed")
    np.testing.assert_allclose([p for _, p in full], [p for _, p in small], atol=1e-12)


def test_curve_csv():
    text = curve_csv(probability_curve(WalkConfig(4), 3))
    lines = text.splitlines()
    assert lines[0] == "#schema=qwalk.curve/1"
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert [int(r["t"]) for r in rows] == [0, 1, 2, 3]


def test_amplified_success():
    assert amplified_success(0.5, 1) == 0.5
    assert amplified_success(0.5, 7) == pytest.approx(1 - 2**-7)
    assert amplified_success(0.5, 7) == pytest.approx(0.99219, abs=1e-5)
    assert amplified_success(0.0, 9) == 0.0
    with pytest.raises(ValueError):
        amplified_success(1.5, 1)
    with pytest.raises(ValueError):
        amplified_success(0.5, 0)


def test_grover_reference():
    assert grover_reference(2) == (1, 1.0)
    iters, p = grover_reference(8)
    assert iters == 12
    mpmath.mp.dps = 30
    expected = mpmath.sin(25 * mpmath.asin(mpmath.mpf(1) / 16)) ** 2
    assert p == pytest.approx(float(expected), abs=1e-14)
    for n in range(2, 21):
        assert grover_reference(n)[1] >= 1 - 2.0**-n


def test_outcome_json():
    out = run_search(WalkConfig(6, seed=1), trials=50)
    data = json.loads(out.to_json())
    assert {"n", "t_f", "p_exact", "p_empirical", "trials", "backend"} <= set(data)
    assert "curve" not in data
