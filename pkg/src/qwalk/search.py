"""
End-to-end walk search, probability curves and the Grover baseline.

The algorithm: start in the equal superposition, apply the perturbed
walk ``t_f`` times, measure.  The marked node comes out with probability
close to 1/2; :func:`amplified_success` gives the repetition bound.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionError
from .statevec_collapsed import (
    build_collapsed_unitary,
    collapsed_initial_state,
)
from .statevec_full import (
    WalkConfig,
    _check_capacity,
    _sample_indices,
    node_distribution,
    step,
    uniform_state,
)

__all__ = [
    "BACKENDS",
    "T_F_CONVENTIONS",
    "SearchOutcome",
    "t_final",
    "run_search",
    "probability_curve",
    "curve_csv",
    "amplified_success",
    "grover_reference",
]

BACKENDS = ("full", "collapsed")
T_F_CONVENTIONS = ("derived", "stated")


def _round_half_away(x: float) -> int:
    return int(math.floor(abs(x) + 0.5)) * (1 if x >= 0 else -1)


def t_final(n: int, convention: str = "derived") -> int:
    """
    Measurement time.  ``derived`` uses ``(pi/2) sqrt(2^(n-1))``;
    ``stated`` uses ``(pi/2) sqrt(2^n)``.  Rounded half away from zero.
    """
    if n < 2:
        raise DimensionError(f"t_final requires n >= 2, got {n}")
    if convention == "derived":
        exponent = (n - 1) / 2
    elif convention == "stated":
        exponent = n / 2
    else:
        raise ValueError(f"unknown t_f convention {convention!r}; expected one of {T_F_CONVENTIONS}")
    return _round_half_away(0.5 * math.pi * 2.0**exponent)


@dataclass
class SearchOutcome:
    n: int
    t_f: int
    p_exact: float
    p_empirical: float
    trials: int
    backend: str
    target: int = 0
    seed: int = 0
    curve: Optional[list] = field(default=None)

    def to_dict(self) -> dict:
        data = asdict(self)
        if self.curve is None:
            data.pop("curve")
        else:
            data["curve"] = [[t, p] for t, p in self.curve]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _check_backend(backend: str) -> None:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def _check_collapsed_config(cfg: WalkConfig) -> None:
    if not cfg.minus_identity:
        raise ValueError("collapsed backend supports only the -I marking coin")


def _target_probabilities(cfg: WalkConfig, t_max: int, backend: str):
    """
    Yield ``(t, p_target, outcome_probs, success_index)`` for t = 0..t_max.

    For the collapsed backend the outcome distribution is over the 2n
    symmetric classes; class 0 (``R,0``) is exactly the marked node.
    """
    _check_backend(backend)
    if backend == "full":
        _check_capacity(cfg.n)
        s = uniform_state(cfg.n)
        for t in range(t_max + 1):
            if t:
                s = step(s, cfg, perturbed=True)
            probs = np.abs(s.amps) ** 2
            p = float(node_distribution(s, cfg.tol)[cfg.target])
            yield t, p, probs, None
    else:
        # node relabeling x -> x ^ target maps any target onto node 0
        _check_collapsed_config(cfg)
        op = build_collapsed_unitary(cfg.n, perturbed=True)
        amps = collapsed_initial_state(cfg.n).amps
        for t in range(t_max + 1):
            if t:
                amps = op.matvec(amps)
            probs = np.abs(amps) ** 2
            yield t, float(probs[0]), probs, 0


def run_search(
    cfg: WalkConfig,
    backend: str = "collapsed",
    trials: int = 10_000,
    convention: str = "derived",
    t_f: Optional[int] = None,
) -> SearchOutcome:
    """
    Run the walk search to ``t_f`` and sample ``trials`` measurements with
    ``cfg.seed``.  Success means measuring the target node, whatever the
    coin register reads.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    steps = t_final(cfg.n, convention) if t_f is None else int(t_f)
    if steps < 0:
        raise ValueError(f"t_f must be nonnegative, got {steps}")
    *_, last = _target_probabilities(cfg, steps, backend)
    _, p_exact, probs, success = last
    idx = _sample_indices(probs, cfg.seed, trials)
    if success is None:
        hits = np.count_nonzero(idx % (1 << cfg.n) == cfg.target)
    else:
        hits = np.count_nonzero(idx == success)
    return SearchOutcome(
        n=cfg.n,
        t_f=steps,
        p_exact=p_exact,
        p_empirical=hits / trials,
        trials=trials,
        backend=backend,
        target=cfg.target,
        seed=cfg.seed,
    )


def probability_curve(cfg: WalkConfig, t_max: int, backend: str = "collapsed") -> list[tuple[int, float]]:
    """Marked-node probability after each of ``t = 0..t_max`` steps."""
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    return [(t, p) for t, p, _, _ in _target_probabilities(cfg, t_max, backend)]


def curve_csv(curve: list[tuple[int, float]]) -> str:
    buf = io.StringIO()
    buf.write("#schema=qwalk.curve/1\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "p_target"])
    for t, p in curve:
        writer.writerow([t, repr(p)])
    return buf.getvalue()


def amplified_success(p_single: float, repetitions: int) -> float:
    """Probability that at least one of ``repetitions`` runs succeeds."""
    if not 0.0 <= p_single <= 1.0:
        raise ValueError(f"p_single must lie in [0, 1], got {p_single}")
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    return 1.0 - (1.0 - p_single) ** repetitions


def grover_reference(n: int) -> tuple[int, float]:
    """Closed-form Grover search over ``2**n`` items: (iterations, p_success)."""
    if n < 2:
        raise DimensionError(f"Grover reference requires n >= 2, got {n}")
    theta = math.asin(1.0 / math.sqrt(2.0**n))
    iterations = int(math.floor(math.pi / (4.0 * theta)))
    return iterations, math.sin((2 * iterations + 1) * theta) ** 2
