"""
Regenerate ``fixtures.json`` from oracle sweeps.

    python -m qwalk.calibrate            # print
    python -m qwalk.calibrate --write    # overwrite the committed file

Each constant is the worst measured ratio over its sweep times a 2x
headroom, rounded up to three significant figures.
"""

import argparse
import json
import math
from importlib import resources

import numpy as np

from .search import probability_curve, t_final
from .spectral import angle_scale, predicted_angle, spectral_summary
from .statevec_collapsed import build_collapsed_unitary, collapsed_initial_state
from .statevec_full import WalkConfig

HEADROOM = 2.0
COMMAND = "python -m qwalk.calibrate --write"


def _ceil3(x: float) -> float:
    if x <= 0:
        return 0.0
    scale = 10 ** (math.floor(math.log10(x)) - 2)
    return round(math.ceil(x / scale) * scale, 12)


def angle_ratios(ns=range(8, 33, 2)) -> dict:
    out = {}
    for n in ns:
        s = spectral_summary(n, angle_cap=math.inf)
        out[n] = abs(s.omega0 - predicted_angle(n, s.c)) / angle_scale(n)
    return out


def kappa_ratios(ns=range(8, 25, 2)) -> dict:
    out = {}
    for n in ns:
        tf = t_final(n)
        p = probability_curve(WalkConfig(n), tf)[-1][1]
        out[n] = (0.5 - p) * n
    return out


def rotation_ratios(ns=range(8, 17, 2)) -> dict:
    out = {}
    for n in ns:
        omega0 = spectral_summary(n, angle_cap=math.inf).omega0
        op = build_collapsed_unitary(n, perturbed=True)
        psi0 = collapsed_initial_state(n).amps
        amps = psi0
        worst = 0.0
        for t in range(2 * t_final(n) + 1):
            worst = max(worst, abs(np.vdot(psi0, amps) - math.cos(omega0 * t)))
            amps = op.matvec(amps)
        out[n] = worst / (n**0.75 / 2.0 ** (n / 2))
    return out


def _entry(ratios: dict, meaning: str) -> dict:
    worst = max(ratios.values())
    return {
        "value": _ceil3(HEADROOM * worst),
        "measured_max": worst,
        "headroom": HEADROOM,
        "n_values": sorted(ratios),
        "meaning": meaning,
        "command": COMMAND,
        "seed": None,
    }


def build_fixtures() -> dict:
    return {
        "angle_error_cap": _entry(
            angle_ratios(),
            "| |w0| - 1/(c sqrt(2^(n-1))) | <= value * n^1.5 / 2^n, even n in 8..32",
        ),
        "success_kappa": _entry(
            kappa_ratios(),
            "p_exact(t_f) >= 1/2 - value / n, even n in 8..24, collapsed backend",
        ),
        "rotation_residual_cap": _entry(
            rotation_ratios(),
            "max_{t<=2 t_f} |<psi0|state(t)> - cos(w0 t)| <= value * n^0.75 / 2^(n/2), even n in 8..16",
        ),
    }


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--write", action="store_true", help="overwrite the packaged fixtures.json")
    args = parser.parse_args(argv)
    text = json.dumps(build_fixtures(), indent=2, sort_keys=True) + "\n"
    if args.write:
        path = resources.files("qwalk").joinpath("fixtures.json")
        with resources.as_file(path) as p:
            p.write_text(text, encoding="utf-8")
    print(text, end="")


if __name__ == "__main__":
    main()
