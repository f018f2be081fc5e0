"""
Command-line front end::

    qwalk spectrum --n 8
    qwalk search --n 8 --seed 1 --trials 10000
    qwalk curve --n 8 --t-max 54
    qwalk evolve --n 4 --steps 0
    qwalk verify --n-range 4..12
    qwalk compare --n-range 4..12

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numerical failure.
A JSON ``--config`` file may preload any flag; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import CapacityError, DimensionError, QWalkError, SolverError, StructuralError
from .search import (
    BACKENDS,
    T_F_CONVENTIONS,
    curve_csv,
    grover_reference,
    probability_curve,
    run_search,
    t_final,
)
from .spectral import TOL_EIG, eigendecompose, spectrum_csv
from .statevec_collapsed import DENSE_MAX_N, build_collapsed_unitary, collapsed_evolve, collapsed_initial_state
from .statevec_full import NORM_TOL, WalkConfig, evolve, uniform_state
from .verify import report

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``"4..12"`` -> ``(4, 12)``; a bare integer is a one-element range."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
    p.add_argument("--config", default=None, help="JSON file preloading flags")
    p.add_argument("--tol", type=float, default=NORM_TOL, help="norm/invariant tolerance")
    p.add_argument("--tol-eig", type=float, default=TOL_EIG, help="eigenpair residual tolerance")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="qwalk", description="Quantum-walk search on the hypercube.")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("spectrum", help="eigenvalues of the collapsed U and U'")
    p.add_argument("--n", type=int, required=True)
    subs["spectrum"] = p

    p = sub.add_parser("search", help="run the walk search once and sample measurements")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--backend", choices=BACKENDS, default="collapsed")
    p.add_argument("--t-f-convention", choices=T_F_CONVENTIONS, default="derived")
    subs["search"] = p

    p = sub.add_parser("curve", help="marked-node probability versus time")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--t-max", type=int, default=None, help="default: 3 t_f")
    p.add_argument("--backend", choices=BACKENDS, default="collapsed")
    subs["curve"] = p

    p = sub.add_parser("evolve", help="state snapshot after some steps")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--backend", choices=BACKENDS, default="full")
    p.add_argument("--unperturbed", action="store_true", help="use U instead of U'")
    subs["evolve"] = p

    p = sub.add_parser("verify", help="run every identity and bound for even n in a range")
    p.add_argument("--n-range", type=parse_range, required=True)
    subs["verify"] = p

    p = sub.add_parser("compare", help="walk search versus closed-form Grover")
    p.add_argument("--n-range", type=parse_range, required=True)
    p.add_argument("--t-f-convention", choices=T_F_CONVENTIONS, default="derived")
    subs["compare"] = p

    for p in subs.values():
        _add_common(p)
    return parser, subs


def _load_config(argv: Sequence[str]) -> dict:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return {}
    try:
        data = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    out = {}
    for key, value in data.items():
        key = key.replace("-", "_")
        if key == "n_range" and isinstance(value, str):
            value = parse_range(value)
        out[key] = value
    return out


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _check_range(lo: int, hi: int, cap: int) -> None:
    if not 2 <= lo <= hi <= cap:
        raise UsageError(f"n-range must satisfy 2 <= n_min <= n_max <= {cap}, got {lo}..{hi}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_spectrum(args) -> int:
    if not 2 <= args.n <= DENSE_MAX_N:
        raise UsageError(f"spectrum needs 2 <= n <= {DENSE_MAX_N}, got {args.n}")
    blocks = []
    for name, perturbed in (("U", False), ("Uprime", True)):
        op = build_collapsed_unitary(args.n, perturbed=perturbed)
        blocks.append((name, eigendecompose(op.matrix, args.tol_eig, n=args.n)))
    if (args.format or "csv") == "json":
        threshold = 1.0 - 2.0 / (3.0 * args.n)
        records = [
            {
                "n": args.n,
                "operator": name,
                "re": p.value.real,
                "im": p.value.imag,
                "residual": p.residual,
                "on_arc": p.value.real > threshold,
            }
            for name, spectrum in blocks
            for p in spectrum
        ]
        _emit(_dumps(records), args.output)
    else:
        text = "".join(spectrum_csv(args.n, s, operator=name, header=(i == 0)) for i, (name, s) in enumerate(blocks))
        _emit(text, args.output)
    return EXIT_OK


def _config(args) -> WalkConfig:
    return WalkConfig(args.n, target=args.target, tol=args.tol, seed=args.seed)


def cmd_search(args) -> int:
    outcome = run_search(_config(args), backend=args.backend, trials=args.trials, convention=args.t_f_convention)
    _emit(outcome.to_json() + "\n", args.output)
    return EXIT_OK


def cmd_curve(args) -> int:
    t_max = 3 * t_final(args.n) if args.t_max is None else args.t_max
    curve = probability_curve(_config(args), t_max, backend=args.backend)
    if args.format == "json":
        _emit(_dumps([{"t": t, "p_target": p} for t, p in curve]), args.output)
    else:
        _emit(curve_csv(curve), args.output)
    return EXIT_OK


def cmd_evolve(args) -> int:
    cfg = _config(args)
    perturbed = not args.unperturbed
    if args.backend == "full":
        state = evolve(uniform_state(args.n), cfg, args.steps, perturbed=perturbed)
    else:
        op = build_collapsed_unitary(args.n, perturbed=perturbed)
        state = collapsed_evolve(collapsed_initial_state(args.n), op, args.steps)
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"#schema=qwalk.state/1 backend={args.backend} n={args.n} steps={args.steps}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "re", "im"])
        for i, a in enumerate(state.amps):
            writer.writerow([i, repr(float(a.real)), repr(float(a.imag))])
        _emit(buf.getvalue(), args.output)
    else:
        data = state.to_dict()
        data["steps"] = args.steps
        data["backend"] = args.backend
        _emit(json.dumps(data, sort_keys=True) + "\n", args.output)
    return EXIT_OK


def _even(lo: int, hi: int) -> list[int]:
    ns = [n for n in range(max(lo, 4), hi + 1) if n % 2 == 0]
    if not ns:
        raise UsageError(f"verify needs at least one even n >= 4 in the range, got {lo}..{hi}")
    return ns


def cmd_verify(args) -> int:
    lo, hi = args.n_range
    _check_range(lo, hi, DENSE_MAX_N)
    result = report(_even(lo, hi), tol_eig=args.tol_eig, seed=args.seed)
    _emit(_dumps(result), args.output)
    return EXIT_OK if result["passed"] else EXIT_VERIFY


def cmd_compare(args) -> int:
    lo, hi = args.n_range
    _check_range(lo, hi, DENSE_MAX_N)
    rows = []
    for n in range(lo, hi + 1):
        outcome = run_search(WalkConfig(n, seed=args.seed), backend="collapsed", trials=1, convention=args.t_f_convention)
        iters, p_grover = grover_reference(n)
        rows.append({"n": n, "t_f_walk": outcome.t_f, "p_walk": outcome.p_exact, "iters_grover": iters, "p_grover": p_grover})
    if args.format == "json":
        _emit(_dumps(rows), args.output)
    else:
        buf = io.StringIO()
        buf.write("#schema=qwalk.compare/1\n")
        writer = csv.writer(buf, lineterminator="\n")
        cols = ["n", "t_f_walk", "p_walk", "iters_grover", "p_grover"]
        writer.writerow(cols)
        for r in rows:
            writer.writerow([repr(r[c]) if isinstance(r[c], float) else r[c] for c in cols])
        _emit(buf.getvalue(), args.output)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "search": cmd_search,
    "curve": cmd_curve,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "compare": cmd_compare,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        config = _load_config(argv)
        for p in subs.values():
            p.set_defaults(**config)
            for action in p._actions:
                if action.dest in config:
                    action.required = False
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        return COMMANDS[args.command](args)
    except (UsageError, CapacityError, DimensionError, ValueError) as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, StructuralError) as exc:
        print(f"qwalk: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except QWalkError as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
