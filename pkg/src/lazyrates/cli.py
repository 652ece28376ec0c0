"""Command-line entry point: ``lazyrates {rate,concentration,bounds,decouple,sweep}``.

Exit codes: 0 success, 2 configuration error, 3 numerical-consistency error,
4 statistical assertion failure (only with ``--assert``).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .bounds import bounds_report, format_bounds_table
from .errors import ConfigError, LazyRatesError, NumericalConsistencyError
from .harness import CSV_FIELDS, ExperimentConfig, ThresholdSpec, flat_row, run_concentration, sweep
from .infotheory import DecouplingConfig, decoupling_experiment, partial_trace_channel
from .linop import BipartiteSpace, check_density, check_hermitian, projector
from .rates import rate_report
from .sampler import SeededRng, Spectrum, gue_hamiltonian, haar_pure_state
from .serialize import dumps, load_operator

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ASSERT = 4

STATISTIC_ALIASES = {
    "dist": "trace_distance",
    "hrate": "worst_case_entropy_rate",
    "prate": "worst_case_purity_rate",
}
CONVENTION_ALIASES = {"paper": "paper_literal", "proof": "proof_consistent"}
RATE_DENSE_LIMIT = 4096


def _threshold(text: str, convention: str) -> ThresholdSpec:
    conv = CONVENTION_ALIASES[convention]
    named = {
        "lemma1-1": ("lemma1", "set1"),
        "lemma1-2": ("lemma1", "set2"),
        "main-1": ("main_result", "set1"),
        "main-2": ("main_result", "set2"),
    }
    if text in named:
        kind, variant = named[text]
        return ThresholdSpec(kind, variant, conv)
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"threshold must be one of {sorted(named)} or a number, got {text!r}") from None
    return ThresholdSpec.explicit(value)


def _spectrum(text: str | None):
    if not text:
        return "haar_pure"
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"spectrum must be comma-separated numbers, got {text!r}") from None
    try:
        return Spectrum(tuple(values))
    except LazyRatesError as exc:
        raise ConfigError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _append_csv(path: str, rows: list[dict]) -> None:
    p = Path(path)
    new = not p.exists() or p.stat().st_size == 0
    with p.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(CSV_FIELDS))
        if new:
            writer.writeheader()
        for row in rows:
            writer.writerow({k: (format(v, ".17g") if isinstance(v, float) else v) for k, v in row.items()})


def _failed_assertion(results) -> bool:
    return any(getattr(r, "asserted", False) and not r.bound_satisfied for r in results)


def _experiment_config(args, d_E=None) -> ExperimentConfig:
    return ExperimentConfig(
        d_S=args.ds,
        d_E=args.de if d_E is None else d_E,
        samples=args.samples,
        seed=args.seed,
        statistic=STATISTIC_ALIASES[args.statistic],
        threshold=_threshold(args.threshold, args.convention),
        ensemble=_spectrum(args.spectrum),
        stream=args.stream,
        workers=args.workers,
    )


def cmd_rate(args) -> int:
    space = BipartiteSpace(args.ds, args.de)
    if space.dim > RATE_DENSE_LIMIT:
        raise ConfigError(f"joint dimension {space.dim} exceeds the dense limit {RATE_DENSE_LIMIT}")
    root = SeededRng(args.seed, args.stream)
    if args.state == "haar":
        rho = projector(haar_pure_state(space.dim, root.child(0)))
    else:
        M, file_space = load_operator(args.state)
        if file_space != space:
            raise ConfigError(f"state file dims {file_space} do not match ({args.ds}, {args.de})")
        rho = projector(M) if M.ndim == 1 else check_density(M)
    if args.hamiltonian == "gue":
        H = gue_hamiltonian(space.dim, root.child(1))
    else:
        H, file_space = load_operator(args.hamiltonian)
        if file_space != space or H.ndim != 2:
            raise ConfigError("Hamiltonian file does not match the requested dimensions")
        H = check_hermitian(H)
    report = rate_report(rho, H, space, strength=args.strength, lazy_tol=args.lazy_tol)
    out = {
        "seed": root.seed,
        "version": __version__,
        "config": {"command": "rate", "d_S": args.ds, "d_E": args.de, "seed": root.seed,
                   "stream": args.stream, "state": args.state, "hamiltonian": args.hamiltonian,
                   "strength": args.strength, "lazy_tol": args.lazy_tol},
        "report": report,
    }
    print(dumps(out))
    return EXIT_OK


def cmd_concentration(args) -> int:
    result = run_concentration(_experiment_config(args))
    print(dumps(result))
    if args.csv:
        _append_csv(args.csv, [flat_row(result)])
    if args.assert_bound and _failed_assertion([result]):
        return EXIT_ASSERT
    return EXIT_OK


def cmd_bounds(args) -> int:
    rows = bounds_report(args.ds, args.de)
    if args.json:
        print(dumps({"seed": None, "version": __version__,
                     "config": {"command": "bounds", "d_S": args.ds, "d_E": args.de},
                     "rows": rows}))
    else:
        print(f"# lazyrates {__version__}  d_S={args.ds} d_E={args.de}")
        print(format_bounds_table(rows))
    return EXIT_OK


def cmd_decouple(args) -> int:
    space = BipartiteSpace(args.ds, args.de)
    r = args.r if args.r is not None else math.sqrt(args.ds / args.de)
    sigma = np.zeros(space.dim, dtype=np.complex128)
    sigma[0] = 1.0
    cfg = DecouplingConfig(partial_trace_channel(space), sigma, args.samples, r, args.seed,
                           stream=args.stream, extra={"d_S": args.ds, "d_E": args.de})
    result = decoupling_experiment(cfg)
    print(dumps(result))
    if args.csv:
        _append_csv(args.csv, [flat_row(result)])
    if args.assert_bound and _failed_assertion([result]):
        return EXIT_ASSERT
    return EXIT_OK


def cmd_sweep(args) -> int:
    d_E_values = _int_list(args.de)
    base = _experiment_config(args, d_E=d_E_values[0] if d_E_values else 2)
    results = sweep(base, d_E_values)
    print(dumps(results))
    if args.csv:
        _append_csv(args.csv, [flat_row(r) for r in results])
    if args.assert_bound and _failed_assertion(results):
        return EXIT_ASSERT
    return EXIT_OK


def _add_common(p, samples=True):
    p.add_argument("--ds", type=int, required=True, help="system dimension d_S")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0, help="random sub-stream index")
    if samples:
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--csv", metavar="PATH", help="append flat result rows to this CSV file")
        p.add_argument("--assert", dest="assert_bound", action="store_true",
                       help="exit 4 if a non-vacuous bound is violated at 99%% confidence")


def _add_experiment(p):
    p.add_argument("--statistic", choices=sorted(STATISTIC_ALIASES), default="dist")
    p.add_argument("--threshold", default="lemma1-1",
                   help="lemma1-1, lemma1-2, main-1, main-2 or a number")
    p.add_argument("--convention", choices=sorted(CONVENTION_ALIASES), default="paper")
    p.add_argument("--spectrum", help="comma-separated fixed spectrum (default: Haar pure states)")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lazyrates", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="entropy and purity rates of one state")
    _add_common(p, samples=False)
    p.add_argument("--de", type=int, required=True)
    p.add_argument("--hamiltonian", default="gue", help="'gue' or a Hamiltonian JSON file")
    p.add_argument("--state", default="haar", help="'haar' or a state JSON file")
    p.add_argument("--strength", choices=("op", "delta"), default="op")
    p.add_argument("--lazy-tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("concentration", help="Monte Carlo tail experiment")
    _add_common(p)
    p.add_argument("--de", type=int, required=True)
    _add_experiment(p)
    p.set_defaults(func=cmd_concentration)

    p = sub.add_parser("bounds", help="table of (chi, epsilon, delta) parameters")
    p.add_argument("--ds", type=int, required=True)
    p.add_argument("--de", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("decouple", help="decoupling experiment for the partial trace over E")
    _add_common(p)
    p.add_argument("--de", type=int, required=True)
    p.add_argument("--r", type=float, help="slack r (default sqrt(d_S/d_E))")
    p.set_defaults(func=cmd_decouple)

    p = sub.add_parser("sweep", help="concentration experiments over several d_E")
    _add_common(p)
    p.add_argument("--de", required=True, help="comma-separated list, e.g. 64,256,1024")
    _add_experiment(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalConsistencyError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (LazyRatesError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
