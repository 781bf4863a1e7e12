"""Batch front end: load or generate a problem, solve it, write artifacts.

Run configurations are INI-style documents with three sections::

    [problem]
    benchmark = mass-spring      ; or: distributed
    n = 10                       ; benchmark size parameter
    seed = 0                     ; distributed layout seed
    side = 10.0                  ; distributed square side
    ; or, instead of a benchmark, whitespace-delimited matrix files:
    ; a = A.txt / b1 = B1.txt / b2 = B2.txt / q = Q.txt / r = R.txt
    ; p = 20                     ; output count for file problems

    [solver]
    r = 10                       ; row/column budget for C
    s = 40                       ; entry budget for K
    mode = column                ; row | column
    gamma = 10.0
    gamma1 = 1.1
    gamma2 = 1.1
    gamma3 = 1.1
    lipschitz_floor = 1e-8
    max_iter = 2000
    tol_step = 1e-6
    tol_phi = 1e-10
    inner_max_iter = 100
    grad_tol = 1e-8
    armijo_sigma = 1e-4
    armijo_beta = 0.5
    max_backtracks = 50

    [output]
    dir = run_out

Every key is optional except the problem source (and, for file-based
problems, the budgets). Unknown sections or keys are errors. A run writes
``history.csv`` (one row per sweep, row 0 = initialization), the final
``K.txt``/``C.txt``/``F.txt`` as dense whitespace-delimited matrices,
``pattern_K.txt``/``pattern_C.txt`` as 1-indexed ``row col value``
triplets, and ``summary.txt``. All numbers carry 17 significant digits so
files round-trip exactly. Exit status: 0 converged, 2 iteration cap,
1 any error.
"""

from __future__ import annotations

import argparse
import configparser
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .anderson_moore import AndersonMooreConfig
from .benchmarks import DistributedLayout, make_distributed, make_mass_spring
from .errors import SofpalmError
from .palm import (
    ConvergenceRecord,
    SolveStatus,
    SolverConfig,
    check_budget,
    solve,
)
from .plant import Plant, spectral_abscissa, validate_plant
from .prox import SparsityBudget

_HISTORY_HEADER = ("iter,phi,J,penalty_residual,eK,eC,eF,"
                   "L1,L2,L3,cardK,cardrowC,decrease_slack")

_PROBLEM_KEYS = {"benchmark", "n", "seed", "side", "a", "b1", "b2", "q", "r",
                 "p"}
_SOLVER_KEYS = {"r", "s", "mode", "gamma", "gamma1", "gamma2", "gamma3",
                "lipschitz_floor", "max_iter", "tol_step", "tol_phi",
                "inner_max_iter", "grad_tol", "armijo_sigma", "armijo_beta",
                "max_backtracks"}
_OUTPUT_KEYS = {"dir"}
_MATRIX_KEYS = ("a", "b1", "b2", "q", "r")
_BENCHMARKS = ("mass-spring", "distributed")


@dataclass
class RunSpec:
    """Fully resolved description of one solver run."""

    benchmark: str | None
    n: int | None
    seed: int
    side: float
    matrix_paths: dict[str, str]
    p: int | None
    config: SolverConfig
    out_dir: str


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def read_matrix(path) -> np.ndarray:
    """Read a dense matrix: one row per line, whitespace-separated."""
    rows: list[list[float]] = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                row = [float(tok) for tok in stripped.split()]
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: line is not a numeric row") from None
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ValueError(f"{path}:{i}: ragged row (expected {width} "
                             f"columns, got {len(row)})")
    return np.array(rows, dtype=float)


def write_matrix(path, M) -> None:
    """Write a dense matrix, one row per line, 17 significant digits."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    with open(path, "w", encoding="ascii") as fh:
        for row in M:
            fh.write(" ".join(_fmt(v) for v in row) + "\n")


def write_pattern(path, M) -> None:
    """Write nonzeros as 1-indexed ``row col value`` triplets, row-major."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    with open(path, "w", encoding="ascii") as fh:
        for i, j in zip(*np.nonzero(M)):
            fh.write(f"{i + 1} {j + 1} {_fmt(M[i, j])}\n")


def write_history(path, history: list[ConvergenceRecord]) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(_HISTORY_HEADER + "\n")
        for r in history:
            fh.write(",".join([
                str(r.iter), _fmt(r.phi), _fmt(r.j_value),
                _fmt(r.penalty_residual), _fmt(r.e_K), _fmt(r.e_C),
                _fmt(r.e_F), _fmt(r.L1), _fmt(r.L2), _fmt(r.L3),
                str(r.card_K), str(r.cardrow_C), _fmt(r.decrease_slack),
            ]) + "\n")


def _typed(section: str, mapping, key: str, cast, default):
    if key not in mapping:
        return default
    raw = mapping[key]
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise ValueError(
            f"invalid value for key '{key}' in [{section}]: {raw!r}") from None


def _default_budget(benchmark: str, n: int) -> tuple[int, int, str]:
    """Study budgets: (s, r, mode) for a benchmark of size n."""
    if benchmark == "mass-spring":
        return (2 * n * n) // 5, n, "column"
    return 2 * n, max(1, n // 5), "row"


def parse_run_spec(text: str) -> RunSpec:
    """Parse a config document into a validated :class:`RunSpec`.

    Raises ``ValueError`` on parse errors (with line numbers), unknown
    sections or keys, type mismatches, and invalid solver parameters.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ValueError(f"config parse error: {exc}") from None

    allowed = {"problem": _PROBLEM_KEYS, "solver": _SOLVER_KEYS,
               "output": _OUTPUT_KEYS}
    for section in parser.sections():
        if section not in allowed:
            raise ValueError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in allowed[section]:
                raise ValueError(f"unknown key '{key}' in section [{section}]")

    prob = parser["problem"] if parser.has_section("problem") else {}
    solv = parser["solver"] if parser.has_section("solver") else {}
    outp = parser["output"] if parser.has_section("output") else {}

    benchmark = prob.get("benchmark")
    matrix_paths = {k: prob[k] for k in _MATRIX_KEYS if k in prob}
    if benchmark is not None and matrix_paths:
        raise ValueError("specify either 'benchmark' or matrix files in "
                         "[problem], not both")
    if benchmark is None and not matrix_paths:
        raise ValueError("no problem source: set 'benchmark' or matrix "
                         "files in [problem]")

    n = None
    if benchmark is not None:
        if benchmark not in _BENCHMARKS:
            raise ValueError(f"unknown benchmark '{benchmark}'")
        n = _typed("problem", prob, "n",
                   int, 10 if benchmark == "mass-spring" else 100)
        default_s, default_r, default_mode = _default_budget(benchmark, n)
    else:
        missing = [k for k in _MATRIX_KEYS if k not in matrix_paths]
        if missing:
            raise ValueError("missing matrix files in [problem]: "
                             + ", ".join(missing))
        default_s = default_r = None
        default_mode = "row"

    seed = _typed("problem", prob, "seed", int, 0)
    side = _typed("problem", prob, "side", float, 10.0)
    p = _typed("problem", prob, "p", int, None)

    s = _typed("solver", solv, "s", int, default_s)
    r = _typed("solver", solv, "r", int, default_r)
    if s is None or r is None:
        raise ValueError("budgets 'r' and 's' are required in [solver] for "
                         "file-based problems")
    mode = solv.get("mode", default_mode)
    if mode not in ("row", "column"):
        raise ValueError(f"invalid value for key 'mode' in [solver]: {mode!r}")

    inner = AndersonMooreConfig(
        max_inner_iter=_typed("solver", solv, "inner_max_iter", int, 100),
        grad_tol=_typed("solver", solv, "grad_tol", float, 1e-8),
        armijo_sigma=_typed("solver", solv, "armijo_sigma", float, 1e-4),
        armijo_beta=_typed("solver", solv, "armijo_beta", float, 0.5),
        max_backtracks=_typed("solver", solv, "max_backtracks", int, 50))
    config = SolverConfig(
        budget=SparsityBudget(s=s, r=r, mode=mode),
        gamma=_typed("solver", solv, "gamma", float, 10.0),
        gamma1=_typed("solver", solv, "gamma1", float, 1.1),
        gamma2=_typed("solver", solv, "gamma2", float, 1.1),
        gamma3=_typed("solver", solv, "gamma3", float, 1.1),
        lipschitz_floor=_typed("solver", solv, "lipschitz_floor", float, 1e-8),
        max_iter=_typed("solver", solv, "max_iter", int, 2000),
        tol_step=_typed("solver", solv, "tol_step", float, 1e-6),
        tol_phi=_typed("solver", solv, "tol_phi", float, 1e-10),
        inner=inner, seed=seed)

    return RunSpec(benchmark=benchmark, n=n, seed=seed, side=side,
                   matrix_paths=matrix_paths, p=p, config=config,
                   out_dir=outp.get("dir", "sofpalm_out"))


def _load_problem(spec: RunSpec):
    if spec.benchmark == "mass-spring":
        return make_mass_spring(spec.n), None
    if spec.benchmark == "distributed":
        return make_distributed(spec.n, side=spec.side, seed=spec.seed)
    mats = {key: read_matrix(path)
            for key, path in spec.matrix_paths.items()}
    n = mats["a"].shape[0]
    plant = Plant(A=mats["a"], B1=mats["b1"], B2=mats["b2"],
                  Q=mats["q"], R=mats["r"],
                  p=spec.p if spec.p is not None else n)
    return plant, None


def _progress_line(rec: ConvergenceRecord) -> str:
    return (f"iter {rec.iter:5d}  phi={rec.phi:.9e}  J={rec.j_value:.9e}  "
            f"eK={rec.e_K:.3e}  eC={rec.e_C:.3e}  eF={rec.e_F:.3e}  "
            f"cardK={rec.card_K}  cardC={rec.cardrow_C}")


def run(spec: RunSpec) -> int:
    """Execute a run spec and write its artifacts. Returns the exit code."""
    try:
        plant, layout = _load_problem(spec)
        report = validate_plant(plant)
        for warning in report.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        if not report.ok:
            for violation in report.violations:
                print(f"error: {violation}", file=sys.stderr)
            return 1
        check_budget(plant, spec.config.budget)
    except (OSError, ValueError, SofpalmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(spec.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    started = time.perf_counter()
    try:
        result = solve(plant, spec.config,
                       callback=lambda rec: print(_progress_line(rec),
                                                  file=sys.stderr))
    except SofpalmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    wall = time.perf_counter() - started

    final = result.final
    write_history(out / "history.csv", result.history)
    write_matrix(out / "K.txt", final.K)
    write_matrix(out / "C.txt", final.C)
    write_matrix(out / "F.txt", final.F)
    write_pattern(out / "pattern_K.txt", final.K)
    write_pattern(out / "pattern_C.txt", final.C)
    if layout is not None:
        layout.save(out / "layout.txt")

    last = result.history[-1]
    output_loop = spectral_abscissa(plant.A - plant.B2 @ final.K @ final.C)
    with open(out / "summary.txt", "w", encoding="ascii") as fh:
        fh.write(f"status: {result.status.value}\n")
        fh.write(f"iterations: {result.iterations}\n")
        fh.write(f"final_phi: {_fmt(last.phi)}\n")
        fh.write(f"final_J: {_fmt(last.j_value)}\n")
        fh.write(f"delta: {_fmt(result.delta)}\n")
        fh.write(f"penalty_residual: {_fmt(last.penalty_residual)}\n")
        fh.write(f"output_loop_abscissa: {_fmt(output_loop)}\n")
        fh.write(f"wall_time_seconds: {_fmt(wall)}\n")

    return {SolveStatus.CONVERGED: 0,
            SolveStatus.MAX_ITERATIONS: 2,
            SolveStatus.INNER_SOLVER_FAILURE: 1}[result.status]


def _spec_from_bench_args(args) -> RunSpec:
    n = args.n if args.n is not None else (10 if args.name == "mass-spring"
                                           else 100)
    default_s, default_r, default_mode = _default_budget(args.name, n)
    s = args.s if args.s is not None else default_s
    r = args.r if args.r is not None else default_r
    mode = args.mode if args.mode is not None else default_mode
    config = SolverConfig(
        budget=SparsityBudget(s=s, r=r, mode=mode),
        gamma=args.gamma, max_iter=args.max_iter, seed=args.seed)
    return RunSpec(benchmark=args.name, n=n, seed=args.seed, side=10.0,
                   matrix_paths={}, p=None, config=config, out_dir=args.out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sofpalm",
        description="Co-design of sparse output feedback gains and "
                    "row/column-sparse output matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a run described by an "
                                       "INI-style config file")
    run_p.add_argument("config", help="path to the configuration file")

    bench_p = sub.add_parser("bench", help="run a named benchmark")
    bench_p.add_argument("name", choices=list(_BENCHMARKS))
    bench_p.add_argument("--n", type=int, default=None,
                         help="benchmark size (masses / subsystems)")
    bench_p.add_argument("--r", type=int, default=None,
                         help="row/column budget for C")
    bench_p.add_argument("--s", type=int, default=None,
                         help="entry budget for K")
    bench_p.add_argument("--mode", choices=["row", "column"], default=None,
                         help="which cardinality of C is constrained")
    bench_p.add_argument("--gamma", type=float, default=10.0,
                         help="coupling penalty")
    bench_p.add_argument("--max-iter", type=int, default=2000)
    bench_p.add_argument("--seed", type=int, default=0,
                         help="layout seed (distributed benchmark)")
    bench_p.add_argument("--out", default="sofpalm_out",
                         help="output directory")

    args = parser.parse_args(argv)
    if args.command == "run":
        try:
            text = Path(args.config).read_text(encoding="utf-8")
            spec = parse_run_spec(text)
        except (OSError, ValueError, SofpalmError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        return run(spec)

    try:
        spec = _spec_from_bench_args(args)
    except (ValueError, SofpalmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
