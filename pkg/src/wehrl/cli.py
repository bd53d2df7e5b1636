"""Command line interface: ``wehrl {measure,random,maps,dynamics,verify}``.

Exit codes: 0 success, 2 usage or input error, 3 numerical degeneracy,
4 failed assertion.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from . import io as wio
from .quadrature import ConvergenceError, QuadratureGrid

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_ASSERT = 0, 2, 3, 4
MAPS = ("f1", "f1prime", "f2", "f3", "theorem2")


class UsageError(ValueError):
    pass


class AssertionFailure(RuntimeError):
    pass


@dataclass
class RunConfig:
    """Settings shared by every subcommand."""

    tol: float = 1e-10
    max_grid: int = 2_000_000
    seed: int | None = None
    format: str = "json"
    out: str | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.max_grid < 1:
            raise UsageError("--max-grid must be positive")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")
        if self.seed is None:
            self.seed = int(np.random.SeedSequence().entropy % 2**32)


# ---------------------------------------------------------------------------
# argument parsing


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _int_list(text: str) -> list[int]:
    vals = _float_list(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected integers: {text!r}")
    return [int(v) for v in vals]


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("run configuration")
    g.add_argument("--seed", type=int, default=None, help="RNG seed (drawn and recorded if omitted)")
    g.add_argument("--tol", type=float, default=1e-10, help="relative quadrature tolerance")
    g.add_argument("--max-grid", type=int, default=2_000_000, help="largest fixed quadrature grid")
    g.add_argument("--format", choices=("json", "csv"), default=None, help="output format")
    g.add_argument("--out", default=None, help="output file (stdout if omitted)")


def _state_source(p: argparse.ArgumentParser, required: bool = True):
    g = p.add_argument_group("state")
    src = g.add_mutually_exclusive_group(required=required)
    src.add_argument("--state", help="JSON state or roots file")
    src.add_argument("--builtin", choices=("coherent", "jz", "platonic", "random"),
                     help="built-in state")
    g.add_argument("--twice-j", type=int, help="2j for a built-in state")
    g.add_argument("--gamma", type=_complex, default=0j, help="centre of the coherent state")
    g.add_argument("--m", type=float, default=None, help="Jz eigenvalue for --builtin jz")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wehrl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="localisation measures of one state")
    _state_source(p)
    p.add_argument("--q", type=_float_list, default=[0.5, 1.0, 2.0, 3.0], help="Renyi indices")
    p.add_argument("--method", choices=("auto", "exact", "quadrature"), default="auto")
    _common(p)

    p = sub.add_parser("random", help="Monte-Carlo averages over Haar-random states")
    p.add_argument("--N", type=_int_list, required=True, help="Hilbert space dimensions")
    p.add_argument("--q", type=_float_list, default=[1.0, 2.0])
    p.add_argument("--n-samples", type=int, default=10_000)
    p.add_argument("--measure", choices=("auto", "S", "W", "L2sq"), default="auto",
                   help="auto: S for q=1, W otherwise")
    _common(p)

    p = sub.add_parser("maps", help="apply a zero-moving map or the climbing iteration")
    _state_source(p)
    p.add_argument("--map", choices=MAPS, required=True)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--step", type=float, default=1.0, help="fraction of the path for f3")
    _common(p)

    p = sub.add_parser("dynamics", help="entropies along a unitary trajectory")
    _state_source(p)
    hs = p.add_mutually_exclusive_group(required=True)
    hs.add_argument("--hamiltonian", help="JSON Hamiltonian file")
    hs.add_argument("--builtin-h", choices=("jz", "jx", "rotation", "random"))
    p.add_argument("--a", type=float, default=1.0, help="Jz weight of --builtin-h rotation")
    p.add_argument("--b", type=_complex, default=0.5, help="J+ weight of --builtin-h rotation")
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--n-steps", type=int, default=10)
    p.add_argument("--q", type=_float_list, default=[1.0, 2.0])
    p.add_argument("--no-fd", action="store_true", help="skip finite-difference rates")
    _common(p)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", type=_int_list, default=None, help="criterion numbers to run")
    _common(p)
    return parser


# ---------------------------------------------------------------------------
# helpers


def _config(args, default_format: str) -> RunConfig:
    return RunConfig(args.tol, args.max_grid, args.seed, args.format or default_format, args.out)


def _load_state(args, rng):
    from .spin import basis_state, coherent_state, state_from_roots

    if args.state:
        try:
            return wio.load_state(args.state), args.state
        except OSError as exc:
            raise UsageError(f"cannot read {args.state}: {exc}") from exc
    tj = args.twice_j
    if tj is None or tj < 0:
        raise UsageError("--twice-j is required for a built-in state")
    if args.builtin == "coherent":
        return coherent_state(args.gamma, tj), f"coherent(2j={tj}, gamma={args.gamma})"
    if args.builtin == "jz":
        m = tj / 2 if args.m is None else args.m
        return basis_state(m, tj), f"jz(2j={tj}, m={m:g})"
    if args.builtin == "platonic":
        return state_from_roots(wio.platonic_roots(tj)), f"platonic({wio.PLATONIC.get(tj)})"
    from .ensemble import haar_random_state

    return haar_random_state(tj, rng), f"random(2j={tj})"


def _load_hamiltonian(args, twice_j: int, rng):
    from .dynamics import SpinHamiltonian

    if args.hamiltonian:
        try:
            h = wio.load_hamiltonian(args.hamiltonian)
        except OSError as exc:
            raise UsageError(f"cannot read {args.hamiltonian}: {exc}") from exc
        if h.twice_j != twice_j:
            raise UsageError(f"Hamiltonian has 2j={h.twice_j}, state has 2j={twice_j}")
        return h, args.hamiltonian
    name = args.builtin_h
    if name == "rotation":
        return SpinHamiltonian.rotation(twice_j, args.a, args.b), f"rotation(a={args.a}, b={args.b})"
    if name == "random":
        return SpinHamiltonian.random(twice_j, rng), "random"
    return getattr(SpinHamiltonian, name)(twice_j), name


def _check_qs(qs):
    for q in qs:
        if not (q > 0 and math.isfinite(q)):
            raise UsageError(f"invalid q={q}: must be positive and finite")


def _emit(text: str, cfg: RunConfig):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _hashable(args) -> dict:
    return {k: (str(v) if isinstance(v, complex) else v) for k, v in vars(args).items()
            if k not in ("out", "func")}


# ---------------------------------------------------------------------------
# subcommands


CLOSED_COLUMNS = ["W_closed", "S_closed", "Y_closed", "Z_closed"]


def _closed_row(kind: str, state, qs):
    from .entropy import coherent_closed_forms, jz_closed_forms
    from .spin import is_coherent

    out = {}
    for q in qs:
        ref = None
        if state.twice_j >= 1 and (kind == "coherent" or is_coherent(state)):
            ref = coherent_closed_forms(state.twice_j, q)
        elif kind == "jz" and float(q).is_integer():
            nz = np.flatnonzero(np.abs(state.coeffs) > 0)
            ref = jz_closed_forms(state.twice_j, state.twice_j / 2 - nz[0], int(q))
        if ref is not None:
            out[q] = {f"{k}_closed": getattr(ref, k).get(float(q), math.nan) for k in "WSYZ"}
    return out


def cmd_measure(args, cfg: RunConfig, rng) -> dict:
    from .entropy import measure_report

    _check_qs(args.q)
    state, sid = _load_state(args, rng)
    if args.method == "quadrature":
        for q in args.q:
            if float(q).is_integer() and q > 1:
                if QuadratureGrid.exact_for(state.twice_j, q).size > cfg.max_grid:
                    raise UsageError(f"grid for q={q:g} exceeds --max-grid {cfg.max_grid}")
    rep = measure_report(state, args.q, method=args.method, rtol=cfg.tol)
    closed = _closed_row(args.builtin or "", state, args.q)
    rows = wio.report_rows(rep, sid)
    for row in rows:
        row.update(closed.get(row["q"], {c: math.nan for c in CLOSED_COLUMNS}))
    return {"kind": "measure", "state_id": sid, "state": wio.state_to_dict(state),
            "report": rep.to_dict(), "rows": rows, "columns": wio.REPORT_COLUMNS + CLOSED_COLUMNS}


def cmd_random(args, cfg: RunConfig, rng) -> dict:
    from .ensemble import mc_mean_measure

    _check_qs(args.q)
    if args.n_samples < 2:
        raise UsageError("--n-samples must be at least 2")
    rows, i = [], 0
    for n in args.N:
        if n < 2:
            raise UsageError(f"N={n}: dimension must be at least 2")
        for q in args.q:
            measure = args.measure if args.measure != "auto" else ("S" if q == 1 else "W")
            est = mc_mean_measure(n - 1, q, args.n_samples, cfg.seed + i, measure=measure)
            row = wio.estimate_row(n, q, est)
            row["measure"] = measure
            if not math.isfinite(row["z_score"]):
                raise AssertionFailure(f"non-finite z-score for N={n}, q={q}")
            rows.append(row)
            i += 1
    return {"kind": "random", "rows": rows, "columns": wio.RANDOM_COLUMNS + ["measure"]}


def cmd_maps(args, cfg: RunConfig, rng) -> dict:
    from .entropy import measure_report
    from .maps import MapTrace, f1, f1_prime_collapse, f2, f3, theorem2_driver

    _check_qs([args.q])
    state, sid = _load_state(args, rng)
    if args.map == "theorem2":
        trace = theorem2_driver(state, args.q, max_iters=args.max_iters)
    else:
        func = {"f1": f1, "f1prime": f1_prime_collapse, "f2": f2,
                "f3": lambda s: f3(s, step=args.step)}[args.map]
        trace = MapTrace(args.map, float(args.q))
        trace.append(state, measure_report(state, [args.q], rtol=cfg.tol))
        out = func(state)
        trace.append(out, measure_report(out, [args.q], rtol=cfg.tol))
        w = trace.values("W")
        trace.monotone = w[-1] >= w[0] - 1e-12
        trace.converged = True
    result = {"kind": "maps", "state_id": sid, "trace": trace,
              "rows": [{"step": i, "W": r.W[float(args.q)], "S": r.S[float(args.q)]}
                       for i, r in enumerate(trace.reports)],
              "columns": ["step", "W", "S"]}
    if args.map == "theorem2" and not trace.monotone:
        result["assertion"] = "W(q) decreased along the trace"
    return result


def cmd_dynamics(args, cfg: RunConfig, rng) -> dict:
    from .dynamics import time_series

    _check_qs(args.q)
    if args.n_steps < 1 or not args.t_max > 0:
        raise UsageError("need --t-max > 0 and --n-steps >= 1")
    state, sid = _load_state(args, rng)
    h, hid = _load_hamiltonian(args, state.twice_j, rng)
    ts = time_series(state, h, args.t_max, args.n_steps, args.q, finite_differences=not args.no_fd)
    return {"kind": "dynamics", "state_id": sid, "hamiltonian_id": hid, "rows": ts.rows(),
            "columns": wio.SERIES_COLUMNS}


def cmd_verify(args, cfg: RunConfig, rng) -> dict:
    from .acceptance import run_all

    results = run_all(seed=cfg.seed, only=args.only, echo=lambda s: print(s, file=sys.stderr, flush=True))
    rows = [{"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail,
             "seconds": r.seconds} for r in results]
    out = {"kind": "verify", "rows": rows, "columns": ["criterion", "name", "passed", "seconds", "detail"]}
    failed = [r.number for r in results if not r.passed]
    if failed:
        out["assertion"] = f"criteria failed: {failed}"
    return out


COMMANDS = {"measure": cmd_measure, "random": cmd_random, "maps": cmd_maps,
            "dynamics": cmd_dynamics, "verify": cmd_verify}


def _render(result: dict, cfg: RunConfig, meta: dict) -> str:
    if result["kind"] == "maps" and cfg.format == "json":
        return wio.trace_jsonl(result["trace"], meta)
    if cfg.format == "csv":
        return wio.csv_text(result["rows"], result["columns"], meta)
    body = {k: v for k, v in result.items() if k not in ("trace", "columns")}
    return wio.dumps({"metadata": meta, **body}) + "\n"


def main(argv=None) -> int:
    from .maps import DegenerateConfigurationError

    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    default_format = "csv" if args.command in ("random", "dynamics") else "json"
    try:
        cfg = _config(args, default_format)
        if args.seed is None:
            args.seed = cfg.seed
        rng = np.random.default_rng(cfg.seed)
        result = COMMANDS[args.command](args, cfg, rng)
    except (UsageError, wio.FormatError, ValueError) as exc:
        print(f"wehrl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateConfigurationError, ConvergenceError, np.linalg.LinAlgError) as exc:
        print(f"wehrl {args.command}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except AssertionFailure as exc:
        print(f"wehrl {args.command}: assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    config = {"command": args.command, **asdict(cfg), "args": _hashable(args)}
    config.pop("out")
    meta = wio.metadata(config, cfg.seed, time.perf_counter() - t0)
    _emit(_render(result, cfg, meta), cfg)
    if "assertion" in result:
        print(f"wehrl {args.command}: assertion failed: {result['assertion']}", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
