"""JSON and CSV readers and writers for states, roots, Hamiltonians and results.

Complex numbers are stored as ``[re, im]`` pairs.  Floats are written with
17 significant digits so that every double round-trips exactly.  CSV files
start with ``# key: value`` metadata lines.
"""
from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .spin import PureState, StellarRoots, norm_squared, state_from_roots

FLOAT_FORMAT = "{:.17g}"


class FormatError(ValueError):
    """Input file does not describe a valid object."""


def _complex_list(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).reshape(-1)]


def _parse_complex(values, what: str) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what}: expected a list of [re, im] pairs") from exc
    if arr.size == 0:
        return np.zeros(0, dtype=complex)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise FormatError(f"{what}: expected [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FormatError(f"{what}: non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def _twice_j(d: dict) -> int:
    tj = d.get("twice_j")
    if not isinstance(tj, int) or isinstance(tj, bool) or tj < 0:
        raise FormatError(f"twice_j must be a non-negative integer, got {tj!r}")
    return tj


# ---------------------------------------------------------------------------
# states, roots, hamiltonians


def state_to_dict(state: PureState) -> dict:
    return {"twice_j": state.twice_j, "coeffs": _complex_list(state.coeffs)}


def state_from_dict(d: dict) -> PureState:
    """State from ``{twice_j, coeffs}`` or from a roots record."""
    if not isinstance(d, dict):
        raise FormatError("state record must be a JSON object")
    if "finite_roots" in d:
        return state_from_roots(roots_from_dict(d))
    tj = _twice_j(d)
    if "coeffs" not in d:
        raise FormatError("state record needs 'coeffs' or 'finite_roots'")
    c = _parse_complex(d["coeffs"], "coeffs")
    if c.shape != (tj + 1,):
        raise FormatError(f"expected {tj + 1} coefficients, got {c.shape[0]}")
    try:
        # keep the stored phase; renormalise only records that need it
        if abs(norm_squared(c, tj) - 1.0) <= 1e-14:
            return PureState(tj, c)
        return PureState.from_coeffs(c, tj, canonical=False)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def roots_to_dict(roots: StellarRoots) -> dict:
    return {"twice_j": roots.twice_j, "finite_roots": _complex_list(roots.finite_roots),
            "roots_at_infinity": int(roots.roots_at_infinity)}


def roots_from_dict(d: dict) -> StellarRoots:
    tj = _twice_j(d)
    r = _parse_complex(d.get("finite_roots", []), "finite_roots")
    m = d.get("roots_at_infinity", 0)
    if not isinstance(m, int) or isinstance(m, bool):
        raise FormatError("roots_at_infinity must be an integer")
    try:
        return StellarRoots(tj, r, m)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def hamiltonian_to_dict(h) -> dict:
    m = np.asarray(h.matrix, dtype=complex)
    return {"twice_j": h.twice_j, "matrix": [_complex_list(row) for row in m]}


def hamiltonian_from_dict(d: dict):
    from .dynamics import SpinHamiltonian

    tj = _twice_j(d)
    m = _parse_complex(d.get("matrix", []), "matrix")
    if m.shape != (tj + 1, tj + 1):
        raise FormatError(f"matrix must be {tj + 1}x{tj + 1}, got shape {m.shape}")
    try:
        return SpinHamiltonian(tj, m)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def load_state(path) -> PureState:
    return state_from_dict(read_json(path))


def load_hamiltonian(path):
    return hamiltonian_from_dict(read_json(path))


def save_json(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


# ---------------------------------------------------------------------------
# number formatting


def _format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isfinite(v):
            return v
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, dict):
        return {str(k): _format_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_format_value(x) for x in v]
    return v


def dumps(obj) -> str:
    """JSON text; Python's float repr is shortest round-trip, i.e. at most 17 digits."""
    return json.dumps(_format_value(obj), sort_keys=False)


def format_float(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FORMAT.format(float(v))
    return "" if v is None else str(v)


def config_hash(config: dict) -> str:
    """Short SHA-256 of the canonical JSON form of ``config``."""
    text = json.dumps(_format_value(config), sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def metadata(config: dict, seed, runtime: float) -> dict:
    from . import __version__

    return {"version": __version__, "config_hash": config_hash(config), "seed": seed,
            "runtime_s": float(runtime)}


# ---------------------------------------------------------------------------
# tables


def csv_text(rows: list[dict], columns: list[str], meta: dict | None = None) -> str:
    """CSV with ``# key: value`` metadata lines; the runtime line comes last."""
    buf = _io.StringIO()
    if meta:
        for k, v in meta.items():
            if k != "runtime_s":
                buf.write(f"# {k}: {format_float(v) if v is not None else 'none'}\n")
        if "runtime_s" in meta:
            buf.write(f"# runtime_s: {format_float(meta['runtime_s'])}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_float(row.get(c)) for c in columns])
    return buf.getvalue()


def read_csv(path_or_text) -> tuple[dict, list[dict]]:
    """Metadata and rows of a file written by :func:`csv_text`; values stay strings."""
    text = path_or_text
    if "\n" not in str(path_or_text):
        text = Path(path_or_text).read_text()
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# ") and ": " in line:
            k, v = line[2:].split(": ", 1)
            meta[k] = v
        elif line:
            body.append(line)
    return meta, list(csv.DictReader(body))


REPORT_COLUMNS = ["state_id", "q", "W", "S", "Y", "Z", "R", "T", "method"]
RANDOM_COLUMNS = ["N", "q", "n_samples", "mc_mean", "std_error", "exact_value", "z_score", "seed"]
SERIES_COLUMNS = ["t", "q", "S", "W", "dS_dt_analytic", "dS_dt_fd"]


def report_rows(report, state_id: str) -> list[dict]:
    return [dict(state_id=state_id, **r) for r in report.rows()]


def estimate_row(n: int, q: float, est) -> dict:
    return {"N": n, "q": float(q), "n_samples": est.n_samples, "mc_mean": est.mean,
            "std_error": est.std_error, "exact_value": est.exact, "z_score": est.z_score,
            "seed": est.seed}


def trace_jsonl(trace, meta: dict | None = None) -> str:
    """One JSON object per snapshot; the metadata record, if any, comes first."""
    lines = []
    if meta:
        lines.append(dumps({"metadata": meta, "map": trace.map_name, "q": trace.q,
                            "converged": trace.converged, "monotone": trace.monotone,
                            "message": trace.message}))
    lines += [dumps(s) for s in trace.snapshots()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# bundled fixtures

PLATONIC = {4: "tetrahedron", 6: "octahedron", 8: "cube", 12: "icosahedron", 20: "dodecahedron"}


def platonic_roots(twice_j: int) -> StellarRoots:
    """Zeros at the vertices of the Platonic solid with ``2j`` vertices."""
    from importlib import resources

    if twice_j not in PLATONIC:
        raise ValueError(f"no Platonic solid with {twice_j} vertices; choose from {sorted(PLATONIC)}")
    text = resources.files("wehrl").joinpath(f"data/platonic/{PLATONIC[twice_j]}.json").read_text()
    return roots_from_dict(json.loads(text))
