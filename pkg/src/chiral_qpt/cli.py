"""Command-line sweeps over the field ratio xi_tilde/xi.

Examples::

    chiral-qpt spectrum --xi 0.4 --ratios 0.1:4.0:40 --levels 4
    chiral-qpt observables --ratios 0.25,0.5,2,4 --states g,+0,-0 --oracle --cutoff 40
    chiral-qpt entanglement --ratios 0.05:0.95:19 --format json
    chiral-qpt gapfit --side both
    chiral-qpt oracle-check --xi 0.4 --ratio 0.25 --tol 1e-6

Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 partial
failure (some grid points failed or did not converge; recorded in the output).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .entanglement import analytic_entanglement, oracle_entanglement
from .errors import ChiralQPTError, ConfigError
from .fock import FockBasis
from .io import Row, write_csv, write_json
from .model import ModelParams, Regime, analytic_levels, fit_gap_exponent, near_critical_grid
from .observables import analytic_record, oracle_record
from .oracle import converged_spectrum, oracle_levels
from .su11 import StateLabel

COMMANDS = ("spectrum", "observables", "entanglement", "gapfit", "oracle-check")
FAILED = {"error", "fail", "nonconverged"}

DEFAULTS = {
    "xi": 0.4,
    "ratios": "0.1:4.0:40",
    "cutoff": None,
    "tol": 1e-6,
    "format": "csv",
    "out": None,
    "jobs": 1,
    "layout": "long",
    "levels": 6,
    "states": "g,+0,-0",
    "oracle": False,
    "bits": False,
    "side": "both",
    "lo": 1e-3,
    "hi": 1e-1,
    "count": 12,
}


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional_int(text):
    if text is None or str(text).strip().lower() in ("", "none", "auto"):
        return None
    return int(text)


CONVERTERS = {
    "xi": float,
    "ratios": str,
    "cutoff": _optional_int,
    "tol": float,
    "format": str,
    "out": str,
    "jobs": int,
    "layout": str,
    "levels": int,
    "states": str,
    "oracle": _bool,
    "bits": _bool,
    "side": str,
    "lo": float,
    "hi": float,
    "count": int,
}


@dataclass(frozen=True)
class SweepConfig:
    command: str
    xi: float
    ratios: tuple
    states: tuple
    levels: int
    cutoff: int | None
    tol: float
    fmt: str
    out: str | None
    jobs: int
    layout: str
    oracle: bool
    base: float | None
    side: str
    lo: float
    hi: float
    count: int


def parse_ratios(spec: str) -> tuple[float, ...]:
    """``start:stop:count`` (linear), ``start:stop:count:log`` (geometric) or a comma list."""
    spec = str(spec).strip()
    if not spec:
        raise ConfigError("empty ratio grid")
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("lin", "log")):
                raise ConfigError(f"bad ratio range {spec!r}; expected start:stop:count[:log]")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ConfigError("ratio grid count must be >= 1")
            if len(parts) == 4 and parts[3] == "log":
                if start <= 0 or stop <= 0:
                    raise ConfigError("geometric grids need positive endpoints")
                grid = np.geomspace(start, stop, count)
            else:
                grid = np.linspace(start, stop, count)
        else:
            grid = np.array([float(v) for v in spec.split(",") if v.strip()])
    except ValueError as exc:
        raise ConfigError(f"cannot parse ratio grid {spec!r}: {exc}") from exc
    if grid.size == 0:
        raise ConfigError("empty ratio grid")
    if not np.all(np.isfinite(grid)) or np.any(grid < 0):
        raise ConfigError("ratios must be finite and non-negative")
    return tuple(float(r) for r in grid)


def load_config_file(path) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chiral-qpt", description="Exact Dirac-oscillator chirality transition sweeps.")
    parser.add_argument("--version", action="version", version=f"chiral-qpt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    S = argparse.SUPPRESS
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=S, help="flat key = value file (flags override it)")
        p.add_argument("--xi", default=S, help="oscillator coupling xi (default 0.4)")
        p.add_argument("--ratios", "--ratio", dest="ratios", default=S,
                       help="start:stop:count[:log] or comma list of xi_tilde/xi")
        p.add_argument("--cutoff", default=S, help="fixed Fock cutoff N (default: adaptive)")
        p.add_argument("--tol", default=S, help="oracle convergence tolerance (default 1e-6)")
        p.add_argument("--format", default=S, choices=("csv", "json"))
        p.add_argument("--out", default=S, help="output file (default stdout)")
        p.add_argument("--jobs", default=S, help="worker processes for grid points")
        p.add_argument("--layout", default=S, choices=("long", "wide"))
        p.add_argument("--levels", default=S, help="number of lowest-|E| levels")
        p.add_argument("--states", default=S, help="comma list of state labels, e.g. g,+0,-1")
        p.add_argument("--oracle", default=S, action="store_const", const="true",
                       help="also evaluate the exact-diagonalization oracle")
        p.add_argument("--bits", default=S, action="store_const", const="true",
                       help="entropies in bits instead of nats")
        if name == "gapfit":
            p.add_argument("--side", default=S, choices=("left", "right", "both"))
            p.add_argument("--lo", default=S, help="smallest |ratio - 1| of the default grid")
            p.add_argument("--hi", default=S, help="largest |ratio - 1| of the default grid")
            p.add_argument("--count", default=S, help="points per side of the default grid")
    return parser


def resolve_config(argv=None) -> SweepConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    merged = dict(DEFAULTS)
    if "config" in ns:
        merged.update(load_config_file(ns.pop("config")))
    merged.update(ns)
    try:
        values = {k: CONVERTERS[k](v) if v is not None else None for k, v in merged.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    # gapfit only reads --ratios when the user gave them explicitly
    explicit_ratios = "ratios" in ns or ("ratios" in merged and merged["ratios"] != DEFAULTS["ratios"])
    ratios = parse_ratios(values["ratios"]) if (command != "gapfit" or explicit_ratios) else ()
    try:
        states = tuple(str(StateLabel.parse(s)) for s in values["states"].split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not states:
        raise ConfigError("no states requested")
    if values["xi"] <= 0:
        raise ConfigError("xi must be positive")
    if values["tol"] <= 0:
        raise ConfigError("tol must be positive")
    if values["levels"] < 1 or values["jobs"] < 1:
        raise ConfigError("levels and jobs must be >= 1")
    if values["cutoff"] is not None and values["cutoff"] < 2:
        raise ConfigError("cutoff must be >= 2")
    if values["format"] not in ("csv", "json") or values["layout"] not in ("long", "wide"):
        raise ConfigError("format must be csv|json and layout long|wide")
    if values["side"] not in ("left", "right", "both"):
        raise ConfigError("side must be left, right or both")
    return SweepConfig(
        command=command,
        xi=values["xi"],
        ratios=ratios,
        states=states,
        levels=values["levels"],
        cutoff=values["cutoff"],
        tol=values["tol"],
        fmt=values["format"],
        out=values["out"],
        jobs=values["jobs"],
        layout=values["layout"],
        oracle=values["oracle"],
        base=2.0 if values["bits"] else None,
        side=values["side"],
        lo=values["lo"],
        hi=values["hi"],
        count=values["count"],
    )


# --- per-point evaluation -------------------------------------------------------


def _critical_row(ratio: float, state: str, quantity: str) -> Row:
    return Row(ratio, state, quantity, None, "analytic", status="critical",
               message="gapless free-fermion point; closed forms are singular")


def _error_row(ratio, state, quantity, source, exc, cutoff=None, tol=None) -> Row:
    return Row(ratio, state, quantity, None, source, cutoff, tol, "error", f"{type(exc).__name__}: {exc}")


def _oracle_cutoff(cfg: SweepConfig, params: ModelParams, k: int):
    """(cutoff, status): the fixed cutoff, or the first converged one of the escalation ladder."""
    if cfg.cutoff is not None:
        return cfg.cutoff, "ok"
    report = converged_spectrum(params, k, cfg.tol, raise_on_ceiling=False)
    return report.cutoff, "ok" if report.converged else "nonconverged"


def spectrum_point(cfg: SweepConfig, ratio: float) -> list[Row]:
    params = ModelParams.from_ratio(cfg.xi, ratio)
    if params.regime is Regime.CRITICAL:
        return [_critical_row(ratio, "-", "energy")]
    rows = [Row(ratio, label, "energy", e, "analytic") for label, e in analytic_levels(params, cfg.levels)]
    if not cfg.oracle:
        return rows
    try:
        if cfg.cutoff is not None:
            levels, cutoff, status = oracle_levels(params, FockBasis(cfg.cutoff), cfg.levels), cfg.cutoff, "ok"
        else:
            report = converged_spectrum(params, cfg.levels, cfg.tol, raise_on_ceiling=False)
            levels, cutoff = report.levels, report.cutoff
            status = "converged" if report.converged else "nonconverged"
    except ChiralQPTError as exc:
        return rows + [_error_row(ratio, "-", "energy", "oracle", exc)]
    for k in range(cfg.levels):
        if k < len(levels):
            rows.append(Row(ratio, f"#{k}", "energy", float(levels[k]), "oracle", cutoff, cfg.tol, status))
        else:
            rows.append(Row(ratio, f"#{k}", "energy", None, "oracle", cutoff, cfg.tol, "nonconverged",
                            "level not resolved inside the cutoff"))
    return rows


OBSERVABLE_FIELDS = (("lz", "Lz"), ("dx", "dx"), ("dp", "dp"), ("q_r", "Q_r"), ("q_l", "Q_l"))


def _record_rows(record, ratio, tol=None) -> list[Row]:
    rows = []
    for attr, name in OBSERVABLE_FIELDS:
        value = getattr(record, attr)
        status = "ok" if value is not None else "undefined"
        message = "" if value is not None else "mode is unoccupied"
        rows.append(Row(ratio, record.state, name, value, record.source, record.cutoff, tol, status, message))
    rows.append(Row(ratio, record.state, "dx_dp", record.dx * record.dp, record.source, record.cutoff, tol))
    return rows


def observables_point(cfg: SweepConfig, ratio: float) -> list[Row]:
    params = ModelParams.from_ratio(cfg.xi, ratio)
    if params.regime is Regime.CRITICAL:
        return [_critical_row(ratio, s, "Lz") for s in cfg.states]
    rows = []
    for state in cfg.states:
        try:
            rows += _record_rows(analytic_record(params, state), ratio)
        except ChiralQPTError as exc:
            rows.append(_error_row(ratio, state, "Lz", "analytic", exc))
    if not cfg.oracle:
        return rows
    try:
        need = max(StateLabel.parse(s).n for s in cfg.states) * 2 + 3
        cutoff, status = _oracle_cutoff(cfg, params, need)
    except ChiralQPTError as exc:
        return rows + [_error_row(ratio, "-", "Lz", "oracle", exc)]
    if status == "nonconverged":
        # never compare against an unconverged oracle
        return rows + [Row(ratio, s, "Lz", None, "oracle", cutoff, cfg.tol, "nonconverged",
                           "spectrum not converged; oracle comparison skipped") for s in cfg.states]
    basis = FockBasis(cutoff)
    for state in cfg.states:
        try:
            rows += _record_rows(oracle_record(params, state, basis), ratio, cfg.tol)
        except ChiralQPTError as exc:
            rows.append(_error_row(ratio, state, "Lz", "oracle", exc, cutoff, cfg.tol))
    return rows


def _entanglement_rows(rec, ratio, tol=None) -> list[Row]:
    return [
        Row(ratio, "g", name, value, rec.source, rec.cutoff, tol, "ok" if value is not None else "undefined",
            "" if value is not None else "thermal identification holds in the left regime only")
        for name, value in (("S_l", rec.s_l), ("S_r", rec.s_r), ("S_s", rec.s_s), ("T_eff", rec.t_eff))
    ]


def entanglement_point(cfg: SweepConfig, ratio: float) -> list[Row]:
    params = ModelParams.from_ratio(cfg.xi, ratio)
    if params.regime is Regime.CRITICAL:
        return [_critical_row(ratio, "g", "S_l")]
    rows = _entanglement_rows(analytic_entanglement(params, base=cfg.base), ratio)
    if not cfg.oracle:
        return rows
    try:
        cutoff, status = _oracle_cutoff(cfg, params, 3)
        if status == "nonconverged":
            return rows + [Row(ratio, "g", "S_l", None, "oracle", cutoff, cfg.tol, "nonconverged",
                               "spectrum not converged; oracle comparison skipped")]
        rec = oracle_entanglement(params, FockBasis(cutoff), base=cfg.base)
    except ChiralQPTError as exc:
        return rows + [_error_row(ratio, "g", "S_l", "oracle", exc)]
    return rows + _entanglement_rows(rec, ratio, cfg.tol)


def oracle_check_point(cfg: SweepConfig, ratio: float) -> list[Row]:
    params = ModelParams.from_ratio(cfg.xi, ratio)
    if params.regime is Regime.CRITICAL:
        return [_critical_row(ratio, "-", "energy")]
    analytic = analytic_levels(params, cfg.levels)
    try:
        # one spare level: the right regime carries an extra flat level at -mc^2
        if cfg.cutoff is not None:
            numeric, cutoff, status = oracle_levels(params, FockBasis(cfg.cutoff), cfg.levels + 1), cfg.cutoff, "ok"
        else:
            report = converged_spectrum(params, cfg.levels + 1, cfg.tol, raise_on_ceiling=False)
            numeric, cutoff = report.levels, report.cutoff
            status = "ok" if report.converged else "nonconverged"
    except ChiralQPTError as exc:
        return [_error_row(ratio, "-", "energy", "oracle", exc)]
    rows = []
    for label, e in analytic:
        rows.append(Row(ratio, label, "energy", e, "analytic"))
        if numeric.size == 0:
            rows.append(Row(ratio, label, "energy", None, "oracle", cutoff, cfg.tol, "nonconverged",
                            "no level resolved inside the cutoff"))
            continue
        match = float(numeric[np.argmin(np.abs(numeric - e))])
        err = abs(match - e)
        verdict = status if status != "ok" else ("pass" if err < cfg.tol else "fail")
        rows.append(Row(ratio, label, "energy", match, "oracle", cutoff, cfg.tol, status))
        rows.append(Row(ratio, label, "abs_error", err, "check", cutoff, cfg.tol, verdict))
    return rows


POINT_FUNCTIONS = {
    "spectrum": spectrum_point,
    "observables": observables_point,
    "entanglement": entanglement_point,
    "oracle-check": oracle_check_point,
}


def run_grid(cfg: SweepConfig) -> list[Row]:
    """Evaluate every grid point; results are concatenated in grid order."""
    fn = partial(POINT_FUNCTIONS[cfg.command], cfg)
    if cfg.jobs > 1 and len(cfg.ratios) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(fn, cfg.ratios))
    else:
        chunks = [fn(r) for r in cfg.ratios]
    return [row for chunk in chunks for row in chunk]


def gap_fit_report(cfg: SweepConfig) -> tuple[list[Row], dict]:
    if cfg.ratios:
        grids = {classify_side(cfg.ratios): cfg.ratios}
    else:
        sides = ("left", "right") if cfg.side == "both" else (cfg.side,)
        grids = {s: tuple(near_critical_grid(s, cfg.lo, cfg.hi, cfg.count)) for s in sides}
    rows, summary = [], {}
    for side, grid in grids.items():
        fit = fit_gap_exponent(grid, xi=cfg.xi, side=None if side == "mixed" else side)
        for r, d, g, res in zip(grid, fit.distances, fit.gaps, fit.residuals):
            rows += [
                Row(float(r), side, "distance", float(d), "analytic"),
                Row(float(r), side, "gap", float(g), "analytic"),
                Row(float(r), side, "loglog_residual", float(res), "analytic"),
            ]
        stats = {
            "exponent": fit.exponent,
            "stderr": fit.stderr,
            "ci95_low": fit.ci95[0],
            "ci95_high": fit.ci95[1],
            "rms": fit.rms,
        }
        rows += [Row(None, side, k, float(v), "analytic") for k, v in stats.items()]
        summary[side] = stats
    return rows, summary


def classify_side(ratios) -> str:
    sides = {r < 1.0 for r in ratios}
    if len(sides) != 1:
        return "mixed"
    return "left" if sides.pop() else "right"


def emit(cfg: SweepConfig, rows, extra=None) -> None:
    def write(stream):
        if cfg.fmt == "json":
            write_json(rows, stream, __version__, cfg.command, extra)
        else:
            write_csv(rows, stream, __version__, cfg.layout)

    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            write(fh)
    else:
        write(sys.stdout)


def run_sweep(cfg: SweepConfig) -> int:
    extra = None
    if cfg.command == "gapfit":
        rows, summary = gap_fit_report(cfg)
        extra = {"fits": summary}
    else:
        rows = run_grid(cfg)
    emit(cfg, rows, extra)
    return 3 if any(r.status in FAILED for r in rows) else 0


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
    except ConfigError as exc:
        print(f"chiral-qpt: configuration error: {exc}", file=sys.stderr)
        return 1
    try:
        return run_sweep(cfg)
    except (ChiralQPTError, OSError, ValueError, ArithmeticError) as exc:
        print(f"chiral-qpt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
