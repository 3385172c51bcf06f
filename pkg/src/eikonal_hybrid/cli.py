"""Benchmark runner: expand an experiment matrix, run solvers, write CSV rows and field dumps.

Config files are flat ``key = value`` lines; list values are comma separated::

    problem = checker11
    grids   = 176
    methods = fmm, fsm, fhcm, fmsm
    cells   = 22, 44
    exits   = point
    refine  = 4
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cells import build_cells, fhcm_solve, hcm_solve
from .classic import fmm_solve, fsm_solve, lsm_solve
from .errors import ConfigurationError
from .fmsm import fmsm_solve
from .grid import build_problem
from .metrics import evaluate, ground_truth
from .problems import PROBLEM_NAMES, speed_by_name

EXACT_METHODS = ("fmm", "fsm", "lsm")
HYBRID_METHODS = ("hcm", "fhcm", "fmsm")
CSV_COLUMNS = (
    "problem", "method", "grid_m", "cells_x", "elapsed_ms", "l_inf", "l_1",
    "R_max_ratio", "rho", "R_ratio", "avhr", "avs", "mon_pct",
    "sweeps", "node_updates", "heap_removals",
)
_SOLVERS = {
    "fmm": fmm_solve, "fsm": fsm_solve, "lsm": lsm_solve,
    "hcm": hcm_solve, "fhcm": fhcm_solve, "fmsm": fmsm_solve,
}


@dataclass(frozen=True)
class ExperimentSpec:
    problem: str
    grids: tuple[int, ...]
    methods: tuple[str, ...]
    cells: tuple[int, ...] = ()
    exits: str = "point"
    refine: int = 4
    seed: int = 0  # reserved; every method is deterministic
    dump_format: str = "ascii"

    def __post_init__(self):
        speed_by_name(self.problem)
        for m in self.methods:
            if m not in _SOLVERS:
                raise ConfigurationError(f"unknown method {m!r}; expected one of {', '.join(_SOLVERS)}")
        if not self.grids or not self.methods:
            raise ConfigurationError("grids and methods must be non-empty")
        if any(m in HYBRID_METHODS for m in self.methods) and not self.cells:
            raise ConfigurationError("hybrid methods need at least one cell count")
        if self.exits not in ("point", "boundary"):
            raise ConfigurationError(f"unknown exit mode {self.exits!r}")
        if self.refine < 1:
            raise ConfigurationError(f"refine must be >= 1, got {self.refine}")
        if self.dump_format not in ("ascii", "raw"):
            raise ConfigurationError(f"unknown dump format {self.dump_format!r}")
        k = speed_by_name(self.problem).params.get("k")
        for g in self.grids:
            if g < 2:
                raise ConfigurationError(f"grid size must be >= 2, got {g}")
            if k and g % k:
                raise ConfigurationError(f"grid {g} is not a multiple of the {k}x{k} checkerboard")
            for c in self.cells:
                if not 1 <= c <= g:
                    raise ConfigurationError(f"cell count {c} does not fit grid {g}")

    def tasks(self) -> list[tuple[str, int, int | None]]:
        """(method, grid, cells) tuples in matrix order."""
        out = []
        for g in self.grids:
            for m in self.methods:
                if m in HYBRID_METHODS:
                    out.extend((m, g, c) for c in self.cells)
                else:
                    out.append((m, g, None))
        return out


_LIST_KEYS = {"grids": int, "methods": str, "cells": int}
_SCALAR_KEYS = {"problem": str, "exits": str, "refine": int, "seed": int, "dump_format": str}


def parse_config(text: str) -> ExperimentSpec:
    """Parse the flat key=value format; ``#`` starts a comment."""
    kw = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key in _LIST_KEYS:
                kw[key] = tuple(_LIST_KEYS[key](v.strip()) for v in value.split(",") if v.strip())
            elif key in _SCALAR_KEYS:
                kw[key] = _SCALAR_KEYS[key](value)
            else:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"line {lineno}: bad value {value!r} for {key!r}") from None
    if "problem" not in kw:
        raise ConfigurationError("config needs a 'problem' entry")
    kw.setdefault("grids", ())
    kw.setdefault("methods", ())
    return ExperimentSpec(**kw)


def load_config(path) -> ExperimentSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


# -- field dumps ---------------------------------------------------------------

def dump_field(values: np.ndarray, path, fmt: str = "ascii", h: float = 1.0) -> Path:
    """Write ``values[i, j]`` (shape m x n) to ``path``.

    ``ascii``: header ``m n h`` then n rows (j ascending) of m values.
    ``raw``: two little-endian int64 (m, n) then float64 data, row-major.
    """
    path = Path(path)
    v = np.asarray(values, dtype=np.float64)
    m, n = v.shape
    try:
        if fmt == "ascii":
            with open(path, "w") as fh:
                fh.write(f"{m} {n} {h:.17g}\n")
                for j in range(n):
                    fh.write(" ".join(f"{x:.17g}" for x in v[:, j]) + "\n")
        elif fmt == "raw":
            with open(path, "wb") as fh:
                fh.write(np.array([m, n], dtype="<i8").tobytes())
                fh.write(np.ascontiguousarray(v, dtype="<f8").tobytes())
        else:
            raise ConfigurationError(f"unknown dump format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write field dump {path}: {exc.strerror}") from exc
    return path


def load_field(path, fmt: str = "ascii") -> np.ndarray:
    path = Path(path)
    if fmt == "raw":
        data = path.read_bytes()
        m, n = np.frombuffer(data[:16], dtype="<i8")
        return np.frombuffer(data[16:], dtype="<f8").reshape(int(m), int(n)).copy()
    with open(path) as fh:
        m, n, _ = fh.readline().split()
        rows = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    return np.ascontiguousarray(rows.reshape(int(n), int(m)).T)


# -- running -------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.10g}"


def _run_one(spec: ExperimentSpec, method: str, grid_m: int, ncells, repeat: int, truth, exact):
    problem = build_problem(spec.problem, grid_m, exits=spec.exits)
    solver = _SOLVERS[method]
    args = (problem,) if ncells is None else (problem, build_cells(problem.grid, ncells))
    best = float("inf")
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        out = solver(*args)
        best = min(best, time.perf_counter() - t0)
    rep = evaluate(out.values, exact, truth, problem.exit_mask)
    ratios = (1.0, 1.0, 1.0) if method in EXACT_METHODS else (
        rep.max_error_ratio, rep.avg_error_ratio, rep.ratio_of_max)
    ex = out.extras
    row = {
        "problem": spec.problem, "method": method, "grid_m": grid_m, "cells_x": ncells,
        "elapsed_ms": 1e3 * best, "l_inf": rep.l_inf, "l_1": rep.l_1,
        "R_max_ratio": ratios[0], "rho": ratios[1], "R_ratio": ratios[2],
        "avhr": ex.get("AvHR"), "avs": ex.get("AvS"), "mon_pct": ex.get("Mon%"),
        "sweeps": out.sweeps, "node_updates": out.node_updates, "heap_removals": out.heap_removals,
    }
    return row, out.values, problem.grid.h


def _task(payload):
    return _run_one(*payload)


def run_experiment(spec: ExperimentSpec, repeat: int = 1, jobs: int = 1, dump_dir=None) -> list[dict]:
    """One row per (grid, method, cells), in matrix order."""
    refs = {}
    for g in spec.grids:
        p = build_problem(spec.problem, g, exits=spec.exits)
        refs[g] = (ground_truth(p, spec.refine), fmm_solve(p).values)
    payloads = [(spec, m, g, c, repeat, *refs[g]) for m, g, c in spec.tasks()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_task, payloads))
    else:
        results = [_task(p) for p in payloads]
    if dump_dir is not None:
        os.makedirs(dump_dir, exist_ok=True)
        ext = "txt" if spec.dump_format == "ascii" else "bin"
        for (row, values, h) in results:
            tag = f"{row['problem']}_{row['method']}_{row['grid_m']}" + (
                f"_c{row['cells_x']}" if row["cells_x"] is not None else "")
            dump_field(values, Path(dump_dir) / f"{tag}.{ext}", spec.dump_format, h)
    return [r for r, _, _ in results]


def write_csv(rows: list[dict], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r["problem"], r["method"], r["grid_m"]] + [_fmt(r[c]) for c in CSV_COLUMNS[3:]])


def _cmd_run(args) -> int:
    spec = load_config(args.config)
    rows = run_experiment(spec, repeat=args.repeat, jobs=args.jobs, dump_dir=args.dump_dir)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        buf = io.StringIO()
        write_csv(rows, buf)
        sys.stdout.write(buf.getvalue())
    return 0


def _cmd_truth(args) -> int:
    if args.problem not in PROBLEM_NAMES:
        raise ConfigurationError(f"unknown problem {args.problem!r}")
    if args.refine < 1:
        raise ConfigurationError(f"refine must be >= 1, got {args.refine}")
    p = build_problem(args.problem, args.grid, exits=args.exits)
    dump_field(ground_truth(p, args.refine), args.out, args.format, p.grid.h)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eikonal-hybrid", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment matrix from a config file")
    r.add_argument("--config", required=True)
    r.add_argument("--out", help="CSV path (stdout when omitted)")
    r.add_argument("--dump-dir", help="write every computed field here")
    r.add_argument("--repeat", type=int, default=1, help="report the minimum of N timed runs")
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=_cmd_run)

    t = sub.add_parser("truth", help="dump the refined-grid ground truth")
    t.add_argument("--problem", required=True)
    t.add_argument("--grid", type=int, required=True)
    t.add_argument("--refine", type=int, default=4)
    t.add_argument("--exits", default="point", choices=("point", "boundary"))
    t.add_argument("--format", default="ascii", choices=("ascii", "raw"))
    t.add_argument("--out", required=True)
    t.set_defaults(func=_cmd_truth)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
