"""Command-line interface: ``hausdim cantor | perturbed | complex | reproduce``."""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import dataclasses
import io
import json
import math
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import __version__
from .bounds import BOUND_CONVENTIONS
from .collocation import DEFAULT_SAFETY_FACTOR
from .errors import HausdimError, InputError
from .golden import GoldenRow, TABLES, cf_digits, rows
from .problems import complex_problem, continued_fraction_problem, perturbed_cantor_problem
from .solver import DimensionBracket, find_bracket

__all__ = [
    "RunConfig",
    "ResultRecord",
    "cmd_cantor",
    "cmd_perturbed",
    "cmd_complex",
    "cmd_reproduce",
    "main",
]

DEFAULT_H = {"cantor": 1e-4, "perturbed": 1e-4, "complex": 0.02}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run; echoed into the result record."""

    problem: str  # cantor | perturbed | complex
    digits: tuple = ()
    lam: Optional[float] = None
    set: Optional[str] = None
    h: float = 1e-4
    R: Optional[float] = None
    tol_s: float = 1e-12
    tol_eig: float = 1e-13
    margin_rings: int = 1
    safety_factor: float = DEFAULT_SAFETY_FACTOR
    convention: str = "rigorous"
    depth: Optional[int] = None
    fold_asymmetric: bool = False

    def __post_init__(self):
        for name in ("h", "tol_s", "tol_eig", "safety_factor"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InputError(f"{name} must be a positive number, got {v!r}")
        if self.R is not None and not self.R > 0:
            raise InputError("R must be positive")
        if self.margin_rings < 0:
            raise InputError("margin_rings must be >= 0")
        if self.problem == "complex":
            N = round(1.0 / self.h)
            if N < 1 or abs(N * self.h - 1.0) > 1e-9:
                raise InputError(f"h must be 1/N for the complex problem, got {self.h!r}")

    def build_problem(self):
        if self.problem == "cantor":
            return continued_fraction_problem(self.digits, 2 if self.depth is None else self.depth)
        if self.problem == "perturbed":
            return perturbed_cantor_problem(self.lam, 0 if self.depth is None else self.depth,
                                            self.convention)
        if self.problem == "complex":
            return complex_problem(self.set, self.R, self.margin_rings,
                                   fold_asymmetric=self.fold_asymmetric)
        raise InputError(f"unknown problem {self.problem!r}")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["digits"] = list(self.digits)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["digits"] = tuple(d.get("digits", ()))
        return cls(**d)


@dataclasses.dataclass(frozen=True)
class ResultRecord:
    config: RunConfig
    status: str  # certified | failed
    s_lower: Optional[float]
    s_upper: Optional[float]
    cert_lower: Optional[float]
    cert_upper: Optional[float]
    estimate: Optional[float]
    tail_constant: Optional[float]
    runtime: float
    evaluations: int
    version: str
    timestamp: str
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "certified"

    @property
    def width(self) -> Optional[float]:
        if self.s_lower is None:
            return None
        return self.s_upper - self.s_lower

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["config"] = self.config.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ResultRecord":
        d = dict(d)
        d["config"] = RunConfig.from_dict(d["config"])
        return cls(**d)

    def to_json(self) -> str:
        # repr of a float is the shortest string that round-trips exactly
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        return cls.from_dict(json.loads(text))


CSV_FIELDS = ("problem", "digits", "lam", "set", "h", "R", "status", "s_lower", "s_upper",
              "cert_lower", "cert_upper", "tail_constant", "runtime", "evaluations")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, (tuple, list)):
        return " ".join(str(x) for x in v)
    return str(v)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_FIELDS)
    for rec in records:
        c = rec.config
        wr.writerow([_fmt(x) for x in (c.problem, c.digits, c.lam, c.set, c.h, c.R, rec.status,
                                       rec.s_lower, rec.s_upper, rec.cert_lower, rec.cert_upper,
                                       rec.tail_constant, rec.runtime, rec.evaluations)])
    return buf.getvalue()


def run(config: RunConfig) -> ResultRecord:
    """Solve one configuration; certification failures become a failed record."""
    t0 = time.perf_counter()
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    problem = config.build_problem()
    tail = None
    try:
        br: DimensionBracket = find_bracket(problem, config.h, tol_s=config.tol_s,
                                            tol_eig=config.tol_eig,
                                            safety_factor=config.safety_factor)
    except HausdimError as exc:
        return ResultRecord(config, "failed", None, None, None, None,
                            getattr(exc, "estimate", None), None,
                            time.perf_counter() - t0, 0, __version__, stamp, str(exc))
    if config.problem == "complex" and problem.digit_set.infinite:
        from .bounds import tail_constant
        tail = tail_constant(config.set, br.s_upper, config.R) * config.safety_factor
    return ResultRecord(config, "certified", br.s_lower, br.s_upper, br.cert_lower[1],
                        br.cert_upper[1], 0.5 * (br.s_lower + br.s_upper), tail,
                        time.perf_counter() - t0, br.evaluations, __version__, stamp)


def cmd_cantor(digits, h: float = 1e-4, tol_s: float = 1e-12, **kw) -> ResultRecord:
    return run(RunConfig("cantor", digits=tuple(int(d) for d in digits), h=h, tol_s=tol_s, **kw))


def cmd_perturbed(lam: float, h: float = 1e-4, tol_s: float = 1e-12, **kw) -> ResultRecord:
    return run(RunConfig("perturbed", lam=float(lam), h=h, tol_s=tol_s, **kw))


def cmd_complex(set: str, h: float = 0.02, R: Optional[float] = None, tol_s: float = 1e-12,
                **kw) -> ResultRecord:
    return run(RunConfig("complex", set=set, h=h, R=R, tol_s=tol_s, **kw))


# -- table reproduction --------------------------------------------------------


def config_for_row(row: GoldenRow, base: dict | None = None) -> RunConfig:
    base = dict(base or {})
    for k in ("problem", "digits", "lam", "set", "h", "R"):
        base.pop(k, None)
    if row.table == "t1":
        return RunConfig("cantor", digits=tuple(cf_digits(row.label)), h=row.h, **base)
    if row.table == "t3":
        return RunConfig("perturbed", lam=float(row.label), h=row.h, **base)
    return RunConfig("complex", set=row.label, h=row.h, R=row.R, **base)


def estimate_cost(row: GoldenRow) -> float:
    """Rough runtime in seconds on one core, used to honour --budget."""
    if row.table in ("t1", "t3"):
        return 2.0
    nodes = 2.9 / row.h**2
    if row.label == "I2":
        nodes *= 2.0
    digits = 10 if row.label == "I3" else math.pi * row.R**2 / (2.0 if row.label == "I1" else 4.0)
    return 17 * nodes * digits * 2.6e-7 + 1.0


@dataclasses.dataclass(frozen=True)
class Comparison:
    row: GoldenRow
    status: str  # pass | fail | skipped | error
    record: Optional[ResultRecord]
    d_lower: Optional[float] = None
    d_upper: Optional[float] = None

    def line(self) -> str:
        r = self.row
        head = f"{r.table} {r.label:>10} h={r.h:g}" + (f" R={r.R:g}" if r.R else "")
        if self.record is None or not self.record.ok:
            return f"{self.status.upper():7} {head}"
        return (f"{self.status.upper():7} {head}  [{self.record.s_lower:.15f}, "
                f"{self.record.s_upper:.15f}]  dlo={self.d_lower:+.2e} dhi={self.d_upper:+.2e} "
                f"tol={r.tol:g}")


def compare(row: GoldenRow, rec: ResultRecord) -> Comparison:
    if not rec.ok:
        return Comparison(row, "error", rec)
    dlo = rec.s_lower - row.lower
    dhi = rec.s_upper - row.upper
    ok = abs(dlo) <= row.tol and abs(dhi) <= row.tol
    return Comparison(row, "pass" if ok else "fail", rec, dlo, dhi)


def cmd_reproduce(table: str, subset: Optional[str] = None, budget: float = 600.0,
                  jobs: int = 1, base: dict | None = None) -> list[Comparison]:
    """Run the rows of a reference table and compare with the published brackets.

    Rows whose estimated cost exceeds the remaining budget are skipped.
    """
    selected = rows(table, subset)
    planned, out = [], {}
    remaining = budget
    for i, row in enumerate(selected):
        cost = estimate_cost(row)
        if cost > remaining:
            out[i] = Comparison(row, "skipped", None)
        else:
            remaining -= cost
            planned.append((i, row))
    configs = [(i, row, config_for_row(row, base)) for i, row in planned]
    if jobs > 1 and len(configs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = {i: (row, pool.submit(run, cfg)) for i, row, cfg in configs}
            for i, (row, fut) in futs.items():
                out[i] = compare(row, fut.result())
    else:
        for i, row, cfg in configs:
            out[i] = compare(row, run(cfg))
    return [out[i] for i in range(len(selected))]


# -- argument handling -----------------------------------------------------------


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment; keys use dashes or underscores."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{n}: expected key = value")
        k, v = (p.strip() for p in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


_CASTS = {"h": float, "R": float, "tol_s": float, "tol_eig": float, "margin_rings": int,
          "safety_factor": float, "lam": float, "lambda": float, "jobs": int, "budget": float,
          "depth": int, "fold_asymmetric": lambda v: v.lower() in ("1", "true", "yes")}


def _parse_digits(text: str) -> tuple:
    try:
        return tuple(int(d) for d in str(text).replace(" ", "").split(",") if d)
    except ValueError:
        raise InputError(f"digits must be a comma-separated list of integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags take precedence")
    common.add_argument("--h", type=float, help="mesh size")
    common.add_argument("--tol-s", type=float, help="root-finding tolerance in s (1e-12)")
    common.add_argument("--tol-eig", type=float, help="relative power-iteration tolerance")
    common.add_argument("--margin-rings", type=int, help="extra rings of 2D cells (1)")
    common.add_argument("--safety-factor", type=float, help="multiplier on error terms")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), help="output format (json)")
    common.add_argument("--ledger", help="append each record as one JSON line to this file")
    common.add_argument("--jobs", type=int, help="worker processes (env HAUSDIM_JOBS)")

    p = argparse.ArgumentParser(prog="hausdim", description=(
        "Rigorous upper and lower bounds for Hausdorff dimensions of invariant sets of "
        "contraction maps."))
    p.add_argument("--version", action="version", version=f"hausdim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cantor", parents=[common], help="real continued fractions E[digits]")
    c.add_argument("--digits", help="comma-separated distinct positive integers, e.g. 1,2")
    c.add_argument("--depth", type=int, help="domain refinement depth (2)")

    q = sub.add_parser("perturbed", parents=[common], help="perturbed middle-thirds Cantor set")
    q.add_argument("--lambda", dest="lam", type=float, help="perturbation in [0, 1]")
    q.add_argument("--convention", choices=BOUND_CONVENTIONS,
                   help="second-derivative bound (rigorous)")
    q.add_argument("--depth", type=int, help="domain refinement depth (0)")

    x = sub.add_parser("complex", parents=[common], help="complex continued fractions")
    x.add_argument("--set", choices=("I1", "I2", "I3"), help="digit set")
    x.add_argument("--R", type=float, help="truncation radius for I1/I2")
    x.add_argument("--fold-asymmetric", action="store_true", default=None,
                   help="fold I2 onto the half disk like the published runs (not a valid bound)")

    r = sub.add_parser("reproduce", parents=[common], help="rerun a reference table")
    r.add_argument("table", choices=sorted(TABLES))
    r.add_argument("--filter", dest="subset", help="row label, e.g. E[3,4], 0.5 or I3")
    r.add_argument("--budget", type=float, help="seconds; costlier rows are skipped (600)")
    return p


def _resolve(args) -> dict:
    """Merge flags over the config file over defaults."""
    merged = {}
    if args.config:
        for k, v in read_config_file(args.config).items():
            k = "lam" if k == "lambda" else k
            merged[k] = _CASTS.get(k, str)(v)
    for k, v in vars(args).items():
        if v is not None and k not in ("config", "command"):
            merged[k] = v
    if "jobs" not in merged:
        merged["jobs"] = int(os.environ.get("HAUSDIM_JOBS", "1"))
    return merged


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _append_ledger(path, records):
    with Path(path).open("a") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        opts = _resolve(args)
        fmt = opts.get("format", "json")
        knobs = {k: opts[k] for k in ("tol_s", "tol_eig", "margin_rings", "safety_factor")
                 if k in opts}
        if args.command == "reproduce":
            comps = cmd_reproduce(args.table, opts.get("subset"), opts.get("budget", 600.0),
                                  opts["jobs"], knobs)
            recs = [c.record for c in comps if c.record is not None]
            report = "\n".join(c.line() for c in comps) + "\n"
            if fmt == "csv":
                _emit(records_to_csv(recs), opts.get("out"))
                sys.stderr.write(report)
            else:
                if opts.get("out"):
                    _emit("".join(r.to_json() + "\n" for r in recs), opts["out"])
                sys.stdout.write(report)
            if opts.get("ledger"):
                _append_ledger(opts["ledger"], recs)
            return 0 if all(r.ok for r in recs) else 1
        if args.command == "cantor":
            if "digits" not in opts:
                raise InputError("--digits is required")
            cfg = RunConfig("cantor", digits=_parse_digits(opts["digits"]),
                            h=opts.get("h", DEFAULT_H["cantor"]), depth=opts.get("depth"),
                            **knobs)
        elif args.command == "perturbed":
            if "lam" not in opts:
                raise InputError("--lambda is required")
            cfg = RunConfig("perturbed", lam=float(opts["lam"]),
                            h=opts.get("h", DEFAULT_H["perturbed"]), depth=opts.get("depth"),
                            convention=opts.get("convention", "rigorous"), **knobs)
        else:
            if "set" not in opts:
                raise InputError("--set is required")
            cfg = RunConfig("complex", set=opts["set"], h=opts.get("h", DEFAULT_H["complex"]),
                            R=opts.get("R"),
                            fold_asymmetric=bool(opts.get("fold_asymmetric", False)), **knobs)
        rec = run(cfg)
        _emit(records_to_csv([rec]) if fmt == "csv" else rec.to_json() + "\n", opts.get("out"))
        if opts.get("ledger"):
            _append_ledger(opts["ledger"], [rec])
        if not rec.ok:
            sys.stderr.write(f"hausdim: {rec.message}\n")
        return 0 if rec.ok else 1
    except HausdimError as exc:
        sys.stderr.write(f"hausdim: error: {exc}\n")
        return 2
