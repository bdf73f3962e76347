"""Command-line front end.

Usage:
    pdmchan spectrum --geometry parallel --n-max 2 --l-max 3 --m-max 3
    pdmchan degeneracies --l-max 9 --m-max 9
    pdmchan wavefunction --geometry cylinder --n 0 --m 1 --s 1 --rho 0 1 5
    pdmchan verify --format json --output report.json

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .analytic import QuantumNumbers, degeneracy_report, enumerate_spectrum, psi
from .errors import PdmchanError
from .model import ChannelModel, Geometry
from .numeric import Grid1D
from .verify import run_suite

__all__ = ["RunConfig", "main", "build_parser", "load_config_file"]

log = logging.getLogger("pdmchan")

CSV_COLUMNS = ("geometry", "n", "l", "m", "s", "delta", "energy", "degeneracy_class")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    geometry: str = "parallel"
    q: float = 1.0
    k: float = 1.0
    R: float = 1.0
    alpha: float = 0.0
    beta: float = -1.0
    n_max: int = 2
    l_max: int = 0
    m_max: int = 0
    s_max: int = 1
    grid_points: int = 8000
    x_max: float | None = None
    format: str = "csv"
    output: str | None = None
    tol: float | None = None
    in_units_of_q2: bool = False

    def validate(self) -> None:
        if self.geometry not in ("parallel", "cylinder"):
            raise UsageError(f"geometry must be parallel or cylinder, got {self.geometry!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        for name in ("n_max", "l_max", "m_max", "s_max"):
            if getattr(self, name) < 0:
                raise UsageError(f"{name} must be >= 0")
        if self.grid_points < 3:
            raise UsageError("grid_points must be >= 3")
        if self.tol is not None and not self.tol > 0.0:
            raise UsageError("tol must be positive")

    def model(self) -> ChannelModel:
        if self.geometry == "parallel":
            return ChannelModel.parallel(self.q, self.k, self.alpha, self.beta)
        return ChannelModel.cylinder(self.q, self.k, self.R, self.alpha, self.beta)

    def grid(self) -> Grid1D:
        x_max = 12.0 / self.q if self.x_max is None else self.x_max
        return Grid1D(0.0, x_max, self.grid_points)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    if kind == "bool":
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if kind == "int":
        return int(raw)
    if kind in ("float", "float | None"):
        return float(raw)
    return raw.strip()


def load_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def _fmt(v) -> str:
    return format(float(v), ".15g")


def _num(v):
    return float(_fmt(v))


def _write(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _meta(cfg: RunConfig, model: ChannelModel) -> dict:
    return {
        "geometry": cfg.geometry,
        "q": _num(cfg.q),
        "k": _num(cfg.k),
        "R": _num(cfg.R) if cfg.geometry == "cylinder" else None,
        "alpha": _num(cfg.alpha),
        "beta": _num(cfg.beta),
        "units": "q2" if cfg.in_units_of_q2 else "absolute",
        "version": __version__,
        "warnings": list(model.warnings),
    }


def _opt(v):
    return "" if v is None else str(v)


# --------------------------------------------------------------------------
# commands


def cmd_spectrum(cfg: RunConfig) -> int:
    model = cfg.model()
    entries = enumerate_spectrum(model, cfg.n_max, cfg.l_max, cfg.m_max, cfg.s_max)
    scale = 1.0 / (cfg.q * cfg.q) if cfg.in_units_of_q2 else 1.0
    if cfg.format == "csv":
        rows = [
            (
                cfg.geometry,
                e.qn.n,
                _opt(e.qn.l),
                e.qn.m,
                _opt(e.qn.s),
                _fmt(e.delta),
                _fmt(e.energy * scale),
                e.degeneracy_class,
            )
            for e in entries
        ]
        _write(_csv(CSV_COLUMNS, rows), cfg)
    else:
        objs = [
            {
                "geometry": cfg.geometry,
                "n": e.qn.n,
                "l": e.qn.l,
                "m": e.qn.m,
                "s": e.qn.s,
                "delta": _num(e.delta),
                "energy": _num(e.energy * scale),
                "degeneracy_class": e.degeneracy_class,
            }
            for e in entries
        ]
        _write(json.dumps({"meta": _meta(cfg, model), "entries": objs}, indent=2) + "\n", cfg)
    return 0


def cmd_degeneracies(cfg: RunConfig) -> int:
    model = cfg.model()
    rtol = 1e-12 if cfg.tol is None else cfg.tol
    entries = enumerate_spectrum(model, cfg.n_max, cfg.l_max, cfg.m_max, cfg.s_max, rtol=rtol)
    classes = [c for c in degeneracy_report(entries) if len(c.members) > 1]
    scale = 1.0 / (cfg.q * cfg.q) if cfg.in_units_of_q2 else 1.0
    if cfg.format == "csv":
        rows = [
            (c.class_id, c.kind, _fmt(c.energy * scale), len(c.members), ";".join(map(str, c.members)))
            for c in classes
        ]
        _write(_csv(("degeneracy_class", "kind", "energy", "size", "members"), rows), cfg)
    else:
        objs = [
            {
                "degeneracy_class": c.class_id,
                "kind": c.kind,
                "energy": _num(c.energy * scale),
                "members": [str(m) for m in c.members],
            }
            for c in classes
        ]
        _write(json.dumps({"meta": _meta(cfg, model), "classes": objs}, indent=2) + "\n", cfg)
    return 0


def _axis(spec, name) -> np.ndarray:
    start, stop, count = spec
    count = int(count)
    if count < 1:
        raise UsageError(f"--{name} needs a positive sample count")
    return np.linspace(float(start), float(stop), count)


def cmd_wavefunction(cfg: RunConfig, args) -> int:
    model = cfg.model()
    if model.geometry is Geometry.PARALLELEPIPEDAL:
        if args.s is not None:
            raise UsageError("s does not apply to the parallel channel")
        qn = QuantumNumbers.parallel(args.n, args.l or 0, args.m)
        axes = (_axis(args.x, "x"), _axis(args.y, "y"), _axis(args.z, "z"))
        header = ("x", "y", "z", "value")
    else:
        if args.l is not None:
            raise UsageError("l does not apply to the cylindrical channel")
        qn = QuantumNumbers.cylinder(args.n, args.m, 1 if args.s is None else args.s)
        axes = (_axis(args.x, "x"), _axis(args.rho, "rho"), _axis(args.phi, "phi"))
        header = ("x", "rho", "phi", "re", "im")

    rows = []
    for point in itertools.product(*axes):
        v = psi(model, qn, point)
        coords = [_fmt(c) for c in point]
        if model.geometry is Geometry.PARALLELEPIPEDAL:
            rows.append(coords + [_fmt(v)])
        else:
            rows.append(coords + [_fmt(v.real), _fmt(v.imag)])

    if cfg.format == "csv":
        _write(_csv(header, rows), cfg)
    else:
        objs = [dict(zip(header, map(float, r))) for r in rows]
        meta = _meta(cfg, model)
        meta["quantum_numbers"] = {"n": qn.n, "l": qn.l, "m": qn.m, "s": qn.s}
        _write(json.dumps({"meta": meta, "samples": objs}, indent=2) + "\n", cfg)
    return 0


def _report_json(cfg: RunConfig, model: ChannelModel, report) -> str:
    def clean(obj):
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [clean(v) for v in obj]
        if isinstance(obj, float):
            return _num(obj)
        return obj

    doc = {
        "meta": _meta(cfg, model),
        "passed": report.passed,
        "checks": [
            {"name": c.name, "status": c.status, "detail": c.detail, "data": clean(c.data)}
            for c in report.checks
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_verify(cfg: RunConfig, inject_fault: bool = False) -> int:
    model = cfg.model()
    report = run_suite(
        model,
        cfg.n_max,
        cfg.l_max,
        cfg.m_max,
        cfg.s_max,
        cfg.grid(),
        tol=1e-4 if cfg.tol is None else cfg.tol,
        analytic_scale=1.01 if inject_fault else 1.0,
    )
    lines = [f"{c.name}: {c.status}  ({c.detail})" for c in report.checks]
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
    summary = "\n".join(lines) + "\n"
    doc = _report_json(cfg, model, report)
    if cfg.output:
        sys.stdout.write(summary)
        with open(cfg.output, "w") as fh:
            fh.write(doc)
    elif cfg.format == "json":
        sys.stdout.write(doc)
    else:
        sys.stdout.write(summary)
    return 0 if report.passed else 1


# --------------------------------------------------------------------------
# argument handling


def _common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--geometry", choices=("parallel", "cylinder"), default=S)
    p.add_argument("--q", type=float, default=S)
    p.add_argument("--k", type=float, default=S)
    p.add_argument("--R", type=float, default=S)
    p.add_argument("--alpha", type=float, default=S)
    p.add_argument("--beta", type=float, default=S)
    p.add_argument("--n-max", dest="n_max", type=int, default=S)
    p.add_argument("--l-max", dest="l_max", type=int, default=S)
    p.add_argument("--m-max", dest="m_max", type=int, default=S)
    p.add_argument("--s-max", dest="s_max", type=int, default=S)
    p.add_argument("--grid-points", dest="grid_points", type=int, default=S)
    p.add_argument("--x-max", dest="x_max", type=float, default=S)
    p.add_argument("--format", choices=("csv", "json"), default=S)
    p.add_argument("--output", default=S, metavar="PATH")
    p.add_argument("--config", default=S, metavar="PATH", help="file of 'key = value' lines")
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--in-units-of-q2", dest="in_units_of_q2", action="store_true", default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdmchan", description="Bound states of a position-dependent-mass particle in 3D channels."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("spectrum", help="energy-sorted closed-form spectrum"))
    _common(sub.add_parser("degeneracies", help="degenerate classes with type tags"))

    wf = sub.add_parser("wavefunction", help="sample an eigenfunction on a lattice")
    _common(wf)
    wf.add_argument("--n", type=int, default=0)
    wf.add_argument("--l", type=int, default=None)
    wf.add_argument("--m", type=int, default=0)
    wf.add_argument("--s", type=int, default=None)
    axis = dict(nargs=3, type=float, metavar=("START", "STOP", "COUNT"))
    wf.add_argument("--x", default=(0.0, 5.0, 11), **axis)
    wf.add_argument("--y", default=(0.0, 0.0, 1), **axis)
    wf.add_argument("--z", default=(0.0, 0.0, 1), **axis)
    wf.add_argument("--rho", default=(0.0, 0.0, 1), **axis)
    wf.add_argument("--phi", default=(0.0, 0.0, 1), **axis)

    ver = sub.add_parser("verify", help="run the numerical verification suite")
    _common(ver)
    ver.add_argument("--inject-fault", dest="inject_fault", action="store_true", help=argparse.SUPPRESS)
    return parser


_CONFIG_KEYS = {f.name for f in fields(RunConfig)}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags override the config file, which overrides defaults."""
    values = {}
    path = getattr(args, "config", None)
    if path:
        values.update(load_config_file(path))
    values.update({k: v for k, v in vars(args).items() if k in _CONFIG_KEYS})
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def _setup_logging() -> None:
    level = os.environ.get("PDMCHAN_LOG", "warn").upper()
    level = {"WARN": "WARNING"}.get(level, level)
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "degeneracies":
            return cmd_degeneracies(cfg)
        if args.command == "wavefunction":
            return cmd_wavefunction(cfg, args)
        return cmd_verify(cfg, inject_fault=args.inject_fault)
    except (UsageError, PdmchanError) as exc:
        print(f"pdmchan: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
