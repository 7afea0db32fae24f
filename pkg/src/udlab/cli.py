"""Command-line driver: constructions, counts, sweeps, pipeline runs and Chang scans.

Settings are resolved in layers: built-in defaults, then a ``key=value``
config file, then ``UDLAB_<KEY>`` environment variables, then flags.
Exit status is 0 on success, 2 on a configuration error and 3 when a
computation stage fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .exactgeom import GeometryError, format_rational, parse_rational
from .pipeline import PipelineParams, StageError, icbrt_ceil, run_pipeline
from .pipeline.chang import ENUMERATION_CAP, ChangRow, chang_scan
from .pipeline.circle import DirectionError
from .pointsets import ConstructionSpec, PointSet, construct, format_points, parse_points, popular_distance
from .udgraph import direction_spectrum, restrict_directions, top_directions, unit_pairs

log = logging.getLogger("udlab")

EXIT_OK, EXIT_CONFIG, EXIT_STAGE = 0, 2, 3
COMMANDS = ("construct", "count", "sweep", "pipeline", "chang")
ENV_PREFIX = "UDLAB_"


class ConfigError(ValueError):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _rational_pair(text: str) -> tuple[Fraction, Fraction]:
    x, y = text.split(",")
    return parse_rational(x), parse_rational(y)


def _rsq(text: str):
    text = text.strip()
    if text == "popular":
        return text
    v = parse_rational(text)
    if v <= 0:
        raise ValueError("rsq must be positive")
    return v


def _opt_int(text: str):
    return None if text.strip().lower() in ("", "auto", "none") else int(text)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _alpha_cap(text: str) -> str:
    t = text.strip()
    if t not in ("default", "n2"):
        raise ValueError("alpha_cap must be 'default' or 'n2'")
    return t


# key -> (parser, default)
KEYS: dict[str, tuple[Callable[[str], object], object]] = {
    "kind": (str, "grid"),
    "m": (int, 4),
    "n": (int, 0),
    "input": (str, None),
    "box": (lambda s: tuple(_int_list(s)), (0, 0, 100, 100)),
    "max_den": (int, 1),
    "center": (_rational_pair, (Fraction(0), Fraction(0))),
    "radius_sq": (parse_rational, Fraction(1)),
    "seed": (int, 0),
    "rsq": (_rsq, "popular"),
    "sweep": (_int_list, (8, 16, 32)),
    "k_directions": (_opt_int, None),
    "c_prune": (parse_rational, Fraction(1, 4)),
    "C1": (int, 4),
    "C2": (parse_rational, Fraction(1, 8)),
    "d_coeff": (parse_rational, Fraction(1, 4)),
    "with_pipeline": (_bool, False),
    "N_list": (_int_list, (4, 8, 16, 32)),
    "alpha_cap": (_alpha_cap, "default"),
    "out": (str, None),
    "format": (str, "csv"),
}


@dataclass
class ExperimentConfig:
    command: str
    kind: str = "grid"
    m: int = 4
    n: int = 0
    input: str | None = None
    box: tuple = (0, 0, 100, 100)
    max_den: int = 1
    center: tuple = (Fraction(0), Fraction(0))
    radius_sq: Fraction = Fraction(1)
    seed: int = 0
    rsq: object = "popular"
    sweep: tuple = (8, 16, 32)
    k_directions: int | None = None
    c_prune: Fraction = Fraction(1, 4)
    C1: int = 4
    C2: Fraction = Fraction(1, 8)
    d_coeff: Fraction = Fraction(1, 4)
    with_pipeline: bool = False
    N_list: tuple = (4, 8, 16, 32)
    alpha_cap: str = "default"
    out: str | None = None
    format: str = "csv"
    sources: dict = field(default_factory=dict, repr=False)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.command == "sweep":
            if len(self.sweep) < 2:
                raise ConfigError("sweep needs at least two sizes")
            if any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
                raise ConfigError("sweep range must be strictly increasing")
            if self.input:
                raise ConfigError("sweep builds its own grids; --input is not allowed")
        if self.command == "chang" and not self.N_list:
            raise ConfigError("chang needs at least one N")
        if len(self.box) != 4:
            raise ConfigError("box must be x0,y0,x1,y1")
        if self.out:
            parent = Path(self.out).resolve().parent
            if not parent.is_dir() or not os.access(parent, os.W_OK):
                raise ConfigError(f"output directory {parent} is not writable")
        try:
            self.params()
            self.construction()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def params(self) -> PipelineParams:
        return PipelineParams(
            c_prune=self.c_prune, C1=self.C1, C2=self.C2, d_coeff=self.d_coeff, k_directions=self.k_directions
        )

    def construction(self, m: int | None = None) -> ConstructionSpec:
        return ConstructionSpec(
            kind=self.kind,
            m=self.m if m is None else m,
            n=self.n,
            seed=self.seed,
            box=tuple(self.box),
            max_den=self.max_den,
            center=tuple(self.center),
            radius_sq=self.radius_sq,
        )


def read_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in KEYS:
            raise ConfigError(f"{path}:{lineno}: expected key=value with a known key, got {raw!r}")
        out[key] = value.strip()
    return out


def resolve_config(command: str, flags: dict[str, str | None], config_path: str | None = None, env=None) -> ExperimentConfig:
    """Merge defaults < config file < UDLAB_* environment < flags."""
    env = os.environ if env is None else env
    raw: dict[str, tuple[str, str]] = {}
    if config_path:
        for k, v in read_config_file(config_path).items():
            raw[k] = (v, "config")
    for k in KEYS:
        v = env.get(ENV_PREFIX + k.upper())
        if v is not None:
            raw[k] = (v, "env")
    for k, v in flags.items():
        if v is not None:
            raw[k] = (v, "flag")
    values, sources = {}, {}
    for k, (parser, default) in KEYS.items():
        if k in raw:
            text, src = raw[k]
            try:
                values[k] = parser(text)
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise ConfigError(f"bad value for {k} ({src}): {text!r}: {exc}") from exc
            sources[k] = src
        else:
            values[k] = default
            sources[k] = "default"
    cfg = ExperimentConfig(command=command, sources=sources, **values)
    cfg.validate()
    return cfg


# ----------------------------------------------------------------- helpers


def load_points(cfg: ExperimentConfig, m: int | None = None) -> PointSet:
    if cfg.input and m is None:
        try:
            text = Path(cfg.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {cfg.input}: {exc}") from exc
        try:
            P = parse_points(text)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if len(P) == 0:
            raise ConfigError(f"input file {cfg.input} holds no points")
        return P
    try:
        return construct(cfg.construction(m))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def resolve_rsq(cfg: ExperimentConfig, P: PointSet) -> Fraction:
    if cfg.rsq == "popular":
        if len(P) < 2:
            raise ConfigError("popular r_sq needs at least two points")
        return popular_distance(P)[0]
    return cfg.rsq


def fit_slope(n, u) -> float | None:
    """Least-squares slope of log u against log n; rows with u == 0 are skipped."""
    pts = [(math.log(a), math.log(b)) for a, b in zip(n, u) if a > 0 and b > 0]
    if len(pts) < 2 or len({x for x, _ in pts}) < 2:
        return None
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    xm, ym = x.mean(), y.mean()
    return float(((x - xm) * (y - ym)).sum() / ((x - xm) ** 2).sum())


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, tuple):
        return " ".join(_fmt(x) for x in v)
    return str(v)


PIPELINE_FIELDS = (
    "n_pruned",
    "good_edges",
    "good_cells",
    "p3_count",
    "h_pairs",
    "h_max_multiplicity",
    "h_differences",
    "bsg_size",
    "bsg_doubling",
    "gap_dimension",
    "gap_size",
    "max_circle_incidence",
    "outside_hypothesis",
)


@dataclass
class SweepRow:
    m: int | None
    n: int
    r_sq: Fraction
    U: int
    U_D: int
    k_directions: int
    spectrum_size: int
    pipeline: dict | None = None

    def __post_init__(self):
        if self.U_D > self.U or min(self.n, self.U, self.U_D, self.k_directions, self.spectrum_size) < 0:
            raise ValueError("inconsistent sweep row")

    def columns(self, with_pipeline: bool) -> list[str]:
        base = ["m", "n", "r_sq", "U", "U_D", "k_directions", "spectrum_size"]
        return base + list(PIPELINE_FIELDS) if with_pipeline else base

    def values(self, with_pipeline: bool) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "pipeline"}
        if with_pipeline:
            p = self.pipeline or {}
            d.update({k: p.get(k) for k in PIPELINE_FIELDS})
        return d


def count_instance(cfg: ExperimentConfig, P: PointSet, m: int | None) -> SweepRow:
    r_sq = resolve_rsq(cfg, P)
    G = unit_pairs(P, r_sq)
    spectrum = direction_spectrum(G)
    k = cfg.k_directions if cfg.k_directions is not None else icbrt_ceil(len(P))
    D = top_directions(spectrum, k)
    GD = restrict_directions(G, D)
    row = SweepRow(m, len(P), r_sq, len(G.edges), len(GD.edges), len(D), len(spectrum))
    if cfg.with_pipeline:
        rep = run_pipeline(P, r_sq, cfg.params())
        row.pipeline = {k: getattr(rep, k) for k in PIPELINE_FIELDS}
    log.info("n=%d r_sq=%s U=%d U_D=%d |D|=%d", row.n, format_rational(r_sq), row.U, row.U_D, row.k_directions)
    return row


def rows_csv(rows: list[SweepRow], with_pipeline: bool, comments: list[str] = ()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    cols = rows[0].columns(with_pipeline) if rows else SweepRow(0, 0, Fraction(1), 0, 0, 0, 0).columns(with_pipeline)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        vals = r.values(with_pipeline)
        w.writerow([_fmt(vals[c]) for c in cols])
    return buf.getvalue()


def _json(obj) -> str:
    def conv(v):
        if isinstance(v, Fraction):
            return format_rational(v)
        if isinstance(v, dict):
            return {str(k): conv(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [conv(x) for x in v]
        return v

    return json.dumps(conv(obj), indent=2, sort_keys=True) + "\n"


def emit(cfg: ExperimentConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_construct(cfg: ExperimentConfig) -> int:
    P = load_points(cfg)
    emit(cfg, format_points(P))
    return EXIT_OK


def cmd_count(cfg: ExperimentConfig) -> SweepRow:
    P = load_points(cfg)
    m = None if cfg.input else (cfg.m if cfg.kind == "grid" else None)
    row = count_instance(cfg, P, m)
    if cfg.format == "json":
        emit(cfg, _json(row.values(cfg.with_pipeline)))
    else:
        emit(cfg, rows_csv([row], cfg.with_pipeline))
    return row


def cmd_sweep(cfg: ExperimentConfig) -> tuple[list[SweepRow], float | None, float | None]:
    rows = [count_instance(cfg, load_points(cfg, m), m) for m in cfg.sweep]
    ns = [r.n for r in rows]
    s_u = fit_slope(ns, [r.U for r in rows])
    s_ud = fit_slope(ns, [r.U_D for r in rows])
    comments = [f"slope_U {_fmt(s_u) or 'nan'}", f"slope_U_D {_fmt(s_ud) or 'nan'}"]
    if cfg.format == "json":
        emit(cfg, _json({"rows": [r.values(cfg.with_pipeline) for r in rows], "slope_U": s_u, "slope_U_D": s_ud}))
    else:
        emit(cfg, rows_csv(rows, cfg.with_pipeline, comments))
    if cfg.out:
        for c in comments:
            print(c)
    return rows, s_u, s_ud


SUMMARY_FIELDS = (
    "n",
    "r_sq",
    "unit_distances",
    "k_directions",
    "restricted_distances",
    "n_pruned",
    "m",
    "good_arcs",
    "partition_degree",
    "cell_count",
    "good_edges",
    "good_cells",
    "p3_count",
    "h_pairs",
    "h_max_multiplicity",
    "h_differences",
    "bsg_size",
    "bsg_doubling",
    "gap_dimension",
    "gap_size",
    "max_circle_incidence",
    "outside_hypothesis",
)


def cmd_pipeline(cfg: ExperimentConfig):
    P = load_points(cfg)
    r_sq = resolve_rsq(cfg, P)
    rep = run_pipeline(P, r_sq, cfg.params())
    bad = rep.check_consistency()
    if bad:
        raise StageError("report", ValueError("; ".join(bad)))
    emit(cfg, rep.to_json())
    width = max(map(len, SUMMARY_FIELDS))
    out = sys.stderr if cfg.out is None else sys.stdout
    for k in SUMMARY_FIELDS:
        print(f"{k:<{width}}  {_fmt(getattr(rep, k))}", file=out)
    for note in rep.notes:
        print(f"note: {note}", file=out)
    return rep


CHANG_COLUMNS = (
    "N",
    "n",
    "max_factorizations",
    "alpha",
    "factor_exponent",
    "max_circle",
    "circle_R",
    "circle_exponent",
    "alpha_norm_cap",
)


def chang_rows(cfg: ExperimentConfig) -> list[ChangRow]:
    rows = []
    for N in cfg.N_list:
        if N < 1:
            raise ConfigError("N must be >= 1")
        if N * N > ENUMERATION_CAP:
            raise StageError("chang", ValueError(f"GAP of size {N * N} exceeds the enumeration cap {ENUMERATION_CAP}"))
        cap = N * N if cfg.alpha_cap == "n2" else None
        rows.append(chang_scan(N, cap))
    return rows


def cmd_chang(cfg: ExperimentConfig) -> list[ChangRow]:
    rows = chang_rows(cfg)
    recs = []
    for r in rows:
        d = asdict(r)
        d["alpha"] = None if r.alpha is None else f"{r.alpha[0]}{r.alpha[1]:+d}i"
        d["factor_exponent"] = r.factor_exponent
        d["circle_exponent"] = r.circle_exponent
        recs.append(d)
    if cfg.format == "json":
        emit(cfg, _json(recs))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CHANG_COLUMNS)
        for d in recs:
            w.writerow([_fmt(d[c]) for c in CHANG_COLUMNS])
        emit(cfg, buf.getvalue())
    return rows


HANDLERS = {
    "construct": cmd_construct,
    "count": cmd_count,
    "sweep": cmd_sweep,
    "pipeline": cmd_pipeline,
    "chang": cmd_chang,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file")
    common.add_argument("--kind", help="grid | circle | random")
    common.add_argument("--m", help="grid side / number of circle points")
    common.add_argument("--n", help="number of random points")
    common.add_argument("--input", help="read the point set from a file instead")
    common.add_argument("--box", help="random box x0,y0,x1,y1")
    common.add_argument("--max-den", dest="max_den", help="random denominator bound")
    common.add_argument("--center", help="circle centre x,y")
    common.add_argument("--radius-sq", dest="radius_sq", help="circle squared radius")
    common.add_argument("--seed", help="PRNG seed (64-bit)")
    common.add_argument("--rsq", help="squared unit distance p/q, or 'popular'")
    common.add_argument("--sweep", help="comma-separated grid sides, e.g. 8,16,32")
    common.add_argument("--k-directions", dest="k_directions", help="number of directions kept (default ceil(n^(1/3)))")
    common.add_argument("--c-prune", dest="c_prune")
    common.add_argument("--C1", dest="C1")
    common.add_argument("--C2", dest="C2")
    common.add_argument("--d-coeff", dest="d_coeff")
    common.add_argument("--with-pipeline", dest="with_pipeline", action="store_const", const="1")
    common.add_argument("--N", dest="N_list", help="comma-separated GAP sides for chang")
    common.add_argument("--alpha-cap", dest="alpha_cap", help="'default' (2(N-1)^2) or 'n2' (N^2)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", help="csv | json")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="udlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("construct", "write a point set"),
        ("count", "unit distances and direction counts for one instance"),
        ("sweep", "counts over a range of grid sizes with log-log slopes"),
        ("pipeline", "run the full structural pipeline and write a JSON report"),
        ("chang", "factorization and circle maxima over box GAPs of Gaussian integers"),
    ):
        sub.add_parser(name, parents=[common], help=help_)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    flags = {k: getattr(args, k, None) for k in KEYS}
    try:
        cfg = resolve_config(args.command, flags, args.config)
        HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"udlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (StageError, DirectionError, GeometryError, ValueError) as exc:
        print(f"udlab: {exc}", file=sys.stderr)
        return EXIT_STAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
