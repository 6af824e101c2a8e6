"""Command-line front end.

Every subcommand writes one table (CSV) or document (JSON) to stdout or to
``--out``.  Exit status is 0 on success, 2 for usage errors (including an
invalid slope) and 1 when a computation fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import yaml

from . import __version__
from .arith import Slope, coprime_slopes, make_slope
from .automaton import (
    build_overlap_automaton,
    count_via_paths,
    equivalence_constants,
    overlap_growth,
    strong_connectivity,
)
from .automaton import to_dot as overlap_dot
from .cache import ResultCache, atomic_write_text
from .cocycle import count_via_cocycle
from .dimension import (
    dimension_report,
    fourier_nondecay,
    fourier_partial,
    hrw_estimates,
    jensen_bound,
)
from .errors import USAGE_ERRORS, SlicePressureError
from .gibbs import build_gibbs_system, cylinder_mass_table, weak_gibbs_constants
from .oracle import overlap_count_exact
from .simplex import (
    contractive_frequency,
    contractive_words,
    exhaustive_contractive_fraction,
    max_contraction_tau,
)
from .subshift import build_line_subshift, pressure_gap_check, pressure_partial, spectral_pressure
from .subshift import to_dot as line_dot

SUMMARY_COLUMNS = ("slope", "N", "P", "dim_lower", "singular", "gap_ok", "status")


class UsageError(Exception):
    pass


# ------------------------------------------------------------- rendering ---


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_json(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def table_as_json(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> list[dict]:
    return [dict(zip(columns, row)) for row in rows]


@dataclass
class Output:
    text: str
    code: int = 0


def _emit_table(args, columns, rows, extra: dict | None = None) -> Output:
    if args.format == "json":
        doc = {"rows": table_as_json(columns, rows)}
        if extra:
            doc.update(extra)
        return Output(render_json(doc))
    return Output(render_csv(columns, rows))


# ------------------------------------------------------------ subcommands ---


def _slope(args) -> Slope:
    return make_slope(args.p, args.q)


def _cache(args) -> ResultCache | None:
    return ResultCache.from_env(getattr(args, "cache_dir", None))


def _cached(args, slope: Slope, name: str, n: int | None, fn: Callable[[], Any]) -> Any:
    cache = _cache(args)
    if cache is None:
        return fn()
    return cache.get_or_compute(slope.p, slope.q, name, n, fn)


def cmd_count(args) -> Output:
    slope = _slope(args)
    methods = ("oracle", "paths", "cocycle") if args.method == "all" else (args.method,)
    aut = build_overlap_automaton(slope)
    fns = {
        "oracle": lambda n: overlap_count_exact(slope, n),
        "paths": lambda n: count_via_paths(aut, n),
        "cocycle": lambda n: count_via_cocycle(slope, n),
    }
    rows = []
    for n in range(args.n_min, args.n + 1):
        vals = [_cached(args, slope, f"count-{m}", n, lambda m=m: fns[m](n)) for m in methods]
        if len(set(vals)) != 1:
            raise SlicePressureError(f"methods disagree at n={n}: {dict(zip(methods, vals))}")
        rows.append([n, *(str(v) for v in vals)])
    return _emit_table(args, ("n", *methods), rows)


def cmd_growth(args) -> Output:
    slope = _slope(args)
    aut = build_overlap_automaton(slope)
    enc = overlap_growth(aut, args.tol)
    c_l, c_r = equivalence_constants(aut)
    return Output(
        render_json(
            {
                "slope": {"p": slope.p, "q": slope.q},
                "N": enc.as_dict(),
                "strongly_connected": strong_connectivity(aut),
                "equivalence_constants": {"c_l": str(c_l), "c_r": str(c_r)},
            }
        )
    )


def cmd_pressure(args) -> Output:
    slope = _slope(args)
    rows = []
    for n in range(1, args.n + 1):
        est = _cached(args, slope, "pressure", n, lambda n=n: list(_pressure_row(slope, n)))
        rows.append([n, *est])
    extra = None
    if args.format == "json":
        gap = pressure_gap_check(slope, args.tol)
        extra = {"spectral": gap.P.as_dict(), "N": gap.N.as_dict(), "gap_ok": gap.ok}
    return _emit_table(args, ("n", "L_n", "S_n"), rows, extra)


def _pressure_row(slope: Slope, n: int) -> tuple[float, float]:
    est = pressure_partial(slope, n)
    return est.lower, est.full


def cmd_entropy(args) -> Output:
    slope = _slope(args)
    rep = hrw_estimates(slope, args.n)
    rows = []
    for n, (h, per, inc) in enumerate(zip(rep.H, rep.per_symbol, rep.increments), start=1):
        jb = jensen_bound(slope, n)
        rows.append([n, h, per, inc, jb.rhs, jb.ok])
    return _emit_table(args, ("n", "H_n", "H_n_over_n", "increment", "jensen_rhs", "jensen_ok"), rows)


def cmd_dimension(args) -> Output:
    slope = _slope(args)
    doc = _cached(args, slope, "dimension", args.n_max, lambda: dimension_report(slope, args.n_max, args.tol).to_json())
    return Output(render_json(doc))


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def cmd_fourier(args) -> Output:
    slope = _slope(args)
    if args.eta is not None:
        sample = fourier_partial(slope, _parse_fraction(args.eta), args.terms)
        return Output(
            render_json(
                {
                    "slope": {"p": slope.p, "q": slope.q},
                    "eta": str(sample.eta),
                    "terms": sample.terms,
                    "real": sample.value.real,
                    "imag": sample.value.imag,
                    "abs": abs(sample.value),
                }
            )
        )
    fw = fourier_nondecay(slope, args.n_max)
    return Output(
        render_json(
            {
                "slope": {"p": slope.p, "q": slope.q},
                "n_max": fw.n_max,
                "nondecay": fw.nondecay,
                "magnitude_at_q": fw.magnitude,
                "max_deviation": fw.max_deviation,
            }
        )
    )


def cmd_contraction(args) -> Output:
    words = contractive_words(3)
    doc = {
        "word_length": 3,
        "contractive_count": len(words),
        "total": 64,
        "exhaustive_fraction": exhaustive_contractive_fraction(),
        "tau": max_contraction_tau(),
        "sampled_frequency": contractive_frequency(args.samples, 3, args.seed),
        "samples": args.samples,
        "seed": args.seed,
        "contractive_words": [["".join(map(str, b)) for b in w] for w in words],
    }
    return Output(render_json(doc))


def cmd_gibbs(args) -> Output:
    slope = _slope(args)
    g = build_gibbs_system(slope)
    if args.masses is not None:
        rows = [[w, str(m), float(m)] for w, m in cylinder_mass_table(g, args.masses)]
        return _emit_table(args, ("word", "mass", "mass_float"), rows)
    rows = [[n, v] for n, v in weak_gibbs_constants(g, args.n, args.tail)]
    return _emit_table(args, ("n", "log_C_n_over_n"), rows)


def cmd_export(args) -> Output:
    slope = _slope(args)
    if args.kind == "overlap":
        return Output(overlap_dot(build_overlap_automaton(slope)))
    return Output(line_dot(build_line_subshift(slope)))


# ------------------------------------------------------------------ batch ---


@dataclass
class RunConfig:
    slopes: list[Slope]
    computations: list[str] = field(default_factory=list)
    n: dict[str, int] = field(default_factory=dict)
    tolerance: float = 1e-9
    seed: int = 0
    cache_dir: str | None = None
    format: str = "json"
    workers: int = 1

    @classmethod
    def from_mapping(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise UsageError("config must be a mapping")
        unknown = set(raw) - {"slopes", "max_q", "computations", "n", "tolerance", "seed", "cache_dir", "format", "workers"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        slopes = [make_slope(int(p), int(q)) for p, q in raw.get("slopes", [])]
        if "max_q" in raw:
            slopes += [s for s in coprime_slopes(int(raw["max_q"])) if s not in slopes]
        comps = list(raw.get("computations", []))
        bad = set(comps) - set(BATCH_COMPUTATIONS)
        if bad:
            raise UsageError(f"unknown computations: {sorted(bad)}")
        tol = float(raw.get("tolerance", 1e-9))
        if not tol > 0:
            raise UsageError("tolerance must be positive")
        fmt = raw.get("format", "json")
        if fmt not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        return cls(
            slopes=slopes,
            computations=comps,
            n={str(k): int(v) for k, v in (raw.get("n") or {}).items()},
            tolerance=tol,
            seed=int(raw.get("seed", 0)),
            cache_dir=raw.get("cache_dir"),
            format=fmt,
            workers=max(1, int(raw.get("workers", 1))),
        )


def _batch_counts(slope: Slope, n: int, tol: float, seed: int) -> dict:
    aut = build_overlap_automaton(slope)
    return {str(k): str(count_via_paths(aut, k)) for k in range(1, n + 1)} | {
        "oracle_agrees": all(overlap_count_exact(slope, k) == count_via_paths(aut, k) for k in range(1, n + 1))
    }


def _batch_pressure(slope: Slope, n: int, tol: float, seed: int) -> dict:
    est = pressure_partial(slope, n)
    return {"n": n, "L_n": est.lower, "S_n": est.full, "spectral": spectral_pressure(slope, tol).as_dict()}


def _batch_entropy(slope: Slope, n: int, tol: float, seed: int) -> dict:
    rep = hrw_estimates(slope, n)
    return {"H": list(rep.H), "h_rw": rep.h_rw}


def _batch_gibbs(slope: Slope, n: int, tol: float, seed: int) -> dict:
    return {"log_C_n_over_n": [v for _, v in weak_gibbs_constants(build_gibbs_system(slope), n)]}


BATCH_COMPUTATIONS: dict[str, tuple[Callable, int]] = {
    "count": (_batch_counts, 8),
    "pressure": (_batch_pressure, 20),
    "entropy": (_batch_entropy, 10),
    "gibbs": (_batch_gibbs, 20),
}


def _run_slope(slope: Slope, cfg: RunConfig) -> dict:
    doc: dict[str, Any] = {"slope": {"p": slope.p, "q": slope.q}, "errors": {}}
    cache = ResultCache.from_env(cfg.cache_dir)
    try:
        fn = lambda: dimension_report(slope, tol=cfg.tolerance).to_json()  # noqa: E731
        doc["dimension"] = cache.get_or_compute(slope.p, slope.q, "dimension", 10, fn) if cache else fn()
        doc["gap_ok"] = pressure_gap_check(slope, cfg.tolerance).ok
    except SlicePressureError as exc:
        doc["errors"]["dimension"] = f"{type(exc).__name__}: {exc}"
    for name in cfg.computations:
        fn, default_n = BATCH_COMPUTATIONS[name]
        n = cfg.n.get(name, default_n)
        try:
            doc[name] = fn(slope, n, cfg.tolerance, cfg.seed)
        except SlicePressureError as exc:
            doc["errors"][name] = f"{type(exc).__name__}: {exc}"
    return doc


def _summary_row(doc: dict) -> list:
    p, q = doc["slope"]["p"], doc["slope"]["q"]
    status = "ok" if not doc["errors"] else "failed: " + "; ".join(f"{k}: {v}" for k, v in doc["errors"].items())
    dim = doc.get("dimension")
    if dim is None:
        return [f"{p}/{q}", "", "", "", "", "", status]
    n_mid = 0.5 * (dim["N"]["lower"] + dim["N"]["upper"])
    p_mid = 0.5 * (dim["P"]["lower"] + dim["P"]["upper"])
    return [f"{p}/{q}", n_mid, p_mid, dim["dim_lower"], dim["singular"], doc.get("gap_ok", False), status]


def batch_run(cfg: RunConfig, out_dir: str | Path) -> tuple[list[list], list[str]]:
    """Run every slope, write per-slope files and ``summary.csv``; return (rows, failures)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.workers > 1 and len(cfg.slopes) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            docs = list(pool.map(_run_slope, cfg.slopes, [cfg] * len(cfg.slopes)))
    else:
        docs = [_run_slope(s, cfg) for s in cfg.slopes]
    rows = []
    failures = []
    for slope, doc in zip(cfg.slopes, docs):
        stem = f"slope_{slope.p}_{slope.q}"
        if cfg.format == "json":
            atomic_write_text(out / f"{stem}.json", render_json(doc))
        else:
            flat = [[k, json.dumps(v, sort_keys=True)] for k, v in doc.items()]
            atomic_write_text(out / f"{stem}.csv", render_csv(("field", "value"), flat))
        rows.append(_summary_row(doc))
        if doc["errors"]:
            failures.append(str(slope))
    atomic_write_text(out / "summary.csv", render_csv(SUMMARY_COLUMNS, rows))
    return rows, failures


def load_config(path: str | Path) -> RunConfig:
    text = Path(path).read_text()
    try:
        raw = yaml.safe_load(text) if str(path).endswith((".yaml", ".yml")) else json.loads(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse config {path}: {exc}") from exc
    return RunConfig.from_mapping(raw or {})


def cmd_batch(args) -> Output:
    cfg = load_config(args.config)
    if args.workers is not None:
        cfg.workers = args.workers
    rows, failures = batch_run(cfg, args.out_dir)
    text = render_csv(SUMMARY_COLUMNS, rows)
    if failures:
        sys.stderr.write(f"failed slopes: {', '.join(failures)}\n")
        return Output(text, 1)
    return Output(text)


# ----------------------------------------------------------------- parser ---


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slicepressure", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_text: str, slope: bool = True, fmt: str | None = "csv"):
        sp = sub.add_parser(name, help=help_text)
        if slope:
            sp.add_argument("--p", type=int, required=True)
            sp.add_argument("--q", type=int, required=True)
        if fmt is not None:
            sp.add_argument("--format", choices=("csv", "json"), default=fmt)
        sp.add_argument("--out", help="write to this file instead of stdout")
        sp.add_argument("--cache-dir", help="result cache directory (overrides $SLICEPRESSURE_CACHE_DIR)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("count", cmd_count, "exact overlap counts N_n")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--n-min", type=_positive_int, default=1)
    sp.add_argument("--method", choices=("oracle", "paths", "cocycle", "all"), default="paths")

    sp = add("growth", cmd_growth, "certified overlap growth rate", fmt=None)
    sp.add_argument("--tol", type=_positive_float, default=1e-9)

    sp = add("pressure", cmd_pressure, "pressure approximants L_n, S_n")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--tol", type=_positive_float, default=1e-9)

    sp = add("entropy", cmd_entropy, "random-walk entropies and the Jensen bound")
    sp.add_argument("--n", type=_positive_int, default=10)

    sp = add("dimension", cmd_dimension, "per-slope dimension report", fmt=None)
    sp.add_argument("--n-max", type=_positive_int, default=10)
    sp.add_argument("--tol", type=_positive_float, default=1e-9)

    sp = add("fourier", cmd_fourier, "Fourier non-decay witness", fmt=None)
    sp.add_argument("--n-max", type=int, default=20)
    sp.add_argument("--eta", help="evaluate a single partial product at this rational frequency")
    sp.add_argument("--terms", type=int, default=64)

    sp = add("contraction", cmd_contraction, "contractivity census of length-3 words", slope=False, fmt=None)
    sp.add_argument("--samples", type=_positive_int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("gibbs", cmd_gibbs, "weak-Gibbs constants or cylinder masses")
    sp.add_argument("--n", type=_positive_int, default=20)
    sp.add_argument("--tail", type=int, default=4)
    sp.add_argument("--masses", type=int, help="emit the exact cylinder-mass table at this length")

    sp = add("automaton-export", cmd_export, "Graphviz export", fmt=None)
    sp.add_argument("--kind", choices=("overlap", "subshift"), default="overlap")

    sp = add("batch", cmd_batch, "run a JSON/YAML config over many slopes", slope=False, fmt=None)
    sp.add_argument("--config", required=True)
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--workers", type=_positive_int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except (UsageError, *USAGE_ERRORS) as exc:
        sys.stderr.write(f"usage error: {type(exc).__name__}: {exc}\n")
        return 2
    except (SlicePressureError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    if args.out:
        atomic_write_text(args.out, result.text)
    else:
        sys.stdout.write(result.text)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
