"""Command-line front end.

Examples
--------
    uncertainty-limits spectrum --c 1 2 4 8 --n-max 2
    uncertainty-limits check --config spec.json
    uncertainty-limits design --rise-time 0.5
    uncertainty-limits analyze --num 1 --den 1 2 1
    uncertainty-limits extremal --alpha 0.9 --c 4
    uncertainty-limits figdata --figure 3 --out fig3.csv

Records are JSON by default, tables are CSV.  Every float is written with 12
significant digits so output is byte-stable for a fixed configuration.
``check`` exits 0 for a feasible spec, 1 for an infeasible one and 2 for
unusable input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import gaussian
from .corpus import system_corpus
from .errors import MissingFieldError, NoCrossingError, NonIntegrableError, UncertaintyLimitsError
from .feasibility import (
    DEFAULT_SLACK,
    SpecSheet,
    Verdict,
    chalk_spec_bounds,
    extremal_coefficients,
    admissible,
    extremal_pair,
    extremal_signal,
    spec_feasible,
    theorem52_check,
)
from .lti import (
    RationalSystem,
    bandwidth_3db,
    bandwidth_integral,
    step_metrics,
)
from .pswf import (
    _RESOLUTION_FLOOR,
    compute_spectrum,
    eval_pswf,
    extend_pswf_time,
    kernel_eigenvalues,
    lambda0_asymptotic,
)

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2
DEFAULT_SEED = 0
SIG_DIGITS = 12
FIG2_SQRT_A = (0.1, 0.5, 1.0, 5.0, 20.0)
FIG4_C = (8.0, 4.0, 2.0)


class InputError(Exception):
    """Bad command-line or config input (exit status 2)."""


# ------------------------------------------------------------------ output

def fmt_number(x):
    """Round to 12 significant digits; non-finite values become None."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{SIG_DIGITS}g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    return fmt_number(obj)


def _flatten(rec, prefix=""):
    out = {}
    for k, v in rec.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


def render_record(rec: dict, fmt: str) -> str:
    rec = _clean(rec)
    if fmt == "json":
        return json.dumps(rec, indent=2, sort_keys=False) + "\n"
    flat = _flatten(rec)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(flat))
    w.writerow([_cell(v) for v in flat.values()])
    return buf.getvalue()


def render_table(columns: list[str], rows, fmt: str) -> str:
    rows = [[fmt_number(v) if v is not None else None for v in r] for r in rows]
    if fmt == "json":
        return json.dumps({"columns": columns, "rows": rows}) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_config(path):
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("config must be a JSON object")
    return doc


def _pick(args, cfg, name, default=None):
    v = getattr(args, name, None)
    if v is not None:
        return v
    return cfg.get(name, default)


# ---------------------------------------------------------------- commands

def cmd_spectrum(args, cfg):
    cs = _pick(args, cfg, "c")
    if cs is None and args.c_range is not None:
        lo, hi, n = args.c_range
        if not (n >= 1 and 0 < lo <= hi):
            raise InputError("--c-range needs 0 < start <= stop and count >= 1")
        cs = np.linspace(lo, hi, int(n)).tolist()
    if not cs:
        raise InputError("empty c range; give --c values or --c-range START STOP COUNT")
    cs = [float(c) for c in cs]
    if any(not c > 0 for c in cs):
        raise InputError("c values must be positive")
    n_max = int(_pick(args, cfg, "n_max", 0))
    if n_max < 0:
        raise InputError("--n-max must be >= 0")
    cols = ["c"] + [f"lambda_{k}" for k in range(n_max + 1)] + ["lambda0_asymptotic"]
    rows = []
    for c in cs:
        ev = kernel_eigenvalues(c)[: n_max + 1]
        # modes below the resolution floor are noise; leave them blank
        vals = [float(v) if v >= _RESOLUTION_FLOOR else None for v in ev]
        rows.append([c] + vals + [lambda0_asymptotic(c)])
    return render_table(cols, rows, args.format), EXIT_OK


def check_record(spec: SpecSheet, slack: float = DEFAULT_SLACK) -> tuple[Verdict, dict]:
    v = spec_feasible(spec, slack=slack)
    v.details["thm52"] = theorem52_check(spec).to_dict()
    if spec.E1 is not None and spec.W is not None:
        lhs24, lhs30 = chalk_spec_bounds(spec)
        v.details["chalk"] = {
            "eq24_lhs": lhs24,
            "eq30_lhs": lhs30,
            # largest frequency fractions each bound tolerates
            "beta1_max": min(1.0, lhs24 / (2 * math.pi)),
            "beta1_prime_max": min(1.0, lhs30 / (2 * math.pi)),
        }
    rec = {"spec": spec.to_dict(), **v.to_dict()}
    return v, rec


def cmd_check(args, cfg):
    doc = dict(cfg)
    for name in SpecSheet.FIELDS:
        val = getattr(args, f"spec_{name}", None)
        if val is not None:
            doc[name] = val
    try:
        spec = SpecSheet.from_dict(doc)
    except MissingFieldError as exc:
        raise InputError(f"missing required field: {exc.field}") from None
    v, rec = check_record(spec, slack=args.tol if args.tol is not None else DEFAULT_SLACK)
    return render_record(rec, args.format), EXIT_OK if v.feasible else EXIT_INFEASIBLE


def cmd_design(args, cfg):
    keys = ("a", "rise_time", "settling_time", "freq_std")
    given = {k: _pick(args, cfg, k) for k in keys}
    given = {k: float(v) for k, v in given.items() if v is not None}
    if len(given) != 1:
        raise InputError("give exactly one of --a, --rise-time, --settling-time, --freq-std")
    if "a" in given:
        d = gaussian.GaussianDesign(given["a"])
    else:
        d = gaussian.design_from(**given)
    pr, ps = gaussian.products(d)
    rec = {
        "a": d.a,
        "rise_time": gaussian.rise_time(d),
        "settling_time": gaussian.settling_time(d),
        "freq_std": gaussian.freq_std(d),
        "rise_product": pr,
        "settling_product": ps,
    }
    n = _pick(args, cfg, "curve")
    if n:
        t = np.linspace(0.0, 3.0 * gaussian.settling_time(d), int(n))
        rows = np.column_stack((t, gaussian.impulse(d, t), gaussian.step(d, t)))
        # a curve is a table, so it defaults to csv like the other tables
        fmt = args.format if args.format_given else "csv"
        return render_table(["t", "impulse", "step"], rows.tolist(), fmt), EXIT_OK
    return render_record(rec, args.format), EXIT_OK


def _optional(fn):
    try:
        return fn(), None
    except (NonIntegrableError, NoCrossingError) as exc:
        return None, str(exc)


def analyze_record(sys_: RationalSystem) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        m = step_metrics(sys_)
    wb, wb_note = _optional(lambda: bandwidth_integral(sys_))
    w3, w3_note = _optional(lambda: bandwidth_3db(sys_))
    rec = {
        "num": sys_.num.tolist(),
        "den": sys_.den.tolist(),
        "dc_gain": sys_.dc_gain,
        "metrics": {
            "t_r_slope": m.t_r_slope,
            "t_r_1090": m.t_r_1090,
            "t_r_full": m.t_r_full,
            "t_p": m.t_p,
            "t_s": m.t_s,
            "overshoot": m.overshoot,
            "steady_state": m.steady_state,
        },
        "bandwidth_integral": wb,
        "bandwidth_3db": w3,
        "rise_bandwidth_product": m.t_r_slope * wb if (wb is not None and m.t_r_slope) else None,
        "rule_of_thumb_product": m.t_r_1090 * w3 if (w3 is not None and m.t_r_1090) else None,
    }
    notes = {k: v for k, v in (("bandwidth_integral", wb_note), ("bandwidth_3db", w3_note)) if v}
    if notes:
        rec["notes"] = notes
    return rec


def cmd_analyze(args, cfg):
    num, den = _pick(args, cfg, "num"), _pick(args, cfg, "den")
    if num is None and den is None:
        seed = args.seed if args.seed is not None else cfg.get("seed", DEFAULT_SEED)
        sys_ = system_corpus(1, seed=int(seed))[0]
    elif num is None or den is None:
        raise InputError("give both num and den (ascending powers of s)")
    else:
        sys_ = RationalSystem(num, den)
    return render_record(analyze_record(sys_), args.format), EXIT_OK


def cmd_extremal(args, cfg):
    alpha = _pick(args, cfg, "alpha")
    c = _pick(args, cfg, "c")
    if alpha is None or c is None:
        raise InputError("give --alpha and --c")
    T = float(_pick(args, cfg, "T", 1.0))
    spec = compute_spectrum(float(c), n_max=0)
    p, q = extremal_coefficients(float(alpha), spec.lambda0)
    if args.format == "csv" and args.samples:
        h = extremal_signal(float(alpha), float(c), T=T, span=float(args.span),
                            samples_per_slot=int(args.samples), spectrum=spec)
        return render_table(["t", "h"], np.column_stack((h.times, h.values)).tolist(), "csv"), EXIT_OK
    pair = extremal_pair(float(alpha), float(c), T=T, spectrum=spec)
    v = admissible(pair, float(c), spectrum=spec)
    rec = {
        "alpha": alpha, "c": c, "T": T, "lambda0": spec.lambda0, "p": p, "q": q,
        "measured": {"alpha": pair.alpha, "beta": pair.beta},
        "eq8_margin": v.margin,
    }
    return render_record(rec, args.format), EXIT_OK


def figure_table(fig: int):
    """Columns and rows of the dataset behind figure ``fig``."""
    if fig == 2:
        t = np.linspace(0.0, 20.0, 4001)
        cols = ["t"] + [f"step_sqrt_a_{s:g}" for s in FIG2_SQRT_A]
        data = [t] + [gaussian.step(gaussian.GaussianDesign(s * s), t) for s in FIG2_SQRT_A]
        return cols, np.column_stack(data).tolist()
    if fig == 3:
        cs = np.round(np.arange(1, 161) * 0.05, 10)
        rows = [[c, kernel_eigenvalues(c)[0], lambda0_asymptotic(c)] for c in cs]
        return ["c", "lambda0", "lambda0_asymptotic"], rows
    if fig == 4:
        tau = np.linspace(-3.0, 3.0, 601)
        cols, data = ["tau"], [tau]
        for c in FIG4_C:
            s = compute_spectrum(c, n_max=0)
            # extension beyond |tau| = 1 through the band-limited continuation
            data.append(extend_pswf_time(s, 0, c * tau) / s.extension_constants[0])
            cols.append(f"psi0_c{c:g}")
        return cols, np.column_stack(data).tolist()
    if fig == 5:
        s = compute_spectrum(8.0, n_max=0)
        tau = np.linspace(0.0, 3.0, 3001)
        psi = extend_pswf_time(s, 0, 8.0 * tau) / s.extension_constants[0]
        inside = np.abs(tau) <= 1
        psi[inside] = eval_pswf(s, 0, tau[inside])
        return ["tau", "psi0_c8"], np.column_stack((tau, psi)).tolist()
    raise InputError(f"unknown figure {fig}; choose 2, 3, 4 or 5")


def cmd_figdata(args, cfg):
    fig = _pick(args, cfg, "figure")
    if fig is None:
        raise InputError("give --figure")
    cols, rows = figure_table(int(fig))
    return render_table(cols, rows, args.format), EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON document with command inputs")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--tol", type=float, default=None, help="numerical slack for strict tests")

    p = argparse.ArgumentParser(prog="uncertainty-limits", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="largest eigenvalues over a c grid")
    s.add_argument("--c", type=float, nargs="*", default=None)
    s.add_argument("--c-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    s.add_argument("--n-max", dest="n_max", type=int, default=None)
    s.set_defaults(func=cmd_spectrum, table=True)

    s = sub.add_parser("check", parents=[common], help="feasibility verdict for a spec sheet")
    for name in SpecSheet.FIELDS:
        s.add_argument(f"--{name}", dest=f"spec_{name}", type=float, default=None)
    s.set_defaults(func=cmd_check, table=False)

    s = sub.add_parser("design", parents=[common], help="Gaussian optimal monotone design")
    s.add_argument("--a", type=float)
    s.add_argument("--rise-time", dest="rise_time", type=float)
    s.add_argument("--settling-time", dest="settling_time", type=float)
    s.add_argument("--freq-std", dest="freq_std", type=float)
    s.add_argument("--curve", type=int, default=None, help="emit this many samples of h and u")
    s.set_defaults(func=cmd_design, table=False)

    s = sub.add_parser("analyze", parents=[common], help="transient and bandwidth metrics of H(s)")
    s.add_argument("--num", type=float, nargs="+", help="numerator, ascending powers of s")
    s.add_argument("--den", type=float, nargs="+", help="denominator, ascending powers of s")
    s.set_defaults(func=cmd_analyze, table=False)

    s = sub.add_parser("extremal", parents=[common], help="extremal signal p psi0 + q P_T psi0")
    s.add_argument("--alpha", type=float)
    s.add_argument("--c", type=float)
    s.add_argument("--T", type=float)
    s.add_argument("--span", type=float, default=16.0)
    s.add_argument("--samples", type=int, default=None, help="with --format csv: samples per slot")
    s.set_defaults(func=cmd_extremal, table=False)

    s = sub.add_parser("figdata", parents=[common], help="plot datasets, numbered 2 to 5")
    s.add_argument("--figure", type=int)
    s.set_defaults(func=cmd_figdata, table=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.format_given = args.format is not None
    if args.format is None:
        args.format = "csv" if args.table else "json"
    try:
        cfg = _load_config(args.config)
        text, code = args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UncertaintyLimitsError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out or 'stdout'}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
