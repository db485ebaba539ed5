"""Command line front end: bound verification, functional sweeps, transforms, self-test.

    dunkl-up verify config.json [--out PATH] [--format json|csv] [--no-meta]
    dunkl-up sweep config.json [--out PATH] [--format json|csv] [--no-meta]
    dunkl-up transform --mu MU --alpha ALPHA (--preset NAME | --input FILE) --out FILE
    dunkl-up selftest

Exit codes: 0 pass, 1 configuration error, 2 verification failure.
DUNKL_UP_THREADS caps the worker threads (0 or unset = one per CPU).
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import datetime
import io
import json
import math
import os
import re
import sys
import warnings

import jsonschema
import numpy as np

from . import __version__
from .battery import BATTERY_NAMES, battery_function
from .bounds import REPORT_TOL, BoundKind, BoundSpec, evaluate_bound
from .errors import ConfigError, ConsistencyError, DunklError
from .extremals import PRESETS, make_extremal, preset
from .functionals import DISPERSION_P_GRID, summarize
from .quadrature import build_scheme, default_scheme
from .transforms import fractional_dunkl_transform

__all__ = [
    "CSV_COLUMNS",
    "CONFIG_SCHEMA",
    "DEFAULT_CONFIG",
    "parse_angle",
    "read_config",
    "load_config",
    "resolve_function",
    "run_verify",
    "run_sweep",
    "run_transform",
    "render",
    "main",
]

EXIT_OK, EXIT_CONFIG, EXIT_FAIL = 0, 1, 2

CSV_COLUMNS = (
    "function", "mu", "alpha", "beta", "p", "bound", "lhs", "rhs", "gap", "rel_gap",
    "a_term", "cov", "abs_cov", "disp2_f", "disp2_Df", "warnings",
)
SWEEP_COLUMNS = (
    "function", "mu", "norm2", "mean_pos", "mean_freq", "even_energy", "odd_energy",
    "cov", "abs_cov", "a_term", "disp2_f", "disp2_Df",
) + tuple(f"disp_p{p:g}" for p in DISPERSION_P_GRID) + ("warnings",)

_ANGLE = {"anyOf": [{"type": "number"}, {"type": "string"}]}
CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["mu_list", "functions"],
    "properties": {
        "mu_list": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": -0.5}},
        "angle_pairs": {"type": "array", "items": {"type": "array", "items": _ANGLE, "minItems": 2, "maxItems": 2}},
        "p_list": {"type": "array", "items": {"type": "number", "minimum": 1, "maximum": 2}},
        "bounds": {"type": "array", "items": {"enum": [k.value for k in BoundKind]}},
        "functions": {
            "type": "array",
            "minItems": 1,
            "items": {
                "anyOf": [
                    {"type": "string"},
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "properties": {
                            "battery": {"type": "string"},
                            "preset": {"type": "string"},
                            "name": {"type": "string"},
                            "params": {"type": "object"},
                        },
                    },
                ]
            },
        },
        "scheme": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "radius": {"type": "number", "exclusiveMinimum": 0},
                "panels": {"type": "integer", "minimum": 2},
                "nodes_per_panel": {"type": "integer", "minimum": 4, "maximum": 64},
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"report": {"type": "number", "exclusiveMinimum": 0}},
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"format": {"enum": ["json", "csv"]}, "path": {"type": "string"}},
        },
    },
}

DEFAULT_CONFIG = {
    "mu_list": [-0.5, 0.0, 0.5, 1.5],
    "angle_pairs": [[0, "pi/2"], ["pi/6", "pi/2"], ["pi/4", "3pi/4"], [0.3, 1.7]],
    "p_list": [1, 1.5, 2],
    "functions": list(BATTERY_NAMES),
}

_ALIASES = {"gaussian": "gauss"}
_ANGLE_RE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(value):
    """Angle from a number or a string such as "pi/4", "-3pi/4", "2*pi", "0.3"."""
    if isinstance(value, bool):
        raise ConfigError(f"not an angle: {value!r}")
    if isinstance(value, (int, float)):
        v = float(value)
    else:
        text = str(value).strip()
        m = _ANGLE_RE.match(text)
        if m:
            coef = m.group(1)
            c = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
            v = c * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
        else:
            try:
                v = float(text)
            except ValueError:
                raise ConfigError(f"cannot parse angle {value!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"angle must be finite, got {value!r}")
    return v


def _scheme_from(cfg):
    s = cfg.get("scheme")
    return build_scheme(**s) if s else default_scheme()


def read_config(source):
    """Raw config dict from a path (or a dict, returned as is)."""
    if isinstance(source, dict):
        return source
    try:
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {source}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {source} is not valid JSON: {exc}") from exc


def load_config(source):
    """Parse and validate a config given as a path or a raw dict."""
    cfg = read_config(source)
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {path}: {exc.message}") from None
    out = dict(cfg)
    out["angle_pairs"] = [tuple(parse_angle(a) for a in pair) for pair in cfg.get("angle_pairs", [])]
    out["p_list"] = [float(p) for p in cfg.get("p_list", [2.0])]
    out["bounds"] = [BoundKind(k) for k in cfg.get("bounds", [k.value for k in BoundKind])]
    out["functions"] = [_function_entry(f) for f in cfg["functions"]]
    out["tolerances"] = {"report": REPORT_TOL, **cfg.get("tolerances", {})}
    _scheme_from(out)
    for e in out["functions"]:
        if e["kind"] == "preset":
            for mu in out["mu_list"]:
                try:
                    preset(e["name"], mu, **e["params"])
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"bad parameters for preset {e['name']!r}: {exc}") from None
    return out


def _function_entry(item):
    if isinstance(item, str):
        name = _ALIASES.get(item, item)
        if name in BATTERY_NAMES:
            return {"kind": "battery", "name": name, "label": name, "params": {}}
        if name in PRESETS:
            return {"kind": "preset", "name": name, "label": name, "params": {}}
        raise ConfigError(f"unknown function {item!r}")
    if ("battery" in item) == ("preset" in item):
        raise ConfigError(f"function entry needs exactly one of 'battery' or 'preset': {item}")
    if "battery" in item:
        name = _ALIASES.get(item["battery"], item["battery"])
        if name not in BATTERY_NAMES:
            raise ConfigError(f"unknown battery function {item['battery']!r}")
        if item.get("params"):
            raise ConfigError("battery functions take no parameters")
        return {"kind": "battery", "name": name, "label": item.get("name", name), "params": {}}
    name = item["preset"]
    if name not in PRESETS:
        raise ConfigError(f"unknown extremal preset {name!r}")
    params = dict(item.get("params", {}))
    for key in ("b", "b_prime"):
        v = params.get(key)
        if isinstance(v, (list, tuple)):
            params[key] = complex(*v)
        elif isinstance(v, str):
            params[key] = complex(v.replace(" ", ""))
    return {"kind": "preset", "name": name, "label": item.get("name", name), "params": params}


def resolve_function(entry, mu, scheme):
    """Normalized PolarHandle for a config function entry."""
    if isinstance(entry, str):
        entry = _function_entry(entry)
    if entry["kind"] == "battery":
        return battery_function(entry["name"], mu, scheme)
    try:
        spec = preset(entry["name"], mu, **entry["params"])
    except TypeError as exc:
        raise ConfigError(f"bad parameters for preset {entry['name']!r}: {exc}") from None
    return make_extremal(spec, scheme)[1]


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _specs(cfg, mu):
    for kind in cfg["bounds"]:
        if kind in (BoundKind.ROSLER, BoundKind.FEI):
            yield kind, 0.0, 0.5 * math.pi, 2.0
        elif kind is BoundKind.LP_FRACTIONAL:
            for a, b in cfg["angle_pairs"]:
                for p in cfg["p_list"]:
                    yield kind, a, b, p
        else:
            for a, b in cfg["angle_pairs"]:
                yield kind, a, b, 2.0


def _row_base(label, mu, kind, a, b, p):
    return {"function": label, "mu": mu, "alpha": a, "beta": b, "p": p, "bound": kind.value}


def _verify_task(entry, mu, cfg, scheme):
    rows = []
    label = entry["label"]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            pf = resolve_function(entry, mu, scheme)
            summary = summarize(pf, mu, scheme)
        except DunklError as exc:
            return [{**_row_base(label, mu, k, a, b, p), "error": f"{type(exc).__name__}: {exc}",
                     "consistency": isinstance(exc, ConsistencyError)} for k, a, b, p in _specs(cfg, mu)]
    base_warn = sorted({str(w.message) for w in caught})
    for kind, a, b, p in _specs(cfg, mu):
        row = _row_base(label, mu, kind, a, b, p)
        try:
            spec = BoundSpec(kind, mu, a, b, p)
            rep = evaluate_bound(pf, spec, scheme, summary, tol_scale=cfg["tolerances"]["report"])
        except DunklError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            row["consistency"] = isinstance(exc, ConsistencyError)
            rows.append(row)
            continue
        row.update(
            lhs=_num(rep.lhs), rhs=_num(rep.rhs), gap=_num(rep.gap), rel_gap=_num(rep.rel_gap),
            tol=rep.tol, violated=rep.violated,
            components={k: _num(v) for k, v in rep.components.items()},
            warnings=base_warn + list(rep.warnings),
        )
        rows.append(row)
    return rows


def _threads():
    raw = os.environ.get("DUNKL_UP_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"DUNKL_UP_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("DUNKL_UP_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _run_tasks(fn, cfg, scheme):
    tasks = [(e, mu) for e in cfg["functions"] for mu in cfg["mu_list"]]
    n = min(_threads(), len(tasks))
    if n <= 1:
        results = [fn(e, mu, cfg, scheme) for e, mu in tasks]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(lambda t: fn(t[0], t[1], cfg, scheme), tasks))
    return [row for chunk in results for row in chunk]


def _meta(cfg, command):
    return {
        "command": command,
        "version": __version__,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "threads": _threads(),
        "tolerances": cfg["tolerances"],
    }


def _echo_config(cfg):
    return {
        "mu_list": cfg["mu_list"],
        "angle_pairs": [list(p) for p in cfg["angle_pairs"]],
        "p_list": cfg["p_list"],
        "bounds": [k.value for k in cfg["bounds"]],
        "functions": [
            {"label": e["label"], "kind": e["kind"], "name": e["name"],
             "params": {k: (str(v) if isinstance(v, complex) else v) for k, v in e["params"].items()}}
            for e in cfg["functions"]
        ],
        "scheme": cfg.get("scheme", {}),
        "tolerances": cfg["tolerances"],
    }


def run_verify(config, meta=True):
    """Evaluate every bound row of a config; returns (exit_code, report)."""
    cfg = load_config(config)
    scheme = _scheme_from(cfg)
    rows = _run_tasks(_verify_task, cfg, scheme)
    violations = sum(1 for r in rows if r.get("violated"))
    errors = sum(1 for r in rows if "error" in r)
    consistency = sum(1 for r in rows if r.get("consistency"))
    report = {
        "config": _echo_config(cfg),
        "rows": rows,
        "summary": {"rows": len(rows), "violations": violations, "errors": errors,
                    "consistency_errors": consistency},
    }
    if meta:
        report["meta"] = _meta(cfg, "verify")
    code = EXIT_FAIL if violations or consistency else EXIT_OK
    return code, report


def _sweep_task(entry, mu, cfg, scheme):
    label = entry["label"]
    p_grid = tuple(sorted(set(DISPERSION_P_GRID) | set(cfg["p_list"])))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            pf = resolve_function(entry, mu, scheme)
            s = summarize(pf, mu, scheme, p_grid=p_grid)
        except DunklError as exc:
            return [{"function": label, "mu": mu, "error": f"{type(exc).__name__}: {exc}"}]
    row = {
        "function": label, "mu": mu, "norm2": s.norm2, "mean_pos": s.mean_pos, "mean_freq": s.mean_freq,
        "even_energy": s.even_energy, "odd_energy": s.odd_energy, "cov": s.cov, "abs_cov": s.abs_cov,
        "a_term": s.a_term, "disp2_f": s.disp2_f, "disp2_Df": s.disp2_Df,
        "disp_p": {f"{p:g}": v for p, v in s.disp_p.items()},
        "diagnostics": {k: _num(v) for k, v in s.diagnostics.items()},
        "warnings": sorted({str(w.message) for w in caught}),
    }
    return [row]


def run_sweep(config, meta=True):
    """FunctionalSummary of every (function, mu); returns (exit_code, report)."""
    cfg = load_config(config)
    scheme = _scheme_from(cfg)
    rows = _run_tasks(_sweep_task, cfg, scheme)
    report = {"config": _echo_config(cfg), "rows": rows,
              "summary": {"rows": len(rows), "errors": sum(1 for r in rows if "error" in r)}}
    if meta:
        report["meta"] = _meta(cfg, "sweep")
    return EXIT_OK, report


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def render(report, fmt="json", kind="verify"):
    """Serialize a report deterministically (sorted keys, repr floats)."""
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "meta" in report:
        buf.write("# " + json.dumps(report["meta"], sort_keys=True) + "\n")
    cols = CSV_COLUMNS if kind == "verify" else SWEEP_COLUMNS
    w.writerow(cols)
    for r in report["rows"]:
        warn = list(r.get("warnings", []))
        if "error" in r:
            warn.insert(0, r["error"])
        flat = dict(r)
        flat.update(r.get("components", {}))
        for p, v in r.get("disp_p", {}).items():
            flat[f"disp_p{p}"] = v
        flat["warnings"] = "; ".join(warn)
        w.writerow([_fmt(flat.get(c)) for c in cols])
    return buf.getvalue()


def _read_samples(path, scheme):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise ConfigError(f"cannot read input samples {path}: {exc}") from exc
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    if not rows or any(len(r) != 3 for r in rows):
        raise ConfigError("input samples need three columns: x, re, im")
    try:
        arr = np.array(rows, dtype=float)
    except ValueError:
        raise ConfigError(f"input samples in {path} must be numeric x,re,im columns") from None
    if arr.shape[0] != scheme.size or np.max(np.abs(arr[:, 0] - scheme.nodes)) > 1e-12 * scheme.radius:
        raise ConfigError(f"input samples must be given on the {scheme.size} scheme nodes")
    return arr[:, 1] + 1j * arr[:, 2]


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def run_transform(mu, alpha, preset_name=None, input_path=None, scheme=None):
    """Fractional transform of a preset or sampled input; returns (nodes, values, warnings)."""
    scheme = scheme or default_scheme()
    if (preset_name is None) == (input_path is None):
        raise ConfigError("give exactly one of --preset or --input")
    if preset_name is not None:
        f = resolve_function(preset_name, mu, scheme)
    else:
        f = _read_samples(input_path, scheme)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = fractional_dunkl_transform(f, mu, parse_angle(alpha), scheme)
    notes = sorted(set(res.warnings) | {str(w.message) for w in caught})
    return scheme.nodes, res.values, notes


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _report_command(args, runner, kind):
    raw = read_config(args.config)
    out = load_config(raw).get("output", {})
    fmt = args.format or out.get("format", "json")
    path = args.out or out.get("path")
    code, report = runner(raw, meta=not args.no_meta)
    _write(render(report, fmt, kind), path)
    s = report["summary"]
    print(f"{kind}: {s['rows']} rows, {s.get('violations', 0)} violations, {s['errors']} errors", file=sys.stderr)
    return code


def _cmd_transform(args):
    scheme = build_scheme(args.radius, args.panels, args.nodes_per_panel)
    x, vals, notes = run_transform(args.mu, args.alpha, args.preset, args.input, scheme)
    buf = io.StringIO()
    buf.write(f"# warnings: {'; '.join(notes) if notes else 'none'}\n")
    buf.write("w,re,im\n")
    for w, v in zip(x.tolist(), vals.tolist()):
        buf.write(f"{w!r},{v.real!r},{v.imag!r}\n")
    _write(buf.getvalue(), args.out)
    return EXIT_OK


def _cmd_selftest(args):
    from .acceptance import format_table, run_acceptance

    results = run_acceptance()
    print(format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="dunkl-up", description="Dunkl uncertainty-principle verification")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("verify", "sweep"):
        s = sub.add_parser(name)
        s.add_argument("config")
        s.add_argument("--out")
        s.add_argument("--format", choices=("json", "csv"))
        s.add_argument("--no-meta", action="store_true", help="omit timestamps and run metadata")
    t = sub.add_parser("transform")
    t.add_argument("--mu", type=float, required=True)
    t.add_argument("--alpha", required=True, help="angle, e.g. 0.3 or pi/4")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--preset")
    g.add_argument("--input", help="CSV of x,re,im on the scheme nodes")
    t.add_argument("--out", required=True)
    t.add_argument("--radius", type=float, default=default_scheme().radius)
    t.add_argument("--panels", type=int, default=default_scheme().panels)
    t.add_argument("--nodes-per-panel", type=int, default=default_scheme().nodes_per_panel)
    sub.add_parser("selftest")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _report_command(args, run_verify, "verify")
        if args.command == "sweep":
            return _report_command(args, run_sweep, "sweep")
        if args.command == "transform":
            return _cmd_transform(args)
        return _cmd_selftest(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DunklError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
