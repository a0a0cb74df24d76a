"""Command-line front end: ``meridian <command> --config FILE [options]``.

Config files are strict JSON objects; unknown keys are rejected.

    {
      "field": <source>,          # required
      "alpha": 1.0,               # optional, must agree with the source
      "points": [[x0, x1, x2]],   # optional default points for eval/jacobian/spectrum
      "box": [x0min, x0max, rhomin, rhomax],
      "grid": 20, "tol": 1e-9, "t_end": 1.0, "arclen": 1.0, "x0": 0.0,
      "scan": {"ranges": {"c": [-1, 1]}, "steps": 3}
    }

Field sources:

    {"holo": <expr>}              # radially holomorphic potential G, alpha = 1
    {"gasp": {"alpha": a, "terms": [{"beta", "b1", "b2", "a1", "a2"}]}}
    {"bihyperbolic": {"alpha1": a1, "alpha2": a2,
                      "terms": [{"lambda", "mu", "c1", "c2", "b1", "b2", "a1", "a2"}]}}
    {"registered": {"name": "joukowski", "params": {"B": 1.0, "gamma": 1.0}}}

Expressions <expr> are {"power": n}, {"exp": beta}, {"cos": null},
{"sin": null}, {"log": null}, {"xlog": null}, {"joukowski": [B, gamma]},
{"scale": [c, <expr>]}, {"reverse": <expr>} and {"sum": [<expr>, ...]}.

Exit status: 0 success, 1 invalid input, 2 numerical failure (including a
failed ``verify`` check).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from . import dynamics as dyn
from .errors import DomainError, MeridianError, ValidationError
from .families import FAMILIES, make_family
from .field_core import (
    HoloProfile,
    MeridionalField,
    azimuthal_derivative,
    bihyperbolic_residual,
    continuity_residual,
    curl_residual,
    epd_residual,
    field_eval,
    field_jacobian,
    holo_field,
    layered_divergence_residual,
    meridional_criterion_residual,
    principal_invariants,
    spectrum,
    degenerate_test,
    stokes_residual,
    stream_orthogonality,
)
from .radial_holo import from_json as expr_from_json
from .separable import BiSeries, GaspSeries, StokesStream, bi_eval, bi_from_json, gasp_eval, gasp_field, gasp_from_json

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2

DEFAULT_BOX = (-2.0, 2.0, 0.1, 2.0)
VERIFY_BOX = (-1.0, 1.0, 0.2, 2.0)
VERIFY_THETA = math.pi / 3  # azimuth of verification points; keeps x1, x2 > 0


# -- deterministic formatting -----------------------------------------------------------

def fmt(x: float) -> str:
    """17 significant digits, no negative zero."""
    x = float(x) + 0.0
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def to_json_text(obj: Any, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj.values()):
            return "{" + ", ".join(f"{json.dumps(k)}: {to_json_text(v)}" for k, v in obj.items()) + "}"
        body = ",\n".join(f"{inner}{json.dumps(k)}: {to_json_text(v, indent + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(to_json_text(v) for v in obj) + "]"
        body = ",\n".join(inner + to_json_text(v, indent + 1) for v in obj)
        return "[\n" + body + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def csv_text(header: Sequence[str] | None, rows: Sequence[Sequence[Any]]) -> str:
    def cell(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return fmt(v)
        return str(v)

    lines = [",".join(header)] if header else []
    lines.extend(",".join(cell(v) for v in r) for r in rows)
    return "\n".join(lines) + "\n"


# -- config ---------------------------------------------------------------------------------

_TOP_KEYS = {"field", "alpha", "points", "box", "grid", "tol", "t_end", "arclen", "x0", "scan"}


@dataclass
class Config:
    field: MeridionalField | None
    bi: BiSeries | None
    gasp: GaspSeries | None
    registered: tuple | None  # (name, params)
    raw: dict


def _num(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(f"{where}: expected a finite number, got {v!r}")
    return float(v)


def _int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{where}: expected an integer, got {v!r}")
    return v


def _single(obj, where: str):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValidationError(f"{where}: expected an object with exactly one source key")
    return next(iter(obj.items()))


def parse_config(text: str, name: str = "<config>") -> Config:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{name}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ValidationError(f"{name}: top level must be an object")
    unknown = sorted(set(raw) - _TOP_KEYS)
    if unknown:
        raise ValidationError(f"{name}: unknown key(s) {', '.join(unknown)}")
    if "field" not in raw:
        raise ValidationError(f"{name}: missing key 'field'")
    alpha = _num(raw["alpha"], "alpha") if "alpha" in raw else None
    kind, body = _single(raw["field"], "field")
    field = bi = gasp = registered = None
    if kind == "holo":
        if alpha is not None and alpha != 1.0:
            raise ValidationError("field.holo: radially holomorphic sources require alpha = 1")
        field = holo_field(expr_from_json(body, "field.holo"))
    elif kind == "gasp":
        gasp = gasp_from_json(body, "field.gasp")
        if alpha is not None and alpha != gasp.alpha:
            raise ValidationError("alpha: disagrees with field.gasp.alpha")
        field = gasp_field(gasp)
    elif kind == "bihyperbolic":
        bi = bi_from_json(body, "field.bihyperbolic")
        if alpha is not None and alpha != bi.alpha1 + bi.alpha2:
            raise ValidationError("alpha: disagrees with alpha1 + alpha2")
    elif kind == "registered":
        if not isinstance(body, dict) or set(body) - {"name", "params"} or "name" not in body:
            raise ValidationError("field.registered: expected {\"name\": ..., \"params\": {...}}")
        params = body.get("params", {})
        if not isinstance(params, dict):
            raise ValidationError("field.registered.params: expected an object")
        field = make_family(str(body["name"]), params)
        if alpha is not None and alpha != field.alpha:
            raise ValidationError(f"alpha: family {body['name']!r} has alpha = {field.alpha:g}")
        registered = (str(body["name"]), dict(params))
    else:
        raise ValidationError(f"field: unknown source {kind!r} (holo, gasp, bihyperbolic, registered)")
    return Config(field, bi, gasp, registered, raw)


def load_config(path: str) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, path)


# -- option resolution ------------------------------------------------------------------------------

def _opt(args, cfg: Config, name: str, default=None):
    v = getattr(args, name, None)
    if v is not None:
        return v
    return cfg.raw.get(name, default)


def _box(args, cfg: Config, default=DEFAULT_BOX) -> tuple:
    b = _opt(args, cfg, "box", list(default))
    if not isinstance(b, (list, tuple)) or len(b) != 4:
        raise ValidationError("box: expected four numbers")
    return tuple(_num(v, "box") for v in b)


def _points(args, cfg: Config) -> list:
    if args.point is not None:
        return [tuple(args.point)]
    if args.points is not None:
        pts = []
        try:
            with open(args.points, encoding="utf-8") as fh:
                for k, line in enumerate(fh, 1):
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    parts = line.replace(",", " ").split()
                    if len(parts) != 3:
                        raise ValidationError(f"{args.points}:{k}: expected x0 x1 x2")
                    try:
                        pts.append(tuple(float(v) for v in parts))
                    except ValueError:
                        raise ValidationError(f"{args.points}:{k}: not a number") from None
        except OSError as exc:
            raise ValidationError(f"cannot read {args.points}: {exc.strerror}") from None
        return pts
    raw = cfg.raw.get("points")
    if raw is None:
        raise ValidationError("no points given (use --point, --points or 'points' in the config)")
    if not isinstance(raw, list):
        raise ValidationError("points: expected a list of [x0, x1, x2]")
    out = []
    for i, p in enumerate(raw):
        if not isinstance(p, list) or len(p) != 3:
            raise ValidationError(f"points[{i}]: expected [x0, x1, x2]")
        out.append(tuple(_num(v, f"points[{i}]") for v in p))
    return out


def _need_field(cfg: Config, cmd: str) -> MeridionalField:
    if cfg.field is None:
        raise ValidationError(f"{cmd}: needs a meridional field source (holo, gasp or registered)")
    return cfg.field


def _mu(f: MeridionalField) -> dict:
    return {k: v for k, v in f.params if isinstance(v, float)}


# -- commands ---------------------------------------------------------------------------------------

def cmd_eval(args, cfg: Config) -> str:
    f = _need_field(cfg, "eval")
    vals = [field_eval(f, p) for p in _points(args, cfg)]
    if args.format == "json":
        return to_json_text([{"point": list(p), "V": list(v)} for p, v in zip(_points(args, cfg), vals)]) + "\n"
    return csv_text(None, vals)


def cmd_jacobian(args, cfg: Config) -> str:
    f = _need_field(cfg, "jacobian")
    pts = _points(args, cfg)
    mats = [field_jacobian(f, p) for p in pts]
    if args.format == "json":
        return to_json_text([{"point": list(p), "jacobian": [[float(v) for v in row] for row in J]}
                             for p, J in zip(pts, mats)]) + "\n"
    rows = [(*p, i, *(float(v) for v in J[i])) for p, J in zip(pts, mats) for i in range(3)]
    return csv_text(("x0", "x1", "x2", "row", "c0", "c1", "c2"), rows)


def cmd_spectrum(args, cfg: Config) -> str:
    f = _need_field(cfg, "spectrum")
    pts = _points(args, cfg)
    tol = float(_opt(args, cfg, "tol", 1e-9))
    recs = []
    for p in pts:
        sp = spectrum(f, p)
        inv = principal_invariants(field_jacobian(f, p))
        deg = degenerate_test(f, p, tol)
        recs.append({
            "point": list(p), "lambda0": sp.lambda0, "lambda1": sp.lambda1, "lambda2": sp.lambda2,
            "radicand": sp.radicand, "inv1": inv.inv1, "inv2": inv.inv2, "inv3": inv.inv3,
            "degenerate": deg.degenerate, "conditions": "|".join(c.value for c in deg.conditions),
        })
    if args.format == "json":
        return to_json_text(recs) + "\n"
    keys = ("lambda0", "lambda1", "lambda2", "radicand", "inv1", "inv2", "inv3", "degenerate", "conditions")
    return csv_text(("x0", "x1", "x2") + keys, [(*r["point"], *(r[k] for k in keys)) for r in recs])


def _grid(box, n=10):
    x0a, x0b, ra, rb = box
    xs = [x0a + (x0b - x0a) * i / (n - 1) for i in range(n)]
    rs = [ra + (rb - ra) * j / (n - 1) for j in range(n)]
    return [(x, r) for x in xs for r in rs]


def verify_field(f: MeridionalField, box=VERIFY_BOX, n: int = 10) -> list[tuple[str, float, float]]:
    """(check, max residual, tolerance) over an n x n meridian grid."""
    c, s = math.cos(VERIFY_THETA), math.sin(VERIFY_THETA)
    pts = _grid(box, n)
    h3 = lambda a, b, d: f.profile.potential(a, math.hypot(b, d))  # noqa: E731
    half = 0.5 * f.alpha
    if isinstance(f.profile, HoloProfile):
        stream = lambda m: f.profile.stream  # noqa: E731
        stokes_tol = 1e-5
    else:
        ss = StokesStream(f, (box[0], box[2]))
        stream = ss.near
        stokes_tol = 1e-4
    res = {k: 0.0 for k in ("continuity", "epd", "stokes_stream", "orthogonality", "meridional_criterion",
                            "azimuthal_derivative", "bihyperbolic_split", "curl", "layered_divergence")}
    for x0, rho in pts:
        p = (x0, rho * c, rho * s)
        gh = stream((x0, rho))
        vals = {
            "continuity": continuity_residual(f, p),
            "epd": epd_residual(f.profile, f.alpha, (x0, rho)),
            "stokes_stream": stokes_residual(gh, f.alpha, (x0, rho)),
            "orthogonality": stream_orthogonality(f.profile, gh, (x0, rho)),
            "meridional_criterion": meridional_criterion_residual(h3, p),
            "azimuthal_derivative": abs(azimuthal_derivative(h3, p)),
            "bihyperbolic_split": bihyperbolic_residual(h3, half, half, p),
            "curl": curl_residual(f, p),
            "layered_divergence": layered_divergence_residual(f, p),
        }
        for k, v in vals.items():
            res[k] = max(res[k], v)
    return [(k, v, stokes_tol if k == "stokes_stream" else 1e-5) for k, v in res.items()]


def verify_bi(s: BiSeries, box=(-1.0, 1.0, 0.3, 2.0), n: int = 10) -> list[tuple[str, float, float]]:
    worst = 0.0
    x1a, x1b = box[2], box[3]
    for x0, x1 in _grid((box[0], box[1], x1a, x1b), n):
        worst = max(worst, bihyperbolic_residual(s, s.alpha1, s.alpha2, (x0, x1, 0.5 * (x1a + x1b))))
    return [("bihyperbolic", worst, 1e-5)]


def cmd_verify(args, cfg: Config) -> tuple[str, int]:
    if cfg.bi is not None:
        rows = verify_bi(cfg.bi)
    else:
        box = _box(args, cfg, VERIFY_BOX)
        rows = verify_field(cfg.field, box)
    ok = all(v <= t for _, v, t in rows)
    out = [(k, v, t, v <= t) for k, v, t in rows]
    if args.format == "json":
        text = to_json_text([{"check": k, "max_residual": v, "tolerance": t, "pass": p} for k, v, t, p in out]) + "\n"
    else:
        text = csv_text(("check", "max_residual", "tolerance", "pass"), out)
    return text, EXIT_OK if ok else EXIT_NUMERIC


def _report_record(mu: dict, r: dyn.EquilibriumReport) -> dict:
    sp = r.eigenvalues
    return {
        "mu": mu, "x0": r.location.s, "rho": r.location.t,
        "lambda0": sp.lambda0, "lambda1": sp.lambda1, "lambda2": sp.lambda2,
        "degenerate": r.degenerate, "hyperbolic": r.hyperbolic,
        "index": r.index, "degree_of_instability": r.degree_of_instability,
    }


_EQ_KEYS = ("x0", "rho", "lambda0", "lambda1", "lambda2", "degenerate", "hyperbolic", "index", "degree_of_instability")


def _records_out(recs: list, fmt_: str) -> str:
    if fmt_ == "json":
        return to_json_text(recs) + "\n"
    names = sorted({k for r in recs for k in r["mu"]})
    rows = []
    for r in recs:
        rows.append([r["mu"].get(n, "") for n in names] + [r.get(k, "") for k in _EQ_KEYS] + [r.get("error", "")])
    return csv_text([f"mu_{n}" for n in names] + list(_EQ_KEYS) + ["error"], rows)


def cmd_equilibria(args, cfg: Config) -> str:
    f = _need_field(cfg, "equilibria")
    box = _box(args, cfg)
    grid = _int(_opt(args, cfg, "grid", 20), "grid")
    tol = _num(_opt(args, cfg, "tol", 1e-9), "tol")
    mu = _mu(f)
    recs = [_report_record(mu, dyn.classify(f, eq, tol)) for eq in dyn.find_equilibria(f, box, grid, tol)]
    return _records_out(recs, args.format or "json")


def cmd_trace(args, cfg: Config) -> str:
    f = _need_field(cfg, "trace")
    pts = _points(args, cfg)
    if len(pts) != 1:
        raise ValidationError("trace: needs exactly one start point")
    t_end, arclen = _opt(args, cfg, "t_end"), _opt(args, cfg, "arclen")
    if (t_end is None) == (arclen is None):
        raise ValidationError("trace: give exactly one of --t-end (pathline) or --arclen (streamline)")
    tol = _num(_opt(args, cfg, "tol", 1e-10), "tol")
    if t_end is not None:
        tr = dyn.integrate_pathline(f, pts[0], _num(t_end, "t_end"), tol)
    else:
        tr = dyn.trace_streamline(f, pts[0], _num(arclen, "arclen"), tol)
    rows = [(t, *p, h) for t, p, h in zip(tr.times, tr.points, tr.h_values)]
    if args.format == "json":
        return to_json_text({"kind": tr.kind, "status": tr.status,
                             "rows": [dict(zip(("t", "x0", "x1", "x2", "h"), r)) for r in rows]}) + "\n"
    if tr.status != "completed":
        print(f"trace stopped early: {tr.status}", file=sys.stderr)
    return csv_text(("t", "x0", "x1", "x2", "h"), rows)


def cmd_scan(args, cfg: Config) -> str:
    if cfg.registered is None:
        raise ValidationError("scan: needs a registered field family")
    scan = cfg.raw.get("scan")
    if not isinstance(scan, dict) or set(scan) - {"ranges", "steps"} or "ranges" not in scan:
        raise ValidationError("scan: expected {\"ranges\": {name: [lo, hi]}, \"steps\": N}")
    name, params = cfg.registered
    fam = FAMILIES[name]
    ranges = {}
    if not isinstance(scan["ranges"], dict):
        raise ValidationError("scan.ranges: expected an object")
    for k, v in scan["ranges"].items():
        if k not in fam.defaults:
            raise ValidationError(f"scan.ranges: family {name!r} has no parameter {k!r}")
        if not isinstance(v, list) or len(v) != 2:
            raise ValidationError(f"scan.ranges.{k}: expected [lo, hi]")
        ranges[k] = (_num(v[0], f"scan.ranges.{k}"), _num(v[1], f"scan.ranges.{k}"))
    steps = _int(scan.get("steps", 1), "scan.steps")
    fixed = {k: v for k, v in params.items() if k not in ranges}
    box = _box(args, cfg)
    grid = _int(_opt(args, cfg, "grid", 20), "grid")
    tol = _num(_opt(args, cfg, "tol", 1e-9), "tol")
    rows = dyn.parameter_scan(lambda **kw: make_family(name, kw), ranges, steps, box, grid, tol, fixed)
    recs = []
    for r in rows:
        mu = dict(r.mu)
        recs.append({"mu": mu, "error": r.error} if r.error else _report_record(mu, r.report))
    return _records_out(recs, args.format or "json")


def cmd_series(args, cfg: Config) -> str:
    n = _int(_opt(args, cfg, "grid", 20), "grid")
    if n < 2:
        raise ValidationError("grid must be at least 2")
    if cfg.gasp is not None:
        box = _box(args, cfg)
        rows = [(x, r, gasp_eval(cfg.gasp, (x, r))) for x, r in _grid(box, n)]
        return csv_text(("x0", "rho", "g"), rows)
    if cfg.bi is not None:
        # box is read as [x1min, x1max, x2min, x2max] at the plane x0 = --x0
        box = _box(args, cfg, (0.1, 2.0, 0.1, 2.0))
        x0 = _num(_opt(args, cfg, "x0", 0.0), "x0")
        rows = [(x0, a, b, bi_eval(cfg.bi, (x0, a, b))) for a, b in _grid(box, n)]
        return csv_text(("x0", "x1", "x2", "h"), rows)
    raise ValidationError("series: needs a gasp or bihyperbolic source")


COMMANDS = {
    "eval": cmd_eval, "jacobian": cmd_jacobian, "spectrum": cmd_spectrum, "verify": cmd_verify,
    "equilibria": cmd_equilibria, "trace": cmd_trace, "scan": cmd_scan, "series": cmd_series,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="meridian", description="Potential meridional fields: evaluation, spectra, verification, dynamics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, metavar="PATH")
        sp.add_argument("--point", type=float, nargs=3, metavar=("X0", "X1", "X2"))
        sp.add_argument("--points", metavar="PATH", help="file with one 'x0 x1 x2' per line")
        sp.add_argument("--box", type=float, nargs=4, metavar=("X0MIN", "X0MAX", "RMIN", "RMAX"))
        sp.add_argument("--grid", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--t-end", dest="t_end", type=float)
        sp.add_argument("--arclen", type=float)
        sp.add_argument("--x0", type=float)
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--format", choices=("csv", "json"))
    return p


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code = EXIT_OK
    try:
        cfg = load_config(args.config)
        result = COMMANDS[args.command](args, cfg)
        if isinstance(result, tuple):
            text, code = result
        else:
            text = result
    except (ValidationError, DomainError) as exc:
        print(f"meridian {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MeridianError, ArithmeticError) as exc:
        print(f"meridian {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
