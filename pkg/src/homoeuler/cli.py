"""Command-line front end: classification reports, span scans, solution
construction, field export, and the acceptance checks.

Exit codes are a stable scripting contract: 0 success, 1 usage error,
2 domain/classification error, 3 numerical failure.  All floating-point
output is written with 17 significant digits so files round-trip to the
exact double.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import selfcheck
from .assemble import (
    GlobalSolution,
    GridSpec,
    LocalArc,
    Piece,
    SmoothnessKind,
    elliptic_global,
    energy_flux,
    export_grid,
    h1_seminorm,
    residual_max,
    stitch,
    weak_residuals,
)
from .classify import (
    CountKind,
    PSign,
    count_elliptic,
    solution_type,
    solve_all_elliptic,
    solve_elliptic,
    solve_hyperbolic_span,
)
from .config import RunConfig
from .core import FlowParams, steady_state
from .errors import DomainError, NumericalError, SpanMismatch
from .orbits import (
    PhaseState,
    ReturnToAxis,
    ReturnToStart,
    find_intercepts,
    integrate_orbit,
)
from .periods import span_any

__all__ = ["main", "serialize_solution", "solution_to_json", "parse_solution"]

SCHEMA_VERSION = 1
TWO_PI = 2.0 * math.pi


class UsageError(Exception):
    """Bad flag combination that argparse alone cannot catch."""


# ---------------------------------------------------------------------------
# serialization

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _emit(obj) -> str:
    """JSON text with every float at 17 significant digits.

    The stdlib encoder prints floats with repr's shortest form; the fixed
    width here keeps files diffable across runs and platforms.  Non-finite
    floats become null.
    """
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, float):
        return _fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, int):
        return repr(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(k)}: {_emit(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize_solution(g: GlobalSolution, diagnostics: bool = True) -> dict:
    """Schema: {schema_version, params, smoothness, pieces, diagnostics}.

    Beyond the minimal piece fields, endpoint_slope (null encodes the
    infinite cusp slope) and mesh_dtheta are carried along so a reloaded
    solution evaluates diagnostics with the builder's exact quadrature
    weights rather than a differencing fallback.
    """
    pieces = []
    for p in g.pieces:
        arc = p.arc
        slope = None if math.isinf(arc.endpoint_slope) else arc.endpoint_slope
        pieces.append({
            "B": arc.params.B,
            "sign": p.sign,
            "offset": p.offset,
            "span": arc.span,
            "endpoint_slope": slope,
            "profile": [list(row) for row in arc.profile],
            "mesh_dtheta": list(arc.mesh_dtheta),
        })
    out = {
        "schema_version": SCHEMA_VERSION,
        "params": {"lambda": g.lam, "P": g.P},
        "smoothness": g.smoothness.name,
        "pieces": pieces,
    }
    if diagnostics:
        out["diagnostics"] = {
            "flux": energy_flux(g),
            "residual_max": residual_max(g),
            "weak_residuals": list(weak_residuals(g)),
            "h1_norm": h1_seminorm(g),
        }
    return out


def solution_to_json(g: GlobalSolution, diagnostics: bool = True) -> str:
    return _emit(serialize_solution(g, diagnostics)) + "\n"


def parse_solution(source) -> GlobalSolution:
    """Rebuild a GlobalSolution from serialized form (dict or JSON text).

    Inverse of serialize_solution up to dataclass equality; the type tag
    is recomputed from the parameters, diagnostics are ignored.
    """
    d = json.loads(source) if isinstance(source, str) else source
    if d.get("schema_version") != SCHEMA_VERSION:
        raise DomainError(
            f"unsupported schema_version {d.get('schema_version')!r}")
    lam = float(d["params"]["lambda"])
    P = float(d["params"]["P"])
    pieces = []
    for pc in d["pieces"]:
        fp = FlowParams(lam, P, float(pc["B"]))
        slope = pc["endpoint_slope"]
        slope = math.inf if slope is None else float(slope)
        profile = tuple(tuple(float(v) for v in row) for row in pc["profile"])
        arc = LocalArc(fp, float(pc["span"]), profile, slope,
                       solution_type(fp),
                       tuple(float(w) for w in pc["mesh_dtheta"]))
        pieces.append(Piece(arc, int(pc["sign"]), float(pc["offset"])))
    return GlobalSolution(lam, P, tuple(pieces),
                          SmoothnessKind[d["smoothness"]])


FIELD_COLUMNS = ["r", "theta", "x", "y", "u_x", "u_y",
                 "psi_value", "stream", "vorticity", "pressure"]


def field_csv(g: GlobalSolution, grid: GridSpec) -> str:
    """Plot-ready polar field table; singular-ray cells stay empty."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELD_COLUMNS)
    for r, theta, s in export_grid(g, grid):
        if s is None:
            w.writerow([_fmt(r), _fmt(theta)] + [""] * 8)
            continue
        vals = [s.x, s.y, s.u_x, s.u_y, s.psi, s.stream, s.vorticity,
                s.pressure]
        w.writerow([_fmt(r), _fmt(theta)]
                   + [_fmt(v) if math.isfinite(v) else "" for v in vals])
    return buf.getvalue()


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# classify

UNKNOWN_NOTE = ("the elliptic census for this lambda remains unresolved "
                "at this moment")


def _classify_report(lam: float) -> dict:
    if lam <= 0.0:
        raise DomainError(f"classification requires lambda > 0, got {lam!r}")
    rep = {"lambda": lam}
    if lam == 1.0:
        rep["summary"] = "all solutions are parallel shear flows"
        rep["elliptic"] = {"count": "Zero", "n": None, "entries": []}
        rep["hyperbolic"] = {"admissible": False}
        rep["families"] = ["parallel shear (any profile of x alone)"]
        return rep

    cat = count_elliptic(lam)
    if cat.count is CountKind.Finite and cat.n:
        cat = solve_all_elliptic(lam)
    entries = [{"n": n, "P_star": p_star, "period": period}
               for n, p_star, period in cat.entries]
    rep["elliptic"] = {"count": cat.count.name, "n": cat.n, "entries": entries}
    if cat.count is CountKind.Unknown:
        rep["caveat"] = UNKNOWN_NOTE

    if lam > 1.0:
        rep["hyperbolic"] = {
            "admissible": True, "pressure_sign": "negative",
            "span_B_pos": [math.pi / lam, math.pi],
            "span_B_zero": math.pi / lam,
            "span_B_neg": [0.0, math.pi / lam],
        }
    elif lam > 0.5:
        rep["hyperbolic"] = {
            "admissible": True, "pressure_sign": "positive",
            "span_B_pos": [0.0, math.pi],
            "span_B_zero": None, "span_B_neg": None,
        }
    else:
        rep["hyperbolic"] = {"admissible": False}

    fams = []
    fams.append("rotational (P %s 0)" % (">" if lam > 1.0 else "<"))
    fams.append("parallel shear (P = 0)")
    if lam > 1.0:
        fams.append("harmonic arch (B = 0, span pi/lambda)")
    rep["families"] = fams
    return rep


def _classify_text(rep: dict) -> str:
    lines = [f"lambda = {rep['lambda']:g}"]
    if "summary" in rep:
        lines.append(rep["summary"])
        return "\n".join(lines) + "\n"
    ell = rep["elliptic"]
    kind = ell["count"]
    if kind == "Finite" and ell["n"]:
        plural = "s" if ell["n"] != 1 else ""
        lines.append(f"elliptic: {ell['n']} solution{plural}")
        for e in ell["entries"]:
            lines.append(f"  n = {e['n']}: P* = {_fmt(e['P_star'])}, "
                         f"period = {_fmt(e['period'])}")
    elif kind == "Continuum":
        lines.append("elliptic: continuum "
                     "(every P in (0, P_max) closes with period pi)")
    elif kind == "Unknown":
        lines.append(f"elliptic: unknown ({UNKNOWN_NOTE})")
    else:
        lines.append("elliptic: none")
    hyp = rep["hyperbolic"]
    if not hyp["admissible"]:
        lines.append("hyperbolic: none for this lambda")
    elif hyp["span_B_zero"] is not None:
        lines.append("hyperbolic (P < 0): life-spans in "
                     f"({_fmt(hyp['span_B_pos'][0])}, pi) for B > 0, "
                     f"exactly {_fmt(hyp['span_B_zero'])} at B = 0, "
                     f"(0, {_fmt(hyp['span_B_neg'][1])}) for B < 0")
    else:
        lines.append("hyperbolic (P > 0): life-spans in (0, pi) for B > 0; "
                     "none for B <= 0")
    lines.append("trivial families: " + ", ".join(rep["families"]))
    return "\n".join(lines) + "\n"


def _cmd_classify(args) -> int:
    rep = _classify_report(args.lam)
    text = _emit(rep) + "\n" if args.json else _classify_text(rep)
    _write(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# period-scan

def _scan_grid(args):
    """Log-spaced pressures in descending order, plus the Bernoulli sign.

    Descending order makes the table read off the analytic limits directly:
    elliptic scans run from the center value toward the separatrix, and
    hyperbolic ones from the separatrix toward the deep-pressure limit.
    """
    lam = args.lam
    n = args.n_points
    if args.region == "elliptic":
        pm = steady_state(lam, 1.0).P_max
        lo = args.p_min if args.p_min is not None else 1e-4 * pm
        hi = args.p_max if args.p_max is not None else (1.0 - 1e-4) * pm
        if not 0.0 < lo < hi:
            raise UsageError("elliptic scan needs 0 < p-min < p-max")
        ps = np.geomspace(hi, lo, n)
        B = 1.0
    else:
        B = 1.0 if args.b_sign == "plus" else -1.0
        lo = args.p_min if args.p_min is not None else -100.0
        hi = args.p_max if args.p_max is not None else -0.01
        if not lo < hi < 0.0:
            raise UsageError("hyperbolic scan needs p-min < p-max < 0")
        ps = -np.geomspace(-hi, -lo, n)
    return [float(p) for p in ps], B


def _verdict(ts) -> str:
    t = np.asarray(ts)
    if t.max() - t.min() <= 1e-8:
        return "constant within 1e-8"
    d = np.diff(t)
    if np.all(d > 0.0):
        return "strictly increasing"
    if np.all(d < 0.0):
        return "strictly decreasing"
    return "not monotone"


def _cmd_period_scan(args) -> int:
    ps, B = _scan_grid(args)
    rows = []
    for P in ps:
        r = span_any(FlowParams(args.lam, P, B))
        rows.append((P, r.T, r.est_error))
    verdict = _verdict([t for _, t, _ in rows])
    if args.format == "json":
        text = _emit({"lambda": args.lam, "B": B,
                      "rows": [{"P": p, "T": t, "est_error": e}
                               for p, t, e in rows],
                      "monotonicity": verdict}) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["P", "T", "est_error"])
        for row in rows:
            w.writerow([_fmt(v) for v in row])
        buf.write(f"# monotonicity: {verdict}\n")
        text = buf.getvalue()
    else:
        lines = [f"{'P':>24} {'T':>24} {'est_error':>12}"]
        for p, t, e in rows:
            lines.append(f"{_fmt(p):>24} {_fmt(t):>24} {e:>12.3e}")
        lines.append(f"monotonicity: {verdict}")
        text = "\n".join(lines) + "\n"
    _write(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# construct

def _parse_signs(pattern: str, n: int):
    if len(pattern) != n or set(pattern) - {"+", "-"}:
        raise UsageError(
            f"--signs needs exactly {n} characters drawn from '+-'")
    return [1 if c == "+" else -1 for c in pattern]


def _parse_specs(text: str):
    specs = []
    for part in text.split(","):
        try:
            b_str, s_str = part.split(":")
            sign = {"+": 1, "-": -1}[s_str.strip()]
            specs.append((float(b_str), sign))
        except (ValueError, KeyError):
            raise UsageError(
                f"bad --specs entry {part!r}; expected B:+ or B:-") from None
    return specs


def _make_config(args) -> RunConfig:
    overrides = {}
    for name in ("quadrature_tol", "root_tol", "ode_tol",
                 "points_per_arc", "max_arcs"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    if getattr(args, "config", None):
        return RunConfig.from_file(args.config, **overrides)
    return RunConfig(**overrides)


def _build_solution(args, cfg: RunConfig) -> GlobalSolution:
    lam = args.lam
    if args.elliptic_n is not None:
        root = solve_elliptic(lam, args.elliptic_n, tol=cfg.root_tol)
        if root.P_star is not None:
            P = root.P_star
        elif args.pressure is not None:
            P = args.pressure
        else:
            P = 0.5 * steady_state(lam, 1.0).P_max
        return elliptic_global(lam, P, 1.0, n_points=cfg.points_per_arc)
    if args.equal_arcs is not None:
        n = args.equal_arcs
        target = TWO_PI / n
        if not target < math.pi:
            raise SpanMismatch(
                f"{n} equal arcs need span {_fmt(target)} each, but "
                "life-spans are confined to the open interval (0, pi); "
                "the arcs cannot tile 2 pi")
        P = args.pressure
        if P is None:
            P = -1.0 if lam > 1.0 else 1.0
        sgn = PSign.Minus if P < 0.0 else PSign.Plus
        b_unit, _ = solve_hyperbolic_span(lam, sgn, target, tol=cfg.root_tol)
        # spans are invariant under (P, B) -> (c^2 P, c^(2/lam) B)
        B = abs(P) ** (1.0 / lam) * b_unit
        signs = (_parse_signs(args.signs, n) if args.signs
                 else [1 if i % 2 == 0 else -1 for i in range(n)])
        specs = [(B, s) for s in signs]
    else:
        if args.pressure is None:
            raise UsageError("--specs requires --pressure")
        P = args.pressure
        specs = _parse_specs(args.specs)
        if args.signs:
            signs = _parse_signs(args.signs, len(specs))
            specs = [(b, s) for (b, _), s in zip(specs, signs)]
    return stitch(lam, P, specs, auto_repair=args.auto_repair,
                  n_points=cfg.points_per_arc, max_arcs=cfg.max_arcs)


def _parse_grid(text: str) -> GridSpec:
    try:
        r0, r1, nr, nt = text.split(":")
        return GridSpec(float(r0), float(r1), int(nr), int(nt))
    except ValueError:
        raise UsageError(
            f"bad --grid {text!r}; expected rmin:rmax:nr:ntheta") from None


def _cmd_construct(args) -> int:
    cfg = _make_config(args)
    g = _build_solution(args, cfg)
    _write(solution_to_json(g), args.out if args.out else cfg.output)
    if args.field_out or args.grid:
        if not (args.field_out and args.grid):
            raise UsageError("--grid and --field-out go together")
        _write(field_csv(g, _parse_grid(args.grid)), args.field_out)
    return 0


# ---------------------------------------------------------------------------
# flux / export-field / phase-portrait

def _load_solution(path) -> GlobalSolution:
    if path == "-":
        return parse_solution(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as fh:
        return parse_solution(fh.read())


def _cmd_flux(args) -> int:
    g = _load_solution(args.infile)
    flux = energy_flux(g)
    scale = max(1.0, h1_seminorm(g) ** 1.5)
    sys.stdout.write(f"flux = {_fmt(flux)}\n")
    sys.stdout.write(f"scaled magnitude = {_fmt(abs(flux) / scale)}\n")
    return 0


def _cmd_export_field(args) -> int:
    g = _load_solution(args.infile)
    _write(field_csv(g, _parse_grid(args.grid)), args.out)
    return 0


def _cmd_phase_portrait(args) -> int:
    try:
        bs = [float(b) for b in args.b_values.split(",")]
    except ValueError:
        raise UsageError(
            f"bad --b-values {args.b_values!r}; expected e.g. 0.5,1,2"
        ) from None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["B", "t", "x", "y"])
    for B in bs:
        p = FlowParams(args.lam, args.pressure, B)
        ic = find_intercepts(p)
        if args.pressure > 0.0 and args.lam > 1.0:
            start, stop = PhaseState(ic.x1, 0.0), ReturnToStart()
        else:
            start, stop = PhaseState(ic.x0, 0.0), ReturnToAxis()
        orbit = integrate_orbit(p, start, stop)
        for t, x, y in zip(*orbit.as_arrays()):
            w.writerow([_fmt(B), _fmt(t), _fmt(x), _fmt(y)])
    _write(buf.getvalue(), args.out)
    return 0


# ---------------------------------------------------------------------------
# selfcheck

def _cmd_selfcheck(args) -> int:
    if args.list:
        for name, title, _ in selfcheck.CRITERIA:
            sys.stdout.write(f"{name}  {title}\n")
        return 0
    failures = 0
    total = 0
    for name, title, ok, detail in selfcheck.run_all():
        total += 1
        failures += 0 if ok else 1
        word = "PASS" if ok else "FAIL"
        sys.stdout.write(f"{name} {word}  {title}: {detail}\n")
    sys.stdout.write(f"passed {total - failures} of {total}\n")
    return 3 if failures else 0


# ---------------------------------------------------------------------------
# parser

def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="homoeuler",
        description="Homogeneous stationary Euler flows: classification, "
                    "life-spans, global solutions, field export.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="solution census at one lambda")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("period-scan", help="life-span table over a P grid")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--region", choices=["elliptic", "hyperbolic"],
                   default="elliptic")
    p.add_argument("--b-sign", choices=["plus", "minus"], default="plus",
                   help="Bernoulli sign for hyperbolic scans")
    p.add_argument("--p-min", type=float, default=None)
    p.add_argument("--p-max", type=float, default=None)
    p.add_argument("--n-points", type=_positive_int, default=20)
    p.add_argument("--format", choices=["text", "json", "csv"],
                   default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_period_scan)

    p = sub.add_parser("construct", help="build and serialize a 2 pi solution")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--pressure", type=float, default=None)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--equal-arcs", type=_positive_int, default=None,
                     help="N identical arcs, solving B for span 2 pi/N")
    how.add_argument("--elliptic-n", type=_positive_int, default=None,
                     help="elliptic solution closing in n periods")
    how.add_argument("--specs", default=None,
                     help="comma list of B:+ or B:- arc specs")
    p.add_argument("--signs", default=None,
                   help="sign pattern like +-+ overriding the default")
    p.add_argument("--auto-repair", action="store_true",
                   help="re-solve the last B so the arcs tile exactly")
    p.add_argument("--out", default=None)
    p.add_argument("--grid", default=None, help="rmin:rmax:nr:ntheta")
    p.add_argument("--field-out", default=None)
    p.add_argument("--config", default=None, help="JSON RunConfig file")
    p.add_argument("--quadrature-tol", type=float, default=None)
    p.add_argument("--root-tol", type=float, default=None)
    p.add_argument("--ode-tol", type=float, default=None)
    p.add_argument("--points-per-arc", type=int, default=None)
    p.add_argument("--max-arcs", type=int, default=None)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("flux", help="energy flux of a stored solution")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_flux)

    p = sub.add_parser("phase-portrait", help="orbit samples as CSV")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--pressure", type=float, required=True)
    p.add_argument("--b-values", default="1")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_phase_portrait)

    p = sub.add_parser("export-field", help="field grid CSV from a solution")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--grid", required=True, help="rmin:rmax:nr:ntheta")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_export_field)

    p = sub.add_parser("selfcheck", help="run the acceptance criteria")
    p.add_argument("--list", action="store_true",
                   help="print the criteria without running them")
    p.set_defaults(func=_cmd_selfcheck)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except DomainError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return 2
    except NumericalError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
