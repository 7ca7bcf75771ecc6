"""Command-line front end.

Every command reads a JSON configuration ``{"alphas": [...], "betas": [...]}``
and writes CSV (header row, 17 significant digits) or JSON to stdout or
``--out``.  Exit status is 0 on success, 1 when a computation fails or a
verification check does not pass, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import chebyshev as C
from .auxpoly import AuxCache
from .elliptic import EllipticContext, genus1_closed_form
from .errors import GenChebError, UsageError
from .intervals import BranchConfig, band_of
from .mapping import (
    build_mapping,
    contour_samples,
    detect_period,
    equilibrium_charges,
    periodic_family,
    rational_charges,
)
from .recurrence import RecurrenceTable, stieltjes_table
from .verify import Verifier
from .zeros import roots_of_Pn, roots_of_Qn

DEFAULT_N = 24
DEFAULT_GRID = 400


@dataclass
class RunReport:
    """What a command consumed, produced and checked."""

    command: str
    inputs: dict
    outputs: object = None
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def add_check(self, name: str, measured, tolerance: float, passed: bool) -> None:
        self.checks.append({"name": name, "measured": measured, "tolerance": tolerance, "pass": bool(passed)})

    def to_json(self) -> str:
        return json.dumps(
            {"command": self.command, "inputs": self.inputs, "outputs": self.outputs, "checks": self.checks, "ok": self.ok},
            allow_nan=False,
            indent=2,
            default=_json_default,
        )


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return "%.17g" % float(v)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _load_config(args) -> BranchConfig:
    if not args.config:
        raise UsageError("--config is required")
    path = Path(args.config)
    if not path.exists():
        raise UsageError(f"config file not found: {path}")
    try:
        return BranchConfig.from_json(path)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}") from exc


def _table(cfg: BranchConfig, N: int) -> RecurrenceTable:
    return stieltjes_table(cfg, N)


def _cmd_coeffs(args, report):
    cfg = _load_config(args)
    N = args.n or DEFAULT_N
    method = args.method or "stieltjes"
    rows = []
    if method == "stieltjes":
        t = _table(cfg, N)
        rows = [(n, a, b, h) for n, a, b, h in t.rows()]
    elif method == "elliptic":
        if cfg.g != 1:
            raise UsageError("--method elliptic needs one gap")
        (al,), (be,) = cfg.alphas, cfg.betas
        ctx = EllipticContext.of(al, be)
        for n in range(2, N + 1):
            a, b = genus1_closed_form(al, be, n, ctx)
            rows.append((n, a, b, float("nan")))
        return to_csv(["n", "a_n", "b_n"], [r[:3] for r in rows])
    else:
        raise UsageError(f"unknown method {method!r} for coeffs")
    return to_csv(["n", "a_n", "b_n", "h_n"], rows)


def _cmd_eval(args, report):
    cfg = _load_config(args)
    if args.n is None or not args.x:
        raise UsageError("eval needs -n and --x")
    method = args.method or "recurrence"
    t = _table(cfg, max(args.n + cfg.g + 1, DEFAULT_N))
    rows = []
    aux = AuxCache(cfg, t) if method == "product" else None
    for x in args.x:
        if method == "recurrence":
            p, q = C.evaluate_pair(t, args.n, x)
        elif method == "product":
            p, q = C.evaluate_product(cfg, t, aux, args.n, x)
        else:
            raise UsageError(f"unknown method {method!r} for eval")
        rows.append((x, float(p), float(q)))
    return to_csv(["x", "P_n", "Q_n"], rows)


def _cmd_aux(args, report):
    cfg = _load_config(args)
    n_top = args.n or 10
    t = _table(cfg, max(n_top + cfg.g + 2, DEFAULT_N))
    aux = AuxCache(cfg, t)
    out = []
    for n in range(1, n_top + 1):
        p = aux(n)
        out.append({"n": n, "eta": p.eta.tolist(), "xi": p.xi.tolist(), "gamma": [float(g) for g in p.gammas]})
    report.outputs = out
    return None


def _cmd_map(args, report):
    action = args.action
    if action == "family":
        if args.variant is None:
            K = args.K or 3
            rows = contour_samples(K, args.count)
            return to_csv(["alpha", "beta", "K"], rows)
        params = dict(kv.split("=", 1) for kv in (args.param or []))
        fam = periodic_family(args.K or 3, args.variant, **{k: float(v) for k, v in params.items()})
        report.outputs = {
            "K": fam.K,
            "variant": fam.variant,
            "config": fam.cfg.to_dict(),
            "a": list(fam.a),
            "b": list(fam.b),
            "touch_points": list(fam.touch_points),
        }
        return None
    cfg = _load_config(args)
    charges = equilibrium_charges(cfg)
    K = detect_period(charges, args.kmax, args.tol or 1e-6)
    out = {"K": K, "Bhat": list(charges.Bhat), "rational": [str(f) for f in rational_charges(charges)]}
    if action == "detect":
        report.outputs = out
        return None
    if action != "build":
        raise UsageError(f"unknown map action {action!r}")
    K = args.K or K
    if K is None:
        raise UsageError("no period detected; pass --K")
    t = _table(cfg, max(K + 2, DEFAULT_N))
    m = build_mapping(cfg, t, K)
    out.update(
        {
            "K": K,
            "DeltaK": m.DeltaK,
            "M_coeffs": m.M_coeffs.tolist(),
            "touch_points": list(m.touch_points),
            "constraints": m.constraints,
        }
    )
    for c in m.constraints:
        report.add_check(c["name"], abs(c["value"] - c["target"]), 1e-8, c["ok"])
    report.outputs = out
    return None


def _cmd_zeros(args, report):
    cfg = _load_config(args)
    if args.n is None:
        raise UsageError("zeros needs -n")
    t = _table(cfg, max(args.n + 1, DEFAULT_N))
    kind = (args.method or "P").upper()
    roots = roots_of_Pn(t, args.n) if kind == "P" else roots_of_Qn(t, args.n)
    rows = []
    for r in roots:
        b = band_of(cfg, float(r), 1e-10)
        rows.append((float(r), -1 if b is None else b))
    return to_csv(["root", "band_index"], rows)


def _cmd_disc(args, report):
    cfg = _load_config(args)
    n_top = args.n or 8
    method = args.method or "direct"
    t = _table(cfg, max(n_top + cfg.g + 2, DEFAULT_N))
    aux = AuxCache(cfg, t)
    rows = [(n, C.discriminant(cfg, t, aux, n, method)) for n in range(2, n_top + 1)]
    return to_csv(["n", "D"], rows)


def _envelope_rows(cfg, t, aux, K, n, j, grid):
    rows = []
    for i, (lo, hi) in enumerate(cfg.bands):
        x = np.linspace(lo, hi, grid + 2)[1:-1]
        p = C.normalized_polynomial(t, K, n, j, x)
        r = C.envelope(cfg, aux, t, K, n, j, x)
        rows.extend(zip(x, p, r, -r, [i] * len(x)))
    return rows


def _periodic_setup(args):
    cfg = _load_config(args)
    K = args.K or detect_period(equilibrium_charges(cfg))
    if K is None:
        raise UsageError("no period detected; pass --K")
    n = args.n or 1
    j = args.j or 0
    if not 0 <= j < K:
        raise UsageError("--j must satisfy 0 <= j < K")
    t = _table(cfg, max(n * K + j + cfg.g + 2, DEFAULT_N))
    return cfg, K, n, j, t, AuxCache(cfg, t)


def _cmd_envelope(args, report):
    cfg, K, n, j, t, aux = _periodic_setup(args)
    rows = _envelope_rows(cfg, t, aux, K, n, j, args.grid)
    excess = max(abs(p) - r for _, p, r, _, _ in rows)
    tol = args.tol or 1e-8
    report.add_check("max(|P_hat| - rho_hat)", float(excess), tol, excess <= tol)
    report.outputs = {"K": K, "n": n, "j": j, "max_excess": float(excess)}
    return None


def _cmd_plot_data(args, report):
    cfg, K, n, j, t, aux = _periodic_setup(args)
    return to_csv(["x", "P_hat", "rho", "minus_rho", "band"], _envelope_rows(cfg, t, aux, K, n, j, args.grid))


def _cmd_verify(args, report):
    cfg = _load_config(args)
    v = Verifier(cfg, N=args.n or DEFAULT_N, seed=args.seed, tol=args.tol)
    for c in v.run(args.suite):
        report.checks.append(
            {"name": c.name, "measured": c.measured, "tolerance": c.tolerance, "pass": c.passed, "error": c.error}
        )
    report.outputs = {"suite": args.suite, "count": len(report.checks)}
    return None


COMMANDS = {
    "coeffs": _cmd_coeffs,
    "eval": _cmd_eval,
    "aux": _cmd_aux,
    "map": _cmd_map,
    "zeros": _cmd_zeros,
    "disc": _cmd_disc,
    "envelope": _cmd_envelope,
    "verify": _cmd_verify,
    "plot-data": _cmd_plot_data,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with alphas and betas")
    common.add_argument("-n", type=int, help="degree, index or horizon")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--method")
    common.add_argument("--K", type=int)

    parser = _Parser(prog="gencheb", description="Orthogonal polynomials on several intervals")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("coeffs", parents=[common], help="recurrence table as CSV")
    p = sub.add_parser("eval", parents=[common], help="P_n and Q_n at points")
    p.add_argument("--x", type=float, nargs="+")
    sub.add_parser("aux", parents=[common], help="auxiliary polynomials as JSON")
    p = sub.add_parser("map", parents=[common], help="period detection and mappings")
    p.add_argument("action", choices=["detect", "build", "family"])
    p.add_argument("--kmax", type=int, default=64)
    p.add_argument("--variant")
    p.add_argument("--param", action="append", help="family parameter as name=value")
    p.add_argument("--count", type=int, default=50)
    sub.add_parser("zeros", parents=[common], help="zeros of P_n (or Q_n with --method Q)")
    sub.add_parser("disc", parents=[common], help="discriminants of P_2..P_n")
    for name in ("envelope", "plot-data"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--j", type=int, default=0)
        p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p = sub.add_parser("verify", parents=[common], help="run a check suite")
    p.add_argument("--suite", default="all", choices=["all", *Verifier.SUITES])
    return parser


def execute(argv) -> tuple[RunReport, str | None]:
    """Parse ``argv`` and run the command.

    Returns the report and, for tabular commands, the CSV text.

    Raises
    ------
    UsageError
        For malformed arguments.
    GenChebError
        When the computation fails.
    """
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("a command is required")
    inputs = {k: v for k, v in vars(args).items() if v is not None and k != "command"}
    report = RunReport(args.command, inputs)
    text = COMMANDS[args.command](args, report)
    return report, text


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        report, text = execute(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (GenChebError, ArithmeticError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    out = report.inputs.get("out")
    _emit(text if text is not None else report.to_json(), out)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
