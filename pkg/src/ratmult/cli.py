"""Command-line front end: ``ratmult <command> [flags]``.

Every command writes one JSON report (stdout or ``--output``).  Exit status is
0 on success, 1 on domain errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from . import _numeric
from .certificate import (
    DEFAULT_MAX_BACKTRACK,
    DEFAULT_TOL,
    certificate_from_json,
    certificate_to_dict,
    construct_certificate,
    explore_beyond_conditions,
    verify_certificate,
)
from .derivatives import DEFAULT_H, dlambda_closed, dlambda_infinity, dlambda_numeric
from .errors import DynamicsError, Exhausted
from .jacobian import relative_error
from .periodic import (
    ambient_modulus,
    count_nonzero,
    count_periodic,
    enumerate_periodic,
    orbit_of,
    orbit_representatives,
)
from .ratmap import INFINITY, param_indices
from .report import complex_json, dumps

COMMANDS = ("count", "enumerate", "derivs", "cert", "verify", "explore")


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    periods: Optional[list] = None
    m: Optional[int] = None
    tol: float = DEFAULT_TOL
    h: float = DEFAULT_H
    precision_bits: Optional[int] = None
    max_backtrack: int = DEFAULT_MAX_BACKTRACK
    output_path: Optional[str] = None
    certificate_path: Optional[str] = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not (self.tol > 0 and self.h > 0):
            raise ValueError("--tol and --h must be positive")
        if self.max_backtrack < 1:
            raise ValueError("--max-backtrack must be positive")
        needs = {
            "count": ("n", "m"),
            "enumerate": ("n", "m"),
            "derivs": ("n", "m"),
            "cert": ("n", "periods"),
            "explore": ("n", "periods"),
            "verify": ("certificate_path",),
        }[self.command]
        for name in needs:
            if getattr(self, name) is None:
                flag = "certificate" if name == "certificate_path" else "--" + name
                raise ValueError(f"{self.command} requires {flag}")
        if self.n is not None and self.n < 2:
            raise ValueError("--n must be at least 2")
        if self.m is not None and self.m < 1:
            raise ValueError("--m must be positive")


def _point(p):
    return "infinity" if p is INFINITY else {"modulus": p.modulus, "residue": p.residue}


def derivs_table(n: int, m: int, h: float = DEFAULT_H) -> dict:
    """Closed form vs finite differences for every period-m point (and infinity when m = 1)."""
    ambient_modulus(n, m)
    cols = param_indices(n)
    reps = {p.residue for p in orbit_representatives(n, m)}
    points = list(enumerate_periodic(n, m))
    if m == 1:
        points.append(INFINITY)
    rows, worst = [], 0.0
    for p in points:
        entries = []
        for j in cols:
            closed = dlambda_infinity(n, j) if p is INFINITY else dlambda_closed(n, m, j, p)
            numeric = dlambda_numeric(n, m, j, p, h)
            err = relative_error(closed, numeric)
            worst = max(worst, err)
            entries.append({"j": j, "closed": complex_json(closed),
                            "numeric": complex_json(numeric), "rel_err": err})
        rows.append({
            "point": _point(p),
            "orbit_representative": p is INFINITY or p.residue in reps,
            "entries": entries,
        })
    return {"command": "derivs", "n": n, "m": m, "h": h, "columns": cols,
            "rows": rows, "max_rel_err": worst}


def _execute(cfg: RunConfig) -> dict:
    if cfg.command == "count":
        nu_hat = count_nonzero(cfg.n, cfg.m)
        return {"command": "count", "n": cfg.n, "m": cfg.m,
                "nu": count_periodic(cfg.n, cfg.m), "nu_hat": nu_hat, "orbits": nu_hat // cfg.m}
    if cfg.command == "enumerate":
        reps = orbit_representatives(cfg.n, cfg.m)
        return {"command": "enumerate", "n": cfg.n, "m": cfg.m,
                "modulus": ambient_modulus(cfg.n, cfg.m),
                "residues": [p.residue for p in enumerate_periodic(cfg.n, cfg.m)],
                "orbits": [[q.residue for q in orbit_of(p, cfg.n)] for p in reps]}
    if cfg.command == "derivs":
        return derivs_table(cfg.n, cfg.m, cfg.h)
    if cfg.command == "cert":
        cert = construct_certificate(cfg.n, cfg.periods, tol=cfg.tol, h=cfg.h,
                                     max_backtrack=cfg.max_backtrack)
        return certificate_to_dict(cert)
    if cfg.command == "explore":
        cert = explore_beyond_conditions(cfg.n, cfg.periods, tol=cfg.tol, h=cfg.h,
                                         max_backtrack=cfg.max_backtrack)
        return certificate_to_dict(cert)
    # verify
    if cfg.certificate_path == "-":
        text = sys.stdin.read()
    else:
        with open(cfg.certificate_path) as fh:
            text = fh.read()
    cert = certificate_from_json(text)
    ver = verify_certificate(cert, h=cfg.h, tol=cfg.tol)
    return {"command": "verify", "status": "pass", "n": cert.n,
            "max_rel_err": ver.max_rel_err, "min_abs_leading_det": ver.min_abs_leading_det,
            "thresholds": list(ver.thresholds)}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit status, report)."""
    try:
        cfg.validate()
    except ValueError as exc:
        return 2, {"error": "UsageError", "message": str(exc)}
    try:
        with _numeric.precision(cfg.precision_bits):
            return 0, _execute(cfg)
    except DynamicsError as exc:
        report = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, Exhausted):
            report.update(slot=exc.slot, candidate_dets=exc.candidate_dets, nodes=exc.nodes)
        return 1, report
    except (ValueError, OSError) as exc:
        return 2, {"error": type(exc).__name__, "message": str(exc)}


def _periods(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad period list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--periods", type=_periods, help="comma-separated, e.g. 1,1,4,1")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--h", type=float, default=DEFAULT_H)
    common.add_argument("--precision-bits", type=int)
    common.add_argument("--max-backtrack", type=int, default=DEFAULT_MAX_BACKTRACK)
    common.add_argument("--output", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="ratmult",
        description="Periodic points, multiplier derivatives and Jacobian certificates for z^n.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("count", parents=[common], help="count points of minimal period m")
    sub.add_parser("enumerate", parents=[common], help="list period-m residues and cycles")
    sub.add_parser("derivs", parents=[common], help="closed-form vs numeric derivative table")
    sub.add_parser("cert", parents=[common], help="construct and verify a certificate")
    verify = sub.add_parser("verify", parents=[common], help="re-verify a certificate file")
    verify.add_argument("certificate", help="certificate JSON path, or - for stdin")
    sub.add_parser("explore", parents=[common], help="search with condition (ii) waived")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command, n=args.n, periods=args.periods, m=args.m, tol=args.tol,
        h=args.h, precision_bits=args.precision_bits, max_backtrack=args.max_backtrack,
        output_path=args.output, certificate_path=getattr(args, "certificate", None),
    )
    status, report = run(cfg)
    text = dumps(report)
    if status == 2:
        sys.stderr.write(text)
    elif cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
