"""``lyapcert`` command line.

Exit codes: 0 success, 1 negative or inconclusive analysis, 2 usage or input
error, 3 a surviving candidate on the `paper` catalog system (can only be a bug).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from . import certify, nonexist, simulate
from .algebra import RationalFunction, parse_poly, parse_rational_function
from .svg import render_figure
from .systems import CATALOG_NAMES, float_function, get_system

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CONTRADICTION = 0, 1, 2, 3

log = logging.getLogger("lyapcert")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = ""
    system: str = "paper"
    certificate: Optional[str] = None
    kmax: int = 6
    cap: int = 200
    x0: List[float] = field(default_factory=lambda: [2.0, 2.0])
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    t_max: float = 50.0
    levels: List[str] = field(default_factory=lambda: ["1/4", "1", "4"])
    out: str = "."
    report: Optional[str] = None
    seed: int = 0

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


def dump_document(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(out_dir: str, name: str, text: str) -> str:
    try:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {name} to {out_dir}: {exc}") from exc
    return path


def _system(name: str):
    try:
        return get_system(name)
    except KeyError:
        raise UsageError(f"unknown system {name!r}; try one of {', '.join(CATALOG_NAMES)}") from None


def _read_certificate(arg: str) -> RationalFunction:
    text = arg
    if os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
    try:
        return parse_rational_function(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse certificate: {exc}") from exc


# ---------------------------------------------------------------------------

def cmd_list(cfg: RunConfig) -> int:
    for name in CATALOG_NAMES:
        e = get_system(name)
        f = e.field
        print(f"{name}: {e.description}")
        print(f"  f0 = ({f.f0[0]}, {f.f0[1]})")
        print(f"  f1 = ({f.f1[0]}, {f.f1[1]})")
        if e.known_certificate is not None:
            print(f"  certificate [{e.certificate_kind}] = {e.known_certificate}")
    return EXIT_OK


def run_verify(cfg: RunConfig):
    entry = _system(cfg.system)
    W = _read_certificate(cfg.certificate) if cfg.certificate else entry.known_certificate
    if W is None:
        raise UsageError(f"system {cfg.system!r} has no catalog certificate; pass --certificate")
    if entry.certificate_kind == "rational":
        report = certify.verify_rational_lyapunov(W, entry.field)
    else:
        if not W.is_polynomial():
            raise UsageError("this system takes polynomial certificates")
        V = W.num.scale(1 / W.den.coeff(0, 0))
        scope = "global_homogeneous" if entry.certificate_kind == "global" and V.is_homogeneous() else "local"
        try:
            report = certify.verify_polynomial_lyapunov(V, entry.field.full, scope)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return report


def cmd_verify(cfg: RunConfig) -> int:
    report = run_verify(cfg)
    doc = {"command": "verify", "config": cfg.to_dict(), "system": cfg.system,
           "report": report.to_dict()}
    path = _write(cfg.out, "verify_report.json", dump_document(doc))
    print(report.summary())
    print(f"report: {path}")
    return EXIT_OK if report.overall else EXIT_NEGATIVE


def run_nonexist(cfg: RunConfig):
    if cfg.kmax < 2 or cfg.kmax % 2:
        raise UsageError("--kmax must be an even integer >= 2")
    if cfg.cap < 1:
        raise UsageError("--cap must be positive")
    entry = _system(cfg.system)
    try:
        nonexist.check_f0(entry.field.f0)
    except ValueError as exc:
        raise UsageError(f"system {cfg.system!r} is not supported by the sweep: {exc}") from None
    reports = nonexist.cutting_plane_sweep(entry.field, cfg.kmax, cfg.cap)
    doc = {
        "command": "nonexist",
        "config": cfg.to_dict(),
        "system": cfg.system,
        "f0": [str(c) for c in entry.field.f0],
        "reports": [r.to_dict() for r in reports],
        "skipped_odd_degrees": list(range(3, cfg.kmax, 2)),
        "odd_degree_reason": "a nonzero odd-degree form changes sign",
    }
    return reports, doc


def cmd_nonexist(cfg: RunConfig) -> int:
    reports, doc = run_nonexist(cfg)
    path = _write(cfg.out, "nonexist_report.json", dump_document(doc))
    for r in reports:
        extra = ""
        if r.outcome == nonexist.SURVIVED:
            extra = f"  candidate {r.candidate}"
        print(f"k = {r.degree}: {r.outcome} ({len(r.history)} cut rounds, "
              f"{len(r.samples)} directions){extra}")
    print(f"report: {path}")
    outcomes = {r.outcome for r in reports}
    if nonexist.SURVIVED in outcomes and cfg.system == "paper":
        print("CONTRADICTION: a candidate survived on system 'paper'; this is a bug", file=sys.stderr)
        return EXIT_CONTRADICTION
    return EXIT_OK if outcomes == {nonexist.INFEASIBLE} else EXIT_NEGATIVE


def cmd_recheck(cfg: RunConfig) -> int:
    if not cfg.report:
        raise UsageError("recheck needs a report path")
    try:
        with open(cfg.report) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report: {exc}") from exc
    try:
        if doc.get("command") == "nonexist":
            f0 = tuple(parse_poly(t) for t in doc["f0"])
            reports = [nonexist.NonexistenceReport.from_dict(r) for r in doc["reports"]]
            ok = nonexist.recheck_reports(f0, reports)
            n = sum(r.outcome == nonexist.INFEASIBLE for r in reports)
            print(f"{n} Farkas certificate(s) re-verified: {'OK' if ok else 'FAILED'}")
        elif doc.get("command") == "verify":
            report = certify.CertificateReport.from_dict(doc["report"])
            ok = certify.recheck_report(report)
            print(f"certificate evidence re-verified: {'OK' if ok else 'FAILED'}")
        else:
            raise UsageError("not a lyapcert report document")
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"malformed report: {exc}") from exc
    return EXIT_OK if ok else EXIT_NEGATIVE


def _float_lyapunov(entry):
    if entry.float_lyapunov is not None:
        return entry.float_lyapunov
    if entry.known_certificate is not None:
        return float_function(entry.known_certificate)
    return None


def _integrator(cfg: RunConfig) -> simulate.IntegratorConfig:
    try:
        return simulate.IntegratorConfig(rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol, t_max=cfg.t_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _x0(cfg: RunConfig):
    if len(cfg.x0) != 2:
        raise UsageError("--x0 needs two coordinates")
    return float(cfg.x0[0]), float(cfg.x0[1])


def cmd_simulate(cfg: RunConfig) -> int:
    entry = _system(cfg.system)
    traj = simulate.integrate(entry.field, _x0(cfg), _integrator(cfg), _float_lyapunov(entry))
    mon = simulate.monitor_decrease(traj)
    path = os.path.join(cfg.out, "trajectory.csv")
    try:
        os.makedirs(cfg.out, exist_ok=True)
        traj.write_csv(path)
    except OSError as exc:
        raise UsageError(f"cannot write trajectory: {exc}") from exc
    t, x, y, w = traj.samples[-1]
    print(f"status: {traj.status}; {len(traj.samples)} samples; final t = {t:.6g} "
          f"state = ({x:.6g}, {y:.6g}) W = {w:.6g}")
    print(f"monotone W: {mon.monotone} (worst relative increase {mon.worst_violation:.3g})")
    print(f"trajectory: {path}")
    return EXIT_OK if traj.status == simulate.CONVERGED and mon.monotone else EXIT_NEGATIVE


def _levels(cfg: RunConfig) -> List[float]:
    if not cfg.levels:
        raise UsageError("at least one level is required")
    out = []
    for s in cfg.levels:
        try:
            v = float(Fraction(str(s)))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad level {s!r}") from None
        if v <= 0:
            raise UsageError(f"levels must be positive, got {s}")
        out.append(v)
    return out


def cmd_figure(cfg: RunConfig) -> int:
    levels = _levels(cfg)
    entry = _system("paper")
    traj = simulate.integrate(entry.field, _x0(cfg), _integrator(cfg), simulate.paper_w)
    mon = simulate.monitor_decrease(traj)
    curves = [simulate.level_set(c) for c in levels]
    try:
        os.makedirs(cfg.out, exist_ok=True)
        traj.write_csv(os.path.join(cfg.out, "trajectory.csv"))
        for c, curve in zip(cfg.levels, curves):
            curve.write_csv(os.path.join(cfg.out, f"level_{str(c).replace('/', '_')}.csv"))
    except OSError as exc:
        raise UsageError(f"cannot write CSV output: {exc}") from exc
    svg = render_figure(traj, curves, title="trajectory and level sets of W")
    path = _write(cfg.out, "figure.svg", svg)
    print(f"trajectory status: {traj.status}; monotone W: {mon.monotone} "
          f"(worst {mon.worst_violation:.3g})")
    print(f"figure: {path}")
    return EXIT_OK if mon.monotone else EXIT_NEGATIVE


COMMANDS = {"list": cmd_list, "verify": cmd_verify, "nonexist": cmd_nonexist,
            "recheck": cmd_recheck, "simulate": cmd_simulate, "figure": cmd_figure}


def _csv_floats(text: str) -> List[float]:
    try:
        return [float(Fraction(v.strip())) for v in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lyapcert",
                                     description="Exact Lyapunov certificates for planar polynomial fields")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, system=True):
        if system:
            p.add_argument("--system", help="catalog name (see `lyapcert list`)")
        p.add_argument("--out", help="output directory (default: current directory)")
        p.add_argument("--config", help="JSON RunConfig file; its keys override flags")

    common(sub.add_parser("list", help="show the system catalog"), system=False)
    p = sub.add_parser("verify", help="exactly verify a Lyapunov certificate")
    common(p)
    p.add_argument("--certificate", help="file or inline text, e.g. '(1*x^4+1*y^4)/(1*x^2+1*y^2)'")
    p = sub.add_parser("nonexist", help="certify nonexistence degree by degree")
    common(p)
    p.add_argument("--kmax", type=int)
    p.add_argument("--cap", type=int)
    p = sub.add_parser("recheck", help="re-verify a saved report")
    common(p, system=False)
    p.add_argument("report")
    for name in ("simulate", "figure"):
        p = sub.add_parser(name, help="integrate a trajectory" if name == "simulate"
                           else "trajectory and level sets of W as SVG")
        common(p, system=(name == "simulate"))
        p.add_argument("--x0", type=_csv_floats)
        p.add_argument("--rtol", dest="rel_tol", type=float)
        p.add_argument("--atol", dest="abs_tol", type=float)
        p.add_argument("--t-max", dest="t_max", type=float)
        if name == "figure":
            p.add_argument("--levels", type=lambda s: [v.strip() for v in s.split(",")])
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for f in dataclasses.fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None and f.name != "command":
            setattr(cfg, f.name, v)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        merged = cfg.to_dict()
        merged.update(data)
        merged["command"] = args.command
        cfg = RunConfig.from_dict(merged)
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
