"""Command-line entry point: ``isocert {symbolic,geometry,parallel,all}``.

Exit codes: 0 when everything requested is certified, 1 when a verification
fails, 2 for configuration errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .elimination import DEFAULT_SEED, compare_golden, load_golden, run_certification
from .geometry import FAMILIES, ConfigError, Immersion, Tolerances, grid_verify

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SEED_MAX = 2**64 - 1
MAX_GRID = 60
MAX_OFFSET = 2.0

# (family, epsilon) pairs exercised by ``all``
ALL_FAMILIES = (
    ("slice", 1),
    ("slice", -1),
    ("totally-geodesic-cylinder", 1),
    ("totally-geodesic-cylinder", -1),
    ("umbilical-cylinder", 1),
    ("umbilical-cylinder", -1),
    ("sphere-torus-cylinder", 1),
    ("hyperbolic-torus-cylinder", -1),
    ("parabolic-helicoid", -1),
)


@dataclass
class TopReport:
    command: str
    config: Dict[str, Any]
    symbolic: List[Dict[str, Any]] = field(default_factory=list)
    geometry: List[Dict[str, Any]] = field(default_factory=list)
    parallel: List[Dict[str, Any]] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        parts = self.symbolic + self.geometry + self.parallel
        return bool(parts) and not self.errors and all(p.get("pass") for p in parts)

    def to_json(self) -> Dict[str, Any]:
        return {
            "tool": "isocert",
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "symbolic": self.symbolic,
            "geometry": self.geometry,
            "parallel": self.parallel,
            "errors": self.errors,
            "certified": self.certified,
        }


# argument parsing --------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for every randomized check")


def _add_tolerances(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-curvature", type=float, help="principal-curvature value tolerance")
    p.add_argument("--tol-residual", type=float, help="fundamental-equation residual tolerance")
    p.add_argument("--tol-parallel", type=float, help="offset mean-curvature tolerance")


def _add_family(p: argparse.ArgumentParser, grid_default: int) -> None:
    p.add_argument("--family", required=True, help="one of: " + ", ".join(FAMILIES))
    p.add_argument("--epsilon", help="+1 or -1 (defaults per family)")
    p.add_argument("--r1", type=float)
    p.add_argument("--r2", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--t0", type=float)
    p.add_argument("--grid", type=int, default=grid_default, help="nodes per parameter axis")
    p.add_argument("--no-constraint-check", action="store_true",
                   help="skip parameter-constraint validation and let verification decide")
    _add_tolerances(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isocert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"isocert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbolic", help="exact elimination certificate")
    p.add_argument("--epsilon", default="both", help="+1, -1 or both")
    p.add_argument("--points", type=int, default=100, help="random cross-validation points (>= 100)")
    p.add_argument("--golden", help="JSON file of expected t^5 coefficients to compare against")
    _add_common(p)

    p = sub.add_parser("geometry", help="curvature, angle and residual checks on a grid")
    _add_family(p, 10)
    _add_common(p)

    p = sub.add_parser("parallel", help="mean curvature of geodesic-parallel offsets")
    _add_family(p, 5)
    p.add_argument("--offsets", default="0.1,0.2,0.3", help="comma-separated offsets")
    _add_common(p)

    p = sub.add_parser("all", help="symbolic for both signs plus every family")
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--offsets", default="0.1,0.2,0.3")
    _add_tolerances(p)
    _add_common(p)
    return parser


def _epsilons(text: str, allow_both: bool) -> List[int]:
    s = str(text).strip().lower()
    if allow_both and s == "both":
        return [1, -1]
    if s in ("1", "+1"):
        return [1]
    if s == "-1":
        return [-1]
    raise ConfigError(f"invalid epsilon {text!r}; use +1, -1" + (" or both" if allow_both else ""))


def _check_seed(seed: int) -> None:
    if not 0 <= seed <= SEED_MAX:
        raise ConfigError("seed must be a 64-bit unsigned integer")


def _check_grid(n: int) -> None:
    if not 2 <= n <= MAX_GRID:
        raise ConfigError(f"grid resolution must be between 2 and {MAX_GRID}")


def _offsets(text: str) -> List[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad offset list {text!r}") from exc
    if not vals:
        raise ConfigError("empty offset list")
    if any(not math.isfinite(v) or abs(v) > MAX_OFFSET for v in vals):
        raise ConfigError(f"offsets must be finite with |s| <= {MAX_OFFSET}")
    if min(vals) < 0 < max(vals):
        raise ConfigError("offsets must share one sign")
    return vals


def _tolerances(args) -> Tolerances:
    tol = Tolerances()
    for flag, attr in (("tol_curvature", "curvature"), ("tol_residual", "residual"), ("tol_parallel", "parallel")):
        v = getattr(args, flag, None)
        if v is None:
            continue
        if not (math.isfinite(v) and v > 0):
            raise ConfigError(f"--{flag.replace('_', '-')} must be a positive number")
        setattr(tol, attr, v)
    return tol


def _immersion(args) -> Immersion:
    eps = _epsilons(args.epsilon, False)[0] if args.epsilon is not None else None
    return Immersion.create(
        args.family, eps, r1=args.r1, r2=args.r2, B=args.B, t0=args.t0, check=not args.no_constraint_check
    )


# commands -------------------------------------------------------------------------


def _symbolic(report: TopReport, epsilons: Sequence[int], seed: int, points: int, golden_path: Optional[str]) -> None:
    golden = None
    if golden_path is not None:
        try:
            golden = load_golden(golden_path)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read golden file: {exc}") from exc
        if not isinstance(golden, dict):
            raise ConfigError("golden file must hold a JSON object")
    for eps in epsilons:
        trace = run_certification(eps, seed=seed, n_points=points)
        doc = trace.to_json()
        ok = trace.certified
        if golden is not None:
            checks = compare_golden(trace, golden)
            doc["golden"] = [c.to_json() for c in checks]
            bad = [c.name for c in checks if not c.passed]
            if bad:
                ok = False
                doc["first_failure"] = doc["first_failure"] or bad[0]
        doc["pass"] = ok
        report.symbolic.append(doc)


def _geometry(report: TopReport, imm: Immersion, grid: int, tol: Tolerances, seed: int) -> None:
    rep = grid_verify(imm, grid=grid, tol=tol, parallel=False, homogeneity_seed=seed)
    report.geometry.append(rep.to_json())


def _parallel(report: TopReport, imm: Immersion, grid: int, offsets, tol: Tolerances) -> None:
    rep = grid_verify(imm, tol=tol, offsets=offsets, parallel_grid=grid, shape=False)
    report.parallel.append(rep.to_json())


def run(args) -> TopReport:
    """Execute a parsed command; raises ConfigError for invalid configuration."""
    _check_seed(args.seed)
    cmd = args.command
    config: Dict[str, Any] = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out")}
    report = TopReport(cmd, config)
    if cmd == "symbolic":
        eps = _epsilons(args.epsilon, True)
        if args.points < 100:
            raise ConfigError("at least 100 random points are required")
        _symbolic(report, eps, args.seed, args.points, args.golden)
    elif cmd in ("geometry", "parallel"):
        _check_grid(args.grid)
        tol = _tolerances(args)
        offsets = _offsets(args.offsets) if cmd == "parallel" else None
        imm = _immersion(args)
        config["resolved"] = imm.describe()
        if cmd == "geometry":
            _geometry(report, imm, args.grid, tol, args.seed)
        else:
            _parallel(report, imm, args.grid, offsets, tol)
    else:
        _check_grid(args.grid)
        tol = _tolerances(args)
        offsets = _offsets(args.offsets)
        _symbolic(report, [1, -1], args.seed, 100, None)
        for fam, eps in ALL_FAMILIES:
            imm = Immersion.create(fam, eps)
            _geometry(report, imm, args.grid, tol, args.seed)
            _parallel(report, imm, 5, offsets, tol)
    return report


def _summary_lines(report: TopReport) -> List[str]:
    lines = []
    for doc in report.symbolic:
        state = "CERTIFIED" if doc["pass"] else f"FAILED at {doc['first_failure']}"
        lines.append(f"symbolic  eps={doc['epsilon']:+d}  {state}")
    for kind, docs in (("geometry", report.geometry), ("parallel", report.parallel)):
        for doc in docs:
            bad = [c["name"] for c in doc["criteria"] if not c["pass"]]
            state = "PASS" if doc["pass"] else "FAIL: " + ", ".join(bad)
            lines.append(f"{kind:<9} {doc['family']} eps={doc['epsilon']:+d}  {state}")
            if kind == "geometry" and doc["samples_summary"].get("curvatures"):
                k = doc["samples_summary"]["curvatures"]["mean"]
                lines.append("          principal curvatures " + ", ".join(f"{v:.10g}" for v in k))
            if kind == "parallel":
                for row in doc["parallel_table"]:
                    h = row["H_mean"]
                    lines.append(f"          s={row['offset']:g}  H={'nan' if h is None else f'{h:.10g}'}  std={row['H_std']}")
    for err in report.errors:
        lines.append(f"error: {err}")
    lines.append("overall: " + ("CERTIFIED" if report.certified else "NOT CERTIFIED"))
    return lines


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        report = run(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(report.to_json(), sort_keys=True, indent=2, allow_nan=False)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"configuration error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    print("\n".join(_summary_lines(report)))
    return EXIT_OK if report.certified else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
