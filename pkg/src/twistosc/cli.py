"""Command-line entry point.

Examples::

    twistosc spectrum --twist family=constant,kappa=2 --n-max 3
    twistosc sweep --twist family=sin,kappa=1,tau=1 --times 0:6.283185307179586:9 --format json
    twistosc coherent --c-plus 1 --c-minus 2j --twist family=constant,kappa=2
    twistosc radial --l 2 --count 3 --profile-out profile.csv
    twistosc verify --twist family=cosh,kappa=0.5,tau=2 --times 0,1
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .coherent import CoherentAmplitudes, coherent_moments, cutoff_for_tolerance
from .core import (
    OscillatorParams,
    QuantumNumbers,
    angular_momentum_eigenvalue,
    effective_params,
    energy_modes,
    energy_nl,
    spectrum_table,
)
from .exceptions import ConfigError, ConvergenceError, TruncationError, TwistOscError
from .fock import FockBasis
from .radial import (
    RadialGrid,
    energy_from_dimensionless,
    fd_convergence,
    fd_spectrum,
    normalize_radial,
    ode_residual,
    radial_polynomial_coeffs,
    radial_profile,
)
from .twist import TwistFunction, make_twist, parse_twist
from .verify import MOMENT_TAIL_TOL, run_checks

DEFAULT_CUTOFF = 12


@dataclass
class RunConfig:
    params: OscillatorParams = field(default_factory=OscillatorParams)
    twist: TwistFunction = field(default_factory=lambda: make_twist("constant", 0.0))
    times: list[float] = field(default_factory=lambda: [0.0])
    cutoff: int | None = None
    fmt: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if not self.times:
            raise ConfigError("time list is empty")
        if self.cutoff is not None and self.cutoff < 4:
            raise ConfigError(f"cutoff must be >= 4, got {self.cutoff}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")

    def to_dict(self) -> dict:
        return {
            **self.params.to_dict(),
            "twist": self.twist.to_dict(),
            "times": list(self.times),
            "cutoff": self.cutoff,
        }


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    checks: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)


def parse_times(text: str) -> list[float]:
    """``0,0.5,1`` lists times; ``start:stop:steps`` is an inclusive linspace."""
    text = text.strip()
    if not text:
        raise ConfigError("time list is empty")
    try:
        if ":" in text:
            start, stop, steps = text.split(":")
            steps = int(steps)
            if steps < 1:
                raise ConfigError(f"time triple needs steps >= 1, got {steps}")
            return [float(t) for t in np.linspace(float(start), float(stop), steps)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse times {text!r}: {exc}") from exc


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, complex):
        return repr(value)
    return str(value)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def render(table: Table, cfg: RunConfig) -> str:
    if cfg.fmt == "json":
        doc = {
            "config": cfg.to_dict() | table.extra,
            "rows": [dict(zip(table.columns, row)) for row in table.rows],
            "checks": table.checks,
        }
        return json.dumps(_jsonable(doc), indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_spectrum(cfg: RunConfig, n_max: int) -> Table:
    if n_max < 0:
        raise ConfigError(f"n-max must be >= 0, got {n_max}")
    p = cfg.params
    rows, worst = [], 0.0
    for t in cfg.times:
        f = cfg.twist(t)
        for qn, e in spectrum_table(p, f, n_max):
            occ = qn.to_occupation()
            e_modes = energy_modes(p, f, occ)
            worst = max(worst, abs(e - e_modes) / abs(e_modes))
            rows.append([t, f, qn.n, qn.l, occ.n_plus, occ.n_minus, e, e_modes,
                         angular_momentum_eigenvalue(p, occ)])
    checks = [{"name": "labelings agree", "observed": worst, "tolerance": 1e-14, "passed": worst <= 1e-14}]
    return Table(["t", "f", "n", "l", "n_plus", "n_minus", "energy", "energy_modes", "L"], rows, checks,
                 {"n_max": n_max})


def cmd_sweep(cfg: RunConfig) -> Table:
    p = cfg.params
    k = p.mass * p.omega**2
    rows = []
    for t in cfg.times:
        f = cfg.twist(t)
        eff = effective_params(p, f)
        rows.append([t, f, eff.mass_eff, eff.omega_eff, eff.omega_plus, eff.omega_minus,
                     abs(eff.stiffness - k), abs(eff.omega_plus * eff.omega_minus - p.omega**2)])
    worst_k = max(r[6] for r in rows) / k
    worst_w = max(r[7] for r in rows) / p.omega**2
    checks = [
        {"name": "M_f Omega_f^2 = m omega^2", "observed": worst_k, "tolerance": 1e-14, "passed": worst_k <= 1e-14},
        {"name": "Omega_+ Omega_- = omega^2", "observed": worst_w, "tolerance": 1e-14, "passed": worst_w <= 1e-14},
    ]
    return Table(["t", "f", "M_f", "Omega_f", "Omega_plus", "Omega_minus",
                  "stiffness_residual", "split_residual"], rows, checks)


COHERENT_FIELDS = [
    "var_x1", "var_x2", "var_p1", "var_p2", "product_1", "product_2",
    "mean_L", "var_L", "mean_H", "identity_residual",
    "mean_L_expected", "var_L_expected", "residual_plus", "residual_minus",
]


def cmd_coherent(cfg: RunConfig, c: CoherentAmplitudes) -> Table:
    cutoff = cfg.cutoff if cfg.cutoff is not None else max(4, cutoff_for_tolerance(c, MOMENT_TAIL_TOL))
    basis = FockBasis(cutoff)
    rows, worst = [], 0.0
    for t in cfg.times:
        f = cfg.twist(t)
        report = coherent_moments(cfg.params, f, basis, c).to_dict()
        worst = max(worst, report["identity_residual"])
        rows.append([t, f, c.c_plus, c.c_minus] + [report[k] for k in COHERENT_FIELDS])
    checks = [{"name": "<H> identity residual", "observed": worst, "tolerance": 1e-9, "passed": worst <= 1e-9}]
    return Table(["t", "f", "c_plus", "c_minus"] + COHERENT_FIELDS, rows, checks,
                 {"cutoff_used": cutoff})


def cmd_radial(cfg: RunConfig, l: int, count: int, grid: RadialGrid, profile_out: str | None = None) -> Table:
    values = fd_spectrum(l, grid, count)
    conv = fd_convergence(l, grid, count)
    samples = np.linspace(0.02, 4.0, 200)
    rows = []
    solutions = []
    for j, value in enumerate(values):
        n = abs(l) + 2 * j
        sol = radial_polynomial_coeffs(n, l)
        solutions.append(normalize_radial(sol))
        residual = ode_residual(sol, samples)
        for t in cfg.times:
            f = cfg.twist(t)
            rows.append([t, f, n, l, value, n + 1, float(conv.observed_order[j]),
                         energy_from_dimensionless(cfg.params, f, value, l),
                         energy_nl(cfg.params, f, QuantumNumbers(n, l)), residual])
    if profile_out:
        cols = radial_profile(solutions, grid.nodes)
        text = render(Table(list(cols), [list(r) for r in zip(*cols.values())]), RunConfig(fmt="csv"))
        emit(text, profile_out)
    worst = max(r[-1] for r in rows)
    checks = [{"name": "ODE residual", "observed": worst, "tolerance": 1e-12, "passed": worst <= 1e-12}]
    return Table(["t", "f", "n", "l", "fd_eigenvalue", "target", "observed_order",
                  "energy_fd", "energy_closed", "ode_residual"], rows, checks,
                 {"grid": {"rho_max": grid.rho_max, "points": grid.points}})


def cmd_verify(cfg: RunConfig, grid: RadialGrid | None = None, stream=None) -> tuple[int, Table]:
    stream = stream or sys.stdout
    checks = run_checks(cfg.params, cfg.twist, cfg.times, cfg.cutoff or DEFAULT_CUTOFF, grid)
    failed = [c for c in checks if not c.passed]
    for c in checks:
        print(c.line(), file=stream)
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed", file=stream)
    if failed:
        first = failed[0]
        print(
            f"first failure: module={first.module} invariant={first.name!r} f={first.f!r} "
            f"observed={first.observed!r} tolerance={first.tolerance!r}",
            file=stream,
        )
    columns = ["module", "invariant", "f", "observed", "tolerance", "passed"]
    rows = [[c.module, c.name, c.f, c.observed, c.tolerance, c.passed] for c in checks]
    return (1 if failed else 0), Table(columns, rows, [c.to_dict() for c in checks])


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--mass", type=float, default=1.0)
    shared.add_argument("--omega", type=float, default=1.0)
    shared.add_argument("--hbar", type=float, default=1.0)
    shared.add_argument("--twist", default="family=constant,kappa=0",
                        help="e.g. family=sin,kappa=2.0,tau=1.0 (families: constant, sin, cos, sinh, cosh)")
    shared.add_argument("--times", default="0", help="comma list (0,0.5,1) or start:stop:steps")
    shared.add_argument("--cutoff", type=int, default=None, help="Fock cutoff N_max (>= 4)")
    shared.add_argument("--format", choices=("csv", "json"), default="csv")
    shared.add_argument("--out", default=None, help="output path (default stdout)")

    ap = argparse.ArgumentParser(prog="twistosc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[shared], help="energy table in both labelings")
    sp.add_argument("--n-max", type=int, default=3)

    sub.add_parser("sweep", parents=[shared], help="effective parameters over time")

    sp = sub.add_parser("coherent", parents=[shared], help="coherent-state moments")
    sp.add_argument("--c-plus", type=complex, default=0j)
    sp.add_argument("--c-minus", type=complex, default=0j)

    sp = sub.add_parser("radial", parents=[shared], help="finite-difference radial oracle")
    sp.add_argument("--l", type=int, default=0)
    sp.add_argument("--count", type=int, default=3)
    sp.add_argument("--rho-max", type=float, default=12.0)
    sp.add_argument("--points", type=int, default=2400)
    sp.add_argument("--profile-out", default=None, help="CSV of normalised R(rho) per level")

    sp = sub.add_parser("verify", parents=[shared], help="run the invariant suite")
    sp.add_argument("--rho-max", type=float, default=12.0)
    sp.add_argument("--points", type=int, default=2400)
    return ap


def make_config(args) -> RunConfig:
    return RunConfig(
        params=OscillatorParams(args.mass, args.omega, args.hbar),
        twist=parse_twist(args.twist),
        times=parse_times(args.times),
        cutoff=args.cutoff,
        fmt=args.format,
        out=args.out,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        status = 0
        if args.command == "spectrum":
            table = cmd_spectrum(cfg, args.n_max)
        elif args.command == "sweep":
            table = cmd_sweep(cfg)
        elif args.command == "coherent":
            table = cmd_coherent(cfg, CoherentAmplitudes(args.c_plus, args.c_minus))
        elif args.command == "radial":
            table = cmd_radial(cfg, args.l, args.count, RadialGrid(args.rho_max, args.points), args.profile_out)
        else:
            grid = RadialGrid(args.rho_max, args.points)
            status, table = cmd_verify(cfg, grid)
            if cfg.out is None:
                return status
        emit(render(table, cfg), cfg.out)
        return status
    except TruncationError as exc:
        print(f"error: {exc} (try --cutoff {exc.required})", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for step in exc.trace:
            print(f"  h={step['h']!r}: {step['eigenvalues']}", file=sys.stderr)
        return 2
    except (TwistOscError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
