"""Command-line front end.

Exit codes: 0 ok, 1 verification failed, 2 usage, 3 truncation, 4 capability.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .closed_form import (
    DECAY_RTOL,
    closed_form_state,
    parity_condition_check,
    pde_residual,
    psi_sample,
    pt_check_hamiltonian,
    pt_check_state,
)
from .errors import (
    CapabilityError,
    DriveRangeError,
    NotApplicableError,
    PTSpectrumError,
    TruncationError,
    UndecidableError,
)
from .model import (
    ConstantDrive,
    Drive,
    PolynomialDrive,
    SampledDrive,
    ShiftSolution,
    SpatialGrid,
)
from .observables import energy_closed, energy_quadrature, u_imag_expectation
from .shift_solver import (
    DEFAULT_DT,
    RESIDUAL_RTOL,
    residual_tolerance,
    shift_residual,
    solve_shift_analytic,
    solve_shift_numeric,
)
from .tdse_oracle import (
    PropagationConfig,
    crank_nicolson_propagate,
    drive_potential,
    relative_l2_error,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_TRUNCATION = 3
EXIT_CAPABILITY = 4

DEFAULT_GRID = "-12:12:2401"
DEFAULT_CN_DT = 1e-4
DEFAULT_PDE_H = 6e-3
DEFAULT_PDE_DT = 1e-4
THREADS_ENV = "PT_SPECTRUM_THREADS"

DEFAULT_TOLERANCES = {
    "shift_residual": RESIDUAL_RTOL,
    "pde_residual": 1e-4,
    "oracle_l2": 1e-3,
    "im_energy_vs_uimag": 1e-8,
    "closed_vs_quadrature": 1e-6,
}


class UsageError(PTSpectrumError):
    pass


class DriveSpecError(UsageError):
    def __init__(self, spec: str, position: int, token: str, reason: str):
        self.spec, self.position, self.token = spec, position, token
        super().__init__(
            f"invalid drive spec {spec!r}: {reason} at position {position} "
            f"(token {token!r})"
        )


# ---------------------------------------------------------------------------
# Parsing


def _parse_float(spec: str, token: str, position: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DriveSpecError(spec, position, token, "expected a number") from None
    if not np.isfinite(value):
        raise DriveSpecError(spec, position, token, "expected a finite number")
    return value


def read_drive_csv(path: str) -> SampledDrive:
    """Two-column ``t,f`` CSV; a non-numeric first row is taken as a header."""
    times, values = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise UsageError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                t, f = float(row[0]), float(row[1])
            except ValueError:
                if not times and lineno == 1:
                    continue
                raise UsageError(f"{path}:{lineno}: non-numeric row {row!r}") from None
            times.append(t)
            values.append(f)
    try:
        return SampledDrive(tuple(times), tuple(values))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def parse_drive(spec: str) -> Drive:
    """Parse ``const:<f0>``, ``poly:<c0>,<c1>,...`` or ``file:<path>``."""
    kind, sep, body = spec.partition(":")
    if not sep:
        raise DriveSpecError(spec, 0, spec, "missing ':' after drive kind")
    start = len(kind) + 1
    if kind == "const":
        return ConstantDrive(_parse_float(spec, body, start))
    if kind == "poly":
        coeffs, pos = [], start
        for token in body.split(","):
            coeffs.append(_parse_float(spec, token, pos))
            pos += len(token) + 1
        return PolynomialDrive(tuple(coeffs))
    if kind == "file":
        if not body:
            raise DriveSpecError(spec, start, body, "empty path")
        if not os.path.isfile(body):
            raise DriveSpecError(spec, start, body, "no such file")
        return read_drive_csv(body)
    raise DriveSpecError(spec, 0, kind, "unknown drive kind (const, poly, file)")


def parse_grid(text: str) -> SpatialGrid:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be xmin:xmax:npts, got {text!r}")
    try:
        x_min, x_max, npts = float(parts[0]), float(parts[1]), int(parts[2])
        return SpatialGrid(x_min, x_max, npts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None


def parse_int_list(text: str) -> list[int]:
    try:
        out = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if any(n < 0 for n in out):
        raise argparse.ArgumentTypeError("quantum numbers must be non-negative")
    return out


def parse_tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or name not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"expected NAME=VALUE with NAME in {sorted(DEFAULT_TOLERANCES)}, got {text!r}"
        )
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None


def nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


# ---------------------------------------------------------------------------
# Shared helpers


@dataclass
class Problem:
    drive: Drive
    shift: ShiftSolution


def build_problem(args) -> Problem:
    drive = parse_drive(args.drive)
    if isinstance(drive, SampledDrive):
        lo, _ = drive.span
        g0 = float(drive(lo)) if args.g0 is None else args.g0
        gdot0 = float(drive.derivative(lo)) if args.gdot0 is None else args.gdot0
        shift = solve_shift_numeric(drive, drive.span, g0, gdot0, args.ode_dt)
    else:
        shift = solve_shift_analytic(drive)
    return Problem(drive, shift)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(rows: Sequence[Sequence[float]], header: Sequence[str], out: Optional[str]):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def emit_json(record: dict) -> None:
    sys.stdout.write(json.dumps(record) + "\n")


def emit_record(record: dict, fmt_name: str) -> None:
    if fmt_name == "json":
        emit_json(record)
        return
    keys = list(record)
    sys.stdout.write(",".join(keys) + "\n")
    sys.stdout.write(
        ",".join(fmt(v) if isinstance(v, float) else str(v) for v in record.values()) + "\n"
    )


def scan_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# Commands


def cmd_solve(args) -> int:
    prob = build_problem(args)
    state = psi_sample(closed_form_state(args.n, prob.drive, prob.shift), args.grid, args.t)
    psi = state.amplitudes
    rows = zip(args.grid.x, psi.real, psi.imag, np.abs(psi) ** 2)
    write_csv(list(rows), ["x", "re_psi", "im_psi", "abs2"], args.out)
    return EXIT_OK


def _energies(prob: Problem, n: int, t: float, grid: SpatialGrid, method: str) -> dict:
    if method in ("closed", "both") and n not in (0, 1):
        raise CapabilityError(f"closed-form energy exists only for n in {{0, 1}}, got n={n}")
    state = psi_sample(closed_form_state(n, prob.drive, prob.shift), grid, t)
    u_imag = u_imag_expectation(state, prob.drive)
    if method == "quadrature":
        e = energy_quadrature(state, prob.drive)
        return {"re_E": e.re, "im_E": e.im, "u_imag": u_imag, "method": method}
    closed = energy_closed(n, prob.drive, prob.shift, t)
    record = {"re_E": closed.re, "im_E": closed.im, "u_imag": u_imag, "method": method}
    if method == "both":
        quad = energy_quadrature(state, prob.drive)
        record["re_E_quadrature"] = quad.re
        record["im_E_quadrature"] = quad.im
        record["disagreement"] = abs(complex(closed) - complex(quad))
    return record


def cmd_energy(args) -> int:
    prob = build_problem(args)
    emit_record(_energies(prob, args.n, args.t, args.grid, args.method), args.format)
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.steps < 2:
        raise UsageError(f"--steps must be >= 2, got {args.steps}")
    if not args.t0 < args.t1:
        raise UsageError(f"need t0 < t1, got {args.t0}, {args.t1}")
    prob = build_problem(args)
    times = np.linspace(args.t0, args.t1, args.steps)

    def row(t):
        state = psi_sample(closed_form_state(args.n, prob.drive, prob.shift), args.grid, t)
        e = energy_quadrature(state, prob.drive)
        return (t, e.re, e.im, u_imag_expectation(state, prob.drive))

    workers = min(scan_threads(), len(times))
    if workers == 1:
        rows = [row(t) for t in times]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, times))
    write_csv(rows, ["t", "re_E", "im_E", "u_imag"], args.out)
    return EXIT_OK


def _check(name: str, n: int, tol: float, fn) -> dict:
    record = {"name": name, "n": n, "tol": tol}
    try:
        value = float(fn())
    except (TruncationError, DriveRangeError, ArithmeticError) as exc:
        record.update(value=None, passed=False, error=f"{type(exc).__name__}: {exc}")
        return record
    record.update(value=value, passed=bool(value <= tol))
    return record


def cmd_verify(args) -> int:
    prob = build_problem(args)
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(dict(args.tol or []))
    grid: SpatialGrid = args.grid
    t = args.t
    pde_points = int(round((grid.x_max - grid.x_min) / args.pde_h)) + 1
    pde_grid = SpatialGrid(grid.x_min, grid.x_max, pde_points)

    checks = []
    checks.append(
        _check(
            "shift_residual",
            None,
            tols["shift_residual"] / RESIDUAL_RTOL * residual_tolerance(prob.drive, prob.shift),
            lambda: shift_residual(prob.drive, prob.shift),
        )
    )
    for n in args.n_list:
        cf = closed_form_state(n, prob.drive, prob.shift)

        def sample(tt=t):
            return psi_sample(cf, grid, tt)

        def edge_ratio():
            amps = np.abs(sample().amplitudes)
            return max(amps[0], amps[-1]) / amps.max()

        checks.append(_check("decay", n, DECAY_RTOL, edge_ratio))
        checks.append(
            _check(
                "pde_residual",
                n,
                tols["pde_residual"],
                lambda: pde_residual(cf, pde_grid, t, args.pde_dt),
            )
        )

        def oracle():
            if t == 0:
                return 0.0
            cfg = PropagationConfig(grid, args.cn_dt, 0.0, t, drive_potential(prob.drive))
            return relative_l2_error(crank_nicolson_propagate(sample(0.0), cfg), sample())

        checks.append(_check("oracle_l2", n, tols["oracle_l2"], oracle))

        def im_vs_u():
            st = sample()
            return abs(energy_quadrature(st, prob.drive).im - u_imag_expectation(st, prob.drive))

        checks.append(_check("im_energy_vs_uimag", n, tols["im_energy_vs_uimag"], im_vs_u))
        if n in (0, 1):

            def closed_vs_quad():
                quad = energy_quadrature(sample(), prob.drive)
                closed = energy_closed(n, prob.drive, prob.shift, t)
                return abs(complex(closed) - complex(quad))

            checks.append(
                _check("closed_vs_quadrature", n, tols["closed_vs_quadrature"], closed_vs_quad)
            )

    passed = all(c["passed"] for c in checks)
    emit_json({"drive": args.drive, "t": t, "passed": passed, "checks": checks})
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def cmd_check_pt(args) -> int:
    prob = build_problem(args)
    state = closed_form_state(args.n, prob.drive, prob.shift)
    record: dict = {}
    try:
        record["hamiltonian_pt"] = pt_check_hamiltonian(prob.drive)
    except UndecidableError as exc:
        record["hamiltonian_pt"] = None
        record["hamiltonian_pt_error"] = str(exc)
    try:
        pt = pt_check_state(state, args.grid, args.t)
        record.update(
            state_pt="ok",
            state_pt_deviation=pt.deviation,
            state_pt_phase=[pt.phase.real, pt.phase.imag],
        )
    except (NotApplicableError, UndecidableError):
        record.update(state_pt="not-applicable", state_pt_deviation=None, state_pt_phase=None)
    parity = parity_condition_check(state, args.grid, args.t)
    record.update(
        parity_condition_satisfied=parity.satisfied,
        uimag_odd_defect=parity.uimag_odd_defect,
        modulus_even_defect=parity.modulus_even_defect,
    )
    emit_json(record)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parser


def _add_common(p: argparse.ArgumentParser, *, with_t: bool = True, with_n: bool = True):
    p.add_argument("--drive", required=True, help="const:<f0> | poly:<c0>,<c1>,... | file:<csv>")
    if with_n:
        p.add_argument("--n", type=nonneg_int, default=0, help="quantum number")
    if with_t:
        p.add_argument("--t", type=float, default=0.0, help="time")
    p.add_argument("--grid", type=parse_grid, default=parse_grid(DEFAULT_GRID),
                   help=f"xmin:xmax:npts (default {DEFAULT_GRID})")
    p.add_argument("--ode-dt", type=float, default=DEFAULT_DT,
                   help="RK4 step for sampled drives")
    p.add_argument("--g0", type=float, default=None,
                   help="initial g for sampled drives (default f(t_start))")
    p.add_argument("--gdot0", type=float, default=None,
                   help="initial gdot for sampled drives (default f'(t_start))")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pt-spectrum",
        description="Exact states and complex energies of H = p^2 + x^2 + 2i f(t) x.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="sample Psi_n(x, t) on a grid to CSV")
    _add_common(p)
    p.add_argument("--out", default=None, help="output CSV (default stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("energy", help="complex energy expectation")
    _add_common(p)
    p.add_argument("--method", choices=["closed", "quadrature", "both"], default="quadrature")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("scan", help="quadrature energies over a time mesh to CSV")
    _add_common(p, with_t=False)
    p.add_argument("--t0", type=float, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", default=None, help="output CSV (default stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run the numerical consistency checks")
    _add_common(p, with_n=False)
    p.add_argument("--n-list", type=parse_int_list, default=[0])
    p.add_argument("--tol", type=parse_tol, action="append",
                   help="override a tolerance, NAME=VALUE (repeatable)")
    p.add_argument("--cn-dt", type=float, default=DEFAULT_CN_DT)
    p.add_argument("--pde-h", type=float, default=DEFAULT_PDE_H)
    p.add_argument("--pde-dt", type=float, default=DEFAULT_PDE_DT)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-pt", help="PT and parity-condition checks")
    _add_common(p)
    p.set_defaults(func=cmd_check_pt)
    return parser


_VALUE_FLAGS = {"--grid", "--t", "--t0", "--t1", "--g0", "--gdot0"}


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "-12:12:2401" as an option; glue such values onto their flag
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-"):
                out.append(f"{tok}={nxt}")
            else:
                out.extend([tok, nxt])
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (UsageError, PTSpectrumError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry_point() -> None:
    sys.exit(main())
