#!/usr/bin/env python3
"""
Levinson Lab Command Line

One subcommand per library operation. Reports go to stdout as JSON (or CSV
for curve-like results), logs go to stderr. Exit codes:

    0  success / all checks pass
    1  invalid input
    2  a verification check failed
    3  the mathematics refuses the request (not Fredholm, unbounded, singular)

Complex values are written "a+bi" or "[a,b]"; ranges "lo:hi".
"""

import argparse
import json
import logging
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from index_theorems import (
    verify_levinson,
    verify_periodic_levinson,
    winding_periodic,
    winding_square,
)
from levinson_config import configure_logging, get_config
from levinson_errors import ExitStatus, LevinsonError, ValidationError
from levinson_sweeps import count_bounds_sweep, fredholm_sweep, periodic_sweep
from model_parameters import (
    ModelParams,
    NuParams,
    Params,
    Sign,
    classify,
    from_pair,
    is_self_adjoint,
    lambda_set,
    omega_nu,
    omega_set,
    to_pair,
    wave_operator_bounds,
)
from operator_calculus import GridSpec, hankel_transform, scattering_operator_check, transpose_compose_check
from point_spectrum import accumulation_sequence, count_bounds, spectrum
from scattering_symbols import (
    boundary_symbol,
    resolvent_kernel,
    resolvent_kernel_nu,
    smatrix,
    smatrix_nu,
    smatrix_plus,
)

logger = logging.getLogger(__name__)

_COMPLEX_PATTERN = re.compile(r"^[0-9eE.+\-j]+$")


def parse_complex(text: str) -> complex:
    """Parse 'a+bi', 'a', 'bi' or '[a,b]'."""
    raw = str(text).strip().replace(" ", "")
    if raw.startswith("["):
        try:
            return from_pair(json.loads(raw))
        except (json.JSONDecodeError, TypeError, ValueError) as e:
            raise ValidationError(f"Cannot parse complex value {text!r}: {e}")
    value = raw.replace("i", "j")
    if value.endswith("j"):
        head = value[:-1]
        if head == "" or head[-1] in "+-":
            value = head + "1j"
    if not value or not _COMPLEX_PATTERN.match(value):
        raise ValidationError(f"Cannot parse complex value {text!r}; use 'a+bi' or '[a,b]'")
    try:
        return complex(value)
    except ValueError:
        raise ValidationError(f"Cannot parse complex value {text!r}; use 'a+bi' or '[a,b]'")


def parse_range(text: str) -> Tuple[float, float]:
    """Parse 'lo:hi'; an empty side is unbounded."""
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ValidationError(f"Expected lo:hi, got {text!r}")
    try:
        lo = float(parts[0]) if parts[0] else 0.0
        hi = float(parts[1]) if parts[1] else float("inf")
    except ValueError:
        raise ValidationError(f"Expected numeric lo:hi, got {text!r}")
    if not lo < hi:
        raise ValidationError(f"Range needs lo < hi, got {text!r}")
    return lo, hi


def parse_grid(text: str) -> GridSpec:
    """Parse 'L:N'."""
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ValidationError(f"Expected L:N, got {text!r}")
    try:
        return GridSpec(half_width=float(parts[0]), points=int(parts[1]))
    except ValueError:
        raise ValidationError(f"Expected numeric L:N, got {text!r}")


@dataclass
class CommandResult:
    """Payload of one subcommand."""
    payload: Dict[str, Any]
    frame: Optional[pd.DataFrame] = None
    passed: bool = True


# options whose values may start with "-" (e.g. --kappa -1+2i, --window -5:5)
_VALUE_OPTIONS = frozenset({
    "--m", "--kappa", "--nu", "--window", "--grid", "--target",
    "--k", "--r", "--s", "--center", "--tol",
})


def attach_values(argv: Sequence[str]) -> List[str]:
    """Rewrite '--opt -value' as '--opt=-value' so argparse keeps the value."""
    out: List[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        token = tokens[i]
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        if token in _VALUE_OPTIONS and nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
            out.append(f"{token}={nxt}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


class _Parser(argparse.ArgumentParser):
    """Reports usage errors as validation failures (exit 1)."""

    def error(self, message: str):
        raise ValidationError(message)


def _params(args: argparse.Namespace) -> Params:
    if getattr(args, "nu", None) is not None:
        return NuParams(nu=parse_complex(args.nu))
    if getattr(args, "m", None) is None:
        raise ValidationError("Give --m (with --kappa) or --nu")
    kappa = parse_complex(args.kappa) if args.kappa is not None else 0j
    return ModelParams(m=parse_complex(args.m), kappa=kappa)


def _model_only(p: Params, command: str) -> ModelParams:
    if not isinstance(p, ModelParams):
        raise ValidationError(f"{command} needs --m/--kappa")
    return p


def _curve_frame(xs: np.ndarray, values: np.ndarray) -> pd.DataFrame:
    values = np.asarray(values, dtype=complex)
    return pd.DataFrame({"param": xs, "re": values.real, "im": values.imag})


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------

def cmd_classify(args) -> CommandResult:
    p = _params(args)
    return CommandResult({
        "params": p.to_dict(),
        "classification": classify(p).to_dict(),
        "self_adjoint": is_self_adjoint(p),
        "bounded_wave_operators": wave_operator_bounds(p),
    })


def cmd_spectrum(args) -> CommandResult:
    p = _params(args)
    window = parse_range(args.window) if args.window else None
    data = spectrum(p, window)
    payload = {"params": p.to_dict(), "spectrum": data.to_dict()}
    if isinstance(p, ModelParams):
        payload["count_bounds"] = count_bounds(p).to_dict()
    frame = pd.DataFrame({
        "branch": data.branch_indices,
        "re": [lam.real for lam in data.eigenvalues],
        "im": [lam.imag for lam in data.eigenvalues],
    })
    return CommandResult(payload, frame)


def _x_window(k_window: Optional[Tuple[float, float]]) -> Optional[Tuple[float, float]]:
    """Momentum window to position window, x = ln(k/2)."""
    if k_window is None:
        return None
    lo, hi = k_window
    return (math.log(lo / 2.0) if lo > 0 else -math.inf,
            math.log(hi / 2.0) if math.isfinite(hi) else math.inf)


def cmd_singularities(args) -> CommandResult:
    p = _params(args)
    window = parse_range(args.window) if args.window else None
    if isinstance(p, NuParams):
        result = omega_nu(p)
        points = lambda_set(p, x_window=_x_window(window))
    else:
        result = omega_set(p, args.sign, window)
        points = lambda_set(p, args.sign, _x_window(window))
    payload = {"params": p.to_dict(), "singularities": result.to_dict(), "lambda": points}
    frame = pd.DataFrame({"branch": result.branches, "k": result.momenta, "energy": result.energies})
    return CommandResult(payload, frame)


def cmd_smatrix(args) -> CommandResult:
    p = _params(args)
    lo, hi = parse_range(args.window) if args.window else (-10.0, 10.0)
    xs = np.linspace(lo, hi, args.points)
    sign = Sign.parse(args.sign)
    if isinstance(p, NuParams):
        func = smatrix_nu(p, sign)
    else:
        func = smatrix(p) if sign is Sign.MINUS else smatrix_plus(p)
    values = np.asarray(func(xs), dtype=complex)
    payload = {
        "params": p.to_dict(),
        "sign": sign.value,
        "x": xs.tolist(),
        "values": [to_pair(v) for v in values],
    }
    return CommandResult(payload, _curve_frame(xs, values))


def cmd_boundary(args) -> CommandResult:
    p = _params(args)
    b = boundary_symbol(p, args.sign)
    return CommandResult(b.to_dict(), b.to_frame())


def cmd_winding(args) -> CommandResult:
    p = _params(args)
    if isinstance(p, ModelParams) and p.is_periodic:
        if p.m.imag <= 0:
            raise ValidationError("For Re(m) = 0 give m = n i with n > 0")
        result = winding_periodic(p.m.imag, p.kappa)
        return CommandResult({"params": p.to_dict(), "periodic": True, **result.to_dict()})
    result = winding_square(boundary_symbol(p, args.sign))
    return CommandResult({"params": p.to_dict(), "periodic": False, "sign": args.sign, **result.to_dict()})


def cmd_verify_levinson(args) -> CommandResult:
    report = verify_levinson(_params(args))
    return CommandResult(report.to_dict(), passed=report.passed)


def cmd_verify_periodic(args) -> CommandResult:
    report = verify_periodic_levinson(args.n, parse_complex(args.kappa), args.ell_max)
    return CommandResult(report.to_dict(), passed=report.passed)


def cmd_resolvent(args) -> CommandResult:
    p = _params(args)
    if isinstance(p, NuParams):
        result = resolvent_kernel_nu(p, args.sign, args.k, args.r, args.s)
    else:
        result = resolvent_kernel(p, args.sign, args.k, args.r, args.s)
    return CommandResult({"params": p.to_dict(), **result.to_dict()})


def cmd_accumulate(args) -> CommandResult:
    m = parse_complex(args.m) if args.m is not None else 0.5
    run = accumulation_sequence(args.target, args.family, args.terms, args.half_plane, m)
    frame = pd.DataFrame({
        "n": np.arange(1, len(run.eigenvalue_sequence) + 1),
        "re": [lam.real for lam in run.eigenvalue_sequence],
        "im": [lam.imag for lam in run.eigenvalue_sequence],
        "distance": run.distances,
    })
    return CommandResult(run.to_dict(), frame)


def cmd_opcheck(args) -> CommandResult:
    p = _params(args)
    grid = parse_grid(args.grid) if args.grid else GridSpec.from_config()
    if args.check == "scattering":
        report = scattering_operator_check(_model_only(p, "opcheck --check scattering"), grid, args.trials, args.seed)
    else:
        report = transpose_compose_check(p, grid, args.trials, args.seed)
    payload = report.to_dict()
    passed = True
    if args.threshold is not None:
        payload["threshold"] = args.threshold
        passed = report.max_residual < args.threshold
    return CommandResult(payload, passed=passed)


def cmd_hankel(args) -> CommandResult:
    m = parse_complex(args.m)
    r = np.linspace(args.center - 5 * args.width, args.center + 5 * args.width, args.points)
    f = np.exp(-((r - args.center) ** 2) / (2 * args.width ** 2))
    s = np.linspace(0.0, args.s_max, args.s_points)
    forward = hankel_transform(m, f, r, s)
    back = hankel_transform(m, forward, s, r)
    error = float(np.max(np.abs(back - f)))
    payload = {"m": to_pair(m), "involution_sup_error": error, "s_max": args.s_max}
    return CommandResult(payload, _curve_frame(r, back))


def cmd_sweep(args) -> CommandResult:
    if args.kind == "fredholm":
        frame = fredholm_sweep(args.count, args.count_nu, args.seed)
        failed = frame["status"].isin(["fail", "error"])
    elif args.kind == "periodic":
        frame = periodic_sweep()
        failed = frame["status"].isin(["fail", "error"])
    else:
        frame = count_bounds_sweep(args.count, args.seed)
        failed = ~frame["within"].astype(bool)
    payload = {
        "kind": args.kind,
        "points": int(len(frame)),
        "failures": int(failed.sum()),
        "rows": json.loads(frame.to_json(orient="records")),
    }
    return CommandResult(payload, frame, passed=not bool(failed.any()))


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------

def _add_params(sub: argparse.ArgumentParser, nu: bool = True) -> None:
    sub.add_argument("--m", help="order m, e.g. 0.5 or 0.3+0.4i")
    sub.add_argument("--kappa", help="boundary parameter kappa (default 0)")
    if nu:
        sub.add_argument("--nu", help="boundary parameter nu of H_0^nu")


def _add_sign(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--sign", choices=["+", "-"], default="-")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="levinson_cli", description="Levinson theorem laboratory for inverse-square potentials")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--output", type=Path, help="write the report here instead of stdout")
    parser.add_argument("--log-level", default=None)
    parser.add_argument("--tol", type=float, help="override the branch/boundary tolerance")
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)

    sub = subs.add_parser("classify")
    _add_params(sub)

    sub = subs.add_parser("spectrum")
    _add_params(sub)
    sub.add_argument("--window", help="|lambda| window lo:hi")

    sub = subs.add_parser("singularities")
    _add_params(sub)
    _add_sign(sub)
    sub.add_argument("--window", help="momentum window lo:hi")

    sub = subs.add_parser("smatrix")
    _add_params(sub)
    _add_sign(sub)
    sub.add_argument("--window", help="x range lo:hi")
    sub.add_argument("--points", type=int, default=201)

    sub = subs.add_parser("boundary")
    _add_params(sub)
    _add_sign(sub)

    sub = subs.add_parser("winding")
    _add_params(sub)
    _add_sign(sub)

    sub = subs.add_parser("verify-levinson")
    _add_params(sub)

    sub = subs.add_parser("verify-periodic")
    sub.add_argument("--n", type=float, required=True)
    sub.add_argument("--kappa", required=True)
    sub.add_argument("--ell-max", type=int, default=40)

    sub = subs.add_parser("resolvent")
    _add_params(sub)
    _add_sign(sub)
    sub.add_argument("--k", type=float, required=True)
    sub.add_argument("--r", type=float, required=True)
    sub.add_argument("--s", type=float, required=True)

    sub = subs.add_parser("accumulate")
    sub.add_argument("--target", type=float, required=True)
    sub.add_argument("--family", choices=["H_mk", "H_0nu"], default="H_mk")
    sub.add_argument("--terms", type=int, default=50)
    sub.add_argument("--half-plane", choices=["upper", "lower"], default="upper")
    sub.add_argument("--m", help="fixed order for the H_mk family (default 0.5)")

    sub = subs.add_parser("opcheck")
    _add_params(sub)
    sub.add_argument("--grid", help="L:N")
    sub.add_argument("--trials", type=int, default=3)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--check", choices=["transpose", "scattering"], default="transpose")
    sub.add_argument("--threshold", type=float, help="fail (exit 2) above this residual")

    sub = subs.add_parser("hankel")
    sub.add_argument("--m", default="0.5")
    sub.add_argument("--center", type=float, default=2.0)
    sub.add_argument("--width", type=float, default=0.2)
    sub.add_argument("--points", type=int, default=401)
    sub.add_argument("--s-max", type=float, default=25.0)
    sub.add_argument("--s-points", type=int, default=2501)

    sub = subs.add_parser("sweep")
    sub.add_argument("kind", choices=["fredholm", "periodic", "counts"])
    sub.add_argument("--count", type=int, default=200)
    sub.add_argument("--count-nu", type=int, default=50)
    sub.add_argument("--seed", type=int)

    return parser


ROUTES: Dict[str, Callable[[argparse.Namespace], CommandResult]] = {
    "classify": cmd_classify,
    "spectrum": cmd_spectrum,
    "singularities": cmd_singularities,
    "smatrix": cmd_smatrix,
    "boundary": cmd_boundary,
    "winding": cmd_winding,
    "verify-levinson": cmd_verify_levinson,
    "verify-periodic": cmd_verify_periodic,
    "resolvent": cmd_resolvent,
    "accumulate": cmd_accumulate,
    "opcheck": cmd_opcheck,
    "hankel": cmd_hankel,
    "sweep": cmd_sweep,
}


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text + "\n")
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text + "\n", encoding="utf-8")
    logger.info("Report written to %s", output)


def _render(result: CommandResult, fmt: str, command: str) -> str:
    if fmt == "csv":
        if result.frame is None:
            raise ValidationError(f"{command} has no CSV form; use --format json")
        return result.frame.to_csv(index=False).rstrip("\n")
    return json.dumps(result.payload, indent=2, default=str)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, dispatch and report; returns the process exit code."""
    output: Optional[Path] = None
    tolerances = get_config().tolerances
    saved = dict(tolerances)
    try:
        args = build_parser().parse_args(attach_values(sys.argv[1:] if argv is None else argv))
        output = args.output
        configure_logging(args.log_level)
        if args.command is None:
            raise ValidationError(f"Choose a subcommand: {', '.join(ROUTES)}")
        if args.tol is not None:
            tolerances["branch_integer"] = args.tol
            tolerances["boundary"] = args.tol
        result = ROUTES[args.command](args)
        _emit(_render(result, args.format, args.command), output)
        status = ExitStatus.SUCCESS if result.passed else ExitStatus.VERIFICATION_FAILURE
        return status.value
    except LevinsonError as e:
        logger.error(f"{type(e).__name__}: {e}")
        _emit(json.dumps({"error": str(e), "kind": type(e).__name__, "exit_code": e.exit_code}), output)
        return e.exit_code
    finally:
        tolerances.clear()
        tolerances.update(saved)


def main() -> None:
    """Main entry point for the command line."""
    sys.exit(run())


if __name__ == "__main__":
    main()
