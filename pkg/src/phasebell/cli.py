"""Command-line front end reproducing every quantitative result of the engine.

Commands: scan-correlator, chsh-scan, classify, negativity, fock-verify,
reproduce-all.  Tables go to stdout or --out as CSV (RFC 4180) or JSON (an
array of flat objects); floats are printed with 12 significant digits.  Exit
codes: 0 all gates pass, 1 at least one gate failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import acceptance, bell, correlations, fock_oracle, observables, phase_space
from .superposition import min_wigner_scan, rotated_state

USAGE_ERROR = 2

_DEFAULTS = {
    "hamiltonian": "h0",
    "zeta": None,
    "tau": None,
    "theta_grid": None,
    "samples": 10**6,
    "seed": 0,
    "quad_order": 64,
    "fock_n": 200,
    "out": None,
    "format": "csv",
    "flip_sign_convention": False,
    "box": 4.0,
    "grid_points": 21,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    hamiltonian: str
    zeta: float | None
    tau: float | None
    theta_grid: np.ndarray | None
    samples: int
    seed: int
    quad_order: int
    fock_n: int
    out: str | None
    format: str
    flip_sign_convention: bool
    box: float
    grid_points: int

    def __post_init__(self):
        if self.zeta is not None and self.tau is not None:
            raise UsageError("give exactly one of --zeta / --tau")
        if self.samples < 10**3:
            raise UsageError("--samples must be >= 1000")
        if self.fock_n < 16:
            raise UsageError("--fock-n must be >= 16")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.hamiltonian not in ("h0", "hf"):
            raise UsageError(f"unknown hamiltonian {self.hamiltonian!r}")

    def strength(self, default_zeta: float = 0.5) -> float:
        """tanh(2*zeta) from whichever squeeze flag was given."""
        if self.tau is not None:
            return correlations.tanh_two_zeta(None, self.tau)
        zeta = self.zeta if self.zeta is not None else default_zeta
        return correlations.tanh_two_zeta(zeta)

    def zeta_equivalent(self, default_zeta: float = 0.5) -> float:
        """A zeta value usable for state construction (from --zeta or --tau)."""
        if self.tau is not None:
            if abs(self.tau) >= 1.0:
                raise UsageError("--tau must satisfy |tau| < 1 for state building")
            return math.atanh(self.tau) / 2.0
        return self.zeta if self.zeta is not None else default_zeta


def _parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise UsageError(f"grid must be lo:hi:n, got {text!r}") from exc
    if n < 1:
        raise UsageError("grid needs at least one point")
    return np.linspace(lo, hi, n)


def _read_config_file(path: str) -> dict:
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line is not key=value: {raw.strip()!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


_BOOL_KEYS = {"flip_sign_convention"}
_INT_KEYS = {"samples", "seed", "quad_order", "fock_n", "grid_points"}
_FLOAT_KEYS = {"zeta", "tau", "box"}


def _coerce(key: str, value):
    if isinstance(value, str):
        if key in _BOOL_KEYS:
            return value.lower() in ("1", "true", "yes", "on")
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "theta_grid":
            return value
    return value


def _resolve(args: argparse.Namespace) -> RunConfig:
    """Flags override config-file entries, which override defaults."""
    file_values = _read_config_file(args.config) if args.config else {}
    defaults = dict(_DEFAULTS)
    if args.command == "reproduce-all":
        defaults["samples"] = 10**7  # the acceptance budget
    merged = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in file_values:
            merged[key] = _coerce(key, file_values[key])
        else:
            merged[key] = default
    grid = merged["theta_grid"]
    if isinstance(grid, str):
        grid = _parse_grid(grid)
    return RunConfig(command=args.command, theta_grid=grid,
                     **{k: v for k, v in merged.items() if k != "theta_grid"})


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _emit(rows: list[dict], config: RunConfig) -> None:
    if not rows:
        return
    fields = list(rows[0].keys())
    if config.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_fmt(row[k]) for k in fields])
        text = buf.getvalue()
    else:
        def jsonable(v):
            if isinstance(v, float):
                return float(f"{v:.12g}")
            return v
        text = json.dumps(
            [{k: jsonable(row[k]) for k in fields} for row in rows], indent=2
        ) + "\n"
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _correlator_closed(config: RunConfig, strength: float):
    if config.hamiltonian == "h0":
        return lambda ta, tb: correlations.correlator_h0(None, ta, tb, tau=strength)
    return lambda ta, tb: correlations.correlator_hf(None, ta, tb, tau=strength)


def cmd_scan_correlator(config: RunConfig) -> tuple[list[dict], bool]:
    grid = config.theta_grid if config.theta_grid is not None else np.linspace(0.0, 2.0, 3)
    pairs = ([(float(t), 0.0) for t in grid] if config.hamiltonian == "h0"
             else [(float(a), float(b)) for a in grid for b in grid])
    strength = config.strength()
    zeta_eq = config.zeta_equivalent()
    closed_fn = _correlator_closed(config, strength)
    dv1, dv2 = observables.sign_of_linear(1), observables.sign_of_linear(2)
    maps = (phase_space.TwoModeMap.harmonic if config.hamiltonian == "h0"
            else phase_space.TwoModeMap.free)
    base = phase_space.tmss_state(
        zeta_eq, flip_sign_convention=config.flip_sign_convention
    )
    rows, ok = [], True
    for i, (t1, t2) in enumerate(pairs):
        closed = closed_fn(t1, t2).value
        state = phase_space.evolve(base, maps(t1, t2))
        orth = correlations.correlator_orthant(state, dv1, dv2)
        mc = correlations.correlator_numeric(
            state, dv1, dv2, "monte-carlo", samples=config.samples,
            seed=config.seed + i,
        )
        p_pm = correlations.orthant(orth.detail["rho"]).p_pm
        disagreement = max(abs(closed - orth.value),
                           abs(closed - mc.value) - 4.0 * mc.stderr)
        row_ok = (abs(closed - orth.value) <= 1e-6
                  and abs(closed - mc.value) <= 4.0 * mc.stderr)
        ok = ok and row_ok
        rows.append({
            "zeta": zeta_eq, "t1": t1, "t2": t2,
            "e_closed": closed, "e_orthant": orth.value, "e_mc": mc.value,
            "stderr": mc.stderr, "p_pm": p_pm,
            "max_disagreement": disagreement, "ok": row_ok,
        })
    return rows, ok


def _fock_gated(tail: float) -> bool:
    """Fock columns are gated only where the truncation tail is negligible."""
    return tail <= 1e-6


def cmd_chsh_scan(config: RunConfig) -> tuple[list[dict], bool]:
    if config.zeta is not None or config.tau is not None:
        zetas = [config.zeta_equivalent()]
    elif config.theta_grid is not None:
        zetas = [float(z) for z in config.theta_grid]
    else:
        zetas = [0.0, 0.5, 1.0, 1.5, 2.0]
    rows, ok = [], True
    for zeta in zetas:
        tau = math.tanh(2.0 * zeta)
        opt_h0 = bell.optimize_settings(
            lambda ta, tb: correlations.correlator_h0(zeta, ta, tb).value,
            bounds=(0.0, 2.0 * math.pi))
        opt_hf = bell.optimize_settings(
            lambda ta, tb: correlations.correlator_hf(zeta, ta, tb).value,
            bounds=(0.0, 50.0))
        tail = fock_oracle.tmss_coeffs(zeta, config.fock_n).tail_bound
        spin_fock = fock_oracle.spin_bell_max(zeta, config.fock_n)
        spin_closed = 2.0 * math.sqrt(1.0 + tau * tau)
        pi_closed = 2.0 * math.sqrt(2.0) * (2.0 / math.pi) * math.atan(math.sinh(2.0 * zeta))
        pi_fock = fock_oracle.pi_chsh_optimum(zeta, config.fock_n)[0]
        gated = _fock_gated(tail)
        row_ok = (opt_h0.value <= bell.CLASSICAL_BOUND + bell.BOUND_TOL
                  and opt_hf.value <= bell.CLASSICAL_BOUND + bell.BOUND_TOL)
        if gated:
            row_ok = row_ok and abs(spin_fock - spin_closed) <= 1e-4
            row_ok = row_ok and abs(pi_fock - pi_closed) <= 5e-3
        for v in (opt_h0.value, opt_hf.value, spin_fock, pi_fock):
            row_ok = row_ok and abs(v) <= bell.CIRELSON_BOUND + bell.BOUND_TOL
        ok = ok and row_ok
        rows.append({
            "zeta": zeta, "h0_optimum": opt_h0.value, "hf_optimum": opt_hf.value,
            "spin_fock": spin_fock, "spin_closed": spin_closed,
            "pi_fock": pi_fock, "pi_closed": pi_closed,
            "tail_bound": tail, "gated": gated, "ok": row_ok,
        })
    return rows, ok


def cmd_classify(config: RunConfig) -> tuple[list[dict], bool]:
    expected = {"sign-linear": True, "func-linear": True, "parity-z": False,
                "parity-y-singular": False, "quadratic-ho": False}
    rows, ok = [], True
    for dv in observables.catalog():
        report = observables.classify(dv)
        row_ok = report.proper == expected[dv.kind]
        ok = ok and row_ok
        rows.append({
            "kind": dv.kind, "proper": report.proper, "bounded": report.bounded,
            "spectrum": report.spectrum.kind, "reason": report.reason, "ok": row_ok,
        })
    return rows, ok


def cmd_negativity(config: RunConfig) -> tuple[list[dict], bool]:
    gammas = (config.theta_grid if config.theta_grid is not None
              else np.array([0.0, math.pi / 4.0]))
    zeta = config.zeta if config.zeta is not None else 0.5
    rows = []
    found = False
    for gamma in gammas:
        point, value = min_wigner_scan(
            rotated_state(zeta, float(gamma)), config.box, config.grid_points
        )
        negative = value < 0.0
        found = found or negative
        rows.append({
            "gamma": float(gamma), "zeta": zeta,
            "q1": point.q1, "q2": point.q2, "p1": point.p1, "p2": point.p2,
            "min_value": value, "negative": negative,
        })
    return rows, found


def cmd_fock_verify(config: RunConfig) -> tuple[list[dict], bool]:
    if config.zeta is not None or config.tau is not None:
        zetas = [config.zeta_equivalent()]
    elif config.theta_grid is not None:
        zetas = [float(z) for z in config.theta_grid]
    else:
        zetas = [0.0, 0.25, 0.5, 1.0, 2.0]
    rows, ok = [], True
    for zeta in zetas:
        corr = fock_oracle.parity_correlator(zeta, config.fock_n)
        tail = fock_oracle.tmss_coeffs(zeta, config.fock_n).tail_bound
        tau = math.tanh(2.0 * zeta)
        spin_fock = fock_oracle.spin_bell_max(zeta, config.fock_n)
        spin_closed = 2.0 * math.sqrt(1.0 + tau * tau)
        pi_fock = fock_oracle.pi_chsh_optimum(zeta, config.fock_n)[0]
        pi_closed = 2.0 * math.sqrt(2.0) * (2.0 / math.pi) * math.atan(math.sinh(2.0 * zeta))
        f_err = abs(corr.sx_sx - tau)
        gated = _fock_gated(tail)
        row_ok = True
        if gated:
            row_ok = (f_err <= max(1e-8, 10.0 * tail)
                      and abs(spin_fock - spin_closed) <= 1e-4
                      and abs(pi_fock - pi_closed) <= 5e-3)
        ok = ok and row_ok
        rows.append({
            "zeta": zeta, "sz_sz": corr.sz_sz, "sx_sx": corr.sx_sx,
            "tanh_2zeta": tau, "f_error": f_err,
            "spin_fock": spin_fock, "spin_closed": spin_closed,
            "pi_fock": pi_fock, "pi_closed": pi_closed,
            "tail_bound": tail, "gated": gated, "ok": row_ok,
        })
    return rows, ok


def cmd_reproduce_all(config: RunConfig) -> tuple[list[dict], bool]:
    results = acceptance.run_all(acceptance.AcceptanceConfig(
        samples=config.samples,
        fock_n=config.fock_n,
        seed=config.seed if config.seed != 0 else 20260809,
        quad_order=config.quad_order,
        flip_sign_convention=config.flip_sign_convention,
    ))
    for r in results:
        print(r.line())
    rows = [{
        "criterion": r.number, "title": r.title, "passed": r.passed,
        "detail": r.detail, "elapsed_s": r.elapsed,
    } for r in results]
    return rows, all(r.passed for r in results)


_COMMANDS = {
    "scan-correlator": cmd_scan_correlator,
    "chsh-scan": cmd_chsh_scan,
    "classify": cmd_classify,
    "negativity": cmd_negativity,
    "fock-verify": cmd_fock_verify,
    "reproduce-all": cmd_reproduce_all,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasebell",
        description="Phase-space Bell/CHSH correlation engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--hamiltonian", choices=("h0", "hf"), default=None,
                       help="evolution family: oscillator (h0) or free (hf)")
        p.add_argument("--zeta", type=float, default=None, help="squeeze parameter")
        p.add_argument("--tau", type=float, default=None,
                       help="tanh(2*zeta); safe near the entangled limit")
        p.add_argument("--theta-grid", dest="theta_grid", default=None,
                       metavar="LO:HI:N",
                       help="scan grid (times/angles; zeta values for the scan "
                            "commands; gamma values for negativity)")
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--quad-order", dest="quad_order", type=int, default=None)
        p.add_argument("--fock-n", dest="fock_n", type=int, default=None)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--flip-sign-convention", dest="flip_sign_convention",
                       action="store_const", const=True, default=None,
                       help="flip the squeezed-state coupling signs end to end")
        p.add_argument("--box", type=float, default=None,
                       help="negativity scan half-width")
        p.add_argument("--grid-points", dest="grid_points", type=int, default=None,
                       help="negativity scan points per axis")
        p.add_argument("--config", default=None,
                       help="key=value config file (flags take precedence)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve(args)
        rows, ok = _COMMANDS[config.command](config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    _emit(rows, config)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
