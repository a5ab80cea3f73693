"""Command-line front end.

Four subcommands cover the workflow: ``simulate`` runs the walk and writes
finding probabilities, ``density`` tabulates the limit density on a grid,
``compare`` overlays simulation against the rescaled limit law and writes a
comparison report, ``spectrum`` tabulates eigenvalues, group velocities and
the speed profile over momentum space.

Outputs are deterministic: identical flags produce byte-identical CSV
(floats at 17 significant digits, LF line endings). Every run writes a
RunRecord JSON next to its data file with the full parameter set and a
checksum of the data bytes, so any output can be reproduced from its record
alone. Exit codes: 0 success, 2 usage or validation error, 3 numeric
non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .analysis import DEFAULT_QUADRATURE_NODES, build_report
from .core import (
    GAPLESS_ANGLE_TOL,
    InitialCoin,
    NonConvergenceError,
    WalkParameters,
    is_gapless_angle,
    make_initial_coin,
    make_parameters,
)
from .engine import distribution, initial_state, step
from .limit import approximate_pmf, limit_density, support_geometry
from .spectral import (
    _phase_sine,
    group_velocity,
    hadamard_factorization_residual,
    phase_cosine,
    speed_profile,
)

__all__ = ["main", "RunRecord", "load_run_record", "parse_complex"]

TOOL_NAME = "qwalk"

# coin amplitudes given on the command line are renormalized when their
# squared norm is off by at most this much (covers truncated decimals);
# larger deviations are rejected as usage errors
COIN_NORM_TOL = 1e-6

# strict norm deviations below this pass through without renormalization
_EXACT_NORM_TOL = 1e-12

_DEFAULT_ALPHA = "0.70710678118654752+0i"
_DEFAULT_BETA = "0+0.70710678118654752i"

# grid work is split into fixed-size blocks so the output bytes do not
# depend on the worker count
_CHUNK = 256

_MOMENT_ORDERS = (0, 1, 2)
_MOMENT_CROSS_CHECK_TOL = 1e-6
_GAP_MARGIN = 0.8
_NO_GAP_WINDOW = 0.1


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' with optional signs; a trailing i marks the imaginary unit.

    Accepts pure reals ('0.5'), pure imaginaries ('0.5i', '-i') and
    exponent notation ('1e-3+2.5i'). The decimal separator is always '.'.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty complex number")
    if s.endswith(("i", "I")):
        s = s[:-1] + "j"
    try:
        z = complex(s)
    except ValueError:
        raise ValueError(
            f"cannot parse {text!r} as a complex number; expected a+bi") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"complex number {text!r} is not finite")
    return z


def format_complex(z: complex) -> str:
    """Render a complex value in the same a+bi form the parser accepts."""
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _parse_pi_fraction(text: str) -> float:
    m = re.fullmatch(r"(\d+)\s*/\s*(\d+)", text.strip())
    if not m or int(m.group(2)) == 0:
        raise ValueError(
            f"cannot parse {text!r}; expected p/q with positive integers")
    return math.pi * int(m.group(1)) / int(m.group(2))


def _parse_steps_list(text: str) -> list[int]:
    try:
        values = sorted({int(part) for part in text.split(",")})
    except ValueError:
        raise ValueError(
            f"cannot parse {text!r}; expected comma-separated integers") from None
    if not values or values[0] < 0:
        raise ValueError("snapshot times must be nonnegative integers")
    return values


def _resolve_theta(args) -> tuple[WalkParameters, dict]:
    if args.theta is not None:
        try:
            value = float(args.theta)
        except ValueError:
            raise ValueError(
                f"cannot parse {args.theta!r} as a radian value") from None
    else:
        value = _parse_pi_fraction(args.theta_pi)
    params = make_parameters(value)
    entered = {
        "theta": args.theta,
        "theta_pi": args.theta_pi,
        "theta_radians": params.theta,
    }
    return params, entered


def _resolve_coin(args) -> tuple[InitialCoin, dict]:
    alpha_text = args.alpha if args.alpha is not None else _DEFAULT_ALPHA
    beta_text = args.beta if args.beta is not None else _DEFAULT_BETA
    alpha = parse_complex(alpha_text)
    beta = parse_complex(beta_text)
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm2 - 1.0) > COIN_NORM_TOL:
        raise ValueError(
            f"coin norm |alpha|^2 + |beta|^2 = {norm2!r} is too far from 1 "
            f"(tolerance {COIN_NORM_TOL})")
    if abs(norm2 - 1.0) > _EXACT_NORM_TOL:
        scale = math.sqrt(norm2)
        alpha /= scale
        beta /= scale
    coin = make_initial_coin(alpha, beta)
    entered = {
        "alpha": alpha_text,
        "beta": beta_text,
        "alpha_resolved": [coin.alpha.real, coin.alpha.imag],
        "beta_resolved": [coin.beta.real, coin.beta.imag],
    }
    return coin, entered


def _resolve_threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        env = os.environ.get("QWALK_THREADS", "").strip()
        if env:
            try:
                n = int(env)
            except ValueError:
                raise ValueError(
                    f"QWALK_THREADS={env!r} is not an integer") from None
        else:
            n = os.cpu_count() or 1
    if n < 1:
        raise ValueError(f"thread count must be >= 1, got {n}")
    return n


def _chunked_eval(func, xs: np.ndarray, threads: int) -> np.ndarray:
    """Evaluate func over xs in fixed-size blocks on a bounded pool."""
    blocks = [xs[i:i + _CHUNK] for i in range(0, len(xs), _CHUNK)]
    if threads == 1 or len(blocks) == 1:
        parts = [func(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(func, blocks))
    return np.concatenate(parts)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path: str, header: list[str], rows) -> bytes:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    data = buf.getvalue().encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    return data


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, ensure_ascii=False)
        fh.write("\n")


@dataclass(frozen=True)
class RunRecord:
    """Provenance of one CLI run: what was asked, when, and what came out.

    parameters holds every flag as entered plus its resolved value, so a
    recorded run can be replayed exactly; the data file it produced is
    identified by the checksum of its bytes.
    """

    tool: str
    version: str
    subcommand: str
    parameters: dict
    timestamp: str
    output_file: str
    output_sha256: str

    def as_dict(self) -> dict:
        return {
            "tool": self.tool,
            "version": self.version,
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "timestamp": self.timestamp,
            "output_file": self.output_file,
            "output_sha256": self.output_sha256,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RunRecord":
        return cls(**{k: payload[k] for k in (
            "tool", "version", "subcommand", "parameters", "timestamp",
            "output_file", "output_sha256")})


def load_run_record(path: str) -> RunRecord:
    with open(path, encoding="utf-8") as fh:
        return RunRecord.from_dict(json.load(fh))


def _record_run(out: str, subcommand: str, parameters: dict,
                csv_bytes: bytes) -> None:
    record = RunRecord(
        tool=TOOL_NAME,
        version=__version__,
        subcommand=subcommand,
        parameters=parameters,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        output_file=os.path.basename(out),
        output_sha256=hashlib.sha256(csv_bytes).hexdigest(),
    )
    _write_json(out + ".run.json", record.as_dict())


def _base_parameters(theta_entered: dict, threads: int) -> dict:
    return {
        **theta_entered,
        "threads": threads,
        "tolerances": {
            "coin_norm": COIN_NORM_TOL,
            "gapless_angle_routing": GAPLESS_ANGLE_TOL,
        },
    }


def _cmd_simulate(args) -> int:
    params, theta_entered = _resolve_theta(args)
    coin, coin_entered = _resolve_coin(args)
    threads = _resolve_threads(args)
    snapshots = _parse_steps_list(args.steps)
    wanted = set(snapshots)

    rows: list[tuple[str, str, str]] = []
    state = initial_state(coin)
    if 0 in wanted:
        dist = distribution(state)
        rows.extend((str(0), str(int(x)), _fmt(p))
                    for x, p in zip(dist.positions, dist.probs))
    for t in range(1, snapshots[-1] + 1):
        state = step(state, params)
        if t in wanted:
            dist = distribution(state)
            rows.extend((str(t), str(int(x)), _fmt(p))
                        for x, p in zip(dist.positions, dist.probs))

    data = _write_csv(args.out, ["t", "x", "prob"], rows)
    parameters = _base_parameters(theta_entered, threads)
    parameters.update(coin_entered)
    parameters["steps"] = snapshots
    _record_run(args.out, "simulate", parameters, data)
    print(f"wrote {args.out} ({len(rows)} rows, snapshots {snapshots})")
    return 0


def _cmd_density(args) -> int:
    params, theta_entered = _resolve_theta(args)
    coin, coin_entered = _resolve_coin(args)
    threads = _resolve_threads(args)
    if args.grid < 2:
        raise ValueError(f"grid must have at least 2 points, got {args.grid}")

    outer = support_geometry(params).outer
    xs = np.linspace(-outer - 0.1, outer + 0.1, args.grid)
    vals = _chunked_eval(lambda b: limit_density(b, coin, params), xs, threads)

    rows = [(_fmt(x), _fmt(v)) for x, v in zip(xs, vals)]
    data = _write_csv(args.out, ["x", "density"], rows)
    parameters = _base_parameters(theta_entered, threads)
    parameters.update(coin_entered)
    parameters["grid"] = args.grid
    _record_run(args.out, "density", parameters, data)
    print(f"wrote {args.out} ({args.grid} grid points, "
          f"support edge {outer:.6g})")
    return 0


def _cmd_compare(args) -> int:
    params, theta_entered = _resolve_theta(args)
    coin, coin_entered = _resolve_coin(args)
    threads = _resolve_threads(args)
    try:
        t = int(args.steps)
    except ValueError:
        raise ValueError(
            f"cannot parse {args.steps!r} as a step count") from None
    if t < 1:
        raise ValueError(f"compare needs at least 1 step, got {t}")

    state = initial_state(coin)
    for _ in range(t):
        state = step(state, params)
    dist = distribution(state)

    approx = _chunked_eval(
        lambda b: approximate_pmf(b, t, coin, params), dist.positions, threads)
    rows = [(str(int(x)), _fmt(p), _fmt(a))
            for x, p, a in zip(dist.positions, dist.probs, approx)]
    data = _write_csv(args.out, ["x", "prob_simulated", "prob_limit_approx"],
                      rows)

    report = build_report(dist, coin, params, margin=_GAP_MARGIN,
                          no_gap_window=_NO_GAP_WINDOW,
                          moment_orders=_MOMENT_ORDERS)
    _write_json(args.out + ".report.json", report.as_dict())

    parameters = _base_parameters(theta_entered, threads)
    parameters.update(coin_entered)
    parameters["steps"] = t
    parameters["gap_margin"] = _GAP_MARGIN
    parameters["no_gap_window"] = _NO_GAP_WINDOW
    parameters["moment_orders"] = list(_MOMENT_ORDERS)
    parameters["quadrature_nodes"] = DEFAULT_QUADRATURE_NODES
    parameters["tolerances"]["moment_cross_check"] = _MOMENT_CROSS_CHECK_TOL
    _record_run(args.out, "compare", parameters, data)

    mass_label = "central mass" if report.no_gap_regime else "gap mass"
    print(f"wrote {args.out} and {args.out}.report.json")
    print(f"t={t}  kolmogorov distance {report.kolmogorov_distance:.6g}  "
          f"{mass_label} {report.gap_mass:.6g}  "
          f"gap width {report.gap_width:.6g}")
    return 0


def _cmd_spectrum(args) -> int:
    params, theta_entered = _resolve_theta(args)
    threads = _resolve_threads(args)
    if args.grid < 1:
        raise ValueError(f"grid must have at least 1 point, got {args.grid}")

    half = (np.arange(args.grid) + 0.5) * np.pi / args.grid
    ks = np.concatenate([-half[::-1], half])
    with_residual = is_gapless_angle(params.theta)

    def block(kb: np.ndarray) -> np.ndarray:
        g = phase_cosine(kb, params)
        root = _phase_sine(kb, params)
        cols = [kb, g, root, g, -root,
                group_velocity(kb, params, 1),
                group_velocity(kb, params, 2),
                speed_profile(kb, params)]
        if with_residual:
            cols.append(hadamard_factorization_residual(kb, params))
        return np.column_stack(cols)

    table = _chunked_eval(block, ks, threads)
    header = ["k", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2",
              "group_velocity_1", "group_velocity_2", "speed_profile"]
    if with_residual:
        header.append("factorization_residual")
    rows = [tuple(_fmt(v) for v in row) for row in table]
    data = _write_csv(args.out, header, rows)

    parameters = _base_parameters(theta_entered, threads)
    parameters["grid"] = args.grid
    _record_run(args.out, "spectrum", parameters, data)
    print(f"wrote {args.out} ({len(ks)} momenta"
          + (", with factorization residuals)" if with_residual else ")"))
    return 0


def _add_common(parser: argparse.ArgumentParser, with_coin: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--theta", help="coin angle in radians, in (0, pi) "
                       "excluding pi/2")
    group.add_argument("--theta-pi", metavar="P/Q",
                       help="coin angle as the rational multiple (p/q)*pi; "
                       "use 1/4 or 3/4 for the gap-free walks")
    if with_coin:
        parser.add_argument("--alpha", help="launch coin weight on |0>, as "
                            f"a+bi (default {_DEFAULT_ALPHA})")
        parser.add_argument("--beta", help="launch coin weight on |1>, as "
                            f"a+bi (default {_DEFAULT_BETA})")
    parser.add_argument("--out", required=True,
                        help="output CSV path; the RunRecord goes to "
                        "<out>.run.json")
    parser.add_argument("--threads", type=int,
                        help="worker pool size (default: QWALK_THREADS "
                        "env var, then all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Simulate the two-operator quantum walk on the line and "
                    "compare it against its long-time limit laws.")
    parser.add_argument("--version", action="version",
                        version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("simulate",
                       help="run the walk and write finding probabilities")
    _add_common(p, with_coin=True)
    p.add_argument("--steps", required=True,
                   help="comma-separated snapshot times, e.g. 50 or "
                   "100,200,500")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("density",
                       help="tabulate the limit density on a uniform grid")
    _add_common(p, with_coin=True)
    p.add_argument("--grid", type=int, default=801,
                   help="number of grid points spanning the support plus a "
                   "0.1 margin (default 801)")
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("compare",
                       help="overlay a simulated distribution on the "
                       "rescaled limit law and write a comparison report")
    _add_common(p, with_coin=True)
    p.add_argument("--steps", required=True,
                   help="number of walk steps before comparing")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("spectrum",
                       help="tabulate eigenvalues, group velocities and the "
                       "speed profile over momentum space")
    _add_common(p, with_coin=False)
    p.add_argument("--grid", type=int, default=512,
                   help="momenta per half axis, sampled at interior "
                   "midpoints (default 512)")
    p.set_defaults(func=_cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse handles --help and usage errors itself
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
