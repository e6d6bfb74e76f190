"""Command-line entry point: ``kerrparity <subcommand> [options]``.

Exit status is 0 on success, 2 on a usage error and 1 when the model rejects
the parameters or a numerical check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import channel as ch
from .errors import NumericalError
from .gate import Detection, GateConfig, LossMode, gate_report, theta_for_distance
from .oracle import oracle_coherence
from .scenarios import (
    AlphaSweep,
    FiberSpec,
    GammaSweep,
    GeometricGrid,
    amplitude_over_length,
    chi_over_gamma_for_db,
    db_per_km,
    fig3_sweep,
    fig4_sweep,
    length_for_theta,
    table1,
)

FIG3_COLUMNS = ["alpha", "theta", "length_km", "A", "absC"]
FIG4_COLUMNS = ["gamma", "alpha", "theta", "A", "absC", "log_absC"]
TABLE1_COLUMNS = ["detection", "chi_over_gamma", "theta", "alpha", "length_km", "A", "absC", "below_1e-3"]

_DETECTION = {"hd": Detection.HOMODYNE, "homodyne": Detection.HOMODYNE, "pnr": Detection.PNR}


def _positive_or_inf(text):
    value = float(text)
    if math.isnan(value) or value <= 0:
        raise argparse.ArgumentTypeError("must be positive (or inf)")
    return value


def _detection(text):
    try:
        return _DETECTION[text.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError("expected hd, homodyne or pnr") from None


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _fmt(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".6g")
    if value is None:
        return ""
    return str(value)


def render(rows, fmt, columns=None) -> str:
    """Serialize one record (dict) or a table (list of dicts) as JSON or CSV."""
    records = [rows] if isinstance(rows, dict) else list(rows)
    if fmt == "json":
        payload = {k: _clean(v) for k, v in rows.items()} if isinstance(rows, dict) else [
            {k: _clean(v) for k, v in r.items()} for r in records
        ]
        return json.dumps(payload, indent=2) + "\n"
    columns = columns or (list(records[0]) if records else [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _angle(args):
    if args.theta is not None:
        return args.theta
    return theta_for_distance(args.alpha, args.distance, args.detection)


def cmd_channel(args):
    p = ch.ChannelParams(args.alpha, _angle(args), args.chi_over_gamma, args.delta_theta)
    if args.method == "closed":
        log_c = ch.coherence_exponent(p)
    elif args.method == "stepper":
        c = ch.stepper_coherence(p)
        log_c = complex(math.log(abs(c)), math.atan2(c.imag, c.real)) if c else complex(-math.inf, 0)
    else:
        log_c = ch.continuum_exponent(p.alpha0, p.theta, p.chi_over_gamma)
    c = complex(math.exp(log_c.real) * complex(math.cos(log_c.imag), math.sin(log_c.imag)))
    return {
        "alpha": p.alpha0,
        "theta": p.theta,
        "chi_over_gamma": p.chi_over_gamma,
        "A": ch.amplitude_param(p.gamma_t),
        "absC": abs(c),
        "log_absC": log_c.real,
        "C_re": c.real,
        "C_im": c.imag,
    }, None


def cmd_gate(args):
    cfg = GateConfig(
        alpha0=args.alpha,
        detection=args.detection,
        target_distance=args.distance if args.theta is None else None,
        theta=args.theta,
        chi_over_gamma=args.chi_over_gamma,
        loss_mode=LossMode(args.loss_mode),
        delta_theta=args.delta_theta,
        n_grid=args.n_grid,
        n_max=args.n_max,
    )
    out = gate_report(cfg).as_dict()
    out = {"alpha": args.alpha, "detection": cfg.detection.value, "loss_mode": cfg.loss_mode.value, **out}
    return out, None


def cmd_table1(args):
    return table1(args.delta_theta, args.l_pi, args.workers), TABLE1_COLUMNS


def cmd_fig3(args):
    distance = args.distance
    spec = AlphaSweep(
        detection=args.detection,
        chi_over_gamma=args.chi_over_gamma,
        grid=GeometricGrid(args.alpha_min, args.alpha_max, args.points),
        fixed_distance=distance,
        l_pi=args.l_pi,
        delta_theta=args.delta_theta,
    )
    rows, skipped = fig3_sweep(spec, args.workers)
    for s in skipped:
        print(f"warning: skipped alpha={s['alpha']:g}: {s['reason']}", file=sys.stderr)
    return rows, FIG3_COLUMNS


def cmd_fig4(args):
    spec = GammaSweep(
        alpha=args.alpha,
        grid=GeometricGrid(args.gamma_min, args.gamma_max, args.points),
        chi=args.chi,
        theta=args.theta,
        delta_theta=args.delta_theta,
    )
    return fig4_sweep(spec, args.workers), FIG4_COLUMNS


def cmd_convert(args):
    if args.db_per_km is not None:
        ratio = chi_over_gamma_for_db(args.db_per_km, args.l_pi)
    else:
        ratio = args.chi_over_gamma
    spec = FiberSpec(ratio, args.l_pi)
    out = {"chi_over_gamma": ratio, "l_pi_km": args.l_pi, "db_per_km": db_per_km(spec)}
    if args.length_km is not None:
        out["length_km"] = args.length_km
        out["A"] = amplitude_over_length(args.length_km, spec)
    if args.theta is not None:
        out["theta"] = args.theta
        out["length_km"] = length_for_theta(args.theta, spec)
    return out, None


def cmd_oracle(args):
    fock = oracle_coherence(args.alpha, args.theta, args.chi_over_gamma)
    closed = ch.coherence_closed_form(ch.ChannelParams(args.alpha, args.theta, args.chi_over_gamma, args.delta_theta))
    return {
        "alpha": args.alpha,
        "theta": args.theta,
        "chi_over_gamma": args.chi_over_gamma,
        "C_oracle_re": fock.coherence.real,
        "C_oracle_im": fock.coherence.imag,
        "C_closed_re": closed.real,
        "C_closed_im": closed.imag,
        "abs_diff": abs(fock.coherence - closed),
        "residual": fock.residual,
    }, None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--delta-theta", type=float, default=ch.DELTA_THETA_DEFAULT)

    workers = argparse.ArgumentParser(add_help=False)
    workers.add_argument("--workers", type=int, default=1, help="processes for sweep points")
    workers.add_argument("--l-pi", type=float, default=3000.0, help="fiber length (km) for theta = pi")

    parser = argparse.ArgumentParser(prog="kerrparity", description="Lossy cross-Kerr parity gate simulator")
    sub = parser.add_subparsers(
        dest="command", required=True, metavar="{channel,gate,table1,fig3,fig4,convert}"
    )

    def angle_args(p, need_detection):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--theta", type=float)
        g.add_argument("--distance", type=float, help="branch separation d_HD or d_PD")
        p.add_argument("--detection", type=_detection, default=Detection.PNR, required=need_detection)

    p = sub.add_parser("channel", parents=[common], help="A and C for one medium transit")
    p.add_argument("--alpha", type=float, required=True)
    angle_args(p, False)
    p.add_argument("--chi-over-gamma", type=_positive_or_inf, default=math.inf)
    p.add_argument("--method", choices=["closed", "stepper", "continuum"], default="closed")
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("gate", parents=[common], help="full gate run with readout")
    p.add_argument("--alpha", type=float, required=True)
    angle_args(p, False)
    p.add_argument("--chi-over-gamma", type=_positive_or_inf, default=math.inf)
    p.add_argument("--loss-mode", choices=[m.value for m in LossMode], default=LossMode.BOTH.value)
    p.add_argument("--n-grid", type=int, default=4001)
    p.add_argument("--n-max", type=int)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("table1", parents=[common, workers], help="amplitude/coherence table")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("fig3", parents=[common, workers], help="scan over alpha at fixed separation")
    p.add_argument("--detection", type=_detection, required=True)
    p.add_argument("--distance", type=float)
    p.add_argument("--chi-over-gamma", type=_positive_or_inf, default=0.0125)
    p.add_argument("--alpha-min", type=float)
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--points", type=int, default=40)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("fig4", parents=[common, workers], help="scan over gamma at fixed chi")
    p.add_argument("--alpha", type=float, default=1e3)
    p.add_argument("--theta", type=float)
    p.add_argument("--chi", type=float, default=0.01)
    p.add_argument("--gamma-min", type=float, default=1e-6)
    p.add_argument("--gamma-max", type=float, default=1e-2)
    p.add_argument("--points", type=int, default=50)
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("convert", parents=[common], help="fiber loss conversions")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--chi-over-gamma", type=_positive_or_inf)
    g.add_argument("--db-per-km", type=float)
    p.add_argument("--l-pi", type=float, default=3000.0)
    p.add_argument("--length-km", type=float, help="also report A after this length")
    p.add_argument("--theta", type=float, help="also report the fiber length for this angle")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("oracle", parents=[common])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--chi-over-gamma", type=_positive_or_inf, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def _fill_fig3_defaults(args):
    if args.command != "fig3":
        return
    hd = args.detection is Detection.HOMODYNE
    if args.distance is None:
        args.distance = 4.0 if hd else math.pi
    if args.alpha_min is None:
        args.alpha_min = 100.0 if hd else 300.0
    if args.alpha_max is None:
        args.alpha_max = 3000.0 if hd else 3e4


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _fill_fig3_defaults(args)
    try:
        rows, columns = args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = render(rows, args.format, columns)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
