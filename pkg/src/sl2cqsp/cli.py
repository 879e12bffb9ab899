"""``sl2cqsp`` command line.

Exit status: 0 on success, 1 for bad arguments or inputs, 2 when the numbers
land on a singularity (pole, degenerate channel, failed calibration).
"""

import argparse
import csv
import io
import json
import math
import os
import re
import sys

import numpy as np

from . import bosonic, dual, lax, lorentz, moebius, nlft, qsp
from .algebra import DET_TOL, as_sl2c, det2
from .errors import CalibrationError, DomainError

TOL_ENV = "SL2CQSP_TOL"

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_IMAG = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_COMPLEX = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<im>[+-](?:{_NUM})?)i)?$")


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(f"{self.prog}: {message}")


def parse_complex(text):
    """``a+bi`` with no spaces; ``bi`` and ``a`` alone are accepted too."""
    m = (_IMAG.match(text) or _COMPLEX.match(text)) if text else None
    if not m:
        raise argparse.ArgumentTypeError(f"expected a complex number like 0.3+0.2i, got {text!r}")
    re_part = float(m.groupdict().get("re") or 0.0)
    im = m.group("im")
    if im is None:
        im_part = 0.0
    elif im in ("", "+", "-"):
        im_part = -1.0 if im == "-" else 1.0
    else:
        im_part = float(im)
    return complex(re_part, im_part)


def parse_point(text):
    if text.strip().lower() in {"inf", "infinity", "oo"}:
        return moebius.INFINITY
    return parse_complex(text)


def positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text!r}")
    return value


# ------------------------------------------------------------------- output


def fmt(x):
    return format(float(x), ".17g")


def _json(obj):
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, (complex, np.complexfloating)):
        return _json([obj.real, obj.imag])
    if isinstance(obj, np.ndarray):
        return _json(obj.tolist())
    return json.dumps(obj)


def dumps_json(obj):
    return _json(obj) + "\n"


def dumps_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def complex_matrix(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


# -------------------------------------------------------------------- input


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc})") from None


def _schedule_and_signal(args):
    phases, signal = qsp.parse_schedule_document(read_json(args.phases))
    if args.w is not None:
        signal = qsp.ComplexSignal.from_w(args.w)
    if signal is None:
        raise ValueError("no signal given: pass --w or put delta/eta in the schedule file")
    return phases, signal


def _tolerance(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env is None:
        return None
    try:
        return positive_float(env)
    except argparse.ArgumentTypeError as exc:
        raise ValueError(f"{TOL_ENV}: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_qsp_eval(args, tol):
    phases, signal = _schedule_and_signal(args)
    if args.accurate:
        v = qsp.evaluate_accurate(phases, signal, ordering=args.ordering)
    else:
        v = qsp.evaluate(phases, signal, ordering=args.ordering)
    return dumps_json(
        {
            "w": signal.w,
            "delta": signal.delta,
            "eta": signal.eta,
            "V": complex_matrix(np.asarray(v).astype(complex)),
            "det_residual": float(abs(det2(v) - 1)),
        }
    )


def cmd_qsp_poly(args, tol):
    phases, _ = qsp.parse_schedule_document(read_json(args.phases))
    return dumps_json(qsp.fit_entry_polynomials(phases, args.samples, ordering=args.ordering).to_json())


def cmd_dual_map(args, tol):
    if (args.theta is None) == (args.params is None):
        raise ArgumentError("dual-map: pass exactly one of --theta or --params")
    if args.params is None:
        theta_dual = dual.dual_angle(args.theta)
        return dumps_json({"theta": args.theta, "theta_dual": theta_dual, "w": theta_dual})
    params = dual.FloquetParams.from_document(read_json(args.params))
    sig = dual.dual_signal(params.theta)
    v = dual.dual_sequence(params.theta, params.phis)
    return dumps_json(
        {
            "theta": params.theta,
            "theta_dual": sig.w,
            "delta": sig.delta,
            "eta": sig.eta,
            "sequence": complex_matrix(v),
            "det_residual": abs(det2(v) - 1),
        }
    )


def cmd_lorentz(args, tol):
    phases, signal = _schedule_and_signal(args)
    v = as_sl2c(qsp.evaluate(phases, signal), tol or DET_TOL)
    lam = lorentz.lorentz_matrix(v)
    return dumps_csv(["nu0", "nu1", "nu2", "nu3"], [[float(x) for x in row] for row in lam])


def cmd_bloch(args, tol):
    phases, signal = _schedule_and_signal(args)
    v = as_sl2c(qsp.evaluate(phases, signal), tol or DET_TOL)
    rows = lorentz.bloch_rows(*lorentz.bloch_image(v, args.n))
    header = ["in_x", "in_y", "in_z", "out_x", "out_y", "out_z", "weight"]
    return dumps_csv(header, [[float(x) for x in row] for row in rows])


def cmd_bosonic(args, tol):
    phases, signal = _schedule_and_signal(args)
    s = bosonic.sequence_symplectic(phases, signal, ordering=args.ordering)
    if args.oracle_report:
        factors = bosonic.sequence_factors(phases, signal, ordering=args.ordering)
        report = {
            "n_max": args.n_max,
            "window": args.window,
            "fock_residual": bosonic.fock_oracle(factors, n_max=args.n_max, window=args.window),
            "bogoliubov_residual": bosonic.bogoliubov_residual(s),
            "particle_hole_residual": bosonic.particle_hole_residual(s),
        }
        with open(args.oracle_report, "w") as fh:
            fh.write(dumps_json(report))
    rows = [[i, j, float(s[i, j].real), float(s[i, j].imag)] for i in range(4) for j in range(4)]
    return dumps_csv(["row", "col", "re", "im"], rows)


NLFT_KEYS = {"psi", "delta", "eta", "w"}


def cmd_nlft(args, tol):
    doc = read_json(args.input)
    if not isinstance(doc, dict) or "psi" not in doc:
        raise ValueError("nlft input must be a JSON object with a 'psi' list")
    unknown = set(doc) - NLFT_KEYS
    if unknown:
        raise ValueError(f"unknown keys in nlft input: {sorted(unknown)}")
    if "w" in doc:
        ws = [complex(*pair) for pair in doc["w"]]
    elif "delta" in doc or "eta" in doc:
        ws = [qsp.ComplexSignal(float(doc.get("delta", 0.0)), float(doc.get("eta", 0.0))).w]
    else:
        ws = list(np.linspace(0, np.pi, args.n_w) + 1j * args.w_imag)
    rows = []
    for w, a, b, c, d in nlft.nlft_grid(doc["psi"], ws):
        rows.append([float(v) for z in (w, a, b, c, d) for v in (z.real, z.imag)])
    header = [f"{p}_{k}" for k in ("w", "A", "B", "C", "D") for p in ("re", "im")]
    return dumps_csv(header, rows)


def cmd_zs_residual(args, tol):
    checks = {"nls": lambda w: lax.zero_curvature_residual_nls(w, args.lam), "kdv": lax.kdv_residual}
    if args.wave:
        waves = [lax.load_wave_csv(path) for path in args.wave]
        table = lax.convergence_table([w.hx for w in waves], [checks[args.kind](w) for w in waves])
    else:
        if args.kind == "nls":
            func, xr = lax.nls_soliton(), (-10.0, 10.0)
        else:
            func, xr = lax.kdv_soliton(), (-20.0, 20.0)
        table = lax.residual_convergence(func, args.kind, xr, (0.0, 0.5), args.nx, args.nt, args.levels, args.lam)
    return dumps_csv(["h", "residual", "ratio"], table)


def cmd_moebius_flow(args, tol):
    phases, signal = _schedule_and_signal(args)
    traj = moebius.qsp_scale_flow(phases, signal, args.z0)
    rows = []
    for k, z in enumerate(traj):
        if z is moebius.INFINITY:
            rows.append([k, "inf", "inf", 1])
        else:
            rows.append([k, float(z.real), float(z.imag), 0])
    return dumps_csv(["step", "re_z", "im_z", "is_infinity"], rows)


def cmd_calibrate(args, tol):
    conv, table = nlft.calibrate_convention(args.max_d, seed=args.seed, tol=tol or 1e-9)
    return dumps_json({"convention": conv.as_dict(), "table": table})


# ------------------------------------------------------------------ parser


def build_parser():
    parser = _Parser(prog="sl2cqsp", description="Complexified QSP over SL(2,C).")
    parser.add_argument("--output", "-o", help="write to this file instead of stdout")
    parser.add_argument("--tol", type=positive_float, help=f"tolerance override (also ${TOL_ENV})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def schedule_cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--phases", required=True, help="schedule JSON {phases, delta, eta}")
        p.add_argument("--w", type=parse_complex, help="signal w as a+bi (overrides the file)")
        p.set_defaults(func=func)
        return p

    p = schedule_cmd("qsp-eval", cmd_qsp_eval, "evaluate a sequence at one signal value")
    p.add_argument("--ordering", choices=qsp.ORDERINGS, default=qsp.CANONICAL)
    p.add_argument("--accurate", action="store_true", help="raise the working precision for boosted sequences")

    p = sub.add_parser("qsp-poly", help="fit the entry polynomials P, Q, R, S")
    p.add_argument("--phases", required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--ordering", choices=qsp.ORDERINGS, default=qsp.CANONICAL)
    p.set_defaults(func=cmd_qsp_poly)

    p = sub.add_parser("dual-map", help="space-time dual signal of a kicked Ising circuit")
    p.add_argument("--theta", type=float)
    p.add_argument("--params", help="Floquet JSON {N, theta, alphas, phis, boundary}")
    p.set_defaults(func=cmd_dual_map)

    schedule_cmd("lorentz", cmd_lorentz, "4x4 Lorentz matrix of a sequence (CSV)")

    p = schedule_cmd("bloch", cmd_bloch, "push a sphere of pure states through the channel (CSV)")
    p.add_argument("--n", type=int, default=200)

    p = schedule_cmd("bosonic", cmd_bosonic, "4x4 Heisenberg-picture matrix (CSV)")
    p.add_argument("--ordering", choices=qsp.ORDERINGS, default=qsp.CANONICAL)
    p.add_argument("--oracle-report", help="also run the Fock oracle and write a JSON report here")
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--window", type=int, default=10)

    p = sub.add_parser("nlft", help="A, B, C, D of the NLFT on a grid of w (CSV)")
    p.add_argument("--input", required=True, help="JSON {psi, delta, eta} or {psi, w: [[re, im], ..]}")
    p.add_argument("--n-w", type=int, default=64, help="grid size along real w when no w is given")
    p.add_argument("--w-imag", type=float, default=0.0)
    p.set_defaults(func=cmd_nlft)

    p = sub.add_parser("zs-residual", help="Lax-pair residual convergence table (CSV)")
    p.add_argument("--kind", choices=("nls", "kdv"), default="nls")
    p.add_argument("--wave", action="append", help="wave CSV (x, t, re_f, im_f); repeat for several grids")
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--nx", type=int, default=201)
    p.add_argument("--nt", type=int, default=11)
    p.add_argument("--levels", type=int, default=3)
    p.set_defaults(func=cmd_zs_residual)

    p = schedule_cmd("moebius-flow", cmd_moebius_flow, "trajectory of a point under the sequence (CSV)")
    p.add_argument("--z0", type=parse_point, default=0j, help="start point a+bi or inf")

    p = sub.add_parser("calibrate", help="resolve the QSP/NLFT correspondence convention")
    p.add_argument("--max-d", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_calibrate)
    return parser


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        tol = _tolerance(args)
        text = args.func(args, tol)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CalibrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for row in exc.table:
            print("  " + dumps_json(row).strip(), file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())
