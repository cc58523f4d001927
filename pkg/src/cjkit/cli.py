"""Command-line interface.

Exit codes: 0 success, 1 a requested check failed, 2 input could not be
parsed, 3 input parsed but violates an invariant.  Results go to OUT, or to
stdout when OUT is omitted or ``-``.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .channel import UNITAL_TOL, is_minimal_kraus, is_unital
from .choi import PSD_TOL, ChoiState, channel_from_choi, choi_from_channel, choi_rank, extract_kraus
from .errors import CJKitError, MarginViolation, ParseError, RefMismatch
from .io import (
    channel_from_json,
    channel_to_json,
    choi_from_json,
    choi_to_json,
    dumps,
    matrix_from_json,
    matrix_to_json,
    read_json,
    rep_from_json,
    tau_from_json,
    tau_to_json,
    write_text,
)
from .linalg import fro
from .phase_covariant import build_channel, extract_tau
from .states import ReferenceState, make_reference, maximally_mixed
from .symmetry import COVARIANCE_TOL, check_covariance, check_modular_covariance, twirl
from .transpose import commutant_dual, transpose_channel

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3
TOL_ENV = "CJKIT_TOL_OVERRIDE"


def tol_scale() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return 1.0
    try:
        val = float(raw)
    except ValueError:
        raise ParseError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not np.isfinite(val) or val <= 0:
        raise ParseError(f"{TOL_ENV} must be a positive finite number")
    return val


def _tol(args, default: float) -> float:
    """Explicit ``--tol`` wins; otherwise the module default times the environment scale."""
    return args.tol if args.tol is not None else default * tol_scale()


def _emit(args, obj) -> None:
    text = dumps(obj)
    out = getattr(args, "output", None)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        write_text(out, text)


def _load_rho0(path) -> ReferenceState | None:
    return None if path is None else make_reference(matrix_from_json(read_json(path), "rho0"))


def _load(path):
    """``("kraus", Channel)`` or ``("choi", raw json)`` depending on the file contents."""
    obj = read_json(path)
    if isinstance(obj, dict) and "kraus" in obj:
        return "kraus", channel_from_json(obj)
    if isinstance(obj, dict) and "choi" in obj:
        return "choi", obj
    raise ParseError(f"{path}: neither a channel (needs 'kraus') nor a Choi state (needs 'choi')")


def _choi(obj, rho0: ReferenceState | None) -> ChoiState:
    s = choi_from_json(obj, rho0)
    if rho0 is not None and "rho0" in obj and fro(s.ref.matrix - rho0.matrix) > 1e-10:
        raise RefMismatch("--rho0 differs from the reference stored in the Choi file")
    return s


def _ref_for(rho0: ReferenceState | None, d: int) -> ReferenceState:
    return maximally_mixed(d) if rho0 is None else rho0


# --- subcommands -------------------------------------------------------------


def cmd_convert(args) -> int:
    kind, obj = _load(args.input)
    if kind != args.src:
        raise ParseError(f"input file holds a {kind} object, not {args.src}")
    rho0 = _load_rho0(args.rho0)
    if kind == "kraus":
        s = choi_from_channel(obj, _ref_for(rho0, obj.d_in))
        if not s.margin_ok:
            raise MarginViolation(
                f"channel is not unital: first margin differs from rho0 by {s.margin_residual:.3e}"
            )
    else:
        s = _choi(obj, rho0)
    c = channel_from_choi(s)
    _emit(args, choi_to_json(s) if args.dst == "choi" else channel_to_json(c))
    return EXIT_OK


def _min_eigenvalue(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


def cmd_check(args) -> int:
    """With no check flags, ``--cp --unital`` is implied."""
    kind, obj = _load(args.input)
    rho0 = _load_rho0(args.rho0)
    if not (args.cp or args.unital or args.covariant or args.modular):
        args.cp = args.unital = True
    report: dict = {}
    if kind == "choi":
        s = _choi(obj, rho0)
        rho0 = s.ref
        cp_res = max(0.0, -_min_eigenvalue(s.matrix))
        cp_ok = cp_res <= _tol(args, PSD_TOL)
        if args.cp or not cp_ok:
            report["cp"] = {"pass": cp_ok, "residual": cp_res}
        if not cp_ok:
            # nothing else is meaningful for a non-positive operator
            _emit(args, report)
            return EXIT_FAIL
        c = extract_kraus(s)
    else:
        c = obj
        if args.cp:
            report["cp"] = {"pass": True, "residual": 0.0}
    if args.unital:
        res = is_unital(c)[1]
        report["unital"] = {"pass": res <= _tol(args, UNITAL_TOL), "residual": res}
    r = _ref_for(rho0, c.d_in)
    if args.covariant:
        rep_a, rep_b = (rep_from_json(read_json(p)) for p in args.covariant)
        report["covariant"] = check_covariance(c, rep_a, rep_b, r, tol=_tol(args, COVARIANCE_TOL)).as_dict()
    if args.modular:
        h = matrix_from_json(read_json(args.modular), "H")
        report["modular"] = check_modular_covariance(c, r, h=h, tol=_tol(args, COVARIANCE_TOL)).as_dict()
    _emit(args, report)
    return EXIT_OK if all(v["pass"] for v in report.values()) else EXIT_FAIL


def cmd_twirl(args) -> int:
    kind, obj = _load(args.input)
    rho0 = _load_rho0(args.rho0)
    rep_a = rep_from_json(read_json(args.rep_a))
    rep_b = rep_from_json(read_json(args.rep_b))
    if kind == "choi":
        s = _choi(obj, rho0)
        c = channel_from_choi(s)
        r = s.ref
    else:
        c = obj
        r = _ref_for(rho0, c.d_in)
    # a fixed point is returned untouched, so covariant inputs come back byte-identical
    if check_covariance(c, rep_a, rep_b, r, tol=_tol(args, COVARIANCE_TOL)).covariant:
        _emit(args, choi_to_json(s) if kind == "choi" else channel_to_json(c))
        return EXIT_OK
    if kind == "choi":
        _emit(args, choi_to_json(twirl(s, rep_a, rep_b)))
    else:
        _emit(args, channel_to_json(twirl(c, rep_a, rep_b, r)))
    return EXIT_OK


def cmd_transpose(args) -> int:
    kind, obj = _load(args.input)
    rho0 = _load_rho0(args.rho0)
    if kind == "choi":
        s = _choi(obj, rho0)
        c, r = channel_from_choi(s), s.ref
    else:
        c, r = obj, _ref_for(rho0, obj.d_in)
    if args.commutant:
        _emit(args, channel_to_json(commutant_dual(c, r)))
        return EXIT_OK
    pair = transpose_channel(c, r)
    if args.rho1_out:
        write_text(args.rho1_out, dumps(matrix_to_json(pair.rho1.matrix)))
    _emit(args, channel_to_json(pair.transposed))
    return EXIT_OK


def cmd_phase_family(args) -> int:
    if args.action == "build":
        tf = tau_from_json(read_json(args.input))
        _emit(args, channel_to_json(build_channel(tf)))
        return EXIT_OK
    kind, obj = _load(args.input)
    rho0 = _load_rho0(args.rho0)
    if kind == "choi":
        s = _choi(obj, rho0)
        c, r = channel_from_choi(s), s.ref
    else:
        c, r = obj, _ref_for(rho0, obj.d_in)
    _emit(args, tau_to_json(extract_tau(c, r, tol=_tol(args, COVARIANCE_TOL))))
    return EXIT_OK


def cmd_info(args) -> int:
    obj = read_json(args.input)
    if isinstance(obj, list):
        tf = tau_from_json(obj)
        info = {"kind": "tau-table", "d": tf.d, "entries": len(tf.taus), "kraus": len(tf.labels)}
    elif isinstance(obj, dict) and "kraus" in obj:
        c = channel_from_json(obj)
        ref = maximally_mixed(c.d_in)
        info = {
            "kind": "channel",
            "d_in": c.d_in,
            "d_out": c.d_out,
            "kraus": len(c),
            "minimal": is_minimal_kraus(c),
            "unital_residual": is_unital(c)[1],
            "choi_rank": choi_rank(choi_from_channel(c, ref)),
        }
    elif isinstance(obj, dict) and "choi" in obj:
        s = choi_from_json(obj)
        info = {
            "kind": "choi",
            "d_in": s.d_in,
            "d_out": s.d_out,
            "rank": choi_rank(s),
            "trace": float(np.trace(s.matrix).real),
            "min_eigenvalue": _min_eigenvalue(s.matrix),
            "margin_residual": s.margin_residual,
        }
    elif isinstance(obj, dict) and "kind" in obj:
        rep = rep_from_json(obj)
        info = {"kind": "representation", "group": rep.kind, "dim": rep.dim}
    elif isinstance(obj, dict) and "rows" in obj:
        m = matrix_from_json(obj)
        info = {"kind": "matrix", "rows": m.shape[0], "cols": m.shape[1]}
    else:
        raise ParseError(f"{args.input}: unrecognised object")
    _emit(args, info)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cjkit", description="Choi states, transposes and covariance of quantum channels.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override the tolerance of the check")
    common.add_argument("--rho0", metavar="FILE", help="reference state (matrix JSON); default I/d")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("convert", parents=[common], help="Kraus <-> Choi conversion")
    q.add_argument("--from", dest="src", choices=["kraus", "choi"], required=True)
    q.add_argument("--to", dest="dst", choices=["kraus", "choi"], required=True)
    q.add_argument("input", metavar="IN")
    q.add_argument("output", metavar="OUT", nargs="?")
    q.set_defaults(func=cmd_convert)

    q = sub.add_parser("check", parents=[common], help="run CP / unitality / covariance checks")
    q.add_argument("--cp", action="store_true")
    q.add_argument("--unital", action="store_true")
    q.add_argument("--covariant", nargs=2, metavar=("REP_A", "REP_B"))
    q.add_argument("--modular", metavar="H_FILE", help="output generator H (matrix JSON)")
    q.add_argument("input", metavar="IN")
    q.set_defaults(func=cmd_check, output=None)

    q = sub.add_parser("twirl", parents=[common], help="project onto the covariant channels")
    q.add_argument("input", metavar="IN")
    q.add_argument("rep_a", metavar="REP_A")
    q.add_argument("rep_b", metavar="REP_B")
    q.add_argument("output", metavar="OUT", nargs="?")
    q.set_defaults(func=cmd_twirl)

    q = sub.add_parser("transpose", parents=[common], help="rho0-transpose of a unital channel")
    q.add_argument("--commutant", action="store_true", help="emit the commutant dual instead")
    q.add_argument("--rho1-out", metavar="FILE", help="also write the output state rho1")
    q.add_argument("input", metavar="IN")
    q.add_argument("output", metavar="OUT", nargs="?")
    q.set_defaults(func=cmd_transpose)

    q = sub.add_parser("phase-family", parents=[common], help="build or extract phase-covariant channels")
    q.add_argument("action", choices=["build", "extract"])
    q.add_argument("input", metavar="IN")
    q.add_argument("output", metavar="OUT", nargs="?")
    q.set_defaults(func=cmd_phase_family)

    q = sub.add_parser("info", help="summarise a JSON object")
    q.add_argument("input", metavar="IN")
    q.set_defaults(func=cmd_info, output=None)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"cjkit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CJKitError, ValueError) as exc:
        code = getattr(exc, "code", "invalid")
        print(f"cjkit: {code}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
