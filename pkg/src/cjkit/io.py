"""JSON interchange.

Matrices are ``{"rows", "cols", "data"}`` with ``data`` a flat row-major list
of ``[re, im]`` pairs.  Output is canonical: sorted keys, shortest
round-trip float text, one trailing newline, so equal objects serialise to
equal bytes.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np
from scipy.linalg import block_diag

from .channel import Channel
from .choi import ChoiState
from .errors import ParseError
from .phase_covariant import TauFamily
from .states import ReferenceState, make_reference, maximally_mixed
from .symmetry import (
    Representation,
    finite_representation,
    lie_representation,
    phase_representation,
    spin_generators,
    spin_representation,
)


def _num(x) -> float:
    x = float(x)
    return 0.0 if x == 0.0 else x  # no "-0.0" in canonical output


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[_num(z.real), _num(z.imag)] for z in m.reshape(-1)],
    }


def _field(obj: Any, key: str, kind, what: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be a JSON object")
    if key not in obj:
        raise ParseError(f"{what} is missing the field {key!r}")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise ParseError(f"{what}.{key} must be an integer")
    if kind is list and not isinstance(val, list):
        raise ParseError(f"{what}.{key} must be an array")
    return val


def _finite(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise ParseError(f"{what} contains a non-finite or non-numeric entry")
    return float(x)


def matrix_from_json(obj: Any, what: str = "matrix") -> np.ndarray:
    rows = _field(obj, "rows", int, what)
    cols = _field(obj, "cols", int, what)
    data = _field(obj, "data", list, what)
    if rows < 1 or cols < 1:
        raise ParseError(f"{what} has non-positive shape {rows}x{cols}")
    if len(data) != rows * cols:
        raise ParseError(f"{what} has {len(data)} entries, expected rows*cols = {rows * cols}")
    out = np.empty(rows * cols, dtype=complex)
    for i, pair in enumerate(data):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"{what}.data[{i}] must be a [re, im] pair")
        out[i] = complex(_finite(pair[0], what), _finite(pair[1], what))
    return out.reshape(rows, cols)


def channel_to_json(c: Channel) -> dict:
    return {"d_in": c.d_in, "d_out": c.d_out, "kraus": [matrix_to_json(k) for k in c.kraus]}


def channel_from_json(obj: Any) -> Channel:
    d_in = _field(obj, "d_in", int, "channel")
    d_out = _field(obj, "d_out", int, "channel")
    ks = _field(obj, "kraus", list, "channel")
    return Channel(d_in, d_out, tuple(matrix_from_json(k, f"kraus[{i}]") for i, k in enumerate(ks)))


def choi_to_json(s: ChoiState) -> dict:
    return {
        "d_in": s.d_in,
        "d_out": s.d_out,
        "choi": matrix_to_json(s.matrix),
        "rho0": matrix_to_json(s.ref.matrix),
    }


def choi_from_json(obj: Any, rho0: ReferenceState | None = None) -> ChoiState:
    """Choi state with its reference taken from the file, else from ``rho0``, else ``I/d_in``."""
    d_in = _field(obj, "d_in", int, "choi state")
    d_out = _field(obj, "d_out", int, "choi state")
    m = matrix_from_json(_field(obj, "choi", dict, "choi state"), "choi")
    if "rho0" in obj:
        ref = make_reference(matrix_from_json(obj["rho0"], "rho0"))
    else:
        ref = rho0 if rho0 is not None else maximally_mixed(d_in)
    return ChoiState(d_in, d_out, ref, m)


def rep_to_json(rep: Representation) -> dict:
    if rep.kind == "finite":
        return {"kind": "finite", "elements": [matrix_to_json(u) for u in rep.elements]}
    if rep.kind == "phase":
        out = {"kind": "phase", "weights": list(rep.weights)}
        if rep.basis is not None:
            out["basis"] = matrix_to_json(rep.basis)
        return out
    if rep.j is not None:
        return {"kind": "spin", "j": rep.j}
    return {"kind": "spin", "generators": [matrix_to_json(g) for g in rep.generators]}


def _spin_blocks(blocks: list) -> Representation:
    """``[[j, multiplicity], ...]`` -> ``(+) D^j (x) 1_multiplicity``."""
    gens = [[], [], []]
    for b in blocks:
        if not isinstance(b, list) or len(b) != 2:
            raise ParseError("spin blocks must be [j, multiplicity] pairs")
        j, mult = _finite(b[0], "spin block"), b[1]
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            raise ParseError("spin block multiplicity must be a positive integer")
        for k, g in enumerate(spin_generators(j)):
            gens[k].append(np.kron(g, np.eye(mult)))
    if not blocks:
        raise ParseError("spin blocks list is empty")
    return lie_representation([block_diag(*g) for g in gens])


def rep_from_json(obj: Any) -> Representation:
    kind = _field(obj, "kind", str, "representation")
    if kind == "finite":
        els = _field(obj, "elements", list, "representation")
        return finite_representation([matrix_from_json(u, f"elements[{i}]") for i, u in enumerate(els)])
    if kind == "phase":
        w = _field(obj, "weights", list, "representation")
        for x in w:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError("phase weights must be numbers")
        basis = matrix_from_json(obj["basis"], "basis") if "basis" in obj else None
        return phase_representation(w, basis)
    if kind == "spin":
        if "j" in obj:
            return spin_representation(_finite(obj["j"], "spin j"))
        if "blocks" in obj:
            return _spin_blocks(_field(obj, "blocks", list, "representation"))
        if "l_max" in obj:
            l_max = _field(obj, "l_max", int, "representation")
            n_rad = obj.get("n_rad", 1)
            return _spin_blocks([[l, n_rad] for l in range(l_max + 1)])
        if "generators" in obj:
            gs = _field(obj, "generators", list, "representation")
            return lie_representation([matrix_from_json(g, "generator") for g in gs])
        raise ParseError("spin representation needs one of 'j', 'blocks', 'l_max' or 'generators'")
    raise ParseError(f"unknown representation kind {kind!r}")


def tau_to_json(tf: TauFamily) -> list:
    return [
        {"l": l, "j": j, "m": m, "re": _num(v.real), "im": _num(v.imag)}
        for (l, j, m), v in tf.taus.items()
    ]


def tau_from_json(obj: Any) -> TauFamily:
    """The truncation is ``1 + max m``: normalisation forces every ``m`` to appear."""
    if not isinstance(obj, list) or not obj:
        raise ParseError("tau table must be a non-empty array")
    taus = {}
    for i, e in enumerate(obj):
        key = tuple(_field(e, k, int, f"tau[{i}]") for k in ("l", "j", "m"))
        if key in taus:
            raise ParseError(f"duplicate tau entry {key}")
        taus[key] = complex(_finite(_field(e, "re", float, f"tau[{i}]"), "tau"), _finite(e.get("im", 0.0), "tau"))
    d = 1 + max(m for _, _, m in taus)
    return TauFamily(d, taus)


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=False) + "\n"


def read_json(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _reject_constant(name: str):
    raise ParseError(f"non-finite number {name} in JSON input")


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
