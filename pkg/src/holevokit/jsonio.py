"""JSON encodings shared by the command-line tool.

* matrix: ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` row-major
* pure state: ``{"amplitudes": [[re, im], ...]}``
* PVM: ``{"dim": d, "outcomes": [{"label": [...], "projection": <matrix>}]}``;
  complex label components are written as ``[re, im]``
* grid density: ``{"axes": [[edges...], ...], "masses": [...]}`` row-major
"""
from __future__ import annotations

import numpy as np

from .errors import BadInput
from .numerics import DEFAULT_TOL, Tolerance
from .observables import PVM
from .scenarios.particle import GridDensity
from .states import PureState

__all__ = [
    "encode_matrix",
    "decode_matrix",
    "encode_state",
    "decode_state",
    "encode_pvm",
    "decode_pvm",
    "encode_grid",
    "decode_grid",
    "encode_complex",
    "to_jsonable",
]


def _num(x: float) -> float:
    return float(x) + 0.0


def encode_complex(z) -> list:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def _decode_complex(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise BadInput(f"complex entry must be [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def encode_matrix(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "data": [encode_complex(z) for z in m.reshape(-1)]}


def decode_matrix(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise BadInput(f"matrix needs rows, cols and data: {exc}") from None
    if len(data) != rows * cols:
        raise BadInput(f"matrix data has {len(data)} entries, expected {rows * cols}")
    return np.array([_decode_complex(z) for z in data], dtype=complex).reshape(rows, cols)


def encode_state(h: PureState) -> dict:
    return {"amplitudes": [encode_complex(z) for z in h.amplitudes]}


def decode_state(obj, tol: Tolerance = DEFAULT_TOL) -> PureState:
    try:
        amps = obj["amplitudes"]
    except (KeyError, TypeError):
        raise BadInput("state needs an 'amplitudes' list") from None
    return PureState([_decode_complex(z) for z in amps], tol)


def _encode_label(label) -> list:
    return [encode_complex(c) if isinstance(c, complex) else _num(c) for c in label]


def _decode_label(label) -> tuple:
    if not isinstance(label, list):
        label = [label]
    return tuple(_decode_complex(c) if isinstance(c, list) else float(c) for c in label)


def encode_pvm(p: PVM) -> dict:
    return {"dim": p.dim, "outcomes": [{"label": _encode_label(lab), "projection": encode_matrix(m)}
                                       for lab, m in p.outcomes]}


def decode_pvm(obj, tol: Tolerance = DEFAULT_TOL) -> PVM:
    try:
        dim = int(obj["dim"])
        outs = tuple((_decode_label(o["label"]), decode_matrix(o["projection"])) for o in obj["outcomes"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadInput(f"malformed PVM: {exc}") from None
    return PVM(dim, outs, tol)


def encode_grid(g: GridDensity) -> dict:
    return {"axes": [[_num(x) for x in e] for e in g.axes],
            "masses": [_num(x) for x in g.masses.reshape(-1)]}


def decode_grid(obj, tol: Tolerance = DEFAULT_TOL) -> GridDensity:
    try:
        return GridDensity(tuple(obj["axes"]), np.asarray(obj["masses"], dtype=float), tol)
    except (KeyError, TypeError) as exc:
        raise BadInput(f"grid needs axes and masses: {exc}") from None


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and tuples into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj
