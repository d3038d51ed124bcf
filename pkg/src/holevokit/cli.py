"""Command-line front end.

Every command prints one JSON document (sorted keys) on standard output and
exits 0. Validation problems exit 2 with ``{"error": {"code", "message",
"context"}}``; unexpected failures exit 1 with the same shape. Angles are in
radians unless ``--degrees`` is given.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .algebra import (
    algebra_from_pvms,
    atoms_from_projections,
    commutant_basis,
    incompatibility_check,
    recover_projection,
    single_generator,
    witness_unitary,
)
from .errors import BadInput, HolevoError, NotTabular, UnknownCommand
from .holevo import (
    ClassicalSystem,
    HolevoPoint,
    bhattacharyya,
    classical_quotient,
    cyclic_vector,
    density_vector,
    hellinger_sq,
    indiscernible,
    indiscernible_family,
    lift_observable,
    overlap_form_distance_sq,
    quotient_hs_distance,
)
from .jsonio import (
    decode_grid,
    decode_matrix,
    decode_pvm,
    decode_state,
    encode_grid,
    encode_matrix,
    encode_state,
    to_jsonable,
)
from .numerics import Tolerance
from .scenarios.aspect import AspectConfig, aspect_simulate
from .scenarios.bell import (
    BellSettings,
    bell_pvm,
    bell_stats,
    invariant_states,
    rotated_triple,
    theta_recover,
)
from .scenarios.epr import (
    BELL_STATE,
    EPR_OUTCOMES,
    TwoQubitAngles,
    epr_class,
    epr_lifts,
    m_inverse,
    m_map,
    two_qubit_state,
)
from .scenarios.particle import grid_hellinger, grid_lift, grid_marginal

__all__ = ["main", "build_parser", "emit_plot_table", "RunManifest"]

OUTCOME_KEYS = ["(1,1)", "(-1,1)", "(1,-1)", "(-1,-1)"]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of printing usage and exiting."""

    def error(self, message):
        if "invalid choice" in message or "required: command" in message or "required: action" in message:
            raise UnknownCommand(message)
        raise BadInput(message)


class RunManifest(dict):
    """Record of one run: command, input digests, tolerance, seed, outputs, version."""

    def __init__(self, command, inputs, tolerance, seed, outputs):
        super().__init__(command=command, inputs=inputs, tolerance=asdict(tolerance),
                         seed=seed, outputs=outputs, version=__version__)


# --------------------------------------------------------------------- io


class _Inputs:
    """Loads JSON files once and remembers their sha256 digests."""

    def __init__(self):
        self.digests = {}

    def load(self, path):
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise BadInput(f"cannot read {path}: {exc.strerror}", path=path) from None
        self.digests[path] = hashlib.sha256(raw).hexdigest()
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise BadInput(f"{path} is not valid JSON: {exc.msg}", path=path) from None


def _dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def emit_plot_table(result, format: str = "csv") -> str:
    """Render a keyed numeric table as CSV.

    ``result`` maps column names to equal-length numeric sequences. Values are
    written with 17 significant digits, lines end in LF, and the header row is
    always present.
    """
    if format != "csv":
        raise NotTabular(f"unsupported table format {format!r}")
    if not isinstance(result, dict) or not result:
        raise NotTabular("table payload must be a nonempty mapping of columns")
    cols = []
    for name, values in result.items():
        if isinstance(values, (str, bytes, dict)) or not hasattr(values, "__len__"):
            raise NotTabular(f"column {name!r} is not a sequence")
        try:
            cols.append([float(v) for v in values])
        except (TypeError, ValueError):
            raise NotTabular(f"column {name!r} is not numeric") from None
    if len({len(c) for c in cols}) != 1:
        raise NotTabular("columns have different lengths")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([str(k) for k in result])
    for row in zip(*cols):
        writer.writerow([f"{v:.17g}" for v in row])
    return buf.getvalue()


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise BadInput(f"expected comma-separated numbers, got {text!r}") from None


# ----------------------------------------------------------------- handlers


def _pvms(args, io_):
    return [decode_pvm(io_.load(p), args.tol_obj) for p in args.pvm]


def _algebra(args, io_):
    pvms = _pvms(args, io_)
    return pvms, algebra_from_pvms(pvms, args.tol_obj)


def _atoms_payload(alg):
    return {"count": len(alg), "ranks": alg.ranks,
            "atoms": [encode_matrix(q) for q in alg.projections]}


def cmd_indisc_check(args, io_):
    pvms, alg = _algebra(args, io_)
    a = decode_state(io_.load(args.state_a), args.tol_obj)
    b = decode_state(io_.load(args.state_b), args.tol_obj)
    res = indiscernible_family(pvms, a, b, args.tol_obj) if args.per_pvm else indiscernible(alg, a, b, args.tol_obj)
    return {"indiscernible": res.equal, "max_deviation": res.max_deviation}


def cmd_indisc_witness(args, io_):
    _, alg = _algebra(args, io_)
    a = decode_state(io_.load(args.state_a), args.tol_obj)
    b = decode_state(io_.load(args.state_b), args.tol_obj)
    w = witness_unitary(alg, a, b, args.tol_obj)
    return {"unitary": encode_matrix(w.matrix), "residual_commutation": w.residual_commutation,
            "mapping_error": w.mapping_error, "unitarity_error": w.unitarity_error}


def _generators(args, io_):
    return [decode_matrix(io_.load(p)) for p in args.projection]


def cmd_algebra_atoms(args, io_):
    return _atoms_payload(atoms_from_projections(_generators(args, io_), args.tol_obj, dim=args.dim))


def cmd_algebra_commutant(args, io_):
    basis = commutant_basis(_generators(args, io_), args.tol_obj, dim=args.dim)
    return {"size": len(basis), "basis": [encode_matrix(b) for b in basis]}


def cmd_algebra_generator(args, io_):
    return {"generator": encode_matrix(single_generator(_generators(args, io_), args.tol_obj))}


def cmd_algebra_recover(args, io_):
    a = decode_matrix(io_.load(args.matrix))
    return {"projection": encode_matrix(recover_projection(a, args.index, args.n_total, args.tol_obj))}


def cmd_holevo_atoms(args, io_):
    _, alg = _algebra(args, io_)
    out = _atoms_payload(alg)
    h0 = cyclic_vector(alg, args.seed)
    out["cyclic_vector"] = encode_state(h0.vector)
    out["cyclic_masses"] = h0.atom_masses
    return out


def cmd_holevo_density(args, io_):
    _, alg = _algebra(args, io_)
    h = decode_state(io_.load(args.state), args.tol_obj)
    return {"probabilities": density_vector(alg, h).probabilities}


def cmd_holevo_distance(args, io_):
    p = HolevoPoint(_floats(args.p), args.tol_obj)
    q = HolevoPoint(_floats(args.q), args.tol_obj)
    d = quotient_hs_distance(p, q)
    return {"bhattacharyya": bhattacharyya(p, q), "hellinger_sq": hellinger_sq(p, q),
            "quotient_hs_distance": d, "quotient_hs_distance_sq": d * d,
            "overlap_form_distance_sq": overlap_form_distance_sq(p, q)}


def cmd_holevo_lift(args, io_):
    _, alg = _algebra(args, io_)
    a = decode_matrix(io_.load(args.observable))
    if args.state:
        point = density_vector(alg, decode_state(io_.load(args.state), args.tol_obj))
    elif args.point:
        point = HolevoPoint(_floats(args.point), args.tol_obj)
    else:
        raise BadInput("holevo lift needs --state or --point")
    v = lift_observable(alg, a, point, args.tol_obj)
    return {"value": [v.real + 0.0, v.imag + 0.0], "probabilities": point.probabilities}


def cmd_classical_quotient(args, io_):
    system = io_.load(args.system)
    try:
        points = [str(x) for x in system["points"]]
        observables = tuple({str(k): v for k, v in f.items()} for f in system.get("observables", []))
    except (KeyError, TypeError, AttributeError) as exc:
        raise BadInput(f"system needs points and observables mappings: {exc}") from None
    for i, f in enumerate(observables):
        missing = [x for x in points if x not in f]
        if missing:
            raise BadInput(f"observable {i} is undefined on {missing}", observable=i, missing=missing)
    quo = classical_quotient(ClassicalSystem(tuple(points), observables))
    return {"classes": [list(c) for c in quo.classes]}


def _state_or_bell(args, io_):
    return decode_state(io_.load(args.state), args.tol_obj) if args.state else BELL_STATE


def cmd_epr_class(args, io_):
    if args.state:
        h = decode_state(io_.load(args.state), args.tol_obj)
    elif args.theta:
        h = two_qubit_state(TwoQubitAngles(tuple(args.theta), tuple(args.phi)))
    else:
        raise BadInput("epr class needs --state or --theta")
    triple = epr_class(h, args.tol_obj)
    return {"theta": triple, "state": encode_state(h)}


def cmd_epr_stats(args, io_):
    if args.theta:
        lifts = epr_lifts(args.theta)
    else:
        lifts = epr_lifts(epr_class(_state_or_bell(args, io_), args.tol_obj))
    return {"outcomes": OUTCOME_KEYS, "probabilities": lifts}


def cmd_epr_mmap(args, io_):
    if args.inverse:
        h = m_inverse(*args.inverse)
        return {"state": encode_state(h), "m": m_map(h)}
    return {"m": m_map(_state_or_bell(args, io_))}


def cmd_bell_stats(args, io_):
    h = _state_or_bell(args, io_)
    if args.sweep:
        n = args.sweep
        deltas = [math.pi * k / (n - 1) if n > 1 else 0.0 for k in range(n)]
        rows = np.array([bell_stats(BellSettings(args.gamma_a, args.gamma_a - d), h) for d in deltas])
        rows = rows.reshape(len(deltas), 4)
        table = {"delta": deltas}
        for j, key in enumerate(OUTCOME_KEYS):
            table[key] = rows[:, j].tolist()
        return table
    return {"outcomes": OUTCOME_KEYS,
            "probabilities": bell_stats(BellSettings(args.gamma_a, args.gamma_b), h)}


def cmd_bell_theta(args, io_):
    s = BellSettings(args.gamma_a, args.gamma_b)
    if args.state:
        return {"theta": rotated_triple(s, decode_state(io_.load(args.state), args.tol_obj))}
    if not args.theta:
        raise BadInput("bell theta needs --theta or --state")
    return {"theta": theta_recover(s, args.theta)}


def cmd_bell_invariants(args, io_):
    states = invariant_states(args.tol_obj)
    return {"labels": ["y+y+", "y+y-", "y-y+", "y-y-"], "states": [encode_state(v) for v in states]}


def cmd_bell_incompat(args, io_):
    p = bell_pvm(BellSettings(args.gamma_a, args.gamma_b))
    q = bell_pvm(BellSettings(args.gamma_a2, args.gamma_b2))
    rep = incompatibility_check(p, q, args.tol_obj)
    return {"compatible": rep.compatible, "max_commutator_norm": rep.max_commutator_norm,
            "witness_pair": list(rep.witness_pair)}


def cmd_aspect_run(args, io_):
    h = _state_or_bell(args, io_)
    cfg = AspectConfig(args.a1, args.a2, args.b1, args.b2, args.runs, args.seed)
    res = aspect_simulate(cfg, h, workers=args.workers)
    settings = []
    for pair, n in res.runs_per_setting.items():
        settings.append({
            "setting": list(pair),
            "runs": n,
            "counts": [res.counts[(pair, o)] for o in EPR_OUTCOMES],
            "frequencies": [res.frequencies[(pair, o)] for o in EPR_OUTCOMES],
            "law": [res.laws[(pair, o)] for o in EPR_OUTCOMES],
        })
    return {"outcomes": OUTCOME_KEYS, "runs": cfg.runs, "settings": settings}


def cmd_particle_marginal(args, io_):
    return {"grid": encode_grid(grid_marginal(decode_grid(io_.load(args.grid), args.tol_obj), args.keep))}


def cmd_particle_lift(args, io_):
    g = decode_grid(io_.load(args.grid), args.tol_obj)
    return {"probability": grid_lift(g, args.axis, args.cells)}


def cmd_particle_distance(args, io_):
    r = grid_hellinger(decode_grid(io_.load(args.grid_a), args.tol_obj),
                       decode_grid(io_.load(args.grid_b), args.tol_obj))
    return {"hellinger_sq": r.hellinger_sq, "paper_dsq": r.paper_dsq, "bhattacharyya": r.bhattacharyya}


# ------------------------------------------------------------------- parser


def _add(sub, name, func, parents, angles=(), tabular=False, help=None):
    p = sub.add_parser(name, help=help, parents=parents)
    p.set_defaults(func=func, angles=angles, tabular=tabular)
    return p


def _pvm_args(p):
    p.add_argument("--pvm", action="append", required=True, help="PVM JSON file (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--degrees", action="store_true", help="angles given in degrees")
    common.add_argument("--tol", type=float, default=1e-9, help="entrywise equality tolerance")
    common.add_argument("--tol-eig", type=float, default=1e-8, help="eigenvalue cluster gap")
    common.add_argument("--tol-opt", type=float, default=1e-6, help="optimiser convergence")
    common.add_argument("--manifest", action="store_true", help="wrap output in a run manifest")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    # shared options live on the leaf commands only, so they follow the action name
    parser = _Parser(prog="holevokit", description="Indiscernibility and Holevo-space toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group(name):
        g = groups.add_parser(name)
        return g.add_subparsers(dest="action", required=True, parser_class=_Parser)

    def leaf(sub, name, func, **kw):
        return _add(sub, name, func, [common], **kw)

    g = group("indisc")
    for name, fn in (("check", cmd_indisc_check), ("witness", cmd_indisc_witness)):
        p = leaf(g, name, fn)
        _pvm_args(p)
        p.add_argument("--state-a", required=True)
        p.add_argument("--state-b", required=True)
        if name == "check":
            p.add_argument("--per-pvm", action="store_true",
                           help="compare each PVM's statistics separately instead of joint atoms")

    g = group("algebra")
    for name, fn in (("atoms", cmd_algebra_atoms), ("commutant", cmd_algebra_commutant),
                     ("generator", cmd_algebra_generator)):
        p = leaf(g, name, fn)
        p.add_argument("--projection", action="append", default=[], help="matrix JSON file (repeatable)")
        p.add_argument("--dim", type=int, default=None, help="dimension when no generators are given")
    p = leaf(g, "recover", cmd_algebra_recover)
    p.add_argument("--matrix", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--n-total", type=int, required=True)

    g = group("holevo")
    p = leaf(g, "atoms", cmd_holevo_atoms)
    _pvm_args(p)
    p.add_argument("--seed", type=int, default=0)
    p = leaf(g, "density", cmd_holevo_density)
    _pvm_args(p)
    p.add_argument("--state", required=True)
    p = leaf(g, "distance", cmd_holevo_distance)
    p.add_argument("--p", required=True, help="comma-separated atom probabilities")
    p.add_argument("--q", required=True)
    p = leaf(g, "lift", cmd_holevo_lift)
    _pvm_args(p)
    p.add_argument("--observable", required=True)
    p.add_argument("--state")
    p.add_argument("--point")

    g = group("classical")
    p = leaf(g, "quotient", cmd_classical_quotient)
    p.add_argument("--system", required=True)

    g = group("epr")
    p = leaf(g, "class", cmd_epr_class, angles=("theta", "phi"))
    p.add_argument("--state")
    p.add_argument("--theta", type=float, nargs=3)
    p.add_argument("--phi", type=float, nargs=3, default=[0.0, 0.0, 0.0])
    p = leaf(g, "stats", cmd_epr_stats, angles=("theta",))
    p.add_argument("--state")
    p.add_argument("--theta", type=float, nargs=3)
    p = leaf(g, "mmap", cmd_epr_mmap)
    p.add_argument("--state")
    p.add_argument("--inverse", type=float, nargs=2, metavar=("M1", "M2"))

    g = group("bell")
    p = leaf(g, "stats", cmd_bell_stats, angles=("gamma_a", "gamma_b"), tabular=True)
    p.add_argument("--gamma-a", type=float, default=0.0)
    p.add_argument("--gamma-b", type=float, default=0.0)
    p.add_argument("--state")
    p.add_argument("--sweep", type=int, default=0, help="tabulate N differences over [0, pi]")
    p = leaf(g, "theta", cmd_bell_theta, angles=("gamma_a", "gamma_b", "theta"))
    p.add_argument("--gamma-a", type=float, default=0.0)
    p.add_argument("--gamma-b", type=float, default=0.0)
    p.add_argument("--theta", type=float, nargs=3)
    p.add_argument("--state")
    leaf(g, "invariants", cmd_bell_invariants)
    p = leaf(g, "incompat", cmd_bell_incompat, angles=("gamma_a", "gamma_b", "gamma_a2", "gamma_b2"))
    for flag in ("--gamma-a", "--gamma-b", "--gamma-a2", "--gamma-b2"):
        p.add_argument(flag, type=float, default=0.0)

    g = group("aspect")
    p = leaf(g, "run", cmd_aspect_run, angles=("a1", "a2", "b1", "b2"))
    for flag in ("--a1", "--a2", "--b1", "--b2"):
        p.add_argument(flag, type=float, required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--state")
    p.add_argument("--workers", type=int, default=1)

    g = group("particle")
    p = leaf(g, "marginal", cmd_particle_marginal)
    p.add_argument("--grid", required=True)
    p.add_argument("--keep", type=int, nargs="+", required=True)
    p = leaf(g, "lift", cmd_particle_lift)
    p.add_argument("--grid", required=True)
    p.add_argument("--axis", type=int, required=True)
    p.add_argument("--cells", type=int, nargs="*", default=[])
    p = leaf(g, "distance", cmd_particle_distance)
    p.add_argument("--grid-a", required=True)
    p.add_argument("--grid-b", required=True)
    return parser


def _convert_angles(args):
    if not args.degrees:
        return
    for name in args.angles:
        v = getattr(args, name, None)
        if v is None:
            continue
        setattr(args, name, [math.radians(x) for x in v] if isinstance(v, list) else math.radians(v))


def _error(exc: HolevoError, stream) -> dict:
    if stream.isatty() and "NO_COLOR" not in os.environ:
        print(f"\x1b[31merror\x1b[0m: {exc.message}", file=sys.stderr)
    else:
        print(f"error: {exc.message}", file=sys.stderr)
    return {"error": {"code": exc.code, "message": exc.message, "context": exc.context}}


def main(argv=None) -> int:
    """Run one command; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout
    try:
        args = build_parser().parse_args(argv)
        args.tol_obj = Tolerance(args.tol, args.tol_eig, args.tol_opt)
        _convert_angles(args)
        io_ = _Inputs()
        payload = args.func(args, io_)
        command = f"{args.command} {args.action}"
        if args.format == "csv":
            if not args.tabular or "delta" not in payload:
                raise NotTabular(f"{command} does not produce a table (use bell stats --sweep)")
            out.write(emit_plot_table(payload))
            return 0
        if args.manifest:
            payload = RunManifest(command, dict(sorted(io_.digests.items())), args.tol_obj,
                                  getattr(args, "seed", None), to_jsonable(payload))
        out.write(_dumps(payload))
        return 0
    except HolevoError as exc:
        out.write(_dumps(_error(exc, sys.stderr)))
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort guard keeps stdout machine-readable
        err = HolevoError(f"{type(exc).__name__}: {exc}")
        err.code = "InternalError"
        out.write(_dumps(_error(err, sys.stderr)))
        return 1


if __name__ == "__main__":
    sys.exit(main())
