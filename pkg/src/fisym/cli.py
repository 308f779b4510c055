"""Command-line interface.

Subcommands: verify (certify a design/POVM file), build (write standard
constructions to operator files), fisher (information report for a
state/POVM pair), simulate (Monte Carlo run), sweep (radius grid to CSV).

Exit codes: 0 success / check passed, 1 check failed, 2 usage or parse
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import designs, fisher, opfile, povm, states, tomosim

_BUILTIN_POVMS = ("collective-sic", "sic-single", "mub-single", "great-circle")


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=1)
    sys.stdout.write("\n")


def _load(path) -> dict:
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    try:
        return opfile.load_json(path)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {path}: {exc}") from exc


def _cert_dict(cert: designs.DesignCertificate) -> dict:
    return dataclasses.asdict(cert)


# ---------------------------------------------------------------- verify

def _verify_povm(obj, tol) -> tuple[bool, dict]:
    p = opfile.obj_to_povm(obj)
    report = povm.validate_povm(p, tol)
    return report.ok, dataclasses.asdict(report)


def _verify_sic(obj, tol) -> tuple[bool, dict]:
    s = opfile.obj_to_state_set(obj)
    d = s.dim
    n = s.size
    overlaps = np.abs(s.vectors.conj() @ s.vectors.T) ** 2
    law = (d * np.eye(n) + 1.0) / (d + 1.0)
    residual = float(np.abs(overlaps - law).max())
    cert = designs.projective_2design_check(s, tol)
    ok = n == d * d and residual <= tol and cert.is_design
    return ok, {
        "elements": n,
        "dim": d,
        "overlap_residual": residual,
        "design": _cert_dict(cert),
        "ok": bool(ok),
    }


def _verify_design2(obj, tol) -> tuple[bool, dict]:
    s = opfile.obj_to_state_set(obj)
    cert = designs.projective_2design_check(s, tol)
    return cert.is_design, _cert_dict(cert)


def _verify_gdesign2(obj, tol) -> tuple[bool, dict]:
    s = opfile.obj_to_operator_set(obj)
    cert = designs.generalized_2design_check(s, tol)
    return cert.is_design, _cert_dict(cert)


def _verify_gsic(obj, tol) -> tuple[bool, dict]:
    s = opfile.obj_to_operator_set(obj)
    report = designs.generalized_sic_check(s, tol)
    return report.is_gsic, dataclasses.asdict(report)


def _verify_coherent(obj, tol) -> tuple[bool, dict]:
    p = opfile.obj_to_povm(obj)
    report = povm.classify_coherent(p)
    out = {
        "coherent": report.coherent,
        "classes": [{"kind": c.kind, "weight": c.weight}
                    for c in report.classes],
    }
    return report.coherent, out


def _verify_tight_coherent(obj, tol) -> tuple[bool, dict]:
    p = opfile.obj_to_povm(obj)
    report = povm.tight_coherent_check(p, tol)
    out = {
        "ok": report.ok,
        "completeness_residual": report.completeness_residual,
        "coherent": report.classification.coherent,
        "q_certificate": _cert_dict(report.q_certificate),
        "purity_target": report.purity_target,
        "purity_residual": report.purity_residual,
    }
    if report.antisym_gsic is not None:
        out["antisym_gsic"] = dataclasses.asdict(report.antisym_gsic)
    return report.ok, out


_VERIFIERS = {
    "povm": _verify_povm,
    "sic": _verify_sic,
    "design2": _verify_design2,
    "gdesign2": _verify_gdesign2,
    "gsic": _verify_gsic,
    "coherent": _verify_coherent,
    "tight-coherent": _verify_tight_coherent,
}


def cmd_verify(args) -> int:
    obj = _load(args.file)
    try:
        ok, report = _VERIFIERS[args.kind](obj, args.tol)
    except ValueError as exc:
        # content that cannot even be assembled fails the check
        _emit({"ok": False, "error": str(exc)})
        return 1
    _emit(report)
    return 0 if ok else 1


# ----------------------------------------------------------------- build

def cmd_build(args) -> int:
    name = args.name
    if name == "sic-qubit":
        obj = opfile.state_set_to_obj(designs.sic_qubit())
    elif name == "sic-d3":
        obj = opfile.state_set_to_obj(designs.sic_d3(args.phi))
    elif name == "mub":
        obj = opfile.state_set_to_obj(designs.mub_state_set(args.dim))
    elif name == "collective-sic":
        obj = opfile.povm_to_obj(povm.collective_sic_qubit())
    elif name == "great-circle":
        obj = opfile.povm_to_obj(povm.great_circle_qubit())
    elif name == "twocopy-design":
        if args.design is None:
            raise UsageError("twocopy-design needs --design FILE")
        design = opfile.obj_to_state_set(_load(args.design))
        obj = opfile.povm_to_obj(povm.twocopy_design_povm(design))
    elif name == "companion":
        if args.source is None:
            raise UsageError("companion needs --source FILE built by "
                             "twocopy-design")
        design = opfile.obj_to_state_set(_load(args.source))
        two = povm.twocopy_design_povm(design)
        obj = opfile.povm_to_obj(povm.companion_povm(two))
    elif name == "tight-coherent-d3":
        sic1 = (opfile.obj_to_state_set(_load(args.sic1))
                if args.sic1 else None)
        sic2 = (opfile.obj_to_state_set(_load(args.sic2))
                if args.sic2 else None)
        obj = opfile.povm_to_obj(povm.minimal_tight_coherent_d3(sic1, sic2))
    else:
        raise UsageError(f"unknown construction {name!r}")
    opfile.save_json(obj, args.out)
    return 0


# ---------------------------------------------------------------- fisher

def _resolve_povm(spec: str) -> povm.Povm:
    if spec == "collective-sic":
        return povm.collective_sic_qubit()
    if spec in ("sic-single", "mub-single"):
        return tomosim.scheme_povm(spec)
    if spec == "great-circle":
        return povm.great_circle_qubit()
    if os.path.exists(spec):
        return opfile.obj_to_povm(_load(spec))
    raise UsageError(f"--povm must be a file or one of {_BUILTIN_POVMS}")


def _parse_state(spec: str) -> states.DensityMatrix:
    if spec.startswith("bloch:"):
        try:
            s = [float(x) for x in spec[len("bloch:"):].split(",")]
        except ValueError as exc:
            raise UsageError(f"bad Bloch vector: {exc}") from exc
        if len(s) != 3:
            raise UsageError("a Bloch vector has three components")
        return states.density_from_bloch(s)
    if spec.startswith("pure:"):
        try:
            amps = [complex(x) for x in spec[len("pure:"):].split(",")]
        except ValueError as exc:
            raise UsageError(f"bad amplitude list: {exc}") from exc
        v = np.array(amps, dtype=complex)
        norm = np.linalg.norm(v)
        if norm <= 0:
            raise UsageError("state vector is zero")
        return states.DensityMatrix.from_pure(states.PureState(v / norm))
    path = spec[len("file:"):] if spec.startswith("file:") else spec
    if os.path.exists(path):
        obj = _load(path)
        mats = [opfile.json_to_matrix(e["matrix"]) for e in obj.get("elements", [])]
        if len(mats) != 1:
            raise UsageError("a state file must hold exactly one element")
        return states.DensityMatrix(mats[0])
    raise UsageError("state must be 'bloch:x,y,z', 'pure:a0,a1,...', or a "
                     "density-matrix file")


def _choose_param(rho: states.DensityMatrix, choice: str) -> states.Parametrization:
    if choice == "auto":
        if rho.is_pure():
            choice = "pure"
        elif rho.dim == 2:
            choice = "bloch"
        else:
            choice = "affine"
    if choice == "pure":
        if not rho.is_pure():
            raise UsageError("the pure-state chart needs a pure state")
        dec = np.linalg.eigh(rho.matrix)
        return states.PureCanonical(states.PureState(dec.eigenvectors[:, -1]))
    if choice == "bloch":
        if rho.dim != 2:
            raise UsageError("the Bloch chart is for qubits")
        return states.BlochQubit(states.bloch_from_density(rho))
    if choice == "affine":
        return states.AffineMixed(rho)
    raise UsageError(f"unknown parametrization {choice!r}")


def cmd_fisher(args) -> int:
    p = _resolve_povm(args.povm)
    rho = _parse_state(args.state)
    param = _choose_param(rho, args.param)
    mode = None if args.mode == "auto" else args.mode
    report = fisher.fisher_report(param, p, mode=mode,
                                  drop_threshold=args.drop_threshold)
    _emit(report.to_dict())
    return 0


# -------------------------------------------------------------- simulate

def _sim_config(obj, for_sweep: bool) -> dict:
    if not isinstance(obj, dict):
        raise UsageError("config must be a JSON object")
    if "seed" not in obj:
        raise UsageError("config is missing the required 'seed' field")
    required = ["scheme", "n_copies", "n_trials", "seed"]
    required.append("radii" if for_sweep else "bloch")
    for key in required:
        if key not in obj:
            raise UsageError(f"config is missing the required {key!r} field")
    kwargs = {
        "scheme": obj["scheme"],
        "n_copies": int(obj["n_copies"]),
        "n_trials": int(obj["n_trials"]),
        "seed": int(obj["seed"]),
        "estimator": obj.get("estimator", "mle"),
    }
    if "interior_clip" in obj:
        kwargs["interior_clip"] = float(obj["interior_clip"])
    if obj.get("povm"):
        kwargs["povm"] = opfile.obj_to_povm(_load(obj["povm"]))
    if for_sweep:
        kwargs["radii"] = tuple(float(x) for x in obj["radii"])
        if "direction" in obj:
            kwargs["direction"] = tuple(float(x) for x in obj["direction"])
    else:
        kwargs["bloch"] = tuple(float(x) for x in obj["bloch"])
    return kwargs


def cmd_simulate(args) -> int:
    obj = _load(args.config)
    try:
        config = tomosim.SimConfig(**_sim_config(obj, for_sweep=False))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad simulation config: {exc}") from exc
    result = tomosim.run_simulation(config)
    out = result.to_dict()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(out, fh, indent=1)
            fh.write("\n")
    _emit(out)
    return 0


def cmd_sweep(args) -> int:
    obj = _load(args.config)
    try:
        config = tomosim.SweepConfig(**_sim_config(obj, for_sweep=True))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad sweep config: {exc}") from exc
    rows = tomosim.sweep(config)
    tomosim.write_sweep_csv(rows, args.out)
    sys.stderr.write(f"wrote {len(rows)} rows to {args.out}\n")
    return 0


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fisym",
        description="Measurement designs, Fisher information bounds, and "
                    "tomography simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="certify a design or POVM file")
    p_verify.add_argument("kind", choices=sorted(_VERIFIERS))
    p_verify.add_argument("file")
    p_verify.add_argument("--tol", type=float, default=1e-8)
    p_verify.set_defaults(func=cmd_verify)

    p_build = sub.add_parser("build", help="write a standard construction")
    p_build.add_argument("name", choices=[
        "sic-qubit", "sic-d3", "mub", "collective-sic", "great-circle",
        "twocopy-design", "companion", "tight-coherent-d3"])
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--phi", type=float, default=0.0)
    p_build.add_argument("--dim", type=int, default=2)
    p_build.add_argument("--design", help="state-set file for twocopy-design")
    p_build.add_argument("--source", help="state-set file for companion")
    p_build.add_argument("--sic1", help="first SIC file for tight-coherent-d3")
    p_build.add_argument("--sic2", help="second SIC file for tight-coherent-d3")
    p_build.set_defaults(func=cmd_build)

    p_fisher = sub.add_parser("fisher", help="information report")
    p_fisher.add_argument("--povm", required=True,
                          help=f"file or one of {_BUILTIN_POVMS}")
    p_fisher.add_argument("--state", required=True,
                          help="'bloch:x,y,z', 'pure:a0,a1,...', or file")
    p_fisher.add_argument("--param", default="auto",
                          choices=["auto", "pure", "bloch", "affine"])
    p_fisher.add_argument("--mode", default="auto",
                          choices=["auto", "single-copy", "two-copy", "pure-n"])
    p_fisher.add_argument("--drop-threshold", type=float, default=1e-12)
    p_fisher.set_defaults(func=cmd_fisher)

    p_sim = sub.add_parser("simulate", help="Monte Carlo tomography run")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="radius sweep to CSV")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, np.linalg.LinAlgError, FloatingPointError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
