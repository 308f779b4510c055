"""JSON operator files.

One format stores POVMs, weighted state sets, and operator sets:

    {
      "dim": 2,                 base dimension d
      "copies": 2,              1 or 2; elements act on d^copies
      "subspace": "symmetric",  optional, two-copy POVMs on P_+ only
      "elements": [
        {"weight": 0.75, "matrix": [[[re, im], ...], ...]},
        ...
      ]
    }

Matrices are nested rows of [re, im] pairs.  ``weight`` appears for state
sets (whose matrices are the rank-one projectors) and is omitted for raw
operators.  Floats are serialized with ``repr``, so a parse-validate
round trip is lossless and export -> import -> export is byte identical.
"""

from __future__ import annotations

import json

import numpy as np

from . import _tol
from .designs import OperatorSet, WeightedStateSet
from .povm import Povm

__all__ = [
    "matrix_to_json",
    "json_to_matrix",
    "povm_to_obj",
    "obj_to_povm",
    "state_set_to_obj",
    "obj_to_state_set",
    "operator_set_to_obj",
    "obj_to_operator_set",
    "save_json",
    "load_json",
]


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def json_to_matrix(obj) -> np.ndarray:
    try:
        rows = []
        for row in obj:
            rows.append([complex(float(x[0]), float(x[1])) for x in row])
        m = np.array(rows, dtype=complex)
    except (TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed matrix entry: {exc}") from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix is not square: shape {m.shape}")
    return m


def _header(obj) -> tuple[int, int, str | None]:
    if not isinstance(obj, dict):
        raise ValueError("operator file must contain a JSON object")
    for key in ("dim", "copies", "elements"):
        if key not in obj:
            raise ValueError(f"operator file is missing the {key!r} field")
    dim = int(obj["dim"])
    copies = int(obj["copies"])
    subspace = obj.get("subspace")
    if subspace not in (None, "symmetric"):
        raise ValueError(f"unknown subspace {subspace!r}")
    if not isinstance(obj["elements"], list) or not obj["elements"]:
        raise ValueError("operator file needs a nonempty element list")
    return dim, copies, subspace


def povm_to_obj(p: Povm) -> dict:
    obj = {"dim": p.base_dim, "copies": p.copies}
    if p.subspace is not None:
        obj["subspace"] = p.subspace
    obj["elements"] = [{"matrix": matrix_to_json(e)} for e in p.elements]
    return obj


def obj_to_povm(obj) -> Povm:
    dim, copies, subspace = _header(obj)
    elements = [json_to_matrix(e["matrix"]) for e in obj["elements"]]
    return Povm(elements, copies=copies, base_dim=dim, subspace=subspace)


def _vector_from_projector(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(m)
    if vals[-1] <= 0:
        raise ValueError("projector entry has no positive eigenvalue")
    if np.abs(vals[:-1]).max() > _tol.RANK_TOL * vals[-1]:
        raise ValueError("state-set entry is not a rank-one projector")
    v = vecs[:, -1]
    for x in v:
        if abs(x) > 1e-8:
            return v * (x.conj() / abs(x))
    raise ValueError("zero eigenvector")


def state_set_to_obj(s: WeightedStateSet) -> dict:
    elements = []
    for w, v in zip(s.weights, s.vectors):
        elements.append({
            "weight": float(w),
            "matrix": matrix_to_json(np.outer(v, v.conj())),
        })
    return {"dim": s.dim, "copies": 1, "elements": elements}


def obj_to_state_set(obj) -> WeightedStateSet:
    dim, copies, subspace = _header(obj)
    if copies != 1 or subspace is not None:
        raise ValueError("a state set is a single-copy object")
    vectors, weights = [], []
    for e in obj["elements"]:
        if "weight" not in e:
            raise ValueError("state-set entries need a weight field")
        weights.append(float(e["weight"]))
        vectors.append(_vector_from_projector(json_to_matrix(e["matrix"])))
    return WeightedStateSet(np.array(vectors), np.array(weights))


def operator_set_to_obj(s: OperatorSet) -> dict:
    return {
        "dim": s.dim,
        "copies": 1,
        "elements": [{"matrix": matrix_to_json(e)} for e in s.elements],
    }


def obj_to_operator_set(obj) -> OperatorSet:
    _header(obj)
    elements = tuple(json_to_matrix(e["matrix"]) for e in obj["elements"])
    return OperatorSet(elements)


def save_json(obj: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
