"""Problem files, report records and CSV output.

The problem file is a single JSON document with complex numbers written as
[re, im] pairs and matrices in row-major order.  Floats are serialized with
Python's shortest-roundtrip repr, so save/load round-trips are bit exact.
CSV files use '.' decimals, 17 significant digits, a header row and LF line
endings for cross-platform reproducibility.
"""

from __future__ import annotations

import json
import math
from typing import Iterable

import numpy as np

from .errors import ParseError, ValidationError
from .evolve import Forcing, ProblemInstance
from .operators import OperatorPair

__all__ = [
    "save_problem", "load_problem", "save_report", "write_csv",
    "load_vector", "save_vector", "format_float",
]


def _c2pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _mat2json(m: np.ndarray) -> list:
    return [_c2pair(z) for z in m.reshape(-1)]


def _vec2json(v: np.ndarray) -> list:
    return [_c2pair(z) for z in v]


def _pair2c(obj, where: str) -> complex:
    if (not isinstance(obj, (list, tuple)) or len(obj) != 2
            or not all(isinstance(x, (int, float)) for x in obj)):
        raise ParseError(f"{where}: expected a [re, im] pair, got {obj!r}")
    return complex(obj[0], obj[1])


def _json2vec(obj, dim: int, where: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise ParseError(f"{where}: expected {dim} [re, im] pairs")
    return np.array([_pair2c(e, where) for e in obj], dtype=complex)


def _json2mat(obj, dim: int, where: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim * dim:
        raise ParseError(f"{where}: expected {dim * dim} row-major [re, im] pairs")
    flat = np.array([_pair2c(e, where) for e in obj], dtype=complex)
    return flat.reshape(dim, dim)


def _forcing2json(f: Forcing) -> dict:
    out: dict = {"kind": f.kind, "mu": float(f.mu)}
    if f.kind == "polynomial":
        out["coeffs"] = [_vec2json(c) for c in f.coeffs]
    else:
        out["times"] = [float(t) for t in f.times]
        out["values"] = [_vec2json(v) for v in f.values]
    return out


def _json2forcing(obj, dim: int) -> Forcing:
    if not isinstance(obj, dict):
        raise ParseError("f: expected an object")
    kind = obj.get("kind")
    mu = obj.get("mu")
    if kind not in ("polynomial", "samples"):
        raise ParseError(f"f.kind: expected 'polynomial' or 'samples', got {kind!r}")
    if not isinstance(mu, (int, float)):
        raise ParseError("f.mu: expected a number")
    if kind == "polynomial":
        raw = obj.get("coeffs")
        if not isinstance(raw, list) or not raw:
            raise ParseError("f.coeffs: expected a non-empty list of vectors")
        coeffs = np.stack([_json2vec(c, dim, f"f.coeffs[{k}]")
                           for k, c in enumerate(raw)])
        return Forcing(kind="polynomial", mu=float(mu), coeffs=coeffs)
    times = obj.get("times")
    raw = obj.get("values")
    if not isinstance(times, list) or not isinstance(raw, list):
        raise ParseError("f.times / f.values: expected lists")
    if len(times) != len(raw):
        raise ParseError("f.times and f.values must have equal length")
    values = np.stack([_json2vec(v, dim, f"f.values[{k}]")
                       for k, v in enumerate(raw)])
    return Forcing(kind="samples", mu=float(mu),
                   times=np.asarray(times, dtype=float), values=values)


def save_problem(path: str, prob: ProblemInstance) -> None:
    doc = {
        "dim": prob.pair.dim,
        "M": _mat2json(prob.pair.M),
        "L": _mat2json(prob.pair.L),
        "norm": prob.pair.norm,
        "T": float(prob.T),
        "u0": _vec2json(prob.u0),
        "f": _forcing2json(prob.f),
    }
    if prob.v0 is not None:
        doc["v0"] = _vec2json(prob.v0)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


_REQUIRED_KEYS = {"dim", "M", "L", "norm", "T", "u0", "f"}
_ALLOWED_KEYS = _REQUIRED_KEYS | {"v0"}


def load_problem(path: str) -> ProblemInstance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    missing = _REQUIRED_KEYS - set(doc)
    if missing:
        raise ParseError(f"{path}: missing fields {sorted(missing)}")
    unknown = set(doc) - _ALLOWED_KEYS
    if unknown:
        raise ParseError(f"{path}: unknown fields {sorted(unknown)}")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{path}: dim must be a positive integer")
    if doc["norm"] not in ("l2", "linf"):
        raise ParseError(f"{path}: norm must be 'l2' or 'linf'")
    if not isinstance(doc["T"], (int, float)) or doc["T"] <= 0:
        raise ParseError(f"{path}: T must be a positive number")
    M = _json2mat(doc["M"], dim, "M")
    L = _json2mat(doc["L"], dim, "L")
    try:
        pair = OperatorPair(M=M, L=L, norm=doc["norm"])
    except Exception as exc:
        raise ValidationError(f"{path}: operator pair invalid: {exc}") from exc
    forcing = _json2forcing(doc["f"], dim)
    u0 = _json2vec(doc["u0"], dim, "u0")
    v0 = _json2vec(doc["v0"], dim, "v0") if "v0" in doc else None
    try:
        return ProblemInstance(pair=pair, f=forcing, u0=u0,
                               T=float(doc["T"]), v0=v0)
    except ValidationError:
        raise
    except Exception as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def format_float(x) -> str:
    """17-significant-digit decimal text, stable across runs."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    xf = float(x)
    if math.isnan(xf):
        return "nan"
    return format(xf, ".17g")


def write_csv(path: str, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(
                cell if isinstance(cell, str) else format_float(cell)
                for cell in row) + "\n")


def save_report(path: str, record: dict) -> None:
    """Structured text record (JSON with sorted keys, LF endings)."""
    def default(o):
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, complex):
            return [o.real, o.imag]
        raise TypeError(f"not serializable: {type(o)}")

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(record, fh, indent=1, sort_keys=True, default=default)
        fh.write("\n")


def save_vector(path: str, v: np.ndarray) -> None:
    write_csv(path, ["re", "im"],
              [[z.real, z.imag] for z in np.asarray(v, dtype=complex)])


def load_vector(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not lines or lines[0].replace(" ", "") != "re,im":
        raise ParseError(f"{path}: expected header 're,im'")
    out = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 2:
            raise ParseError(f"{path}: line {k}: expected 're,im'")
        try:
            out.append(complex(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ParseError(f"{path}: line {k}: {exc}") from exc
    return np.array(out, dtype=complex)
