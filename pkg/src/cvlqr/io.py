"""Input documents, result documents and CSV sidecars.

Input files are JSON with top-level "kind" in {complex, antilinear, delay}.
Complex matrix entries are encoded as two-element [re, im] arrays; real
matrices (delay kind) are plain number grids. Example (antilinear):

    {
      "kind": "antilinear",
      "a2": [[[2.0, 0.0]]],
      "b2": [[[1.0, 0.0]]],
      "q":  [[[1.0, 0.0]]],
      "r":  [[[1.0, 0.0]]],
      "options": {"tol": 1e-12}
    }
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .delay import DelayInitialCondition, DelaySystem
from .exceptions import CvlqrError, InputError
from .riccati import SolverOptions
from .systems import AntilinearSystem, ComplexLinearSystem, CostWeights

KINDS = ("complex", "antilinear", "delay")

OPTION_KEYS = ("tol", "max_iter", "divergence_bound", "record_trace", "residual_factor")


def encode_complex_matrix(m: np.ndarray) -> list:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def decode_complex_matrix(obj: Any, fieldname: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"field {fieldname!r}: not a numeric array") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InputError(
            f"field {fieldname!r}: complex matrices must be grids of [re, im] pairs"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def encode_real_matrix(m: np.ndarray) -> list:
    return [[float(v) for v in row] for row in np.atleast_2d(np.asarray(m, dtype=float))]


def decode_real_matrix(obj: Any, fieldname: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"field {fieldname!r}: not a numeric array") from None
    if arr.ndim != 2:
        raise InputError(f"field {fieldname!r}: expected a 2-D grid of numbers")
    return arr


def decode_real_vector(obj: Any, fieldname: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"field {fieldname!r}: not a numeric array") from None
    if arr.ndim != 1:
        raise InputError(f"field {fieldname!r}: expected a flat list of numbers")
    return arr


def _require(doc: dict, fieldname: str) -> Any:
    if fieldname not in doc:
        raise InputError(f"missing required field {fieldname!r}")
    return doc[fieldname]


@dataclass(frozen=True, eq=False)
class ParsedInput:
    """Validated input document with typed payload."""

    kind: str
    raw: dict
    options: dict
    complex_system: ComplexLinearSystem | None = None
    antilinear_system: AntilinearSystem | None = None
    weights: CostWeights | None = None
    delay_system: DelaySystem | None = None
    initial_condition: DelayInitialCondition | None = None


def parse_document(doc: Any) -> ParsedInput:
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    kind = _require(doc, "kind")
    if kind not in KINDS:
        raise InputError(f"field 'kind': must be one of {KINDS}, got {kind!r}")
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise InputError("field 'options': must be an object")
    for key in options:
        if key not in OPTION_KEYS:
            raise InputError(f"field 'options.{key}': unknown option (known: {OPTION_KEYS})")

    try:
        if kind == "complex":
            a1 = decode_complex_matrix(_require(doc, "a1"), "a1")
            a2 = decode_complex_matrix(_require(doc, "a2"), "a2")
            b1 = decode_complex_matrix(_require(doc, "b1"), "b1")
            b2 = decode_complex_matrix(_require(doc, "b2"), "b2")
            q = decode_complex_matrix(_require(doc, "q"), "q")
            r = decode_complex_matrix(_require(doc, "r"), "r")
            try:
                sys = ComplexLinearSystem.from_matrices(a1, a2, b1, b2)
            except ValueError as e:
                raise InputError(f"fields 'a1'/'a2'/'b1'/'b2': {e}") from None
            _check_weight_shapes(q, r, sys.n, sys.m)
            return ParsedInput(
                kind=kind, raw=doc, options=options,
                complex_system=sys, weights=CostWeights(q, r),
            )
        if kind == "antilinear":
            a2 = decode_complex_matrix(_require(doc, "a2"), "a2")
            b2 = decode_complex_matrix(_require(doc, "b2"), "b2")
            q = decode_complex_matrix(_require(doc, "q"), "q")
            r = decode_complex_matrix(_require(doc, "r"), "r")
            try:
                sys = AntilinearSystem(a2, b2)
            except ValueError as e:
                raise InputError(f"fields 'a2'/'b2': {e}") from None
            _check_weight_shapes(q, r, sys.n, sys.m)
            return ParsedInput(
                kind=kind, raw=doc, options=options,
                antilinear_system=sys, weights=CostWeights(q, r),
            )
        # delay
        a0 = decode_real_matrix(_require(doc, "a0"), "a0")
        ad = decode_real_matrix(_require(doc, "ad"), "ad")
        g = decode_real_matrix(_require(doc, "g"), "g")
        q0 = decode_real_matrix(_require(doc, "q0"), "q0")
        r0 = decode_real_matrix(_require(doc, "r0"), "r0")
        try:
            ds = DelaySystem(a0, ad, g, q0, r0)
        except ValueError as e:
            raise InputError(f"fields 'a0'/'ad'/'g'/'q0'/'r0': {e}") from None
        ic = None
        if "xi0" in doc or "xim1" in doc:
            xi0 = decode_real_vector(_require(doc, "xi0"), "xi0")
            xim1 = decode_real_vector(_require(doc, "xim1"), "xim1")
            if xi0.shape != (ds.n,):
                raise InputError(f"field 'xi0': expected length {ds.n}, got {xi0.shape[0]}")
            if xim1.shape != (ds.n,):
                raise InputError(f"field 'xim1': expected length {ds.n}, got {xim1.shape[0]}")
            ic = DelayInitialCondition(xi0, xim1)
        return ParsedInput(
            kind=kind, raw=doc, options=options,
            delay_system=ds, initial_condition=ic,
        )
    except InputError:
        raise
    except CvlqrError as e:
        # weight/SPD validation failures are input errors at this boundary
        raise InputError(str(e)) from None


def _check_weight_shapes(q: np.ndarray, r: np.ndarray, n: int, m: int):
    if q.shape != (n, n):
        raise InputError(f"field 'q': expected {n} x {n}, got {q.shape[0]} x {q.shape[1]}")
    if r.shape != (m, m):
        raise InputError(f"field 'r': expected {m} x {m}, got {r.shape[0]} x {r.shape[1]}")


def load_input(path: str | Path) -> ParsedInput:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from None
    return parse_document(doc)


def solver_options_from(options: dict, **overrides) -> SolverOptions:
    merged = dict(options)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    try:
        return SolverOptions(**merged)
    except (TypeError, ValueError) as e:
        raise InputError(f"field 'options': {e}") from None


def write_json(doc: dict, path: str | Path | None):
    text = json.dumps(doc, indent=2)
    if path is None:
        print(text)
    else:
        Path(path).write_text(text + "\n", encoding="utf-8")


def write_trace_csv(path: str | Path, trace: list[tuple[int, float, float | None]]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "residual", "step"])
        for k, residual, step in trace:
            writer.writerow([k, f"{residual:.16e}", "" if step is None else f"{step:.16e}"])


def write_trajectory_csv(path: str | Path, states: np.ndarray, inputs: np.ndarray):
    states = np.asarray(states)
    inputs = np.asarray(inputs)
    n = states.shape[1]
    m = inputs.shape[1] if inputs.size else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["k"] + [f"state_{i + 1}" for i in range(n)] + [f"input_{i + 1}" for i in range(m)]
        )
        for k in range(states.shape[0]):
            row = [k] + [f"{v:.16e}" for v in states[k]]
            if k < inputs.shape[0]:
                row += [f"{v:.16e}" for v in inputs[k]]
            else:
                row += [""] * m
            writer.writerow(row)
