"""Reading and writing shift-specification documents.

The on-disk form is JSON.  Complex scalars are two-element arrays
``[re, im]``; matrices are row-major nested arrays of those pairs.  A
document declares the block dimension, named shifts, optional named banded
operators, and task blocks to run::

    {
      "dim": 2,
      "shifts": {
        "S": {"variant": "periodic", "weights": [ ...matrices... ]},
        "T": {"variant": "eventually_identity", "lo": 0, "weights": [...]},
        "R": {"variant": "windowed", "lo": -3, "weights": [...]}
      },
      "operators": {
        "U": {"bands": {"-1": {...sequence...}, "1": {...sequence...}}}
      },
      "tasks": [
        {"op": "verify_intertwining", "operator": "U", "s": "S", "t": "T",
         "window": [-8, 8]}
      ]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bands import BandedOperator
from .errors import SpecFormatError
from .shifts import (
    BilateralShift,
    EventuallyIdentityWeights,
    PeriodicWeights,
    WeightSequence,
    WindowedWeights,
)

KNOWN_TASK_OPS = (
    "verify_intertwining",
    "verify_unitary",
    "two_band_structure",
    "diagonal_propagation",
    "band_count_bound",
    "conjugate_to_shift",
    "positive_form",
    "norms",
    "norm_offset_screen",
    "eigen_moduli_screen",
    "decide",
)


@dataclass
class SpecModel:
    """A fully resolved specification document."""

    dim: int
    shifts: dict = field(default_factory=dict)
    operators: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def encode_matrix(m) -> list:
    a = np.asarray(m, dtype=complex)
    return [[encode_complex(a[i, j]) for j in range(a.shape[1])]
            for i in range(a.shape[0])]


def decode_matrix(data, path: str, dim: int | None = None) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise SpecFormatError("matrix must be a nonempty nested array", path=path)
    rows = []
    width = None
    for i, row in enumerate(data):
        if not isinstance(row, list) or not row:
            raise SpecFormatError("matrix row must be a nonempty array",
                                  path=f"{path}[{i}]")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SpecFormatError("matrix rows have unequal lengths",
                                  path=f"{path}[{i}]")
        out = []
        for j, cell in enumerate(row):
            if (not isinstance(cell, list) or len(cell) != 2
                    or not all(isinstance(x, (int, float)) for x in cell)):
                raise SpecFormatError(
                    "matrix entry must be a [re, im] pair of numbers",
                    path=f"{path}[{i}][{j}]")
            out.append(complex(cell[0], cell[1]))
        rows.append(out)
    mat = np.array(rows, dtype=complex)
    if mat.shape[0] != mat.shape[1]:
        raise SpecFormatError(f"matrix must be square, got {mat.shape}", path=path)
    if dim is not None and mat.shape[0] != dim:
        raise SpecFormatError(
            f"matrix has dimension {mat.shape[0]}, document declares {dim}",
            path=path)
    return mat


def encode_sequence(seq: WeightSequence) -> dict:
    out = {"variant": seq.variant,
           "weights": [encode_matrix(w) for _, w in seq.described_items()]}
    rng = seq.described_range()
    if rng is not None:
        out["lo"] = rng[0]
    return out


def decode_sequence(data, path: str, dim: int) -> WeightSequence:
    if not isinstance(data, dict):
        raise SpecFormatError("weight sequence must be an object", path=path)
    variant = data.get("variant")
    raw = data.get("weights")
    if not isinstance(raw, list) or not raw:
        raise SpecFormatError("weights must be a nonempty array",
                              path=f"{path}.weights")
    mats = [decode_matrix(w, f"{path}.weights[{i}]", dim)
            for i, w in enumerate(raw)]
    if variant == "periodic":
        return PeriodicWeights(mats)
    if variant in ("eventually_identity", "windowed"):
        lo = data.get("lo")
        if not isinstance(lo, int):
            raise SpecFormatError(f"variant {variant!r} requires integer 'lo'",
                                  path=f"{path}.lo")
        cls = (EventuallyIdentityWeights if variant == "eventually_identity"
               else WindowedWeights)
        return cls(lo, mats)
    raise SpecFormatError(f"unknown variant {variant!r}", path=f"{path}.variant")


def encode_shift(shift: BilateralShift) -> dict:
    return encode_sequence(shift.weights)


def encode_operator(op: BandedOperator) -> dict:
    return {"bands": {str(k): encode_sequence(op.band(k)) for k in op.offsets}}


def decode_operator(data, path: str, dim: int) -> BandedOperator:
    if not isinstance(data, dict) or not isinstance(data.get("bands"), dict):
        raise SpecFormatError("operator must be an object with a 'bands' map",
                              path=path)
    bands = {}
    for key, seq in data["bands"].items():
        try:
            offset = int(key)
        except ValueError:
            raise SpecFormatError(f"band offset {key!r} is not an integer",
                                  path=f"{path}.bands") from None
        bands[offset] = decode_sequence(seq, f"{path}.bands.{key}", dim)
    return BandedOperator(bands)


def _validate_task(task, index: int, model: SpecModel):
    path = f"tasks[{index}]"
    if not isinstance(task, dict):
        raise SpecFormatError("task must be an object", path=path)
    op = task.get("op")
    if op not in KNOWN_TASK_OPS:
        raise SpecFormatError(f"unknown task op {op!r}", path=f"{path}.op")
    for key in ("s", "t", "shift"):
        name = task.get(key)
        if name is not None and name not in model.shifts:
            raise SpecFormatError(f"undefined shift {name!r}",
                                  path=f"{path}.{key}")
    name = task.get("operator")
    if name is not None and name not in model.operators:
        raise SpecFormatError(f"undefined operator {name!r}",
                              path=f"{path}.operator")


def parse_shift_spec(text: str) -> SpecModel:
    """Parse a specification document into resolved objects.

    Syntax errors carry line/column positions; semantic errors carry the
    JSON path of the offending element.  All names referenced by tasks must
    resolve.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno,
                              column=exc.colno) from None
    if not isinstance(doc, dict):
        raise SpecFormatError("document must be a JSON object", path="$")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise SpecFormatError("'dim' must be a positive integer", path="dim")
    model = SpecModel(dim=dim)
    shifts = doc.get("shifts", {})
    if not isinstance(shifts, dict):
        raise SpecFormatError("'shifts' must be an object", path="shifts")
    for name, data in shifts.items():
        seq = decode_sequence(data, f"shifts.{name}", dim)
        try:
            model.shifts[name] = BilateralShift(seq, label=name)
        except ValueError as exc:
            raise SpecFormatError(str(exc), path=f"shifts.{name}") from None
    operators = doc.get("operators", {})
    if not isinstance(operators, dict):
        raise SpecFormatError("'operators' must be an object", path="operators")
    for name, data in operators.items():
        op = decode_operator(data, f"operators.{name}", dim)
        op.label = name
        model.operators[name] = op
    tasks = doc.get("tasks", [])
    if not isinstance(tasks, list):
        raise SpecFormatError("'tasks' must be an array", path="tasks")
    for i, task in enumerate(tasks):
        _validate_task(task, i, model)
        model.tasks.append(dict(task))
    return model


def serialize_model(model: SpecModel, indent: int = 2) -> str:
    """Serialize back to document text; parsing it again gives an equal model."""
    doc = {
        "dim": model.dim,
        "shifts": {name: encode_shift(s) for name, s in model.shifts.items()},
        "operators": {name: encode_operator(op)
                      for name, op in model.operators.items()},
        "tasks": model.tasks,
    }
    return json.dumps(doc, indent=indent, sort_keys=True)


def load_spec_file(path) -> SpecModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_shift_spec(fh.read())
