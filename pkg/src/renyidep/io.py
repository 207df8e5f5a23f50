"""Reading and writing joint PMF files.

Two layouts are accepted:

* JSON with ``x_labels``, ``y_labels`` and a row-major ``p`` matrix
  (``matrix`` is accepted as an alias of ``p``);
* a bare matrix, one row per line, entries separated by commas, semicolons,
  tabs or spaces. Labels are generated as ``x0, x1, ...`` and ``y0, y1, ...``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .prob_core import JointPmf, PmfError


def parse_joint(text: str) -> JointPmf:
    stripped = text.strip()
    if not stripped:
        raise PmfError("empty PMF file")
    if stripped[0] == "{":
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise PmfError(f"malformed JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise PmfError("JSON PMF file must be an object")
        key = "p" if "p" in doc else "matrix"
        if key not in doc:
            raise PmfError("JSON PMF file needs a 'p' matrix")
        p = _matrix(doc[key])
        xl = doc.get("x_labels")
        yl = doc.get("y_labels")
        return JointPmf(p, None if xl is None else [str(v) for v in xl], None if yl is None else [str(v) for v in yl])

    rows = []
    for line in stripped.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append([tok for tok in re.split(r"[,;\s]+", line) if tok])
    return JointPmf(_matrix(rows))


def _matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise PmfError("probability matrix must be a nonempty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise PmfError("probability matrix rows have different lengths")
    try:
        return np.array([[float(v) for v in r] for r in rows], dtype=float)
    except (TypeError, ValueError) as exc:
        raise PmfError(f"non-numeric probability: {exc}") from None


def load_joint(path: str | Path) -> JointPmf:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PmfError(f"cannot read {path}: {exc}") from None
    return parse_joint(text)


def dump_joint(j: JointPmf) -> str:
    # one matrix row per line; json emits the shortest round-tripping repr
    rows = ",\n    ".join(json.dumps(r) for r in j.p.tolist())
    return (
        "{\n"
        f'  "x_labels": {json.dumps([str(v) for v in j.x_labels])},\n'
        f'  "y_labels": {json.dumps([str(v) for v in j.y_labels])},\n'
        f'  "p": [\n    {rows}\n  ]\n'
        "}\n"
    )


def save_joint(j: JointPmf, path: str | Path) -> None:
    Path(path).write_text(dump_joint(j))
