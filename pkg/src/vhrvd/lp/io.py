"""Plain-text dump of an :class:`LpProblem` for cross-checking with other solvers.

Layout: a header line, then one section per block. Each section starts with
``[name] rows cols`` and is followed by ``rows`` lines of space-separated
numbers written with ``repr`` so that reading them back is exact::

    vhrvd-lp 1
    [c] 1 4
    1.0 1.0 1.0 1.0
    [A_ub] 2 4
    ...
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from vhrvd.lp.problem import LpProblem

HEADER = "vhrvd-lp 1"
SECTIONS = ("c", "A_ub", "b_ub", "A_eq", "b_eq", "lb", "ub")
VECTORS = ("c", "b_ub", "b_eq", "lb", "ub")


def _num(x: float) -> str:
    return repr(float(x))


def dumps(problem: LpProblem) -> str:
    lines = [HEADER]
    for name in SECTIONS:
        arr = getattr(problem, name)
        block = arr.reshape(1, -1) if name in VECTORS else arr
        if name in VECTORS and arr.size == 0:
            block = np.zeros((0, 0))
        lines.append(f"[{name}] {block.shape[0]} {block.shape[1]}")
        lines.extend(" ".join(_num(v) for v in row) for row in block)
    return "\n".join(lines) + "\n"


def loads(text: str) -> LpProblem:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ValueError(f"not an LP dump (expected header {HEADER!r})")
    blocks, i = {}, 1
    while i < len(lines):
        head = lines[i].split()
        i += 1
        if not head:
            continue
        if len(head) != 3 or not head[0].startswith("[") or not head[0].endswith("]"):
            raise ValueError(f"line {i}: malformed section header {lines[i - 1]!r}")
        name, rows, cols = head[0][1:-1], int(head[1]), int(head[2])
        if name not in SECTIONS:
            raise ValueError(f"line {i}: unknown section {name!r}")
        data = np.array([[float(v) for v in lines[i + r].split()] for r in range(rows)]).reshape(rows, cols)
        i += rows
        blocks[name] = data.ravel() if name in VECTORS else data
    missing = [s for s in SECTIONS if s not in blocks]
    if missing:
        raise ValueError(f"missing sections: {', '.join(missing)}")
    return LpProblem(**blocks)


def dump(problem: LpProblem, path) -> None:
    Path(path).write_text(dumps(problem))


def load(path) -> LpProblem:
    return loads(Path(path).read_text())
