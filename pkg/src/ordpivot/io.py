"""Population frames and the text serialization of designs and matrices."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import FrameParseError
from .inclusion import SamplingDesign, design_from_paths


def read_frame(path) -> tuple[list[float], dict[str, list[float]]]:
    """Read a population frame: header ``unit,pi[,y1,y2,...]``.

    Rows must appear in population order with unit labels 1..N.  Returns
    the probability column and any study-variable columns keyed by their
    header names.  Malformed content raises FrameParseError with the
    offending line number.
    """
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    rows = [(i + 1, row) for i, row in enumerate(rows) if any(cell.strip() for cell in row)]
    if not rows:
        raise FrameParseError(1, "empty frame")
    header_line, header = rows[0]
    names = [cell.strip() for cell in header]
    if len(names) < 2 or names[0] != "unit" or names[1] != "pi":
        raise FrameParseError(header_line, "header must start with 'unit,pi'")
    y_names = names[2:]
    pi: list[float] = []
    ys: dict[str, list[float]] = {name: [] for name in y_names}
    for expected, (line, row) in enumerate(rows[1:], start=1):
        cells = [cell.strip() for cell in row]
        if len(cells) != len(names):
            raise FrameParseError(line, f"expected {len(names)} fields, got {len(cells)}")
        try:
            unit = int(cells[0])
        except ValueError:
            raise FrameParseError(line, f"unit label {cells[0]!r} is not an integer")
        if unit != expected:
            raise FrameParseError(line, f"unit {unit} out of order (expected {expected})")
        try:
            pi.append(float(cells[1]))
        except ValueError:
            raise FrameParseError(line, f"probability {cells[1]!r} is not a number")
        for name, cell in zip(y_names, cells[2:]):
            try:
                ys[name].append(float(cell))
            except ValueError:
                raise FrameParseError(line, f"value {cell!r} in column {name} is not a number")
    return pi, ys


def format_design(d: SamplingDesign) -> str:
    """One ``members;probability`` line per sample, 17 significant digits."""
    return "\n".join(
        ",".join(str(u) for u in units) + ";" + format(p, ".17g")
        for units, p in d.support
    )


def parse_design(text: str, N: int | None = None) -> SamplingDesign:
    paths = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        members, prob = line.split(";")
        units = tuple(int(u) for u in members.split(","))
        paths.append((units, float(prob)))
    sizes = {len(u) for u, _ in paths}
    if len(sizes) != 1:
        raise ValueError(f"samples of mixed sizes {sizes}")
    if N is None:
        N = max(max(u) for u, _ in paths)
    return design_from_paths(paths, N, sizes.pop())


def format_matrix(values: np.ndarray) -> str:
    """Dense rows, comma-delimited, 17 significant digits."""
    return "\n".join(
        ",".join(format(x, ".17g") for x in row) for row in np.asarray(values)
    )


def parse_matrix(text: str) -> np.ndarray:
    rows = [
        [float(cell) for cell in line.split(",")]
        for line in text.splitlines()
        if line.strip()
    ]
    return np.asarray(rows)


def write_text(path, content: str):
    Path(path).write_text(content if content.endswith("\n") else content + "\n")
