"""Parsers for the delimited files the workbench CLI writes.

Both file kinds start with ``# key: value`` metadata lines followed by one
header row and data rows.  Parsing is strict: a wrong header names the
offending column, a bad row names its line number, and nothing is ever
interpolated or coerced silently.
"""

from dataclasses import dataclass

import numpy as np

CURVE_COLUMNS = ("mass_ev", "bound", "constrained")
RECORD_COLUMNS = ("pulse", "field_on", "lambda_expected", "signal_counts", "dark_counts")


class SchemaError(Exception):
    """Input file does not match the expected column schema."""


@dataclass(frozen=True)
class CurveFile:
    """One exclusion curve: metadata plus parallel point arrays.

    ``bounds`` holds NaN at unconstrained points; those are gaps in any
    rendering, never interpolation targets.
    """

    metadata: dict
    masses_ev: np.ndarray
    bounds: np.ndarray
    constrained: np.ndarray

    @property
    def bound_kind(self) -> str:
        return self.metadata.get("bound_kind", "mixing")

    @property
    def label(self) -> str:
        experiment = self.metadata.get("experiment", "unknown")
        target = self.metadata.get("target", "curve")
        return f"{experiment}: {target}"


@dataclass(frozen=True)
class RecordFile:
    """One campaign record: metadata plus per-pulse arrays."""

    metadata: dict
    pulse: np.ndarray
    field_on: np.ndarray
    lambda_expected: np.ndarray
    signal_counts: np.ndarray
    dark_counts: np.ndarray


def _split_header(path):
    metadata = {}
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    body_at = None
    for i, line in enumerate(lines):
        if line.startswith("#"):
            text = line.lstrip("#").strip()
            if ": " in text:
                key, value = text.split(": ", 1)
                metadata[key] = value
            continue
        body_at = i
        break
    if body_at is None or not lines[body_at].strip():
        raise SchemaError(f"{path}: no header row found")
    return metadata, lines[body_at], lines[body_at + 1:], body_at + 1


def _check_columns(path, header_line, expected):
    columns = tuple(header_line.split(","))
    if columns == tuple(expected):
        return
    missing = [c for c in expected if c not in columns]
    unexpected = [c for c in columns if c not in expected]
    problems = []
    if missing:
        problems.append(f"missing column(s) {', '.join(missing)}")
    if unexpected:
        problems.append(f"unexpected column(s) {', '.join(unexpected)}")
    if not problems:
        problems.append(f"column order must be {','.join(expected)}")
    raise SchemaError(f"{path}: {'; '.join(problems)}")


def read_curve(path) -> CurveFile:
    """Parse a curve file, enforcing the mass_ev,bound,constrained schema."""
    metadata, header, rows, first_row_line = _split_header(path)
    _check_columns(path, header, CURVE_COLUMNS)

    masses, bounds, flags = [], [], []
    for offset, row in enumerate(rows):
        if not row.strip():
            continue
        line_no = first_row_line + offset + 1  # 1-based, counting metadata
        fields = row.split(",")
        if len(fields) != 3:
            raise SchemaError(f"{path}: line {line_no}: expected 3 fields, got {len(fields)}")
        mass_text, bound_text, flag_text = fields
        try:
            mass = float(mass_text)
        except ValueError:
            raise SchemaError(f"{path}: line {line_no}: bad mass_ev value {mass_text!r}")
        if flag_text not in ("0", "1"):
            raise SchemaError(f"{path}: line {line_no}: bad constrained flag {flag_text!r}")
        flag = flag_text == "1"
        if flag:
            try:
                bound = float(bound_text)
            except ValueError:
                raise SchemaError(f"{path}: line {line_no}: bad bound value {bound_text!r}")
        else:
            if bound_text != "":
                raise SchemaError(
                    f"{path}: line {line_no}: unconstrained row must have an empty bound")
            bound = np.nan
        masses.append(mass)
        bounds.append(bound)
        flags.append(flag)

    masses = np.asarray(masses, dtype=float)
    if masses.size == 0:
        raise SchemaError(f"{path}: no data rows")
    if np.any(np.diff(masses) <= 0):
        raise SchemaError(f"{path}: masses must be strictly increasing")
    return CurveFile(metadata=metadata, masses_ev=masses,
                     bounds=np.asarray(bounds, dtype=float),
                     constrained=np.asarray(flags, dtype=bool))


def read_record(path) -> RecordFile:
    """Parse a campaign record file."""
    metadata, header, rows, first_row_line = _split_header(path)
    _check_columns(path, header, RECORD_COLUMNS)

    parsed = {name: [] for name in RECORD_COLUMNS}
    for offset, row in enumerate(rows):
        if not row.strip():
            continue
        line_no = first_row_line + offset + 1
        fields = row.split(",")
        if len(fields) != 5:
            raise SchemaError(f"{path}: line {line_no}: expected 5 fields, got {len(fields)}")
        try:
            parsed["pulse"].append(int(fields[0]))
            parsed["field_on"].append(int(fields[1]))
            parsed["lambda_expected"].append(float(fields[2]))
            parsed["signal_counts"].append(int(fields[3]))
            parsed["dark_counts"].append(int(fields[4]))
        except ValueError as err:
            raise SchemaError(f"{path}: line {line_no}: {err}")
    if not parsed["pulse"]:
        raise SchemaError(f"{path}: no data rows")
    return RecordFile(metadata=metadata,
                      pulse=np.asarray(parsed["pulse"], dtype=int),
                      field_on=np.asarray(parsed["field_on"], dtype=bool),
                      lambda_expected=np.asarray(parsed["lambda_expected"], dtype=float),
                      signal_counts=np.asarray(parsed["signal_counts"], dtype=int),
                      dark_counts=np.asarray(parsed["dark_counts"], dtype=int))
