"""CSV writing helpers shared by the benchmark and the CLI."""

from __future__ import annotations

import csv
import hashlib
import io
import os
from typing import Iterable, Sequence


def format_value(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if value != value:
            return "NA"
        return repr(value)
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Write rows atomically; returns the file's sha256."""
    text = csv_text(header, rows)
    write_text_atomic(path, text)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    path = os.fspath(path)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def sha256_file(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def read_csv(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


TRACE_HEADER = ("t", "group", "S", "I", "R", "new_infections", "cumulative")


def read_trace_csv(path: str | os.PathLike) -> dict[str, dict[str, list[int]]]:
    """Parse a trace CSV into ``{group: {column: values}}`` ordered by ``t``."""
    from .errors import FormatError

    rows = read_csv(path)
    if not rows or set(TRACE_HEADER) - set(rows[0]):
        raise FormatError(f"{path}: trace CSV needs columns {','.join(TRACE_HEADER)}")
    out: dict[str, dict[str, list[int]]] = {}
    try:
        for row in sorted(rows, key=lambda r: (r["group"], int(r["t"]))):
            cols = out.setdefault(row["group"], {k: [] for k in TRACE_HEADER if k != "group"})
            for k in cols:
                cols[k].append(int(row[k]))
    except ValueError as exc:
        raise FormatError(f"{path}: non-integer trace value ({exc})") from None
    for name, cols in out.items():
        if cols["t"] != list(range(1, len(cols["t"]) + 1)):
            raise FormatError(f"{path}: group {name!r} does not cover t = 1..T contiguously")
    return out


def history_csv_text(history, labels) -> str:
    """Wide layout: ``t,<label...>`` with one ``S``/``I``/``R`` letter per node."""
    import numpy as np

    letters = np.array(list("SIR"))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", *labels])
    for t, row in enumerate(history, 1):
        w.writerow([t, *letters[row]])
    return buf.getvalue()


def read_history_csv(path: str | os.PathLike):
    """Inverse of :func:`history_csv_text`; returns ``(history, labels)``."""
    import numpy as np

    from .errors import FormatError

    codes = {"S": 0, "I": 1, "R": 2}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "t" or len(header) < 2:
            raise FormatError(f"{path}: history CSV must start with a 't' column followed by node columns")
        labels = header[1:]
        rows = []
        for lineno, row in enumerate(reader, 2):
            if len(row) != len(header):
                raise FormatError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
            try:
                rows.append([codes[x] for x in row[1:]])
            except KeyError as exc:
                raise FormatError(f"{path}:{lineno}: unknown state {exc.args[0]!r}") from None
    if not rows:
        raise FormatError(f"{path}: history has no time steps")
    return np.array(rows, dtype=np.int8), labels
