"""CSV/JSON writers with atomic replacement and round-trip float formatting."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .dos import DEBYE, PARTICLE, DOS_HEADER, DosSpectrum, FrequencyGrid
from .errors import ValidationError

__all__ = ["format_value", "write_atomic", "write_csv", "write_json", "write_manifest",
           "read_dos_csv"]


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    write_atomic(path, buf.getvalue())


def write_json(path, payload):
    write_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_manifest(path, command, params):
    """Provenance sidecar: command, parameters, tool version and UTC timestamp."""
    write_json(path, {
        "command": command,
        "parameters": params,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    })


def read_dos_csv(path, source, linewidth=0.0, lowest_mode=None):
    """Load a DOS CSV written by the ``dos`` command back into a :class:`DosSpectrum`."""
    if source not in (PARTICLE, DEBYE):
        raise ValidationError(f"unknown DOS source {source!r}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != DOS_HEADER:
            raise ValidationError(f"{path}: expected header {','.join(DOS_HEADER)}")
        data = np.array([[float(x) for x in row] for row in reader if row])
    if data.ndim != 2 or len(data) < 2:
        raise ValidationError(f"{path}: need at least two rows")
    f = data[:, 0]
    grid = FrequencyGrid(float(f[0]), float(f[-1]), len(f))
    if not np.allclose(f, grid.freqs, rtol=1e-12, atol=0):
        raise ValidationError(f"{path}: frequency column is not a uniform grid")
    return DosSpectrum(grid, data[:, 1], linewidth, source, lowest_mode)
