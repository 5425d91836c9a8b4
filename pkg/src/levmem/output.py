"""CSV emission with a commented metadata header."""

import csv
import io
import math
from datetime import datetime, timezone

from . import __version__


def format_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def metadata_lines(cfg, recipe, extra=None, timestamp=False):
    opts = cfg.raw["options"]
    meta = {
        "tool": f"levmem {__version__}",
        "recipe": recipe,
        "config_digest": cfg.digest,
        "conventions": (
            f"fidelity={opts['fidelity_convention']} cooperativity={opts['cooperativity']} "
            f"noise_model={opts['noise_model']}"
        ),
    }
    meta.update(extra or {})
    if timestamp:
        meta["generated"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return [f"# {k}: {v}" for k, v in meta.items()]


def csv_text(columns, rows, header_lines=()):
    buf = io.StringIO()
    for line in header_lines:
        buf.write(line + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def csv_body(text):
    """The part of a written CSV below the metadata header."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def write_csv(path, columns, rows, header_lines=()):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(columns, rows, header_lines))
    return path
