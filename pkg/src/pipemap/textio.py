"""Plain-text formats for instances and mappings.

Instance files are line-oriented UTF-8.  '#' starts a comment anywhere on a
line; blank lines are ignored.  The first meaningful line is the header
``pipeline v1``, followed by one line per field in any order:

    pipeline v1
    n 3
    b 2
    delta 2 4 6 2
    w 4 2 6
    p 2
    s 2 1

Mappings are single-line strings such as ``map 1-2:1 3-3:2``: inclusive
1-based stage ranges, each followed by its processor index.
"""

from __future__ import annotations

import re

from .model import IntervalMapping, PipelineApp, Platform

HEADER = "pipeline v1"

_PIECE_RE = re.compile(r"(\d+)-(\d+):(\d+)")


def format_number(x: float) -> str:
    """Shortest exact text for a value: integer digits when whole, repr otherwise."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_instance(app: PipelineApp, platform: Platform, comment: str | None = None) -> str:
    lines = [HEADER]
    if comment:
        lines.insert(0, f"# {comment}")
    lines.append(f"n {app.n}")
    lines.append(f"b {format_number(platform.b)}")
    lines.append("delta " + " ".join(format_number(x) for x in app.delta))
    lines.append("w " + " ".join(format_number(x) for x in app.w))
    lines.append(f"p {platform.p}")
    lines.append("s " + " ".join(format_number(x) for x in platform.s))
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> tuple[PipelineApp, Platform]:
    """Parse an instance file body; raises ValueError on any malformation."""
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ValueError("empty instance file")
    if rows[0] != HEADER.split():
        raise ValueError(f"missing '{HEADER}' header")
    fields: dict[str, list[str]] = {}
    for row in rows[1:]:
        key, values = row[0], row[1:]
        if key not in ("n", "b", "delta", "w", "p", "s"):
            raise ValueError(f"unknown field {key!r}")
        if key in fields:
            raise ValueError(f"field {key!r} given twice")
        if not values:
            raise ValueError(f"field {key!r} has no value")
        fields[key] = values
    for key in ("n", "b", "delta", "w", "p", "s"):
        if key not in fields:
            raise ValueError(f"field {key!r} missing")
    try:
        n = int(fields["n"][0])
        b = float(fields["b"][0])
        p = int(fields["p"][0])
        delta = [float(x) for x in fields["delta"]]
        w = [float(x) for x in fields["w"]]
        s = [float(x) for x in fields["s"]]
    except ValueError as exc:
        raise ValueError(f"malformed numeric value: {exc}") from None
    if len(fields["n"]) != 1 or len(fields["b"]) != 1 or len(fields["p"]) != 1:
        raise ValueError("fields n, b, and p take a single value")
    app = PipelineApp(n=n, w=w, delta=delta)
    platform = Platform(p=p, s=s, b=b)
    return app, platform


def load_instance(path) -> tuple[PipelineApp, Platform]:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def save_instance(path, app: PipelineApp, platform: Platform, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_instance(app, platform, comment))


def format_mapping(mapping: IntervalMapping) -> str:
    pieces = " ".join(
        f"{d}-{e}:{u}" for (d, e), u in zip(mapping.intervals, mapping.alloc)
    )
    return f"map {pieces}"


def parse_mapping(text: str) -> IntervalMapping:
    """Parse a mapping string; raises ValueError on any malformation."""
    tokens = text.split()
    if not tokens or tokens[0] != "map":
        raise ValueError("mapping must start with 'map'")
    if len(tokens) == 1:
        raise ValueError("mapping has no intervals")
    intervals: list[tuple[int, int]] = []
    alloc: list[int] = []
    for token in tokens[1:]:
        match = _PIECE_RE.fullmatch(token)
        if not match:
            raise ValueError(f"bad mapping piece {token!r}, expected d-e:proc")
        d, e, u = (int(g) for g in match.groups())
        intervals.append((d, e))
        alloc.append(u)
    return IntervalMapping(tuple(intervals), tuple(alloc))
