"""Rendering of claim outcomes: canonical values, text and JSON, figures.

Reports must be byte-stable: running the same claims twice produces the
same output except for the elapsed_ms fields.  Everything that reaches
the serializer is therefore rewritten into deterministic primitives
first (sorted keys, rationals as num/den strings, field elements in
their parseable text form).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .elliptic import EPoint
from .numfield import NFElement, format_element

__all__ = ["ReportEntry", "STATUSES", "canonical", "emit_report"]

STATUSES = ("verified", "refuted", "inconclusive", "skipped")


@dataclass(frozen=True)
class ReportEntry:
    """One replayed claim: what was expected, what came out, how long."""

    id: str
    status: str
    expected: object
    computed: object
    elapsed_ms: int
    paper_ref: str
    evidence_note: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")


def canonical(value):
    """Deterministic rewrite of a value for comparison and emission."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        raise TypeError("floats have no canonical form; use Fraction")
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, EPoint):
        if value.infinity:
            return "O"
        return [canonical(value.x), canonical(value.y)]
    if isinstance(value, NFElement):
        return format_element(value)
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if not isinstance(k, str):
                raise TypeError(f"non-string key {k!r}")
            out[k] = canonical(v)
        return out
    if isinstance(value, (set, frozenset)):
        return sorted((canonical(v) for v in value), key=sort_key)
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    return repr(value)


def sort_key(value):
    return json.dumps(value, sort_keys=True)


def _compact(value) -> str:
    return json.dumps(canonical(value), sort_keys=True,
                      separators=(",", ":"))


def _json_doc(entries, field: str) -> str:
    doc = {
        "tool_version": __version__,
        "field": field,
        "entries": [
            {
                "id": e.id,
                "status": e.status,
                "expected": canonical(e.expected),
                "computed": canonical(e.computed),
                "elapsed_ms": e.elapsed_ms,
                "paper_ref": e.paper_ref,
                "evidence_note": e.evidence_note,
            }
            for e in sorted(entries, key=lambda e: e.id)
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _text_doc(entries) -> str:
    rows = [("id", "status", "elapsed", "expected", "computed", "note")]
    for e in sorted(entries, key=lambda e: e.id):
        rows.append((e.id, e.status, f"{e.elapsed_ms}ms",
                     _compact(e.expected), _compact(e.computed),
                     e.evidence_note or ""))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = []
    for r in rows:
        cells = [r[i].ljust(widths[i]) for i in range(5)] + [r[5]]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _render_figures(entries, path: Path):
    """Status and timing charts next to the written report."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    from matplotlib import pyplot as plt

    ordered = sorted(entries, key=lambda e: e.id)
    written = []

    counts = {s: sum(1 for e in ordered if e.status == s) for s in STATUSES}
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    colors = {"verified": "#2a7e43", "refuted": "#b33a3a",
              "inconclusive": "#b3883a", "skipped": "#777777"}
    ax.bar(list(counts), list(counts.values()),
           color=[colors[s] for s in counts])
    ax.set_ylabel("claims")
    ax.set_title(f"{len(ordered)} claims by status")
    for i, v in enumerate(counts.values()):
        ax.text(i, v, str(v), ha="center", va="bottom")
    fig.tight_layout()
    target = path.with_name(path.stem + "_status.png")
    fig.savefig(target, dpi=110)
    plt.close(fig)
    written.append(target)

    slow = sorted(ordered, key=lambda e: (-e.elapsed_ms, e.id))[:25]
    fig, ax = plt.subplots(figsize=(7.0, 0.28 * len(slow) + 1.2))
    ax.barh([e.id for e in reversed(slow)],
            [e.elapsed_ms for e in reversed(slow)],
            color=[colors[e.status] for e in reversed(slow)])
    ax.set_xlabel("elapsed (ms)")
    ax.set_title("slowest claims")
    fig.tight_layout()
    target = path.with_name(path.stem + "_elapsed.png")
    fig.savefig(target, dpi=110)
    plt.close(fig)
    written.append(target)
    return written


def emit_report(entries, format: str = "text", path=None, *,
                field: str = "q2q3", figures: bool | None = None):
    """Render entries; write them (plus figures) when a path is given.

    Returns the rendered report string.  Figures default to on exactly
    when a path is supplied; an unwritable path raises OSError.
    """
    if format not in ("text", "json"):
        raise ValueError(f"unknown report format {format!r}")
    text = _json_doc(entries, field) if format == "json" \
        else _text_doc(entries)
    if path is not None:
        path = Path(path)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        if figures is None or figures:
            _render_figures(entries, path)
    return text
