"""Coded findings (errors and warnings) and their human/JSON renderers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .tokens import Span


@dataclass(slots=True)
class Related:
    message: str
    span: Span


@dataclass(slots=True)
class Diagnostic:
    code: str  # Eddnn / Wddnn
    message: str
    span: Span
    related: list[Related] = field(default_factory=list)

    @property
    def severity(self) -> str:
        return "error" if self.code.startswith("E") else "warning"


def sort_key(d: Diagnostic):
    return (d.span.file_id, d.span.byte_start, d.code)


def sorted_diagnostics(diags: list[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=sort_key)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diags)


def to_json(diags: list[Diagnostic]) -> str:
    """Encode diagnostics as one JSON array with stable field names."""
    out = []
    for d in sorted_diagnostics(diags):
        out.append(
            {
                "code": d.code,
                "severity": d.severity,
                "message": d.message,
                "file": d.span.file_id,
                "line": d.span.line,
                "column": d.span.column,
                "related": [
                    {
                        "message": r.message,
                        "file": r.span.file_id,
                        "line": r.span.line,
                        "column": r.span.column,
                    }
                    for r in d.related
                ],
            }
        )
    return json.dumps(out, indent=2) + "\n"


def _excerpt(span: Span, sources: dict[str, str]) -> list[str]:
    src = sources.get(span.file_id)
    if src is None:
        return [f"  --> {span.file_id}:{span.line}:{span.column}"]
    line_start = src.rfind("\n", 0, span.byte_start) + 1
    line_end = src.find("\n", span.byte_start)
    if line_end < 0:
        line_end = len(src)
    text = src[line_start:line_end]
    width = max(1, min(span.byte_end, line_end) - span.byte_start)
    gutter = str(span.line)
    pad = " " * len(gutter)
    caret = " " * (span.byte_start - line_start) + "^" * width
    return [
        f"  --> {span.file_id}:{span.line}:{span.column}",
        f"{pad} |",
        f"{gutter} | {text}",
        f"{pad} | {caret}",
    ]


def render_human(d: Diagnostic, sources: dict[str, str]) -> str:
    """One block per finding: severity[code], location, source line, carets."""
    lines = [f"{d.severity}[{d.code}]: {d.message}"]
    lines += _excerpt(d.span, sources)
    for r in d.related:
        lines.append(f"note: {r.message}")
        lines += _excerpt(r.span, sources)
    return "\n".join(lines) + "\n"
