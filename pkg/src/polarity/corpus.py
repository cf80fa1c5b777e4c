"""Labeled corpora: reading jsonl/tsv files and counting labels."""
from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["LabeledDocument", "IngestError", "ingest", "corpus_stats", "format_stats", "CANONICAL_LABELS"]

log = logging.getLogger(__name__)

CANONICAL_LABELS = ("pos", "neu", "neg", "none")
_LABEL_HEADINGS = {"pos": "Positive", "neu": "Neutral", "neg": "Negative", "none": "None"}


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledDocument:
    text: str
    label: str | None
    id: str | None = None


def _infer_format(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix in (".jsonl", ".json", ".ndjson"):
        return "jsonl"
    if suffix in (".tsv", ".tab", ".txt"):
        return "tsv"
    raise IngestError(f"{path}: cannot infer the format from the extension; pass jsonl or tsv")


def _parse_jsonl(line: str) -> tuple[str, str | None, str | None]:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON ({exc.msg})") from None
    if not isinstance(record, dict):
        raise ValueError("record is not a JSON object")
    text = record.get("text")
    if not isinstance(text, str):
        raise ValueError("missing string field 'text'")
    label = record.get("klass", record.get("label"))
    doc_id = record.get("id")
    return text, None if label is None else str(label), None if doc_id is None else str(doc_id)


def _parse_tsv(line: str) -> tuple[str, str | None, str | None]:
    label, sep, text = line.partition("\t")
    if not sep:
        return label, None, None
    return text, label.strip() or None, None


def ingest(
    path: str | Path,
    format: str | None = None,
    *,
    lenient: bool = False,
    labels: Iterable[str] | None = None,
    require_label: bool = True,
    allow_empty: bool = False,
) -> list[LabeledDocument]:
    """Read documents in file order.

    jsonl records carry ``text`` and ``klass`` (``label`` is accepted too) and
    an optional ``id``; tsv lines are ``label<TAB>text``.  A malformed line
    aborts with its line number, or is skipped with a warning when
    ``lenient`` is set.
    """
    path = Path(path)
    fmt = format or _infer_format(path)
    if fmt not in ("jsonl", "tsv"):
        raise IngestError(f"unknown corpus format {fmt!r}")
    parse = _parse_jsonl if fmt == "jsonl" else _parse_tsv
    allowed = None if labels is None else set(labels)
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestError(f"cannot read {path}: {exc}") from None
    docs = []
    for lineno, line in enumerate(raw.splitlines(), 1):
        if not line.strip():
            continue
        try:
            text, label, doc_id = parse(line)
            if not text.strip():
                raise ValueError("empty text")
            if label is None and require_label:
                raise ValueError("missing label")
            if label is not None and allowed is not None and label not in allowed:
                raise ValueError(f"unknown label {label!r}")
        except ValueError as exc:
            message = f"{path}:{lineno}: {exc}"
            if not lenient:
                raise IngestError(message) from None
            log.warning("skipping %s", message)
            continue
        docs.append(LabeledDocument(text, label, doc_id))
    if not docs and not allow_empty:
        raise IngestError(f"{path}: zero valid records")
    return docs


def corpus_stats(docs: Sequence[LabeledDocument]) -> dict:
    """Count documents per label; the ``total`` entry holds the corpus size."""
    if not docs:
        raise ValueError("cannot summarise an empty corpus")
    counts = Counter(doc.label for doc in docs)
    ordered = [l for l in CANONICAL_LABELS if l in counts]
    ordered += sorted((l for l in counts if l not in CANONICAL_LABELS), key=str)
    stats = {label: counts[label] for label in ordered}
    stats["total"] = len(docs)
    return stats


def format_stats(stats: dict, name: str = "") -> str:
    """Render counts as a one-row table (Positive, Neutral, Negative, None, Total)."""
    labels = [l for l in stats if l != "total"]
    columns = [l for l in CANONICAL_LABELS] + [l for l in labels if l not in CANONICAL_LABELS]
    headings = ["Dataset"] + [_LABEL_HEADINGS.get(l, str(l)) for l in columns] + ["Total"]
    row = [name or "-"] + [f"{stats[l]:,}" if l in stats else "-" for l in columns] + [f"{stats['total']:,}"]
    widths = [max(len(h), len(v)) for h, v in zip(headings, row)]
    fmt = lambda cells: " | ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(cells, widths)))
    rule = "-+-".join("-" * w for w in widths)
    return "\n".join([fmt(headings), rule, fmt(row)])
