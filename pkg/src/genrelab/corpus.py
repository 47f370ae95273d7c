"""Four-class corpus representation, ingestion, and persistence.

The corpus itself cannot be redistributed, so the canonical artifact is the
*manifest*: a JSONL file with one header record (version, seed) followed by
one record per document.  Ingestion turns locally supplied raw files (plain
text, HTML, or XML) into :class:`Document` objects labeled by their source.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field, replace
from enum import IntEnum
from html.parser import HTMLParser
from pathlib import Path
from typing import Iterable, Optional
from xml.etree import ElementTree

from genrelab.errors import DataError, ManifestSchemaError

log = logging.getLogger(__name__)

MANIFEST_VERSION = "1"


class ClassLabel(IntEnum):
    """The four text-genre classes with their stable integer codes."""

    ALTERNATIVE_SCIENTIFIC = 0
    SCIENTIFIC = 1
    VERNACULAR = 2
    DISINFORMATIVE = 3

    @classmethod
    def from_code(cls, code: int) -> "ClassLabel":
        try:
            return cls(code)
        except ValueError:
            raise DataError(f"invalid label code {code!r}; expected one of 0..3")

    @property
    def slug(self) -> str:
        return _LABEL_SLUGS[self]


_LABEL_SLUGS = {
    ClassLabel.ALTERNATIVE_SCIENTIFIC: "alternative_scientific",
    ClassLabel.SCIENTIFIC: "scientific",
    ClassLabel.VERNACULAR: "vernacular",
    ClassLabel.DISINFORMATIVE: "disinformative",
}
_SLUG_LABELS = {v: k for k, v in _LABEL_SLUGS.items()}


def label_from_slug(slug: str) -> ClassLabel:
    try:
        return _SLUG_LABELS[slug]
    except KeyError:
        raise DataError(f"invalid label name {slug!r}")


@dataclass(frozen=True)
class Document:
    """One text item of the corpus.

    ``char_len`` always reflects ``clean_text`` when present, else
    ``raw_text``; it is recomputed on construction so it cannot drift.
    """

    id: str
    label: ClassLabel
    topic: str
    source: str
    raw_text: str
    retrieved_at: str
    clean_text: Optional[str] = None
    url: Optional[str] = None
    char_len: int = field(default=-1)

    def __post_init__(self):
        if not self.topic:
            raise DataError(f"document {self.id!r} has an empty topic")
        text = self.clean_text if self.clean_text is not None else self.raw_text
        object.__setattr__(self, "char_len", len(text))
        object.__setattr__(self, "topic", self.topic.lower())

    @property
    def text(self) -> str:
        """Cleaned text when available, otherwise raw."""
        return self.clean_text if self.clean_text is not None else self.raw_text

    def with_clean_text(self, clean_text: str) -> "Document":
        return replace(self, clean_text=clean_text)


@dataclass(frozen=True)
class Manifest:
    """Ordered corpus listing plus the seed that produced any sampling."""

    documents: tuple[Document, ...]
    version: str = MANIFEST_VERSION
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))
        seen = set()
        for d in self.documents:
            if d.id in seen:
                raise DataError(f"duplicate id {d.id!r} in manifest")
            seen.add(d.id)

    def __len__(self) -> int:
        return len(self.documents)

    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def by_id(self) -> dict[str, Document]:
        return {d.id: d for d in self.documents}

    def topics(self) -> set[str]:
        return {d.topic for d in self.documents}


@dataclass(frozen=True)
class SourceSpec:
    """Declarative description of one data source.

    ``kind`` is ``local-dir`` (a directory of already-retrieved files) or
    ``fetcher`` (a registered callable producing ``(name, url, payload)``
    items, exercised against fixtures in tests).  ``config`` carries
    kind-specific settings: ``format`` (text|html|xml), ``selector`` for
    HTML body extraction, ``tag`` for XML.
    """

    name: str
    label: ClassLabel
    kind: str = "local-dir"
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("local-dir", "fetcher"):
            raise DataError(f"source {self.name!r}: unknown kind {self.kind!r}")


def load_source_registry(path) -> list[SourceSpec]:
    """Read the declarative source registry (JSON: name -> class, kind, config)."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    specs = []
    names = set()
    for entry in raw["sources"]:
        name = entry["name"]
        if name in names:
            raise DataError(f"duplicate source name {name!r} in registry")
        names.add(name)
        specs.append(
            SourceSpec(
                name=name,
                label=label_from_slug(entry["label"]),
                kind=entry.get("kind", "local-dir"),
                config=entry.get("config", {}),
            )
        )
    return specs


# --- HTML / XML body extraction -------------------------------------------

class _SelectorExtractor(HTMLParser):
    """Collect text inside the first element matching a simple selector.

    Supported selector forms: ``tag``, ``.class``, ``#id``, ``tag.class``,
    ``tag#id``.  Script and style content is always dropped.
    """

    def __init__(self, selector: str):
        super().__init__(convert_charrefs=True)
        self.tag, self.attr, self.value = self._parse(selector)
        self.depth = 0
        self.capturing = False
        self.done = False
        self._skip = 0
        self.parts: list[str] = []

    @staticmethod
    def _parse(selector: str):
        m = re.fullmatch(r"([a-zA-Z][\w-]*)?(?:([.#])([\w-]+))?", selector.strip())
        if not m or (m.group(1) is None and m.group(2) is None):
            raise DataError(f"unsupported selector {selector!r}")
        tag = m.group(1)
        if m.group(2) == ".":
            return tag, "class", m.group(3)
        if m.group(2) == "#":
            return tag, "id", m.group(3)
        return tag, None, None

    def _matches(self, tag, attrs) -> bool:
        if self.tag is not None and tag != self.tag.lower():
            return False
        if self.attr is None:
            return True
        got = dict(attrs).get(self.attr, "")
        if self.attr == "class":
            return self.value in (got or "").split()
        return got == self.value

    def handle_starttag(self, tag, attrs):
        if self.capturing:
            if tag in ("script", "style"):
                self._skip += 1
            self.depth += 1
        elif not self.done and self._matches(tag, attrs):
            self.capturing = True
            self.depth = 1

    def handle_endtag(self, tag):
        if self.capturing:
            if tag in ("script", "style") and self._skip:
                self._skip -= 1
            self.depth -= 1
            if self.depth <= 0:
                self.capturing = False
                self.done = True

    def handle_data(self, data):
        if self.capturing and not self._skip:
            self.parts.append(data)


def extract_html_body(html: str, selector: str = "body") -> str:
    """Extract the text of the first element matching ``selector``."""
    parser = _SelectorExtractor(selector)
    parser.feed(html)
    text = "".join(parser.parts)
    return re.sub(r"\n{3,}", "\n\n", text).strip()


def extract_xml_text(xml: str, tag: Optional[str] = None) -> str:
    """Concatenate text content of ``tag`` elements (or the whole tree)."""
    root = ElementTree.fromstring(xml)
    nodes = root.iter(tag) if tag else [root]
    return "\n".join(
        t.strip() for node in nodes for t in node.itertext() if t.strip()
    )


# --- Ingestion -------------------------------------------------------------

#: Registered fetchers: name -> callable(config) -> iterable of
#: (item_name, url, payload) tuples.  Tests register fixture-backed fetchers.
FETCHERS: dict = {}


def register_fetcher(name: str, fn) -> None:
    FETCHERS[name] = fn


def document_id(source: str, key: str) -> str:
    """Stable id: source name plus a short hash of the url or filename."""
    digest = hashlib.sha1(key.encode("utf-8")).hexdigest()[:12]
    return f"{source}-{digest}"


def _payload_to_text(payload: str, spec: SourceSpec) -> str:
    fmt = spec.config.get("format", "text")
    if fmt == "html":
        return extract_html_body(payload, spec.config.get("selector", "body"))
    if fmt == "xml":
        return extract_xml_text(payload, spec.config.get("tag"))
    return payload


def ingest_source(
    spec: SourceSpec,
    input_path,
    retrieved_at: str,
    topic: Optional[str] = None,
    errors: Optional[list] = None,
) -> list[Document]:
    """Turn one source's raw files into labeled documents.

    ``retrieved_at`` is injected by the caller (never the wall clock) so
    repeated ingestion of the same inputs is byte-identical.  Per-file read
    failures are appended to ``errors`` (as ``(path, message)``) and the
    remaining files are still ingested; empty files are skipped with a
    warning.  Files are processed in filename order.
    """
    if spec.kind == "fetcher":
        return _ingest_fetcher(spec, retrieved_at, topic)

    root = Path(input_path)
    if not root.exists():
        raise DataError(f"input path {root} does not exist")
    docs = []
    for path in sorted(p for p in root.iterdir() if p.is_file()):
        try:
            payload = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            log.error("failed to read %s: %s", path, exc)
            if errors is not None:
                errors.append((str(path), str(exc)))
            continue
        if not payload.strip():
            log.warning("skipping empty file %s", path)
            continue
        text = _payload_to_text(payload, spec)
        docs.append(
            Document(
                id=document_id(spec.name, path.name),
                label=spec.label,
                topic=(topic or spec.config.get("topic", "unspecified")),
                source=spec.name,
                raw_text=text,
                retrieved_at=retrieved_at,
            )
        )
    return docs


def _ingest_fetcher(spec: SourceSpec, retrieved_at: str, topic) -> list[Document]:
    try:
        fetch = FETCHERS[spec.config["fetcher"]]
    except KeyError:
        raise DataError(f"source {spec.name!r}: no registered fetcher")
    docs = []
    for item_name, url, payload in fetch(spec.config):
        text = _payload_to_text(payload, spec)
        docs.append(
            Document(
                id=document_id(spec.name, url or item_name),
                label=spec.label,
                topic=(topic or spec.config.get("topic", "unspecified")),
                source=spec.name,
                raw_text=text,
                retrieved_at=retrieved_at,
                url=url,
            )
        )
    docs.sort(key=lambda d: d.id)
    return docs


# --- Statistics ------------------------------------------------------------

def corpus_stats(m: Manifest) -> dict[ClassLabel, dict[str, float]]:
    """Per-class document count and mean character length.

    Lengths use ``clean_text`` when present, else ``raw_text``.
    """
    if not m.documents:
        raise DataError("corpus_stats: empty manifest")
    stats: dict[ClassLabel, dict[str, float]] = {}
    for label in ClassLabel:
        lens = [d.char_len for d in m.documents if d.label == label]
        if lens:
            stats[label] = {
                "count": len(lens),
                "mean_char_len": sum(lens) / len(lens),
            }
    return stats


# --- Persistence -----------------------------------------------------------

_DOC_FIELDS = {
    "id", "label", "topic", "source", "raw_text", "clean_text",
    "char_len", "retrieved_at", "url",
}


def write_manifest(m: Manifest, path) -> None:
    """Serialize as JSONL: one header record, then one record per document."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        header = {"version": m.version, "seed": m.seed}
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for d in m.documents:
            rec = {
                "id": d.id,
                "label": int(d.label),
                "topic": d.topic,
                "source": d.source,
                "raw_text": d.raw_text,
                "clean_text": d.clean_text,
                "char_len": d.char_len,
                "retrieved_at": d.retrieved_at,
                "url": d.url,
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def load_manifest(path) -> Manifest:
    """Load and validate a manifest written by :func:`write_manifest`."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ManifestSchemaError("empty manifest file")
    header = json.loads(lines[0])
    docs = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        rec = json.loads(line)
        rec_id = rec.get("id", f"<line {lineno}>")
        unknown = set(rec) - _DOC_FIELDS
        if unknown:
            raise ManifestSchemaError(
                f"record {rec_id!r}: unknown fields {sorted(unknown)}",
                record_id=rec_id, field=sorted(unknown)[0],
            )
        for required in ("id", "label", "topic", "source", "raw_text", "retrieved_at"):
            if rec.get(required) is None:
                raise ManifestSchemaError(
                    f"record {rec_id!r}: missing field {required!r}",
                    record_id=rec_id, field=required,
                )
        if rec["id"] in seen:
            raise ManifestSchemaError(
                f"duplicate id {rec['id']!r}", record_id=rec["id"], field="id"
            )
        seen.add(rec["id"])
        try:
            label = ClassLabel.from_code(rec["label"])
        except DataError as exc:
            raise ManifestSchemaError(
                f"record {rec_id!r}: invalid label: {exc}",
                record_id=rec_id, field="label",
            )
        doc = Document(
            id=rec["id"],
            label=label,
            topic=rec["topic"],
            source=rec["source"],
            raw_text=rec["raw_text"],
            clean_text=rec.get("clean_text"),
            retrieved_at=rec["retrieved_at"],
            url=rec.get("url"),
        )
        if rec.get("char_len") is not None and rec["char_len"] != doc.char_len:
            raise ManifestSchemaError(
                f"record {rec_id!r}: char_len {rec['char_len']} does not match "
                f"text length {doc.char_len}",
                record_id=rec_id, field="char_len",
            )
        docs.append(doc)
    return Manifest(
        documents=tuple(docs),
        version=str(header.get("version", MANIFEST_VERSION)),
        seed=int(header.get("seed", 0)),
    )
