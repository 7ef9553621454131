"""Offline concept knowledge base: surface forms, priors, links, definitions.

The file format is line-delimited JSON with three record kinds::

    {"surface": "machine learning", "concepts": [{"id": ..., "title": ..., "url": ..., "prior": 0.9}]}
    {"links": {"concept_a": ["concept_b", ...]}}
    {"definitions": {"concept_a": "First paragraph ..."}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import LexiconError
from .transcripts import clean_text

_PRIOR_SUM_EPS = 1e-9


@dataclass(frozen=True)
class Candidate:
    """One concept a surface form may refer to, with its prior probability."""

    concept_id: str
    title: str
    url: str
    prior: float


@dataclass
class ConceptLexicon:
    # surface forms are stored lowercased with whitespace collapsed
    entries: dict[str, list[Candidate]] = field(default_factory=dict)
    links: dict[str, frozenset[str]] = field(default_factory=dict)
    definitions: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self._meta: dict[str, tuple[str, str]] = {}
        for cands in self.entries.values():
            for c in cands:
                self._meta.setdefault(c.concept_id, (c.title, c.url))
        self.max_surface_tokens = max((len(s.split()) for s in self.entries), default=0)

    def concept_meta(self, concept_id: str) -> tuple[str, str]:
        """(title, url) for a known concept; falls back to the bare id."""
        return self._meta.get(concept_id, (concept_id, ""))

    def known_concepts(self) -> set[str]:
        return set(self._meta) | set(self.definitions)


def canonical_surface(surface: str) -> str:
    return clean_text(surface).lower()


def _merge_candidates(existing: list[Candidate], new: list[Candidate]) -> list[Candidate]:
    by_id: dict[str, Candidate] = {c.concept_id: c for c in existing}
    for c in new:
        if c.concept_id in by_id:
            prev = by_id[c.concept_id]
            by_id[c.concept_id] = Candidate(c.concept_id, prev.title, prev.url, prev.prior + c.prior)
        else:
            by_id[c.concept_id] = c
    return list(by_id.values())


def load_lexicon(source: str | Path | bytes) -> ConceptLexicon:
    """Load and validate a lexicon from a file path or raw bytes.

    Duplicate surface records merge; a surface whose priors sum above 1 or a
    link referencing an unknown concept raises LexiconError with the line of
    the offending record.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")

    entries: dict[str, list[Candidate]] = {}
    links: dict[str, set[str]] = {}
    link_lines: dict[str, int] = {}
    definitions: dict[str, str] = {}

    for lineno, raw in enumerate(text.split("\n"), start=1):
        raw = raw.strip()
        if not raw:
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise LexiconError(f"invalid JSON: {exc.msg}", line=lineno) from exc
        if not isinstance(record, dict):
            raise LexiconError("record must be a JSON object", line=lineno)

        if "surface" in record:
            surface = canonical_surface(str(record["surface"]))
            if not surface:
                raise LexiconError("empty surface form", line=lineno)
            concepts = record.get("concepts")
            if not isinstance(concepts, list):
                raise LexiconError("surface record needs a 'concepts' list", line=lineno)
            cands = []
            for c in concepts:
                try:
                    prior = float(c["prior"])
                    cand = Candidate(str(c["id"]), str(c.get("title", c["id"])), str(c.get("url", "")), prior)
                except (KeyError, TypeError, ValueError) as exc:
                    raise LexiconError(f"bad concept record: {c!r}", line=lineno) from exc
                if not 0 < prior <= 1:
                    raise LexiconError(f"prior {prior} outside (0, 1] for {cand.concept_id!r}", line=lineno)
                cands.append(cand)
            merged = _merge_candidates(entries.get(surface, []), cands)
            total = sum(c.prior for c in merged)
            if total > 1 + _PRIOR_SUM_EPS:
                raise LexiconError(f"priors for surface {surface!r} sum to {total:.6g} > 1", line=lineno)
            entries[surface] = merged
        elif "links" in record:
            if not isinstance(record["links"], dict):
                raise LexiconError("'links' must map concept id to a list of ids", line=lineno)
            for cid, targets in record["links"].items():
                links.setdefault(cid, set()).update(str(t) for t in targets)
                link_lines.setdefault(cid, lineno)
        elif "definitions" in record:
            if not isinstance(record["definitions"], dict):
                raise LexiconError("'definitions' must map concept id to text", line=lineno)
            for cid, text_ in record["definitions"].items():
                definitions[str(cid)] = str(text_)
        else:
            raise LexiconError("unknown record kind (expected surface/links/definitions)", line=lineno)

    lexicon = ConceptLexicon(
        entries=entries,
        links={cid: frozenset(ts) for cid, ts in links.items()},
        definitions=definitions,
    )
    known = lexicon.known_concepts()
    for cid, targets in lexicon.links.items():
        for ref in {cid, *targets}:
            if ref not in known:
                raise LexiconError(f"link references unknown concept {ref!r}", line=link_lines.get(cid))
    return lexicon


def definition_of(concept_id: str, lexicon: ConceptLexicon) -> str | None:
    """First-paragraph definition, or None when unknown or empty."""
    text = lexicon.definitions.get(concept_id)
    return text if text else None
