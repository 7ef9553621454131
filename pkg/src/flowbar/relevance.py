"""Query-dependent relevance over annotated fragments.

A query becomes a sparse concept vector via the local linker; a fragment's
relevance is the cosine between the query vector and its annotation vector.
Scores map to a small number of highlight intensity levels for the UI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .annotate import ConceptAnnotation, link_mentions, score_concepts
from .catalog import EnrichedVideo
from .lexicon import ConceptLexicon

DEFAULT_N_LEVELS = 4

# Sparse concept_id -> weight mapping; zero weights are never stored.
ConceptVector = dict[str, float]


def l2_normalize(weights: dict[str, float]) -> ConceptVector:
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm <= 0:
        return {}
    return {cid: w / norm for cid, w in weights.items() if w != 0}


def query_vector(query: str, lexicon: ConceptLexicon) -> ConceptVector:
    """Link the query text and L2-normalize the concept scores.

    A query with no lexicon hits yields the zero vector (empty dict).
    """
    scores = score_concepts(link_mentions(query, lexicon), lexicon)
    return l2_normalize(scores)


def fragment_relevance(qv: ConceptVector, annotations: list[ConceptAnnotation] | tuple) -> float:
    """Cosine similarity between the query and the fragment's annotations."""
    fv = l2_normalize({a.concept_id: a.score for a in annotations})
    if not qv or not fv:
        return 0.0
    return sum(w * fv.get(cid, 0.0) for cid, w in qv.items())


def highlight_levels(scores: list[float], n_levels: int = DEFAULT_N_LEVELS) -> list[int]:
    """Map relevance scores to integer shade levels 0..n_levels-1.

    Scores are scaled by the maximum of the list, then level =
    ceil(scaled * (n_levels - 1)); an all-zero input stays at level 0.
    """
    if n_levels < 2:
        raise ValueError(f"n_levels must be >= 2, got {n_levels}")
    top = max(scores, default=0.0)
    if top <= 0:
        return [0] * len(scores)
    return [math.ceil(s / top * (n_levels - 1)) for s in scores]


@dataclass(frozen=True)
class SearchResult:
    video: EnrichedVideo
    score: float
    fragment_scores: tuple[float, ...]


def search(query: str, catalog: list[EnrichedVideo], k: int, lexicon: ConceptLexicon) -> list[SearchResult]:
    """Rank videos by their best fragment's relevance to the query.

    Ties (including the all-zero query) fall back to video_id order. The
    per-fragment scores ride along so the caller can derive highlighting.
    """
    qv = query_vector(query, lexicon)
    results = []
    for video in catalog:
        frag_scores = tuple(fragment_relevance(qv, ef.annotations) for ef in video.fragments)
        results.append(SearchResult(video, max(frag_scores, default=0.0), frag_scores))
    results.sort(key=lambda r: (-r.score, r.video.video_id))
    return results[:k]
