"""Concept annotation of text fragments via the local lexicon linker.

Pipeline: longest-match mention linking -> prior-sum scoring -> optional
personalized-PageRank re-ranking over the candidate concept subgraph ->
top-k selection with deterministic tie-breaking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .fragments import Fragment
from .lexicon import Candidate, ConceptLexicon, canonical_surface

DEFAULT_TOP_K = 5
DEFAULT_DAMPING = 0.85
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200
DEFAULT_UBIQUITY_THRESHOLD = 0.8

_TOKEN_RE = re.compile(r"\w+")


@dataclass(frozen=True)
class Mention:
    """A linked occurrence of a lexicon surface form in a text."""

    surface: str  # raw text slice as it appears at char_offset
    char_offset: int
    candidates: tuple[Candidate, ...]


@dataclass(frozen=True)
class ConceptAnnotation:
    concept_id: str
    title: str
    url: str
    score: float
    rank: int


@dataclass(frozen=True)
class RerankResult:
    scores: dict[str, float]
    pagerank: dict[str, float]
    converged: bool


def link_mentions(text: str, lexicon: ConceptLexicon) -> list[Mention]:
    """Scan text left to right, case-insensitively, preferring longer matches.

    Matches start and end on word-token boundaries; once a mention is taken
    the scan resumes after it, so shorter overlapping matches are suppressed.
    """
    tokens = list(_TOKEN_RE.finditer(text))
    mentions: list[Mention] = []
    if not tokens or not lexicon.entries:
        return mentions
    i = 0
    n = len(tokens)
    while i < n:
        matched = False
        for k in range(min(lexicon.max_surface_tokens, n - i), 0, -1):
            start = tokens[i].start()
            end = tokens[i + k - 1].end()
            key = canonical_surface(text[start:end])
            cands = lexicon.entries.get(key)
            if cands:
                mentions.append(Mention(text[start:end], start, tuple(cands)))
                i += k
                matched = True
                break
        if not matched:
            i += 1
    return mentions


def score_concepts(mentions: list[Mention], lexicon: ConceptLexicon) -> dict[str, float]:
    """Sum candidate priors over mentions, L1-normalized over all candidates."""
    raw: dict[str, float] = {}
    for m in mentions:
        for cand in m.candidates:
            raw[cand.concept_id] = raw.get(cand.concept_id, 0.0) + cand.prior
    total = sum(raw.values())
    if total <= 0:
        return {}
    return {cid: v / total for cid, v in raw.items()}


def personalized_pagerank(
    teleport: dict[str, float],
    links: dict[str, frozenset[str]],
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[dict[str, float], bool]:
    """Power iteration on the subgraph induced by the teleport support.

    Dangling mass is redistributed along the teleport distribution, so the
    returned vector is stochastic. Returns (scores, converged).
    """
    nodes = sorted(teleport)
    if not nodes:
        raise ValueError("teleport distribution must be non-empty")
    t_total = sum(teleport.values())
    if t_total <= 0:
        raise ValueError("teleport distribution must have positive mass")
    t = {v: teleport[v] / t_total for v in nodes}
    node_set = set(nodes)
    out = {u: sorted(links.get(u, frozenset()) & node_set) for u in nodes}

    p = dict(t)
    converged = False
    for _ in range(max_iter):
        nxt = {v: 0.0 for v in nodes}
        dangling = 0.0
        for u in nodes:
            if out[u]:
                share = p[u] / len(out[u])
                for v in out[u]:
                    nxt[v] += share
            else:
                dangling += p[u]
        new_p = {v: (1 - damping) * t[v] + damping * (nxt[v] + dangling * t[v]) for v in nodes}
        delta = sum(abs(new_p[v] - p[v]) for v in nodes)
        p = new_p
        if delta < tol:
            converged = True
            break
    return p, converged


def pagerank_rerank(
    candidates: dict[str, float],
    links: dict[str, frozenset[str]],
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RerankResult:
    """Re-rank candidate scores by their personalized-PageRank salience.

    Final score is the elementwise product of PageRank and candidate score,
    re-normalized. Non-convergence is reported via the flag, not raised.
    """
    if not candidates:
        raise ValueError("candidates must be non-empty")
    pr, converged = personalized_pagerank(candidates, links, damping, tol, max_iter)
    product = {cid: pr[cid] * candidates[cid] for cid in candidates}
    total = sum(product.values())
    if total > 0:
        scores = {cid: v / total for cid, v in product.items()}
    else:
        c_total = sum(candidates.values())
        scores = {cid: v / c_total for cid, v in candidates.items()}
    return RerankResult(scores=scores, pagerank=pr, converged=converged)


def _to_annotations(scores: dict[str, float], lexicon: ConceptLexicon, top_k: int) -> list[ConceptAnnotation]:
    def sort_key(cid: str):
        title, _ = lexicon.concept_meta(cid)
        return (-scores[cid], title)

    chosen = sorted(scores, key=sort_key)[:top_k]
    out = []
    for rank, cid in enumerate(chosen, start=1):
        title, url = lexicon.concept_meta(cid)
        out.append(ConceptAnnotation(cid, title, url, scores[cid], rank))
    return out


def annotate_text(
    text: str,
    lexicon: ConceptLexicon,
    top_k: int = DEFAULT_TOP_K,
    use_pagerank: bool = True,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
) -> list[ConceptAnnotation]:
    """Full local annotation pipeline over a plain text."""
    mentions = link_mentions(text, lexicon)
    scores = score_concepts(mentions, lexicon)
    if not scores:
        return []
    if use_pagerank:
        scores = pagerank_rerank(scores, lexicon.links, damping=damping, tol=tol).scores
    return _to_annotations(scores, lexicon, top_k)


def annotate_fragment(
    frag: Fragment,
    lexicon: ConceptLexicon,
    top_k: int = DEFAULT_TOP_K,
    use_pagerank: bool = True,
) -> list[ConceptAnnotation]:
    return annotate_text(frag.text, lexicon, top_k=top_k, use_pagerank=use_pagerank)


def dedupe_video_keywords(
    per_fragment: list[list[ConceptAnnotation]],
    ubiquity_threshold: float = DEFAULT_UBIQUITY_THRESHOLD,
) -> tuple[list[list[ConceptAnnotation]], list[ConceptAnnotation]]:
    """Hoist concepts present in >= threshold of fragments to video-level tags.

    Remaining per-fragment annotations are re-ranked 1..n. Single-fragment
    videos are exempt (everything would trivially clear the threshold).
    """
    n = len(per_fragment)
    if n <= 1:
        return [list(anns) for anns in per_fragment], []

    presence: dict[str, int] = {}
    best: dict[str, ConceptAnnotation] = {}
    for anns in per_fragment:
        for a in anns:
            presence[a.concept_id] = presence.get(a.concept_id, 0) + 1
            if a.concept_id not in best or a.score > best[a.concept_id].score:
                best[a.concept_id] = a

    ubiquitous = {cid for cid, count in presence.items() if count / n >= ubiquity_threshold}
    if not ubiquitous:
        return [list(anns) for anns in per_fragment], []

    new_per_fragment = []
    for anns in per_fragment:
        kept = [a for a in anns if a.concept_id not in ubiquitous]
        new_per_fragment.append(
            [ConceptAnnotation(a.concept_id, a.title, a.url, a.score, rank) for rank, a in enumerate(kept, start=1)]
        )

    tags = sorted((best[cid] for cid in ubiquitous), key=lambda a: (-a.score, a.title))
    video_tags = [
        ConceptAnnotation(a.concept_id, a.title, a.url, a.score, rank) for rank, a in enumerate(tags, start=1)
    ]
    return new_per_fragment, video_tags
