"""Partition a transcript into annotation-sized fragments.

Fragments accumulate whole spans greedily until the character target is
reached, so boundaries never split a span. Character offsets index into
``Transcript.full_text`` (the plain concatenation of span texts).
"""

from __future__ import annotations

from dataclasses import dataclass

from .transcripts import Transcript

DEFAULT_TARGET_CHARS = 5000

# A trailing fragment shorter than target/4 gets folded into its predecessor
# so the last popup is never near-empty.
TAIL_MERGE_DIVISOR = 4


@dataclass(frozen=True)
class Fragment:
    index: int
    char_start: int
    char_end: int
    time_start: float
    time_end: float
    text: str

    @property
    def n_chars(self) -> int:
        return self.char_end - self.char_start


def fragment(transcript: Transcript, target_chars: int = DEFAULT_TARGET_CHARS) -> list[Fragment]:
    """Split a normalized transcript into fragments of ~target_chars.

    Whole spans are added while the running fragment is shorter than
    target_chars; the fragment closes once it reaches or exceeds the target.
    A final fragment shorter than target_chars/4 is merged into its
    predecessor. Empty transcript yields an empty list.
    """
    if target_chars < 1:
        raise ValueError(f"target_chars must be >= 1, got {target_chars}")
    spans = transcript.spans
    if not spans:
        return []

    # Group spans greedily by accumulated character count.
    groups: list[list[int]] = []
    current: list[int] = []
    length = 0
    for i, span in enumerate(spans):
        current.append(i)
        length += len(span.text)
        if length >= target_chars:
            groups.append(current)
            current = []
            length = 0
    if current:
        groups.append(current)

    if len(groups) > 1 and sum(len(spans[i].text) for i in groups[-1]) < target_chars / TAIL_MERGE_DIVISOR:
        tail = groups.pop()
        groups[-1].extend(tail)

    # Character offsets tile full_text; time boundaries tile
    # [first span start, last span end] by cutting at each group's first span.
    offsets = [0]
    for span in spans:
        offsets.append(offsets[-1] + len(span.text))

    fragments = []
    for gi, group in enumerate(groups):
        char_start = offsets[group[0]]
        char_end = offsets[group[-1] + 1]
        time_start = spans[0].start if gi == 0 else fragments[-1].time_end
        if gi + 1 < len(groups):
            time_end = spans[groups[gi + 1][0]].start
        else:
            time_end = spans[-1].end
        fragments.append(
            Fragment(
                index=gi,
                char_start=char_start,
                char_end=char_end,
                time_start=time_start,
                time_end=time_end,
                text="".join(spans[i].text for i in group),
            )
        )
    return fragments


def time_of_char(transcript: Transcript, offset: int) -> float:
    """Map a character offset in full_text to a timestamp.

    Returns the containing span's start time plus linear interpolation by
    character share within the span. ``offset == len(full_text)`` maps to the
    last span's end.
    """
    spans = transcript.spans
    total = sum(len(s.text) for s in spans)
    if offset < 0 or offset > total:
        raise ValueError(f"offset {offset} out of range [0, {total}]")
    if not spans:
        return 0.0
    if offset == total:
        return spans[-1].end
    cum = 0
    for span in spans:
        n = len(span.text)
        if offset < cum + n:
            return span.start + (offset - cum) / n * (span.end - span.start)
        cum += n
    return spans[-1].end
