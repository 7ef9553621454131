// Pure HTML renderers over the controller state. No DOM access here, so the
// whole surface is testable headlessly; main.ts mounts the strings.

import { BarOverlay, DefinitionState, PopupModel, WorkspaceItem } from './state';
import { ResultCard, EnrichedVideo, PlayerMode, Segment } from './types';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function pct(fraction: number): string {
  return `${(100 * fraction).toFixed(2)}%`;
}

/** The time-series bar: one cell per fragment plus overlay marks. */
export function renderFragmentBar(
  video: EnrichedVideo,
  highlightLevels: number[],
  overlay: BarOverlay,
  mode: PlayerMode,
): string {
  const duration = video.duration || 1;
  const cells = video.fragments
    .map((fragment, i) => {
      const width = pct((fragment.time_end - fragment.time_start) / duration);
      const level = mode === 'cfb_on' ? (highlightLevels[i] ?? 0) : 0;
      return `<span class="bar-cell shade-${level}" data-fragment="${i}" style="width:${width}"></span>`;
    })
    .join('');

  const marks = (overlay.kind === 'watched' ? overlay.intervals : overlay.segments)
    .map((seg: Segment) => {
      const cls = overlay.kind === 'watched' ? 'watched-mark' : 'selected-mark';
      const left = pct(seg.start / duration);
      const width = pct((seg.end - seg.start) / duration);
      return `<span class="${cls}" style="left:${left};width:${width}"></span>`;
    })
    .join('');

  return `<div class="fragment-bar mode-${mode}" data-video="${escapeHtml(video.video_id)}">${cells}${marks}</div>`;
}

/** Results grid in server order; each card carries its fragment bar. */
export function renderResultsGrid(
  cards: ResultCard[],
  overlayFor: (videoId: string) => BarOverlay,
  mode: PlayerMode,
): string {
  const items = cards
    .map((card) => {
      const v = card.video;
      const bar = renderFragmentBar(v, card.highlightLevels, overlayFor(v.video_id), mode);
      return (
        `<article class="video-card" data-video="${escapeHtml(v.video_id)}" data-rank="${card.rank}">` +
        `<img class="thumb" src="${escapeHtml(v.thumbnail_urls[0] ?? '')}" alt="">` +
        `<h3>${escapeHtml(v.title)}</h3>` +
        bar +
        `</article>`
      );
    })
    .join('');
  return `<section class="results-grid">${items}</section>`;
}

/**
 * Hover popup. cfb_on lists the fragment's keywords, each with a cascading
 * menu affordance for definitions; cfb_off shows the time position and, on
 * the results screen only, the frame thumbnail.
 */
export function renderPopup(popup: PopupModel, definition: DefinitionState | null): string {
  if (popup.keywords !== null) {
    const items = popup.keywords
      .map(
        (a) =>
          `<li class="keyword" data-concept="${escapeHtml(a.concept_id)}">` +
          `${escapeHtml(a.title)}<span class="menu-arrow">▸</span></li>`,
      )
      .join('');
    const menu = definition ? renderDefinitionPane(definition) : '';
    return `<div class="popup popup-keywords" data-fragment="${popup.fragmentIndex}"><ul>${items}</ul>${menu}</div>`;
  }
  const thumb = popup.thumbnailUrl
    ? `<img class="frame-thumb" src="${escapeHtml(popup.thumbnailUrl)}" alt="">`
    : '';
  return (
    `<div class="popup popup-time" data-fragment="${popup.fragmentIndex}">` +
    `${thumb}<span class="time-label">${popup.timeLabel}</span></div>`
  );
}

export function renderDefinitionPane(definition: DefinitionState): string {
  if (definition.status === 'loading') {
    return `<div class="definition-pane loading">Loading definition…</div>`;
  }
  if (definition.status === 'error') {
    return `<div class="definition-pane error">Could not load definition</div>`;
  }
  const text = definition.text ?? 'No definition available';
  return `<div class="definition-pane">${escapeHtml(text)}</div>`;
}

export function renderWorkspace(items: WorkspaceItem[]): string {
  if (items.length === 0) return `<aside class="workspace empty">No clips selected yet</aside>`;
  const rows = items
    .map(
      (item) =>
        `<li class="clip" data-video="${escapeHtml(item.videoId)}" ` +
        `data-start="${item.segment.start}" data-end="${item.segment.end}">` +
        `${escapeHtml(item.title)} <span class="range">[${item.segment.start.toFixed(0)}s–` +
        `${item.segment.end.toFixed(0)}s]</span><button class="remove">remove</button></li>`,
    )
    .join('');
  return `<aside class="workspace"><ul>${rows}</ul></aside>`;
}
