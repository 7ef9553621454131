// Headless view-state controller: every user gesture updates state and emits
// exactly one schema-valid interaction event. Rendering reads from here and
// never mutates.

import { EventKind, EventQueue, EventTransport, InteractionEvent } from './events';
import { ConceptAnnotation, EnrichedVideo, PlayerMode, ResultCard, ScreenName, Segment } from './types';

export interface SessionConfig {
  sessionId: string;
  participantId: string;
  taskId: string;
  topic: string;
  mode: PlayerMode;
  /** Study parity: relevance shading can be forced off regardless of server scores. */
  shadingEnabled?: boolean;
  now?: () => number;
}

export interface PopupModel {
  videoId: string;
  fragmentIndex: number;
  timeLabel: string;
  keywords: ConceptAnnotation[] | null; // cfb_on only
  thumbnailUrl: string | null; // cfb_off on the results screen only
}

export type DefinitionState =
  | { status: 'loading'; conceptId: string }
  | { status: 'loaded'; conceptId: string; text: string | null }
  | { status: 'error'; conceptId: string; message: string };

export interface WorkspaceItem {
  videoId: string;
  title: string;
  segment: Segment;
}

export type BarOverlay =
  | { kind: 'watched'; intervals: Segment[] } // red, cfb_off
  | { kind: 'selected'; segments: Segment[] }; // blue, cfb_on

export type DefinitionFetcher = (conceptId: string) => Promise<string | null>;

export function formatTime(seconds: number): string {
  const s = Math.max(0, Math.round(seconds));
  const m = Math.floor(s / 60);
  return `${m}:${String(s % 60).padStart(2, '0')}`;
}

export function mergeSegments(segments: Segment[]): Segment[] {
  const sorted = [...segments].sort((a, b) => a.start - b.start);
  const out: Segment[] = [];
  for (const seg of sorted) {
    const last = out[out.length - 1];
    if (last && seg.start <= last.end) {
      last.end = Math.max(last.end, seg.end);
    } else {
      out.push({ ...seg });
    }
  }
  return out;
}

/** Inverse of the fragment time tiling: which fragment covers `time`. */
export function fragmentIndexAt(video: EnrichedVideo, time: number): number {
  const fragments = video.fragments;
  if (fragments.length === 0) return 0;
  for (let i = 0; i < fragments.length; i++) {
    if (time < fragments[i].time_end) return i;
  }
  return fragments.length - 1;
}

export class SessionController {
  readonly mode: PlayerMode;
  screen: ScreenName = 'results';
  cards: ResultCard[] = [];

  currentVideo: EnrichedVideo | null = null;
  currentRank = 0;
  playbackPosition = 0;
  playing = false;

  popup: PopupModel | null = null; // at most one open
  definition: DefinitionState | null = null; // cascading menu inside the popup
  workspace: WorkspaceItem[] = [];
  notice: string | null = null;

  private watched = new Map<string, Segment[]>();
  private playLegStart: number | null = null;
  private hoverKey: string | null = null;
  private definitionInFlight = false;
  private queue: EventQueue;
  private now: () => number;
  private eventCounter = 0;
  private taskStarted = false;
  private shadingEnabled: boolean;

  constructor(
    private config: SessionConfig,
    transport: EventTransport,
    private fetchDefinition: DefinitionFetcher,
  ) {
    this.mode = config.mode;
    this.shadingEnabled = config.shadingEnabled ?? true;
    this.now = config.now ?? (() => Date.now());
    this.queue = new EventQueue(transport);
  }

  /** Results arrive in server order; ranks are their 1-based positions. */
  loadResults(videos: EnrichedVideo[], highlightLevels?: number[][]): void {
    this.cards = videos.map((video, i) => ({
      video,
      rank: i + 1,
      highlightLevels:
        this.mode === 'cfb_on' && this.shadingEnabled && highlightLevels
          ? highlightLevels[i]
          : video.fragments.map(() => 0),
    }));
  }

  startTask(): void {
    if (this.taskStarted) return;
    this.taskStarted = true;
    this.emit('task_start', {});
  }

  endTask(): void {
    if (this.popup) this.hoverLeave();
    if (this.playing && this.currentVideo) this.pause();
    this.emit('task_end', {});
  }

  // -- hover / popup ---------------------------------------------------

  hoverEnter(videoId: string, xFraction: number, screen: ScreenName): void {
    if (this.popup) this.hoverLeave(); // single-popup invariant
    const card = this.cardOf(videoId);
    if (!card) return;
    this.hoverKey = `${videoId}:${screen}`;
    this.popup = this.popupFor(card.video, xFraction, screen);
    this.emit('hover_start', { video_id: videoId, video_rank: card.rank, screen });
  }

  hoverMove(xFraction: number): void {
    if (!this.popup || !this.hoverKey) return;
    const [videoId, screen] = this.hoverKey.split(':') as [string, ScreenName];
    const card = this.cardOf(videoId);
    if (card) this.popup = this.popupFor(card.video, xFraction, screen);
  }

  hoverLeave(): void {
    if (!this.popup || !this.hoverKey) return;
    const [videoId, screen] = this.hoverKey.split(':') as [string, ScreenName];
    const card = this.cardOf(videoId);
    this.popup = null;
    this.definition = null; // closing the popup closes the cascading menu
    this.definitionInFlight = false;
    this.hoverKey = null;
    this.emit('hover_end', { video_id: videoId, video_rank: card?.rank, screen });
  }

  private popupFor(video: EnrichedVideo, xFraction: number, screen: ScreenName): PopupModel {
    const clamped = Math.min(Math.max(xFraction, 0), 1);
    const time = clamped * video.duration;
    const index = fragmentIndexAt(video, time);
    const showKeywords = this.mode === 'cfb_on';
    const showThumbnail = this.mode === 'cfb_off' && screen === 'results';
    return {
      videoId: video.video_id,
      fragmentIndex: index,
      timeLabel: formatTime(time),
      keywords: showKeywords ? (video.fragments[index]?.annotations ?? []) : null,
      thumbnailUrl: showThumbnail ? (video.thumbnail_urls[index] ?? null) : null,
    };
  }

  // -- cascading definition menu ----------------------------------------

  async openDefinition(conceptId: string): Promise<void> {
    if (!this.popup || this.mode !== 'cfb_on') return;
    if (this.definitionInFlight) return; // one in-flight fetch per menu
    this.definitionInFlight = true;
    this.definition = { status: 'loading', conceptId };
    try {
      const text = await this.fetchDefinition(conceptId);
      if (this.definition?.conceptId === conceptId) {
        this.definition = { status: 'loaded', conceptId, text };
      }
    } catch (err) {
      if (this.definition?.conceptId === conceptId) {
        this.definition = { status: 'error', conceptId, message: String(err) };
      }
    } finally {
      this.definitionInFlight = false;
    }
  }

  // -- player ------------------------------------------------------------

  /** Click on a fragment: open the pop-up player there, or seek if open. */
  jumpToFragment(videoId: string, fragmentIndex = 0): void {
    const card = this.cardOf(videoId);
    if (!card) return;
    const fragment = card.video.fragments[fragmentIndex];
    const target = fragment ? fragment.time_start : 0;
    if (this.currentVideo?.video_id === videoId) {
      this.seekTo(target);
      return;
    }
    if (this.currentVideo) this.closePlayer();
    this.currentVideo = card.video;
    this.currentRank = card.rank;
    this.screen = 'player';
    this.playbackPosition = target;
    this.emit('open_video', { video_id: videoId, video_rank: card.rank, screen: 'results' });
  }

  play(): void {
    if (!this.currentVideo || this.playing) return;
    this.playing = true;
    this.playLegStart = this.playbackPosition;
    this.emit('play', { video_id: this.currentVideo.video_id, position: this.playbackPosition });
  }

  pause(): void {
    if (!this.currentVideo || !this.playing) return;
    this.closePlayLeg();
    this.playing = false;
    this.emit('pause', { video_id: this.currentVideo.video_id, position: this.playbackPosition });
  }

  seekTo(position: number): void {
    if (!this.currentVideo) return;
    if (this.playing) this.closePlayLeg();
    this.playbackPosition = Math.min(Math.max(position, 0), this.currentVideo.duration);
    if (this.playing) this.playLegStart = this.playbackPosition;
    this.emit('seek', { video_id: this.currentVideo.video_id, position: this.playbackPosition });
  }

  /** Advance playback like the media element's timeupdate would. */
  tick(seconds: number): void {
    if (!this.playing || !this.currentVideo) return;
    this.playbackPosition = Math.min(this.playbackPosition + seconds, this.currentVideo.duration);
  }

  closePlayer(): void {
    if (!this.currentVideo) return;
    if (this.popup) this.hoverLeave();
    if (this.playing) {
      this.closePlayLeg();
      this.playing = false;
    }
    const videoId = this.currentVideo.video_id;
    this.currentVideo = null;
    this.screen = 'results';
    this.emit('close_video', { video_id: videoId, screen: 'player' });
  }

  private closePlayLeg(): void {
    if (this.playLegStart === null || !this.currentVideo) return;
    if (this.playbackPosition > this.playLegStart) {
      const intervals = this.watched.get(this.currentVideo.video_id) ?? [];
      intervals.push({ start: this.playLegStart, end: this.playbackPosition });
      this.watched.set(this.currentVideo.video_id, intervals);
    }
    this.playLegStart = null;
  }

  // -- workspace ---------------------------------------------------------

  selectSegment(segment: Segment): void {
    if (!this.currentVideo) return;
    const videoId = this.currentVideo.video_id;
    const duplicate = this.workspace.some(
      (item) => item.videoId === videoId && item.segment.start === segment.start && item.segment.end === segment.end,
    );
    if (duplicate) {
      this.notice = 'Segment already in workspace';
      return;
    }
    this.notice = null;
    this.workspace.push({ videoId, title: this.currentVideo.title, segment: { ...segment } });
    this.emit('select_segment', { video_id: videoId, segment: [segment.start, segment.end] });
  }

  removeSegment(videoId: string, segment: Segment): void {
    const index = this.workspace.findIndex(
      (item) => item.videoId === videoId && item.segment.start === segment.start && item.segment.end === segment.end,
    );
    if (index < 0) {
      this.notice = 'Segment not in workspace';
      return;
    }
    this.notice = null;
    this.workspace.splice(index, 1);
    this.emit('remove_segment', { video_id: videoId, segment: [segment.start, segment.end] });
  }

  // -- bar overlays --------------------------------------------------------

  /** cfb_off paints watched intervals red; cfb_on paints selections blue. */
  barOverlay(videoId: string): BarOverlay {
    if (this.mode === 'cfb_off') {
      let intervals = mergeSegments(this.watched.get(videoId) ?? []);
      // include the in-progress leg so the overlay tracks live playback
      if (this.playing && this.currentVideo?.video_id === videoId && this.playLegStart !== null) {
        intervals = mergeSegments([...intervals, { start: this.playLegStart, end: this.playbackPosition }]);
      }
      return { kind: 'watched', intervals };
    }
    return {
      kind: 'selected',
      segments: this.workspace.filter((item) => item.videoId === videoId).map((item) => item.segment),
    };
  }

  watchedIntervals(videoId: string): Segment[] {
    return mergeSegments(this.watched.get(videoId) ?? []);
  }

  // -- plumbing ------------------------------------------------------------

  private cardOf(videoId: string): ResultCard | undefined {
    return this.cards.find((c) => c.video.video_id === videoId);
  }

  get pendingEvents(): number {
    return this.queue.pendingCount;
  }

  flushEvents(): Promise<void> {
    return this.queue.flush();
  }

  /** Await full delivery of the emitted events (tests, page unload). */
  settleEvents(): Promise<void> {
    return this.queue.settle();
  }

  private emit(kind: EventKind, extra: Partial<InteractionEvent>): void {
    this.eventCounter += 1;
    const event: InteractionEvent = {
      event_id: `${this.config.sessionId}-${String(this.eventCounter).padStart(4, '0')}`,
      session_id: this.config.sessionId,
      participant_id: this.config.participantId,
      task_id: this.config.taskId,
      condition: this.mode,
      topic: this.config.topic,
      kind,
      screen: this.screen,
      wall_time: this.now(),
      ...extra,
    };
    this.queue.enqueue(event);
  }
}
