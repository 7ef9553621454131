// Interaction event emission: schema mirror of the backend validator plus a
// fire-and-forget delivery queue with retry, idempotent on event_id.

import { ScreenName } from './types';

export type EventKind =
  | 'task_start'
  | 'task_end'
  | 'open_video'
  | 'close_video'
  | 'play'
  | 'pause'
  | 'seek'
  | 'hover_start'
  | 'hover_end'
  | 'select_segment'
  | 'remove_segment';

export interface InteractionEvent {
  event_id: string;
  session_id: string;
  participant_id: string;
  task_id: string;
  condition: 'cfb_on' | 'cfb_off';
  topic: string;
  kind: EventKind;
  screen: ScreenName;
  wall_time: number; // ms epoch
  video_id?: string;
  video_rank?: number;
  position?: number;
  segment?: [number, number];
}

const REQUIRED_BY_KIND: Record<EventKind, (keyof InteractionEvent)[]> = {
  task_start: [],
  task_end: [],
  open_video: ['video_id', 'video_rank'],
  close_video: ['video_id'],
  play: ['video_id', 'position'],
  pause: ['video_id', 'position'],
  seek: ['video_id', 'position'],
  hover_start: ['video_id'],
  hover_end: ['video_id'],
  select_segment: ['video_id', 'segment'],
  remove_segment: ['video_id', 'segment'],
};

const BASE_FIELDS: (keyof InteractionEvent)[] = [
  'event_id',
  'session_id',
  'participant_id',
  'task_id',
  'condition',
  'topic',
  'kind',
  'screen',
  'wall_time',
];

/** Returns the first schema problem, or null when the event is valid. */
export function validateEvent(event: InteractionEvent): string | null {
  for (const field of BASE_FIELDS) {
    const value = event[field];
    if (value === undefined || value === null || value === '') {
      return `missing field ${field}`;
    }
  }
  if (!(event.kind in REQUIRED_BY_KIND)) return `unknown kind ${event.kind}`;
  if (event.condition !== 'cfb_on' && event.condition !== 'cfb_off') {
    return `bad condition ${event.condition}`;
  }
  if (event.screen !== 'results' && event.screen !== 'player') {
    return `bad screen ${event.screen}`;
  }
  if (event.wall_time < 0) return 'negative wall_time';
  for (const field of REQUIRED_BY_KIND[event.kind]) {
    if (event[field] === undefined || event[field] === null) {
      return `kind ${event.kind} requires field ${field}`;
    }
  }
  if (event.segment !== undefined) {
    const [start, end] = event.segment;
    if (!(end > start && start >= 0)) return 'segment must satisfy 0 <= start < end';
  }
  if (event.position !== undefined && event.position < 0) return 'negative position';
  if (event.video_rank !== undefined && event.video_rank < 1) return 'video_rank must be >= 1';
  return null;
}

export type EventTransport = (event: InteractionEvent) => Promise<boolean>;

/**
 * Fire-and-forget outbox. Invalid events are dropped loudly (console), valid
 * ones are retried until the transport accepts them; duplicates of an
 * event_id already pending or delivered are ignored, matching the
 * idempotent append on the server side.
 */
export class EventQueue {
  private pending: InteractionEvent[] = [];
  private known = new Set<string>();
  private draining = false;

  constructor(
    private transport: EventTransport,
    private maxAttempts = 5,
  ) {}

  get pendingCount(): number {
    return this.pending.length;
  }

  enqueue(event: InteractionEvent): void {
    const problem = validateEvent(event);
    if (problem) {
      console.warn('[flowbar] dropping invalid event:', problem, event);
      return;
    }
    if (this.known.has(event.event_id)) return;
    this.known.add(event.event_id);
    this.pending.push(event);
    void this.drain();
  }

  /** One delivery pass over the backlog; failures stay queued. */
  async flush(): Promise<void> {
    const batch = this.pending;
    this.pending = [];
    for (const event of batch) {
      let delivered = false;
      try {
        delivered = await this.transport(event);
      } catch {
        delivered = false;
      }
      if (!delivered) this.pending.push(event);
    }
  }

  /** Wait until the backlog drains (or the tick budget runs out). */
  async settle(maxTicks = 100): Promise<void> {
    for (let tick = 0; tick < maxTicks; tick++) {
      if (this.pending.length === 0 && !this.draining) return;
      await new Promise((resolve) => setTimeout(resolve, 0));
      if (this.pending.length > 0 && !this.draining) await this.flush();
    }
  }

  private async drain(): Promise<void> {
    if (this.draining) return;
    this.draining = true;
    try {
      for (let attempt = 0; attempt < this.maxAttempts && this.pending.length > 0; attempt++) {
        await this.flush();
      }
    } finally {
      this.draining = false;
    }
  }
}
