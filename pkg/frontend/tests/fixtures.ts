import { InteractionEvent } from '../src/events';
import { DefinitionFetcher, SessionController, SessionConfig } from '../src/state';
import { EnrichedVideo, PlayerMode } from '../src/types';

export function makeVideo(videoId: string, fragmentTimes: number[], title?: string): EnrichedVideo {
  // fragmentTimes are the tile boundaries: [0, t1, ..., duration]
  const fragments = [];
  for (let i = 0; i + 1 < fragmentTimes.length; i++) {
    fragments.push({
      index: i,
      char_start: i * 100,
      char_end: (i + 1) * 100,
      time_start: fragmentTimes[i],
      time_end: fragmentTimes[i + 1],
      text: `fragment ${i} of ${videoId}`,
      annotations: [
        {
          concept_id: `${videoId}_c${i}a`,
          title: `Concept ${i}A of ${videoId}`,
          url: `http://wiki/${videoId}_c${i}a`,
          score: 0.6,
          rank: 1,
        },
        {
          concept_id: `${videoId}_c${i}b`,
          title: `Concept ${i}B of ${videoId}`,
          url: `http://wiki/${videoId}_c${i}b`,
          score: 0.4,
          rank: 2,
        },
      ],
    });
  }
  const duration = fragmentTimes[fragmentTimes.length - 1];
  return {
    video_id: videoId,
    title: title ?? `Video ${videoId}`,
    description: '',
    duration,
    media_url: `http://media/${videoId}.mp4`,
    thumbnail_urls: fragments.map((_, i) => `http://thumbs/${videoId}/${i}.jpg`),
    video_tags: [],
    fragments,
  };
}

export interface Harness {
  controller: SessionController;
  posted: InteractionEvent[];
  clock: { now: number; advance(seconds: number): void };
  failNextPosts(n: number): void;
}

export function makeHarness(
  mode: PlayerMode,
  videos: EnrichedVideo[],
  options: {
    definitions?: Record<string, string | null>;
    definitionError?: boolean;
    config?: Partial<SessionConfig>;
    highlightLevels?: number[][];
  } = {},
): Harness {
  const posted: InteractionEvent[] = [];
  let failures = 0;
  const clock = {
    now: 1_700_000_000_000,
    advance(seconds: number) {
      this.now += Math.round(seconds * 1000);
    },
  };
  const transport = async (event: InteractionEvent) => {
    if (failures > 0) {
      failures -= 1;
      return false;
    }
    posted.push(event);
    return true;
  };
  const fetchDefinition: DefinitionFetcher = async (conceptId) => {
    if (options.definitionError) throw new Error('network down');
    return options.definitions?.[conceptId] ?? null;
  };
  const controller = new SessionController(
    {
      sessionId: 'ui-test',
      participantId: 'p1',
      taskId: 't1',
      topic: 'climate',
      mode,
      now: () => clock.now,
      ...options.config,
    },
    transport,
    fetchDefinition,
  );
  controller.loadResults(videos, options.highlightLevels);
  return {
    controller,
    posted,
    clock,
    failNextPosts: (n) => {
      failures = n;
    },
  };
}
