// Thin typed client for the catalog/telemetry HTTP API.

import { InteractionEvent } from './events';
import { EnrichedVideo, SearchResult } from './types';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) throw new Error(`GET ${path} -> ${response.status}`);
    return (await response.json()) as T;
  }

  async listVideos(): Promise<EnrichedVideo[]> {
    const body = await this.getJson<{ videos: EnrichedVideo[] }>('/videos');
    return body.videos;
  }

  async getVideo(videoId: string): Promise<EnrichedVideo> {
    return this.getJson<EnrichedVideo>(`/videos/${encodeURIComponent(videoId)}`);
  }

  async search(query: string, limit = 50): Promise<SearchResult[]> {
    const q = encodeURIComponent(query);
    const body = await this.getJson<{ results: SearchResult[] }>(`/search?q=${q}&limit=${limit}`);
    return body.results;
  }

  /** null when the concept has no stored definition. */
  async getDefinition(conceptId: string): Promise<string | null> {
    const body = await this.getJson<{ definition: string | null }>(
      `/definitions/${encodeURIComponent(conceptId)}`,
    );
    return body.definition;
  }

  /** true when the event was acknowledged; never throws. */
  async postEvent(event: InteractionEvent): Promise<boolean> {
    try {
      const response = await this.fetchFn(`${this.baseUrl}/events`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(event),
      });
      return response.ok;
    } catch {
      return false;
    }
  }
}
