// Payload types mirroring the catalog service's JSON schemas.

export interface ConceptAnnotation {
  concept_id: string;
  title: string;
  url: string;
  score: number;
  rank: number;
}

export interface VideoFragment {
  index: number;
  char_start: number;
  char_end: number;
  time_start: number;
  time_end: number;
  text: string;
  annotations: ConceptAnnotation[];
}

export interface EnrichedVideo {
  video_id: string;
  title: string;
  description: string;
  duration: number;
  media_url: string;
  thumbnail_urls: string[];
  video_tags: ConceptAnnotation[];
  fragments: VideoFragment[];
}

export interface SearchResult {
  video: EnrichedVideo;
  score: number;
  fragment_scores: number[];
  highlight_levels: number[];
}

export type PlayerMode = 'cfb_on' | 'cfb_off';
export type ScreenName = 'results' | 'player';

export interface Segment {
  start: number;
  end: number;
}

// A result card: the video in server order plus its shade levels (all zero
// when relevance shading is off or unavailable).
export interface ResultCard {
  video: EnrichedVideo;
  rank: number; // 1-based position in the results list
  highlightLevels: number[];
}
