export { ApiClient } from './api';
export { EventQueue, validateEvent } from './events';
export type { EventKind, EventTransport, InteractionEvent } from './events';
export {
  SessionController,
  formatTime,
  fragmentIndexAt,
  mergeSegments,
} from './state';
export type { BarOverlay, DefinitionState, PopupModel, SessionConfig, WorkspaceItem } from './state';
export {
  escapeHtml,
  renderDefinitionPane,
  renderFragmentBar,
  renderPopup,
  renderResultsGrid,
  renderWorkspace,
} from './render';
export type {
  ConceptAnnotation,
  EnrichedVideo,
  PlayerMode,
  ResultCard,
  ScreenName,
  SearchResult,
  Segment,
  VideoFragment,
} from './types';
