// Browser bootstrap: wires the headless controller to a real page.
// Everything meaningful lives in the controller/renderers; this file only
// translates DOM events into gestures and re-renders after each change.

import { ApiClient } from './api';
import { SessionController } from './state';
import { renderPopup, renderResultsGrid, renderWorkspace } from './render';
import { PlayerMode } from './types';

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

export async function boot(root: HTMLElement): Promise<SessionController> {
  const api = new ApiClient(param('api', 'http://127.0.0.1:8571'));
  const mode = param('mode', 'cfb_on') as PlayerMode;
  const controller = new SessionController(
    {
      sessionId: param('session', `ui-${Date.now()}`),
      participantId: param('participant', 'anonymous'),
      taskId: param('task', 'freeform'),
      topic: param('topic', 'freeform'),
      mode,
    },
    (event) => api.postEvent(event),
    (conceptId) => api.getDefinition(conceptId),
  );

  const query = param('q', '');
  if (query) {
    const results = await api.search(query);
    controller.loadResults(
      results.map((r) => r.video),
      results.map((r) => r.highlight_levels),
    );
  } else {
    controller.loadResults(await api.listVideos());
  }
  controller.startTask();

  const grid = document.createElement('div');
  const popupHost = document.createElement('div');
  popupHost.className = 'popup-host';
  const workspaceHost = document.createElement('div');
  root.append(grid, popupHost, workspaceHost);

  const media = document.createElement('video');
  media.className = 'player-media';
  media.controls = false;
  root.append(media);

  const rerender = () => {
    grid.innerHTML = renderResultsGrid(controller.cards, (id) => controller.barOverlay(id), controller.mode);
    popupHost.innerHTML = controller.popup ? renderPopup(controller.popup, controller.definition) : '';
    workspaceHost.innerHTML = renderWorkspace(controller.workspace);
  };

  grid.addEventListener('mousemove', (e) => {
    const bar = (e.target as HTMLElement).closest<HTMLElement>('.fragment-bar');
    if (!bar) return;
    const rect = bar.getBoundingClientRect();
    const x = (e.clientX - rect.left) / Math.max(rect.width, 1);
    const videoId = bar.dataset.video!;
    if (controller.popup?.videoId === videoId) controller.hoverMove(x);
    else controller.hoverEnter(videoId, x, controller.screen);
    rerender();
  });
  grid.addEventListener('mouseleave', () => {
    controller.hoverLeave();
    rerender();
  });
  grid.addEventListener('click', (e) => {
    const target = e.target as HTMLElement;
    const keyword = target.closest<HTMLElement>('.keyword');
    if (keyword) {
      void controller.openDefinition(keyword.dataset.concept!).then(rerender);
      return;
    }
    const cell = target.closest<HTMLElement>('.bar-cell');
    const bar = target.closest<HTMLElement>('.fragment-bar');
    if (cell && bar) {
      controller.jumpToFragment(bar.dataset.video!, Number(cell.dataset.fragment));
      const video = controller.currentVideo;
      if (video) {
        media.src = video.media_url;
        media.currentTime = controller.playbackPosition;
        void media.play();
        controller.play();
      }
      rerender();
    }
  });
  workspaceHost.addEventListener('click', (e) => {
    const row = (e.target as HTMLElement).closest<HTMLElement>('.clip');
    if (row && (e.target as HTMLElement).classList.contains('remove')) {
      controller.removeSegment(row.dataset.video!, {
        start: Number(row.dataset.start),
        end: Number(row.dataset.end),
      });
      rerender();
    }
  });
  media.addEventListener('timeupdate', () => {
    if (controller.playing) controller.tick(media.currentTime - controller.playbackPosition);
  });
  window.addEventListener('beforeunload', () => controller.endTask());

  rerender();
  return controller;
}
