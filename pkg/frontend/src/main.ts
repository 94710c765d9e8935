// DOM wiring. One request in flight per session: inputs are disabled while
// a choose call is pending, and all state shown is the last server response.

import { ApiError, checkFormula, choose, createSession } from './api.js';
import {
  initialExplorer,
  loadError,
  loadResult,
  replayDone,
  stepBack,
  stepForward,
  type ExplorerState,
} from './explorer.js';
import {
  badgesHtml,
  deckHtml,
  errorHtml,
  explorerHtml,
  hiddenCardHtml,
  promptHtml,
  revealHtml,
} from './render.js';
import {
  applyFailure,
  applyState,
  initialView,
  type WalkthroughView,
} from './walkthrough.js';

let view: WalkthroughView = initialView();
let explorer: ExplorerState = initialExplorer();
let busy = false;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function renderWalkthrough(): void {
  el('deck').innerHTML = deckHtml(view.deck);
  el('hidden-card').innerHTML = hiddenCardHtml(view);
  el('badges').innerHTML = badgesHtml(view);
  el('banner').innerHTML = revealHtml(view) + errorHtml(view.error);
  el('prompt').innerHTML = busy ? '<em>&hellip;</em>' : promptHtml(view);
  for (const button of el('prompt').querySelectorAll('button')) {
    button.addEventListener('click', () => {
      const value = Number(button.dataset.value);
      void submitChoice(value);
    });
  }
  const retry = document.getElementById('retry');
  if (retry) retry.addEventListener('click', () => void start());
}

function renderExplorer(): void {
  el('explorer-result').innerHTML = explorerHtml(explorer);
  const forward = el('step-forward') as HTMLButtonElement;
  const back = el('step-back') as HTMLButtonElement;
  const replayable = explorer.kind !== null;
  forward.disabled = !replayable || replayDone(explorer);
  back.disabled = !replayable || explorer.step < 0;
}

async function start(): Promise<void> {
  view = initialView();
  renderWalkthrough();
  try {
    view = applyState(await createSession());
  } catch (error) {
    view = applyFailure(
      error instanceof ApiError ? error.message : 'cannot reach the session service',
    );
  }
  renderWalkthrough();
}

async function submitChoice(value: number): Promise<void> {
  if (busy || view.sessionId === null || view.prompt === null) return;
  if (!view.prompt.domain.includes(value)) return; // blocked client-side too
  busy = true;
  renderWalkthrough();
  try {
    view = applyState(await choose(view.sessionId, value));
  } catch (error) {
    if (error instanceof ApiError && error.status === 422) {
      view = { ...view, error: error.message };
    } else {
      view = applyFailure(
        error instanceof ApiError ? error.message : 'request failed',
      );
    }
  } finally {
    busy = false;
    renderWalkthrough();
  }
}

async function submitFormula(): Promise<void> {
  const input = el('formula') as HTMLInputElement;
  const formula = input.value.trim();
  if (!formula) return;
  try {
    explorer = loadResult(await checkFormula(formula));
  } catch (error) {
    explorer = loadError(
      formula,
      error instanceof ApiError ? error.message : 'request failed',
    );
  }
  renderExplorer();
}

export function boot(): void {
  el('restart').addEventListener('click', () => void start());
  el('check-form').addEventListener('submit', (event) => {
    event.preventDefault();
    void submitFormula();
  });
  el('step-forward').addEventListener('click', () => {
    explorer = stepForward(explorer);
    renderExplorer();
  });
  el('step-back').addEventListener('click', () => {
    explorer = stepBack(explorer);
    renderExplorer();
  });
  renderExplorer();
  void start();
}

boot();
