// Pure HTML builders, kept separate from DOM wiring so they are testable
// without a browser.

import type { ExplorerState } from './explorer.js';
import { currentCheckpoint, replayDone } from './explorer.js';
import type { WalkthroughView } from './walkthrough.js';

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function tileHtml(face: string): string {
  return `<span class="tile tile-${escapeHtml(face)}">${escapeHtml(face)}</span>`;
}

export function deckHtml(deck: string[]): string {
  if (deck.length === 0) return '<em>no cards</em>';
  return deck.map(tileHtml).join('');
}

export function hiddenCardHtml(view: WalkthroughView): string {
  if (!view.hiddenTaken) return '';
  if (view.reveal !== null && view.hidden !== null) {
    return `<span class="holder">spectator's card:</span>${tileHtml(view.hidden)}`;
  }
  return '<span class="holder">spectator\'s card:</span>' +
    '<span class="tile tile-down">?</span>';
}

export function badgesHtml(view: WalkthroughView): string {
  return view.badges
    .map((b) => `<span class="badge badge-${b.p}">${b.label}:${b.p ? 'T' : 'F'}</span>`)
    .join('');
}

export function revealHtml(view: WalkthroughView): string {
  if (view.reveal === null) return '';
  const css = view.reveal === 'match' ? 'banner-match' : 'banner-mismatch';
  const text = view.reveal === 'match'
    ? 'MATCH - the last card is the hidden card\'s partner'
    : 'MISMATCH - the routine failed on this path';
  return `<div class="banner ${css}">${text}</div>`;
}

export function promptHtml(view: WalkthroughView): string {
  if (view.prompt === null) return '';
  const buttons = view.prompt.domain
    .map((v) => `<button data-value="${v}">${v}</button>`)
    .join(' ');
  return `<p>${escapeHtml(view.prompt.prompt)}</p><div class="choices">${buttons}</div>`;
}

export function errorHtml(message: string | null): string {
  if (!message) return '';
  return `<div class="banner banner-error">${escapeHtml(message)} ` +
    '<button id="retry">retry</button></div>';
}

export function explorerHtml(state: ExplorerState): string {
  if (state.error) {
    return `<div class="banner banner-error">${escapeHtml(state.error)}</div>`;
  }
  if (state.verdict === null) return '<em>enter a formula above</em>';
  const head =
    `<p><code>${escapeHtml(state.formula)}</code> is ` +
    `<strong>${state.verdict}</strong> over m=${state.m} paths.</p>`;
  if (state.kind === null) {
    return `${head}<p>No single branch decides this verdict.</p>`;
  }
  const binding = Object.entries(state.binding)
    .map(([k, v]) => `${escapeHtml(k)}=${v}`)
    .join(' ');
  const rows = state.checkpoints
    .map((c, i) => {
      const seen = i <= state.step;
      const mark = i === state.markedIndex ? ' row-marked' : '';
      const body = seen
        ? `deck ${escapeHtml(c.deck)} &nbsp; p=${c.p ? 'T' : 'F'}`
        : '&hellip;';
      return `<tr class="row-${seen ? 'seen' : 'todo'}${mark}">` +
        `<td>${c.label}</td><td>${body}</td></tr>`;
    })
    .join('');
  const current = currentCheckpoint(state);
  const status = replayDone(state) && current !== null
    ? `<p>replay ended at checkpoint ${current.label}</p>`
    : '<p>step through the evidence branch</p>';
  return `${head}<p>${state.kind} path: ${binding}</p>` +
    `<table>${rows}</table>${status}`;
}
