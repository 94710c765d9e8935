// Walkthrough state: a verbatim projection of the latest session response.
// No trick logic lives here; the deck, badges, and reveal are copied from
// the API so the screen always equals the checker's view of the session.

import type { PathRecordJson, PendingChoice, SessionState } from './api.js';

export interface Badge {
  label: number;
  p: boolean;
}

export interface WalkthroughView {
  sessionId: string | null;
  deck: string[];
  prompt: PendingChoice | null;
  badges: Badge[];
  reveal: 'match' | 'mismatch' | null;
  hiddenTaken: boolean; // spectator holds a face-down card
  hidden: string | null; // its face, known only after the reveal
  record: PathRecordJson | null;
  error: string | null;
}

export function initialView(): WalkthroughView {
  return {
    sessionId: null,
    deck: [],
    prompt: null,
    badges: [],
    reveal: null,
    hiddenTaken: false,
    hidden: null,
    record: null,
    error: null,
  };
}

export function applyState(state: SessionState): WalkthroughView {
  return {
    sessionId: state.session_id,
    deck: state.deck.length > 0 ? state.deck.split(' ') : [],
    prompt: state.pending,
    badges: state.checkpoints.map((c) => ({ label: c.label, p: c.p })),
    reveal: state.reveal,
    hiddenTaken: state.hidden_taken,
    hidden: state.record ? state.record.hidden : null,
    record: state.record,
    error: null,
  };
}

export function applyFailure(message: string): WalkthroughView {
  // connectivity problems leave no stale trick state behind
  return { ...initialView(), error: message };
}

export function recordJson(view: WalkthroughView): string {
  if (view.record === null) throw new Error('walkthrough not finished');
  return JSON.stringify(view.record, null, 2);
}
