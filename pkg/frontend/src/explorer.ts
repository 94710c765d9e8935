// Verdict explorer: submit a formula, then replay its evidence branch one
// checkpoint at a time. The replay ends at the decisive checkpoint when the
// service marked one (a counterexample's first violation, a witness's
// earliest hit), otherwise at the end of the branch.

import type { CheckpointJson, CheckResponse } from './api.js';

export interface ExplorerState {
  formula: string;
  verdict: boolean | null;
  m: number | null;
  kind: 'witness' | 'counterexample' | null;
  checkpoints: CheckpointJson[];
  binding: Record<string, number>;
  markedIndex: number | null;
  step: number; // index into checkpoints; -1 before the replay starts
  error: string | null;
}

export function initialExplorer(): ExplorerState {
  return {
    formula: '',
    verdict: null,
    m: null,
    kind: null,
    checkpoints: [],
    binding: {},
    markedIndex: null,
    step: -1,
    error: null,
  };
}

export function loadResult(response: CheckResponse): ExplorerState {
  return {
    formula: response.formula,
    verdict: response.verdict,
    m: response.m,
    kind: response.evidence ? response.evidence.kind : null,
    checkpoints: response.evidence ? response.evidence.checkpoints : [],
    binding: response.evidence ? response.evidence.binding : {},
    markedIndex: response.evidence ? response.evidence.marked_index : null,
    step: -1,
    error: null,
  };
}

export function loadError(formula: string, message: string): ExplorerState {
  return { ...initialExplorer(), formula, error: message };
}

export function replayEnd(state: ExplorerState): number {
  if (state.checkpoints.length === 0) return -1;
  return state.markedIndex ?? state.checkpoints.length - 1;
}

export function stepForward(state: ExplorerState): ExplorerState {
  if (state.step >= replayEnd(state)) return state;
  return { ...state, step: state.step + 1 };
}

export function stepBack(state: ExplorerState): ExplorerState {
  if (state.step <= -1) return state;
  return { ...state, step: state.step - 1 };
}

export function currentCheckpoint(state: ExplorerState): CheckpointJson | null {
  return state.step >= 0 ? state.checkpoints[state.step] ?? null : null;
}

export function replayDone(state: ExplorerState): boolean {
  return state.step === replayEnd(state);
}
