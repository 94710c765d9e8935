// The verdict explorer replays evidence branches returned by /api/check.
// The AG p fixture is the checker's real output: a counterexample whose
// first violation sits at checkpoint 6.

import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import type { CheckResponse } from '../src/api.js';
import {
  currentCheckpoint,
  initialExplorer,
  loadError,
  loadResult,
  replayDone,
  replayEnd,
  stepBack,
  stepForward,
} from '../src/explorer.js';

const agp = JSON.parse(readFileSync(
  new URL('../../tests/golden/check_ag_p.json', import.meta.url),
  'utf-8')) as CheckResponse;

describe('verdict explorer', () => {
  it('loads a false universal verdict with its counterexample', () => {
    const state = loadResult(agp);
    expect(state.verdict).toBe(false);
    expect(state.m).toBe(192);
    expect(state.kind).toBe('counterexample');
    expect(state.checkpoints).toHaveLength(6);
    expect(state.markedIndex).toBe(2);
    expect(state.binding).toEqual({ n1: 2, s2: 1, native: 1, s4: 1, gender: 1 });
  });

  it('replays the counterexample and ends at checkpoint 6', () => {
    let state = loadResult(agp);
    const visited: number[] = [];
    while (!replayDone(state)) {
      state = stepForward(state);
      const checkpoint = currentCheckpoint(state);
      expect(checkpoint).not.toBeNull();
      visited.push(checkpoint!.label);
    }
    expect(visited).toEqual([4, 5, 6]);
    expect(currentCheckpoint(state)!.label).toBe(6);
    expect(currentCheckpoint(state)!.p).toBe(false);
    // stepping past the decisive checkpoint is a no-op
    expect(stepForward(state)).toEqual(state);
  });

  it('steps back to the pre-replay state', () => {
    let state = stepForward(stepForward(loadResult(agp)));
    state = stepBack(stepBack(state));
    expect(state.step).toBe(-1);
    expect(currentCheckpoint(state)).toBeNull();
    expect(stepBack(state)).toEqual(state);
  });

  it('replays a witness to its earliest hit', () => {
    const witness: CheckResponse = {
      formula: 'EF p',
      verdict: true,
      m: 192,
      slot_mode: 'internal_gaps',
      evidence: {
        kind: 'witness',
        binding: { n1: 2 },
        checkpoints: agp.evidence!.checkpoints,
        marked_index: 0,
        marked_label: 4,
      },
    };
    let state = loadResult(witness);
    expect(replayEnd(state)).toBe(0);
    state = stepForward(state);
    expect(replayDone(state)).toBe(true);
    expect(currentCheckpoint(state)!.label).toBe(4);
  });

  it('a verdict without evidence has nothing to replay', () => {
    const state = loadResult({
      formula: 'AF p', verdict: true, m: 192,
      slot_mode: 'internal_gaps', evidence: null,
    });
    expect(state.kind).toBeNull();
    expect(replayEnd(state)).toBe(-1);
    expect(replayDone(state)).toBe(true);
    expect(stepForward(state)).toEqual(state);
  });

  it('formula errors are shown inline', () => {
    const state = loadError('AF (', "formula error: formula ended early");
    expect(state.error).toContain('formula');
    expect(state.verdict).toBeNull();
    expect(state).toMatchObject({ ...initialExplorer(), formula: 'AF (', error: state.error });
  });
});
