"""Seeded random generators for property tests.

``random_program`` builds small valid programs whose every path runs without
errors under the default gap semantics: it tracks the minimum live deck
length while emitting instructions, so drops never empty the hand and block
moves always have an internal gap available. ``random_formula`` builds small
formula trees over the two atoms.
"""

from __future__ import annotations

import random

from trickcheck import (
    AF,
    AG,
    Atom,
    And,
    Branch,
    Checkpoint,
    CheckpointState,
    ChoiceRef,
    ChoiceVar,
    Drop,
    EF,
    EG,
    FinalCheck,
    FrozenTree,
    IfMale,
    MoveBlock,
    MoveFirstToEnd,
    Not,
    Or,
    Repeat,
    Rotate,
    SYMBOLS,
    TakeHidden,
    TrickProgram,
)


def random_formula(rng: random.Random, depth: int = 3,
                   allow_temporal: bool = True):
    if depth <= 0:
        return Atom(rng.choice(("p", "empty")))
    roll = rng.random()
    if roll < 0.35:
        return Atom(rng.choice(("p", "empty")))
    if roll < 0.55:
        return Not(random_formula(rng, depth - 1, allow_temporal))
    if roll < 0.70:
        return And(random_formula(rng, depth - 1, allow_temporal),
                   random_formula(rng, depth - 1, allow_temporal))
    if roll < 0.85 or not allow_temporal:
        return Or(random_formula(rng, depth - 1, allow_temporal),
                  random_formula(rng, depth - 1, allow_temporal))
    op = rng.choice((AF, AG, EF, EG))
    return op(random_formula(rng, depth - 1, allow_temporal))


class _Builder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.choices: list[ChoiceVar] = []
        self.slot_seq = 0
        self.rot_seq = 0
        self.has_gender = False

    def fresh_slot(self) -> ChoiceRef:
        self.slot_seq += 1
        var = ChoiceVar(f"s{self.slot_seq}", None)
        self.choices.append(var)
        return ChoiceRef(var.name)

    def fresh_rotation(self) -> ChoiceRef:
        self.rot_seq += 1
        values = sorted(self.rng.sample(range(0, 6), self.rng.randint(1, 3)))
        var = ChoiceVar(f"r{self.rot_seq}", tuple(values))
        self.choices.append(var)
        return ChoiceRef(var.name)

    def maybe_gender(self) -> None:
        if self.rng.random() < 0.5:
            domain = self.rng.choice(((1, 2), (1, 2), (1,), (2,)))
            self.choices.append(ChoiceVar("gender", domain))
            self.has_gender = True

    @property
    def budget_left(self) -> bool:
        return len(self.choices) < 4


def random_program(rng: random.Random,
                   min_checkpoints: int = 0) -> TrickProgram:
    builder = _Builder(rng)
    builder.maybe_gender()
    deck_len = rng.randint(2, 8)
    deck = tuple(rng.choice(SYMBOLS) for _ in range(deck_len))
    instrs = []
    length = deck_len  # minimum live length across all paths

    def emit_move_block() -> None:
        nonlocal length
        block_len = rng.randint(1, length - 2)
        remaining = length - block_len
        if rng.random() < 0.5 and builder.budget_left:
            slot = builder.fresh_slot()
        else:
            slot = rng.randint(1, remaining - 1)
        instrs.append(MoveBlock(block_len, slot))

    def emit_rotateish() -> None:
        if rng.random() < 0.3 and builder.budget_left:
            instrs.append(Rotate(builder.fresh_rotation()))
        elif rng.random() < 0.5:
            instrs.append(Rotate(rng.randint(0, 5)))
        else:
            instrs.append(MoveFirstToEnd())

    for _ in range(rng.randint(0, 2)):
        if length >= 3 and rng.random() < 0.4:
            emit_move_block()
        else:
            emit_rotateish()

    instrs.append(TakeHidden())
    length -= 1

    next_label = 4
    emitted_checkpoints = 0
    for _ in range(rng.randint(min_checkpoints, 6)):
        roll = rng.random()
        if roll < 0.35 and next_label <= 9:
            instrs.append(Checkpoint(next_label))
            next_label += 1
            emitted_checkpoints += 1
        elif roll < 0.5 and length >= 2:
            drop = rng.randint(1, min(length - 1, 2))
            instrs.append(Drop(drop))
            length -= drop
        elif roll < 0.6 and length >= 3:
            emit_move_block()
        elif roll < 0.75:
            body = tuple(
                rng.choice((MoveFirstToEnd(), Rotate(rng.randint(1, 3))))
                for _ in range(rng.randint(1, 2))
            )
            instrs.append(Repeat(rng.randint(1, 3), body))
        elif roll < 0.85 and builder.has_gender and length >= 2:
            instrs.append(IfMale((MoveFirstToEnd(), Drop(1))))
            length -= 1  # worst case: the branch is taken
        else:
            emit_rotateish()

    while emitted_checkpoints < min_checkpoints and next_label <= 9:
        instrs.append(Checkpoint(next_label))
        next_label += 1
        emitted_checkpoints += 1
    instrs.append(FinalCheck())
    return TrickProgram(deck, tuple(builder.choices), tuple(instrs))


def random_tree(rng: random.Random) -> FrozenTree:
    """Synthetic checkpoint tree with arbitrary valuations; exercises the
    evaluator on branch shapes programs rarely produce."""
    branches = []
    for b in range(rng.randint(1, 8)):
        nodes = tuple(
            CheckpointState(label=4 + i, deck=("a",),
                            p=rng.random() < 0.5, empty=rng.random() < 0.3)
            for i in range(rng.randint(0, 6))
        )
        branches.append(Branch({"path": b}, nodes))
    return FrozenTree(tuple(branches))
