"""Finite automata over action words, and a small bounded Turing machine.

A trick's run induces a finite word of primitive action labels; an automaton
whose alphabet is made of such labels is a *magic automaton*: its accepted
language is a set of performable routines. :func:`trick_to_automaton` builds
the automaton of everything a given program can do, as a trie over all
enumerated action words (shared prefixes merge, every word-end state is
final), so language membership is auditable by construction.

The Turing-machine type mirrors the same idea one level up: a quadruple of
states, alphabet, initial state and move function, run under an explicit
step budget so every run is finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

from .model import Restrict, SlotMode, TrickProgram, iter_paths

State = Hashable


@dataclass(frozen=True)
class TransitionTable:
    alphabet: frozenset[str]
    states: frozenset[State]
    start: frozenset[State]
    edges: frozenset[tuple[State, State, str]]  # (from, to, label)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "start", frozenset(self.start))
        object.__setattr__(self, "edges", frozenset(self.edges))
        if not self.start <= self.states:
            raise ValueError("start states must be declared states")
        for src, dst, label in self.edges:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"edge ({src!r}, {dst!r}, {label!r}) uses an "
                                 "undeclared state")
            if label not in self.alphabet:
                raise ValueError(f"edge label {label!r} outside the alphabet")


@dataclass(frozen=True)
class MagicAutomaton:
    table: TransitionTable
    final: frozenset[State]

    def __post_init__(self):
        object.__setattr__(self, "final", frozenset(self.final))
        if not self.final <= self.table.states:
            raise ValueError("final states must be declared states")

    def to_json(self) -> dict:
        key = repr
        return {
            "states": sorted(self.table.states, key=key),
            "start": sorted(self.table.start, key=key),
            "final": sorted(self.final, key=key),
            "edges": [
                {"from": src, "to": dst, "label": label}
                for src, dst, label in sorted(self.table.edges, key=key)
            ],
        }


def automaton_from_json(data: dict) -> MagicAutomaton:
    edges = frozenset(
        (edge["from"], edge["to"], edge["label"]) for edge in data["edges"]
    )
    alphabet = frozenset(label for _, _, label in edges)
    table = TransitionTable(alphabet, frozenset(data["states"]),
                            frozenset(data["start"]), edges)
    return MagicAutomaton(table, frozenset(data["final"]))


@dataclass(frozen=True)
class Run:
    """A state sequence threaded along a word: one more state than letters."""

    states: tuple[State, ...]
    word: tuple[str, ...]


def run_is_valid(automaton: MagicAutomaton, run: Run) -> bool:
    """Independent check of the run/acceptance conditions: starts in a start
    state, follows declared transitions letter by letter, ends final."""
    if len(run.states) != len(run.word) + 1:
        return False
    if run.states[0] not in automaton.table.start:
        return False
    edges = automaton.table.edges
    for i, label in enumerate(run.word):
        if (run.states[i], run.states[i + 1], label) not in edges:
            return False
    return run.states[-1] in automaton.final


def accepts(automaton: MagicAutomaton,
            word: Iterable[str]) -> tuple[bool, Run | None]:
    """Nondeterministic acceptance; returns an accepting run when one exists.

    Unknown labels reject immediately. The returned run is deterministic:
    ties are broken by state order at each step.
    """
    word = tuple(word)
    if any(label not in automaton.table.alphabet for label in word):
        return False, None

    step: dict[tuple[State, str], set[State]] = {}
    for src, dst, label in automaton.table.edges:
        step.setdefault((src, label), set()).add(dst)

    frontier = set(automaton.table.start)
    parents: list[dict[State, State]] = []
    for label in word:
        parent: dict[State, State] = {}
        for src in sorted(frontier, key=repr):
            for dst in step.get((src, label), ()):
                parent.setdefault(dst, src)
        if not parent:
            return False, None
        parents.append(parent)
        frontier = set(parent)

    accepting = sorted(frontier & automaton.final, key=repr)
    if not accepting:
        return False, None
    states = [accepting[0]]
    for parent in reversed(parents):
        states.append(parent[states[-1]])
    states.reverse()
    return True, Run(tuple(states), word)


def trick_to_automaton(program: TrickProgram, *,
                       slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
                       restrict: Restrict | None = None) -> MagicAutomaton:
    """Trie automaton accepting exactly the program's enumerated action words.

    States are integers (0 is the root); every word-end state is final.
    """
    root = 0
    next_state = 1
    children: dict[tuple[int, str], int] = {}
    finals: set[int] = set()
    alphabet: set[str] = set()
    for record in iter_paths(program, slot_mode=slot_mode, restrict=restrict):
        node = root
        for label in record.action_word:
            alphabet.add(label)
            key = (node, label)
            if key not in children:
                children[key] = next_state
                next_state += 1
            node = children[key]
        finals.add(node)
    states = frozenset(range(next_state))
    edges = frozenset(
        (src, dst, label) for (src, label), dst in children.items()
    )
    table = TransitionTable(frozenset(alphabet), states, frozenset({root}), edges)
    return MagicAutomaton(table, frozenset(finals))


# -- bounded Turing machine ------------------------------------------------

Direction = str  # "L" | "R"
BLANK = "_"


@dataclass(frozen=True)
class MagicTuringMachine:
    states: frozenset[State]
    alphabet: frozenset[str]
    initial: State
    rules: dict[tuple[State, str], tuple[str, Direction, State]]
    tape: tuple[str, ...] = ()
    head: int = 0
    step_budget: int = 10_000
    blank: str = BLANK

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet",
                           frozenset(self.alphabet) | {self.blank})
        object.__setattr__(self, "tape", tuple(self.tape))
        if self.initial not in self.states:
            raise ValueError("initial state must be declared")
        for (state, symbol), (write, move, target) in self.rules.items():
            if state not in self.states or target not in self.states:
                raise ValueError("rule uses an undeclared state")
            if symbol not in self.alphabet or write not in self.alphabet:
                raise ValueError("rule uses a symbol outside the alphabet")
            if move not in ("L", "R"):
                raise ValueError(f"move must be L or R, not {move!r}")
        if self.step_budget < 0:
            raise ValueError("step budget must be non-negative")
        if self.head < 0:
            raise ValueError("head starts within the tape")


@dataclass(frozen=True)
class MtmResult:
    halted: bool  # True: no applicable rule; False: budget exhausted
    tape: tuple[str, ...]
    steps: int
    state: State

    def trimmed_tape(self, blank: str = BLANK) -> tuple[str, ...]:
        tape = list(self.tape)
        while tape and tape[-1] == blank:
            tape.pop()
        return tuple(tape)


def mtm_run(machine: MagicTuringMachine) -> MtmResult:
    """Apply the move function until it has no rule or the budget runs out.

    The tape is one-way infinite to the right (blank-extended on demand);
    a left move at the leftmost cell stays put.
    """
    tape = list(machine.tape)
    head = machine.head
    state = machine.initial
    steps = 0
    while steps < machine.step_budget:
        while head >= len(tape):
            tape.append(machine.blank)
        rule = machine.rules.get((state, tape[head]))
        if rule is None:
            return MtmResult(True, tuple(tape), steps, state)
        write, move, state = rule
        tape[head] = write
        head = max(head - 1, 0) if move == "L" else head + 1
        steps += 1
    while head >= len(tape):
        tape.append(machine.blank)
    halted = machine.rules.get((state, tape[head])) is None
    return MtmResult(halted, tuple(tape), steps, state)
