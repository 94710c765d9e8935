"""Trick programs: instructions over decks with declared finite audience choices.

A :class:`TrickProgram` is a straight-line instruction list (with bounded
repeat/conditional blocks) plus declared choice variables. Running it under a
complete :data:`ChoiceBinding` is deterministic and yields a
:class:`PathRecord`; enumerating all bindings spans the whole finite state
space. The built-in program is the televised torn-card routine
(*shousuigongcishi*): eight half cards, a hidden card, and a sequence of
rotations, block moves, and discards that always ends on the hidden card's
partner.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from typing import Iterator, Union

from .deck import (
    CANONICAL_DECK,
    Deck,
    DeckError,
    internal_slot_count,
    move_block_internal,
    move_first_to_end,
    render_deck,
    rotate_left,
    tail,
    validate_deck,
)


class ProgramError(ValueError):
    """A program violates a structural invariant.

    ``index`` is the position of the offending top-level instruction when the
    fault can be pinned to one.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class BindingError(ValueError):
    """A choice binding is incomplete or out of domain."""


class MalformedProgramError(RuntimeError):
    """Execution reached a state the program should never produce.

    Raised instead of silently failing when e.g. a drop empties the deck
    before the final comparison.
    """


class SlotMode(enum.Enum):
    """How "somewhere inside the deck" is counted when a block is re-inserted.

    INTERNAL_GAPS: any gap strictly between two remaining cards.
    EXCLUDE_ADJACENT: additionally exclude the gaps touching the first and
    last remaining card, so the block lands well inside.
    """

    INTERNAL_GAPS = "internal_gaps"
    EXCLUDE_ADJACENT = "exclude_adjacent"


def legal_slots(remaining_len: int, mode: SlotMode) -> range:
    if mode is SlotMode.INTERNAL_GAPS:
        return range(1, max(remaining_len, 1))
    return range(2, max(remaining_len - 1, 2))


class ChoiceKind(enum.Enum):
    NAME_LENGTH = "name_length"
    NATIVE_PLACE = "native_place"
    GENDER = "gender"
    INSERT_SLOT = "insert_slot"


# Prompt shown when a choice of the given kind is pending.
PROMPTS = {
    ChoiceKind.NAME_LENGTH: "How many words are in your name?",
    ChoiceKind.NATIVE_PLACE: "Where are you from? (southerner=1, northerner=2, unknown=3)",
    ChoiceKind.GENDER: "Are you male or female? (male=1, female=2)",
    ChoiceKind.INSERT_SLOT: "After which of the remaining cards should the block go?",
}

NATIVE_ALIASES = {"southerner": 1, "northerner": 2, "unknown": 3}
GENDER_ALIASES = {"male": 1, "female": 2}
MALE = 1


@dataclass(frozen=True)
class ChoiceRef:
    """Use of a declared choice variable inside an instruction."""

    name: str


@dataclass(frozen=True)
class ChoiceVar:
    """A declared finite choice.

    ``domain`` is an explicit tuple of integers, or ``None`` for insertion
    slots whose legal values depend on the live deck at the step that
    consumes them.
    """

    name: str
    domain: tuple[int, ...] | None

    def __post_init__(self):
        if self.domain is not None:
            object.__setattr__(self, "domain", tuple(self.domain))

    @property
    def kind(self) -> ChoiceKind:
        if self.domain is None:
            return ChoiceKind.INSERT_SLOT
        if self.name == "gender":
            return ChoiceKind.GENDER
        if self.name == "native":
            return ChoiceKind.NATIVE_PLACE
        return ChoiceKind.NAME_LENGTH


Expr = Union[int, ChoiceRef]


@dataclass(frozen=True)
class Rotate:
    count: Expr


@dataclass(frozen=True)
class MoveBlock:
    block_len: Expr
    slot: Expr


@dataclass(frozen=True)
class TakeHidden:
    pass


@dataclass(frozen=True)
class Drop:
    count: Expr


@dataclass(frozen=True)
class MoveFirstToEnd:
    pass


@dataclass(frozen=True)
class Repeat:
    times: int
    body: tuple["Instruction", ...]

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))


@dataclass(frozen=True)
class IfMale:
    body: tuple["Instruction", ...]

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))


@dataclass(frozen=True)
class Checkpoint:
    label: int


@dataclass(frozen=True)
class FinalCheck:
    pass


Instruction = Union[
    Rotate, MoveBlock, TakeHidden, Drop, MoveFirstToEnd, Repeat, IfMale,
    Checkpoint, FinalCheck,
]

CHECKPOINT_LABELS = range(4, 10)


@dataclass(frozen=True)
class TrickProgram:
    initial_deck: Deck
    choices: tuple[ChoiceVar, ...]
    instructions: tuple[Instruction, ...]

    def __post_init__(self):
        object.__setattr__(self, "initial_deck", validate_deck(self.initial_deck))
        object.__setattr__(self, "choices", tuple(self.choices))
        object.__setattr__(self, "instructions", tuple(self.instructions))
        _validate_program(self)

    def choice(self, name: str) -> ChoiceVar:
        for var in self.choices:
            if var.name == name:
                return var
        raise KeyError(name)

    def gender_choice(self) -> ChoiceVar:
        matches = [c for c in self.choices if c.kind is ChoiceKind.GENDER]
        if len(matches) != 1:
            raise ProgramError("if_male needs exactly one declared gender choice")
        return matches[0]


def _iter_instructions(instructions, depth=0):
    """Yield (instruction, nesting_depth) in static traversal order."""
    for instr in instructions:
        yield instr, depth
        if isinstance(instr, (Repeat, IfMale)):
            yield from _iter_instructions(instr.body, depth + 1)


def _validate_program(program: TrickProgram) -> None:
    if not 1 <= len(program.initial_deck) <= 8:
        raise ProgramError("initial deck must hold between 1 and 8 cards")

    by_name: dict[str, ChoiceVar] = {}
    for var in program.choices:
        if var.name in by_name:
            raise ProgramError(f"choice {var.name!r} declared twice")
        if var.domain is not None:
            if not var.domain:
                raise ProgramError(f"choice {var.name!r} has an empty domain")
            if any(v < 0 for v in var.domain):
                raise ProgramError(f"choice {var.name!r} has negative values")
            if var.kind is ChoiceKind.GENDER and not set(var.domain) <= {1, 2}:
                raise ProgramError("gender domain must be within {1, 2}")
            if var.kind is ChoiceKind.NATIVE_PLACE and not set(var.domain) <= {1, 2, 3}:
                raise ProgramError("native-place domain must be within {1, 2, 3}")
        by_name[var.name] = var

    flat = list(_iter_instructions(program.instructions))
    slot_consumers: set[str] = set()
    take_hidden_seen = 0
    needs_gender = False

    def check_ref(expr: Expr, slot_position: bool, context: str) -> None:
        if isinstance(expr, ChoiceRef):
            var = by_name.get(expr.name)
            if var is None:
                raise ProgramError(f"{context} references undeclared choice {expr.name!r}")
            if var.kind is ChoiceKind.INSERT_SLOT and not slot_position:
                raise ProgramError(
                    f"insert-slot choice {expr.name!r} may only be used as a slot"
                )
            if slot_position:
                slot_consumers.add(expr.name)
        elif expr < 0:
            raise ProgramError(f"{context} takes a non-negative count")

    for instr, depth in flat:
        if isinstance(instr, Rotate):
            check_ref(instr.count, False, "rotate")
        elif isinstance(instr, MoveBlock):
            check_ref(instr.block_len, False, "move_block")
            if isinstance(instr.block_len, int) and instr.block_len < 1:
                raise ProgramError("move_block needs a block of at least one card")
            check_ref(instr.slot, True, "move_block slot")
        elif isinstance(instr, Drop):
            check_ref(instr.count, False, "drop")
        elif isinstance(instr, TakeHidden):
            take_hidden_seen += 1
            if depth > 0:
                raise ProgramError("take_hidden may not sit inside a block")
        elif isinstance(instr, Repeat):
            if instr.times < 0:
                raise ProgramError("repeat count must be non-negative")
        elif isinstance(instr, IfMale):
            needs_gender = True
        elif isinstance(instr, Checkpoint):
            if instr.label not in CHECKPOINT_LABELS:
                raise ProgramError(
                    f"checkpoint label {instr.label} outside "
                    f"{CHECKPOINT_LABELS.start}..{CHECKPOINT_LABELS.stop - 1}"
                )
            if take_hidden_seen == 0:
                raise ProgramError("checkpoint before take_hidden")
        elif isinstance(instr, FinalCheck) and depth > 0:
            raise ProgramError("final_check may not sit inside a block")

    if take_hidden_seen == 0:
        raise ProgramError("TakeHidden missing")
    if take_hidden_seen > 1:
        raise ProgramError("take_hidden must appear exactly once")
    finals = [i for i, instr in enumerate(program.instructions)
              if isinstance(instr, FinalCheck)]
    if len(finals) != 1 or finals[0] != len(program.instructions) - 1:
        index = finals[0] if finals else None
        raise ProgramError("final_check must be the last instruction", index)
    if needs_gender:
        program.gender_choice()
    for var in program.choices:
        if var.kind is ChoiceKind.INSERT_SLOT and var.name not in slot_consumers:
            raise ProgramError(
                f"insert-slot choice {var.name!r} is never consumed by a move_block"
            )


ChoiceBinding = dict[str, int]


@dataclass(frozen=True)
class CheckpointState:
    """Observation at one labeled checkpoint of one path."""

    label: int
    deck: Deck
    p: bool
    empty: bool

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "deck": render_deck(self.deck),
            "p": self.p,
            "empty": self.empty,
        }


@dataclass(frozen=True)
class PathRecord:
    """Full account of one deterministic run of a program."""

    binding: ChoiceBinding
    hidden: str
    action_word: tuple[str, ...]
    checkpoints: tuple[CheckpointState, ...]
    final_answer: str  # "yes" | "no"

    def to_json(self) -> dict:
        return {
            "binding": dict(self.binding),
            "hidden": self.hidden,
            "checkpoints": [c.to_json() for c in self.checkpoints],
            "final": self.final_answer,
            "actions": list(self.action_word),
        }


def action_word(record: PathRecord) -> list[str]:
    """The path's primitive actions in execution order."""
    return list(record.action_word)


def operation_count(record: PathRecord) -> int:
    """Primitive operations executed on the path (= action word length)."""
    return len(record.action_word)


@dataclass(frozen=True)
class ChoiceRequest:
    """A pending choice the run cannot proceed without."""

    name: str
    kind: ChoiceKind
    domain: tuple[int, ...]

    @property
    def prompt(self) -> str:
        return PROMPTS[self.kind]


@dataclass
class _Frame:
    body: tuple[Instruction, ...]
    index: int = 0


class TrickRun:
    """Stepwise executor for one path of a program.

    ``advance()`` runs until the program needs an unbound choice (``pending``
    is then set) or completes (``done``). ``choose(value)`` binds the pending
    choice and continues. The executor suspends *before* mutating the deck,
    so resuming re-evaluates the current instruction safely.
    """

    def __init__(self, program: TrickProgram,
                 slot_mode: SlotMode = SlotMode.INTERNAL_GAPS):
        self.program = program
        self.slot_mode = slot_mode
        self.deck: Deck = program.initial_deck
        self.hidden: str | None = None
        self.bound: ChoiceBinding = {}
        self.checkpoints: list[CheckpointState] = []
        self.actions: list[str] = []
        self.final_answer: str | None = None
        self.pending: ChoiceRequest | None = None
        self.done = False
        self._frames: list[_Frame] = [_Frame(program.instructions)]

    def fork(self) -> "TrickRun":
        twin = TrickRun.__new__(TrickRun)
        twin.program = self.program
        twin.slot_mode = self.slot_mode
        twin.deck = self.deck
        twin.hidden = self.hidden
        twin.bound = dict(self.bound)
        twin.checkpoints = list(self.checkpoints)
        twin.actions = list(self.actions)
        twin.final_answer = self.final_answer
        twin.pending = self.pending
        twin.done = self.done
        twin._frames = [_Frame(f.body, f.index) for f in self._frames]
        return twin

    # -- driving --------------------------------------------------------

    def advance(self) -> None:
        if self.done or self.pending is not None:
            return
        while self._frames:
            frame = self._frames[-1]
            if frame.index >= len(frame.body):
                self._frames.pop()
                continue
            if not self._execute(frame, frame.body[frame.index]):
                return  # suspended on a pending choice
        self.done = True
        self._seal_checkpoints()

    def choose(self, value: int) -> None:
        if self.pending is None:
            raise BindingError("no choice is pending")
        if value not in self.pending.domain:
            raise BindingError(
                f"value {value} outside the live domain {list(self.pending.domain)} "
                f"of choice {self.pending.name!r}"
            )
        self.bound[self.pending.name] = value
        self.pending = None
        self.advance()

    def record(self, binding: ChoiceBinding | None = None) -> PathRecord:
        if not self.done:
            raise MalformedProgramError("run has not completed")
        return PathRecord(
            binding=dict(binding if binding is not None else self.bound),
            hidden=self.hidden,  # type: ignore[arg-type]  (validated: set before checkpoints)
            action_word=tuple(self.actions),
            checkpoints=tuple(self.checkpoints),
            final_answer=self.final_answer,  # type: ignore[arg-type]
        )

    # -- execution ------------------------------------------------------

    def _seal_checkpoints(self) -> None:
        # "empty" holds exactly at the terminal checkpoint once the deck is
        # down to the single card the final comparison looks at.
        if self.checkpoints:
            last = self.checkpoints[-1]
            self.checkpoints[-1] = replace(last, empty=len(last.deck) == 1)

    def _value(self, expr: Expr) -> int | None:
        """Resolve a non-slot expression, suspending if the choice is unbound."""
        if isinstance(expr, int):
            return expr
        if expr.name in self.bound:
            return self.bound[expr.name]
        var = self.program.choice(expr.name)
        self.pending = ChoiceRequest(var.name, var.kind, var.domain)
        return None

    def _slot_value(self, expr: Expr, remaining_len: int) -> int | None:
        """Resolve a slot expression against the live legal gap range."""
        legal = legal_slots(remaining_len, self.slot_mode)
        if isinstance(expr, int):
            if expr not in legal:
                raise BindingError(
                    f"slot {expr} outside the live range {list(legal)}"
                )
            return expr
        if expr.name in self.bound:
            value = self.bound[expr.name]
            if value not in legal:
                raise BindingError(
                    f"bound slot {expr.name}={value} outside the live range "
                    f"{list(legal)}"
                )
            return value
        var = self.program.choice(expr.name)
        domain = tuple(legal) if var.domain is None else tuple(
            v for v in var.domain if v in legal
        )
        self.pending = ChoiceRequest(var.name, var.kind, domain)
        return None

    def _shrink(self, deck: Deck) -> Deck:
        if not deck:
            raise MalformedProgramError(
                "the deck was emptied before the final comparison"
            )
        return deck

    def _execute(self, frame: _Frame, instr: Instruction) -> bool:
        """Run one instruction; return False when suspended on a choice."""
        if isinstance(instr, Rotate):
            count = self._value(instr.count)
            if count is None:
                return False
            for _ in range(count):
                self.deck = rotate_left(self.deck, 1)
                self.actions.append("rotate1")
        elif isinstance(instr, MoveBlock):
            block_len = self._value(instr.block_len)
            if block_len is None:
                return False
            if block_len >= len(self.deck):
                raise MalformedProgramError(
                    f"cannot move a block of {block_len} within {len(self.deck)} cards"
                )
            slot = self._slot_value(instr.slot, len(self.deck) - block_len)
            if slot is None:
                return False
            self.deck = move_block_internal(self.deck, block_len, slot)
            self.actions.append(f"moveblock({block_len},{slot})")
        elif isinstance(instr, TakeHidden):
            self.hidden = self.deck[0]
            self.deck = self._shrink(tail(self.deck))
            self.actions.append("takehidden")
        elif isinstance(instr, Drop):
            count = self._value(instr.count)
            if count is None:
                return False
            for _ in range(count):
                self.deck = self._shrink(tail(self.deck))
                self.actions.append("drop1")
        elif isinstance(instr, MoveFirstToEnd):
            self.deck = move_first_to_end(self.deck)
            self.actions.append("movefirsttoend")
        elif isinstance(instr, Repeat):
            frame.index += 1
            if instr.times and instr.body:
                self._frames.append(_Frame(instr.body * instr.times))
            return True
        elif isinstance(instr, IfMale):
            gender = self._value(ChoiceRef(self.program.gender_choice().name))
            if gender is None:
                return False
            frame.index += 1
            if gender == MALE and instr.body:
                self._frames.append(_Frame(instr.body))
            return True
        elif isinstance(instr, Checkpoint):
            self.checkpoints.append(CheckpointState(
                label=instr.label,
                deck=self.deck,
                p=self.deck[-1] == self.hidden,
                empty=False,
            ))
        elif isinstance(instr, FinalCheck):
            matched = len(self.deck) == 1 and self.deck[0] == self.hidden
            self.final_answer = "yes" if matched else "no"
        frame.index += 1
        return True


Restrict = dict[str, "set[int] | tuple[int, ...] | list[int]"]


def _allowed(domain: tuple[int, ...], name: str, restrict: Restrict | None):
    if restrict is None or name not in restrict:
        return domain
    keep = set(restrict[name])
    return tuple(v for v in domain if v in keep)


def iter_paths(program: TrickProgram, *,
               slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
               restrict: Restrict | None = None) -> Iterator[PathRecord]:
    """Depth-first enumeration of every complete run, one PathRecord per path.

    Bindings are explored in declaration/domain order, so the stream order is
    deterministic. Choices that a path never consumes (e.g. inside an
    untaken conditional) are still bound, by cross product at the end of the
    path, to keep every binding complete.
    """
    if restrict:
        declared = {c.name for c in program.choices}
        unknown = set(restrict) - declared
        if unknown:
            raise BindingError(f"restriction names undeclared choices {sorted(unknown)}")

    def leaves(run: TrickRun) -> Iterator[TrickRun]:
        run.advance()
        if run.done:
            yield run
            return
        request = run.pending
        assert request is not None
        for value in _allowed(request.domain, request.name, restrict):
            child = run.fork()
            child.choose(value)
            yield from leaves(child)

    for run in leaves(TrickRun(program, slot_mode)):
        unconsumed = [c for c in program.choices if c.name not in run.bound]
        if not unconsumed:
            yield run.record(_ordered_binding(program, run.bound))
            continue
        domains = []
        for var in unconsumed:
            if var.domain is None:
                raise ProgramError(
                    f"insert-slot choice {var.name!r} was never consumed on a path"
                )
            domains.append(_allowed(var.domain, var.name, restrict))
        for extra in itertools.product(*domains):
            binding = dict(run.bound)
            binding.update(zip((v.name for v in unconsumed), extra))
            yield run.record(_ordered_binding(program, binding))


def _ordered_binding(program: TrickProgram, bound: ChoiceBinding) -> ChoiceBinding:
    return {var.name: bound[var.name] for var in program.choices}


def enumerate_bindings(program: TrickProgram, *,
                       slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
                       restrict: Restrict | None = None) -> list[ChoiceBinding]:
    """All complete bindings in deterministic enumeration order; len() is m."""
    return [r.binding for r in iter_paths(program, slot_mode=slot_mode,
                                          restrict=restrict)]


def run_path(program: TrickProgram, binding: ChoiceBinding, *,
             slot_mode: SlotMode = SlotMode.INTERNAL_GAPS) -> PathRecord:
    """Deterministically execute one complete binding."""
    declared = {c.name for c in program.choices}
    missing = declared - set(binding)
    if missing:
        raise BindingError(f"binding misses choices {sorted(missing)}")
    unknown = set(binding) - declared
    if unknown:
        raise BindingError(f"binding names undeclared choices {sorted(unknown)}")
    for var in program.choices:
        if var.domain is not None and binding[var.name] not in var.domain:
            raise BindingError(
                f"value {binding[var.name]} outside the domain of {var.name!r}"
            )
    run = TrickRun(program, slot_mode)
    run.advance()
    while not run.done:
        assert run.pending is not None
        run.choose(binding[run.pending.name])
        # choose() re-advances; loop exits once the program completes
    return run.record(_ordered_binding(program, binding))


def builtin_shousuigongcishi(name_words: tuple[int, ...] = (2, 3)) -> TrickProgram:
    """The televised torn-card routine over eight half cards.

    ``name_words`` is the domain of the opening rotation count (how many
    words the spectator's name has); the staging assumes two- or three-word
    names, but any positive counts work since rotation wraps around.
    """
    name_words = tuple(name_words)
    if not name_words or any(n < 1 for n in name_words):
        raise ProgramError("name_words needs at least one positive count")
    return TrickProgram(
        initial_deck=CANONICAL_DECK,
        choices=(
            ChoiceVar("n1", name_words),
            ChoiceVar("s2", None),
            ChoiceVar("native", (1, 2, 3)),
            ChoiceVar("s4", None),
            ChoiceVar("gender", (1, 2)),
        ),
        instructions=(
            Rotate(ChoiceRef("n1")),
            MoveBlock(3, ChoiceRef("s2")),
            TakeHidden(),
            MoveBlock(ChoiceRef("native"), ChoiceRef("s4")),
            Checkpoint(4),
            Drop(ChoiceRef("gender")),
            Checkpoint(5),
            Repeat(7, (MoveFirstToEnd(),)),
            Checkpoint(6),
            Repeat(4, (MoveFirstToEnd(), Drop(1))),
            Checkpoint(7),
            IfMale((MoveFirstToEnd(), Drop(1))),
            Checkpoint(8),
            Checkpoint(9),
            FinalCheck(),
        ),
    )
