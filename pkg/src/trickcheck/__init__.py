"""Explicit-state model checking for card-trick routines.

The package executes a trick program over every combination of its finite
audience choices, evaluates bounded-path temporal properties on the
resulting checkpoint tree, and cross-validates the tree checker against
naive flag-counting replays. The built-in program is the televised
torn-card routine *shousuigongcishi*.
"""

from .deck import (
    CANONICAL_DECK,
    Deck,
    DeckError,
    SYMBOLS,
    internal_slot_count,
    move_block_internal,
    move_first_to_end,
    parse_deck,
    render_deck,
    rotate_left,
    tail,
)
from .model import (
    BindingError,
    Checkpoint,
    CheckpointState,
    ChoiceBinding,
    ChoiceKind,
    ChoiceRef,
    ChoiceVar,
    Drop,
    FinalCheck,
    IfMale,
    MalformedProgramError,
    MoveBlock,
    MoveFirstToEnd,
    PathRecord,
    ProgramError,
    Repeat,
    Rotate,
    SlotMode,
    TakeHidden,
    TrickProgram,
    TrickRun,
    action_word,
    builtin_shousuigongcishi,
    enumerate_bindings,
    iter_paths,
    operation_count,
    run_path,
)
from .script import ParseError, ScriptSource, parse, parse_file, pretty_print
from .ctl import (
    AF,
    AG,
    And,
    Atom,
    Branch,
    CheckpointTree,
    EF,
    EG,
    EvalError,
    Evidence,
    FormulaError,
    FrozenTree,
    NoEvidenceError,
    Not,
    Or,
    Verdict,
    build_tree,
    eval_formula,
    explain,
    materialize,
    parse_formula,
    render_explanation,
    render_formula,
)
from .oracle import (
    OracleError,
    OraclePath,
    OracleReport,
    agreement_matrix,
    check_af_p,
    check_af_p_and_empty,
    check_ag_p,
    check_ef_p,
    check_eg_p,
    walk_paths,
)
from .automaton import (
    MagicAutomaton,
    MagicTuringMachine,
    MtmResult,
    Run,
    TransitionTable,
    accepts,
    automaton_from_json,
    mtm_run,
    run_is_valid,
    trick_to_automaton,
)

__version__ = "0.1.0"
