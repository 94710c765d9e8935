"""Temporal properties over the checkpoint tree of a trick program.

The state space is a virtual root with one finite branch per choice binding;
each branch is that path's checkpoint sequence. The four temporal operators
quantify over branches and positions in the bounded-path sense:

* ``AF f`` — every branch has at least one checkpoint satisfying ``f``;
* ``AG f`` — every checkpoint of every branch satisfies ``f``;
* ``EF f`` — some checkpoint of some branch satisfies ``f``;
* ``EG f`` — some branch satisfies ``f`` at every checkpoint.

Atoms are ``p`` (the deck's last card equals the hidden card) and ``empty``
(the terminal checkpoint, reached with a single card left). The virtual root
carries no valuation: it is skipped by AG/EG and a bare atom at the top level
is an error. Nested temporal operators quantify over the remaining suffix of
the branch they sit on. Verdicts carry evidence — the earliest qualifying
checkpoint on the first qualifying branch in enumeration order — so results
are reproducible and replayable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .model import (
    CheckpointState,
    ChoiceBinding,
    Restrict,
    SlotMode,
    TrickProgram,
    iter_paths,
)


class FormulaError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at offset {position})")


class EvalError(ValueError):
    """The formula cannot be valued on this tree (e.g. bare atom at the root)."""


class NoEvidenceError(ValueError):
    """The verdict has no witness or counterexample to explain."""


# -- formula AST ---------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str  # "p" | "empty"


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class AF:
    operand: "Formula"


@dataclass(frozen=True)
class AG:
    operand: "Formula"


@dataclass(frozen=True)
class EF:
    operand: "Formula"


@dataclass(frozen=True)
class EG:
    operand: "Formula"


Formula = Atom | Not | And | Or | AF | AG | EF | EG

_TEMPORAL = {"AF": AF, "AG": AG, "EF": EF, "EG": EG}


def render_formula(formula: Formula) -> str:
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, Not):
        return f"!{render_formula(formula.operand)}"
    if isinstance(formula, And):
        return f"({render_formula(formula.left)} & {render_formula(formula.right)})"
    if isinstance(formula, Or):
        return f"({render_formula(formula.left)} | {render_formula(formula.right)})"
    return f"{type(formula).__name__} {render_formula(formula.operand)}"


_FORMULA_TOKEN = re.compile(r"\s*([A-Za-z]+|[!&|()])")


def _formula_tokens(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _FORMULA_TOKEN.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise FormulaError(
                f"unexpected character {stripped[0]!r}",
                len(text) - len(stripped),
            )
        tokens.append((match.group(1), match.start(1)))
        pos = match.end()
    return tokens


def parse_formula(text: str) -> Formula:
    """Parse the surface syntax: atoms ``p``/``empty``, ``!``, ``&``, ``|``,
    the four temporal prefixes, and parentheses."""
    tokens = _formula_tokens(text)
    index = 0

    def peek():
        return tokens[index][0] if index < len(tokens) else None

    def take():
        nonlocal index
        token = tokens[index]
        index += 1
        return token

    def fail(message: str):
        position = tokens[index][1] if index < len(tokens) else len(text)
        raise FormulaError(message, position)

    def parse_or() -> Formula:
        node = parse_and()
        while peek() == "|":
            take()
            node = Or(node, parse_and())
        return node

    def parse_and() -> Formula:
        node = parse_unary()
        while peek() == "&":
            take()
            node = And(node, parse_unary())
        return node

    def parse_unary() -> Formula:
        token = peek()
        if token is None:
            fail("formula ended early")
        if token == "!":
            take()
            return Not(parse_unary())
        if token in _TEMPORAL:
            take()
            return _TEMPORAL[token](parse_unary())
        if token in ("p", "empty"):
            take()
            return Atom(token)
        if token == "(":
            take()
            node = parse_or()
            if peek() != ")":
                fail("missing closing parenthesis")
            take()
            return node
        fail(f"unexpected token {token!r}")

    if not tokens:
        raise FormulaError("empty formula", 0)
    node = parse_or()
    if index != len(tokens):
        fail(f"trailing input {tokens[index][0]!r}")
    return node


# -- checkpoint tree -----------------------------------------------------

@dataclass(frozen=True)
class Branch:
    binding: ChoiceBinding
    nodes: tuple[CheckpointState, ...]


class CheckpointTree:
    """The branching state space of a program, one branch per binding.

    Branches are produced lazily, in enumeration order, each time they are
    iterated; memory stays proportional to one path.
    """

    def __init__(self, program: TrickProgram,
                 slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
                 restrict: Restrict | None = None):
        self.program = program
        self.slot_mode = slot_mode
        self.restrict = restrict

    def branches(self) -> Iterator[Branch]:
        for record in iter_paths(self.program, slot_mode=self.slot_mode,
                                 restrict=self.restrict):
            yield Branch(record.binding, record.checkpoints)

    def branch_count(self) -> int:
        return sum(1 for _ in self.branches())


@dataclass(frozen=True)
class FrozenTree:
    """A materialized tree; any object with ``branches()`` can be evaluated."""

    branch_list: tuple[Branch, ...]

    def branches(self) -> Iterator[Branch]:
        return iter(self.branch_list)

    def branch_count(self) -> int:
        return len(self.branch_list)


def materialize(tree) -> FrozenTree:
    return FrozenTree(tuple(tree.branches()))


def build_tree(program: TrickProgram, *,
               slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
               restrict: Restrict | None = None) -> CheckpointTree:
    return CheckpointTree(program, slot_mode, restrict)


# -- evaluation ----------------------------------------------------------

@dataclass(frozen=True)
class Evidence:
    kind: str  # "witness" | "counterexample"
    binding: ChoiceBinding
    nodes: tuple[CheckpointState, ...]
    index: int | None  # checkpoint position, when one checkpoint is decisive

    @property
    def label(self) -> int | None:
        return None if self.index is None else self.nodes[self.index].label


@dataclass(frozen=True)
class Verdict:
    value: bool
    evidence: Evidence | None = None


def _sat(nodes: tuple[CheckpointState, ...], i: int, formula: Formula) -> bool:
    """Satisfaction at position ``i`` of one branch (suffix semantics)."""
    if isinstance(formula, Atom):
        node = nodes[i]
        return node.p if formula.name == "p" else node.empty
    if isinstance(formula, Not):
        return not _sat(nodes, i, formula.operand)
    if isinstance(formula, And):
        return _sat(nodes, i, formula.left) and _sat(nodes, i, formula.right)
    if isinstance(formula, Or):
        return _sat(nodes, i, formula.left) or _sat(nodes, i, formula.right)
    if isinstance(formula, (AF, EF)):
        return any(_sat(nodes, j, formula.operand) for j in range(i, len(nodes)))
    if isinstance(formula, (AG, EG)):
        return all(_sat(nodes, j, formula.operand) for j in range(i, len(nodes)))
    raise TypeError(f"not a formula: {formula!r}")


def _flip(evidence: Evidence | None) -> Evidence | None:
    if evidence is None:
        return None
    kind = "witness" if evidence.kind == "counterexample" else "counterexample"
    return Evidence(kind, evidence.binding, evidence.nodes, evidence.index)


def eval_formula(tree: CheckpointTree, formula: Formula) -> Verdict:
    """Evaluate a formula at the virtual root of the tree.

    True existential verdicts carry a witness, false universal verdicts a
    counterexample; boolean connectives pass through the decisive child's
    evidence.
    """
    if isinstance(formula, Atom):
        raise EvalError(
            f"atom {formula.name!r} has no value at the virtual root; "
            "wrap it in a temporal operator"
        )
    if isinstance(formula, Not):
        inner = eval_formula(tree, formula.operand)
        return Verdict(not inner.value, _flip(inner.evidence))
    if isinstance(formula, (And, Or)):
        left = eval_formula(tree, formula.left)
        right = eval_formula(tree, formula.right)
        if isinstance(formula, And):
            value = left.value and right.value
            losers = [v for v in (left, right) if not v.value]
            pool = losers if not value else [left, right]
        else:
            value = left.value or right.value
            winners = [v for v in (left, right) if v.value]
            pool = winners if value else [left, right]
        evidence = next((v.evidence for v in pool if v.evidence is not None), None)
        return Verdict(value, evidence)

    empty = True
    for branch in tree.branches():
        empty = False
        nodes = branch.nodes
        if isinstance(formula, AF):
            if not any(_sat(nodes, i, formula.operand) for i in range(len(nodes))):
                return Verdict(False, Evidence("counterexample", branch.binding,
                                               nodes, None))
        elif isinstance(formula, AG):
            for i in range(len(nodes)):
                if not _sat(nodes, i, formula.operand):
                    return Verdict(False, Evidence("counterexample", branch.binding,
                                                   nodes, i))
        elif isinstance(formula, EF):
            for i in range(len(nodes)):
                if _sat(nodes, i, formula.operand):
                    return Verdict(True, Evidence("witness", branch.binding,
                                                  nodes, i))
        elif isinstance(formula, EG):
            if all(_sat(nodes, i, formula.operand) for i in range(len(nodes))):
                index = 0 if nodes else None
                return Verdict(True, Evidence("witness", branch.binding,
                                              nodes, index))
    if empty:
        raise EvalError("the tree has no branches (no complete bindings)")
    return Verdict(isinstance(formula, (AF, AG)), None)


def explain(verdict: Verdict) -> dict:
    """JSON-ready trace of the verdict's evidence branch."""
    evidence = verdict.evidence
    if evidence is None:
        raise NoEvidenceError(
            "verdict has no evidence branch (universally true or "
            "existentially false)"
        )
    return {
        "kind": evidence.kind,
        "binding": dict(evidence.binding),
        "checkpoints": [node.to_json() for node in evidence.nodes],
        "marked_index": evidence.index,
        "marked_label": evidence.label,
    }


def render_explanation(verdict: Verdict) -> str:
    trace = explain(verdict)
    lines = [f"{trace['kind']} binding: " +
             " ".join(f"{k}={v}" for k, v in trace["binding"].items())]
    for i, node in enumerate(trace["checkpoints"]):
        mark = "  <-- decisive" if i == trace["marked_index"] else ""
        lines.append(
            f"  [{node['label']}] deck: {node['deck']:<16} "
            f"p={'T' if node['p'] else 'F'} "
            f"empty={'T' if node['empty'] else 'F'}{mark}"
        )
    return "\n".join(lines)
