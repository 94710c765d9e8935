"""Text format for trick scripts.

Grammar (recursive descent, one-token lookahead)::

    script  := stmt*
    stmt    := "deck" symbol+
             | "choice" ident "in" "{" ( "internal" | int ("," int)* ) "}"
             | "rotate" expr
             | "move_block" expr "slot" expr
             | "take_hidden"
             | "drop" expr
             | "move_first_to_end"
             | "repeat" int "{" body "}"
             | "if_male" "{" body "}"
             | "checkpoint" int
             | "final_check"
    body    := instruction statements only (no deck/choice declarations)
    expr    := int | ident

Keywords are case sensitive, ``#`` starts a comment, whitespace is free-form.
The reserved domain ``{internal}`` marks an insertion-slot choice whose legal
values are worked out against the live deck at the step that consumes it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .deck import SYMBOLS
from .model import (
    Checkpoint,
    ChoiceRef,
    ChoiceVar,
    Drop,
    FinalCheck,
    IfMale,
    MoveBlock,
    MoveFirstToEnd,
    Repeat,
    Rotate,
    TakeHidden,
    TrickProgram,
)


@dataclass(frozen=True)
class ScriptSource:
    text: str
    origin: str = "<inline>"


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str,
                 expected: list[str] | None = None):
        self.line = line
        self.column = column
        self.message = message
        self.expected = expected or []
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "int" | "punct" | "eof"
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|\d+|[{},]")

_STMT_KEYWORDS = (
    "deck", "choice", "rotate", "move_block", "take_hidden", "drop",
    "move_first_to_end", "repeat", "if_male", "checkpoint", "final_check",
)
_RESERVED = set(_STMT_KEYWORDS) | {"in", "internal", "slot"}


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            match = _TOKEN_RE.match(line, pos)
            if match is None:
                raise ParseError(lineno, pos + 1,
                                 f"unexpected character {line[pos]!r}")
            word = match.group()
            kind = ("int" if word[0].isdigit()
                    else "punct" if word in "{}," else "ident")
            tokens.append(_Token(kind, word, lineno, pos + 1))
            pos = match.end()
    last_line = text.count("\n") + 1
    tokens.append(_Token("eof", "", last_line, 1))
    return tokens


class _Parser:
    def __init__(self, source: ScriptSource):
        self.tokens = _tokenize(source.text)
        self.pos = 0
        self.refs: list[_Token] = []  # choice uses, checked against declarations

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def fail(self, token: _Token, message: str, expected=None):
        raise ParseError(token.line, token.column, message, expected)

    def expect_int(self, what: str) -> int:
        token = self.next()
        if token.kind != "int":
            self.fail(token, f"found {token.text!r} where {what} was needed",
                      ["integer"])
        return int(token.text)

    def expect_word(self, word: str) -> None:
        token = self.next()
        if token.text != word:
            self.fail(token, f"found {token.text!r}", [repr(word)])

    def expect_ident(self, what: str) -> str:
        token = self.next()
        if token.kind != "ident" or token.text in _RESERVED:
            self.fail(token, f"found {token.text!r} where {what} was needed",
                      ["identifier"])
        return token.text

    def parse_expr(self):
        token = self.next()
        if token.kind == "int":
            return int(token.text)
        if token.kind == "ident" and token.text not in _RESERVED:
            self.refs.append(token)
            return ChoiceRef(token.text)
        self.fail(token, f"found {token.text!r}", ["integer", "choice name"])

    def parse_script(self) -> TrickProgram:
        deck: tuple[str, ...] | None = None
        choices: list[ChoiceVar] = []
        instructions = []
        while self.peek().kind != "eof":
            token = self.peek()
            if token.text == "deck":
                if deck is not None:
                    self.fail(token, "deck declared twice")
                deck = self.parse_deck()
            elif token.text == "choice":
                choices.append(self.parse_choice())
            else:
                instructions.append(self.parse_instruction(top=True))
        declared = {var.name for var in choices}
        for token in self.refs:
            if token.text not in declared:
                self.fail(token, f"choice {token.text!r} is never declared",
                          ["a declared choice name"])
        if deck is None:
            deck = ("a", "b", "c", "d", "a", "b", "c", "d")
        return TrickProgram(deck, tuple(choices), tuple(instructions))

    def parse_deck(self) -> tuple[str, ...]:
        self.next()
        cards = []
        while self.peek().kind == "ident" and self.peek().text in SYMBOLS:
            cards.append(self.next().text)
        if not cards:
            self.fail(self.peek(), "deck needs at least one card",
                      [f"one of {'/'.join(SYMBOLS)}"])
        return tuple(cards)

    def parse_choice(self) -> ChoiceVar:
        self.next()
        name = self.expect_ident("a choice name")
        self.expect_word("in")
        self.expect_word("{")
        if self.peek().text == "internal":
            self.next()
            domain = None
        else:
            values = [self.expect_int("a domain value")]
            while self.peek().text == ",":
                self.next()
                values.append(self.expect_int("a domain value"))
            domain = tuple(values)
        self.expect_word("}")
        return ChoiceVar(name, domain)

    def parse_instruction(self, top: bool):
        token = self.next()
        word = token.text
        if word == "rotate":
            return Rotate(self.parse_expr())
        if word == "move_block":
            block_len = self.parse_expr()
            self.expect_word("slot")
            return MoveBlock(block_len, self.parse_expr())
        if word == "take_hidden":
            return TakeHidden()
        if word == "drop":
            return Drop(self.parse_expr())
        if word == "move_first_to_end":
            return MoveFirstToEnd()
        if word == "repeat":
            times = self.expect_int("a repeat count")
            return Repeat(times, self.parse_body())
        if word == "if_male":
            return IfMale(self.parse_body())
        if word == "checkpoint":
            return Checkpoint(self.expect_int("a checkpoint label"))
        if word == "final_check":
            return FinalCheck()
        if word in ("deck", "choice") and not top:
            self.fail(token, f"{word} declarations are not allowed inside a block")
        self.fail(token, f"unknown statement {word!r}",
                  ["one of " + ", ".join(_STMT_KEYWORDS)])

    def parse_body(self) -> tuple:
        self.expect_word("{")
        body = []
        while self.peek().text != "}":
            if self.peek().kind == "eof":
                self.fail(self.peek(), "block never closed", ["'}'"])
            body.append(self.parse_instruction(top=False))
        self.next()
        return tuple(body)


def parse(source: ScriptSource | str) -> TrickProgram:
    """Compile script text to a validated program.

    Raises :class:`ParseError` on the first syntax error and
    :class:`trickcheck.model.ProgramError` when the text parses but breaks a
    program invariant.
    """
    if isinstance(source, str):
        source = ScriptSource(source)
    return _Parser(source).parse_script()


def parse_file(path) -> TrickProgram:
    with open(path, encoding="utf-8") as handle:
        return parse(ScriptSource(handle.read(), origin=str(path)))


def _render_expr(expr) -> str:
    return expr.name if isinstance(expr, ChoiceRef) else str(expr)


def _render_instruction(instr, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(instr, Rotate):
        lines.append(f"{pad}rotate {_render_expr(instr.count)}")
    elif isinstance(instr, MoveBlock):
        lines.append(f"{pad}move_block {_render_expr(instr.block_len)} "
                     f"slot {_render_expr(instr.slot)}")
    elif isinstance(instr, TakeHidden):
        lines.append(f"{pad}take_hidden")
    elif isinstance(instr, Drop):
        lines.append(f"{pad}drop {_render_expr(instr.count)}")
    elif isinstance(instr, MoveFirstToEnd):
        lines.append(f"{pad}move_first_to_end")
    elif isinstance(instr, Repeat):
        lines.append(f"{pad}repeat {instr.times} {{")
        for child in instr.body:
            _render_instruction(child, indent + 1, lines)
        lines.append(f"{pad}}}")
    elif isinstance(instr, IfMale):
        lines.append(f"{pad}if_male {{")
        for child in instr.body:
            _render_instruction(child, indent + 1, lines)
        lines.append(f"{pad}}}")
    elif isinstance(instr, Checkpoint):
        lines.append(f"{pad}checkpoint {instr.label}")
    elif isinstance(instr, FinalCheck):
        lines.append(f"{pad}final_check")


def pretty_print(program: TrickProgram) -> ScriptSource:
    """Canonical text for a program; parsing it back gives an equal program."""
    lines = [f"deck {' '.join(program.initial_deck)}"]
    for var in program.choices:
        domain = ("internal" if var.domain is None
                  else ", ".join(str(v) for v in var.domain))
        lines.append(f"choice {var.name} in {{{domain}}}")
    for instr in program.instructions:
        _render_instruction(instr, 0, lines)
    return ScriptSource("\n".join(lines) + "\n", origin="<generated>")
