"""Tests for the .trick text format: parsing, validation, round-trip."""

import random

import pytest

from generators import random_program
from trickcheck import (
    ParseError,
    ProgramError,
    ScriptSource,
    builtin_shousuigongcishi,
    parse,
    parse_file,
    pretty_print,
)


class TestShippedScript:
    def test_equals_builtin_constructor(self, shipped_script_path):
        assert parse_file(shipped_script_path) == builtin_shousuigongcishi()

    def test_pretty_print_starts_with_deck(self, builtin):
        first_line = pretty_print(builtin).text.splitlines()[0]
        assert first_line == "deck a b c d a b c d"


class TestRoundTrip:
    def test_builtin(self, builtin):
        assert parse(pretty_print(builtin)) == builtin

    def test_generated_programs(self):
        rng = random.Random(2024)
        for _ in range(100):
            program = random_program(rng)
            assert parse(pretty_print(program)) == program

    def test_accepts_plain_strings(self):
        program = parse("deck a b\ntake_hidden\nfinal_check\n")
        assert len(program.initial_deck) == 2


class TestSyntaxErrors:
    def test_unknown_keyword_position(self):
        source = "deck a b c d\nrotat 2\ntake_hidden\nfinal_check\n"
        with pytest.raises(ParseError) as err:
            parse(source)
        assert err.value.line == 2
        assert err.value.column == 1
        assert err.value.expected

    def test_bad_character(self):
        with pytest.raises(ParseError, match="unexpected character"):
            parse("deck a b\ntake_hidden\ndrop 1;\nfinal_check\n")

    def test_unclosed_block(self):
        with pytest.raises(ParseError, match="never closed"):
            parse("deck a b\ntake_hidden\nrepeat 2 {\nmove_first_to_end\nfinal_check\n")

    def test_missing_domain_value(self):
        with pytest.raises(ParseError):
            parse("choice x in {}\ndeck a b\ntake_hidden\nfinal_check\n")

    def test_declaration_inside_block(self):
        with pytest.raises(ParseError, match="not allowed inside"):
            parse("deck a b c\ntake_hidden\nrepeat 2 { deck a b }\nfinal_check\n")

    def test_deck_twice(self):
        with pytest.raises(ParseError, match="twice"):
            parse("deck a b\ndeck c d\ntake_hidden\nfinal_check\n")

    def test_undeclared_reference_points_at_use(self):
        source = "deck a b c d\nrotate n7\ntake_hidden\nfinal_check\n"
        with pytest.raises(ParseError) as err:
            parse(source)
        assert err.value.line == 2

    def test_empty_deck_declaration(self):
        with pytest.raises(ParseError, match="at least one card"):
            parse("deck\ntake_hidden\nfinal_check\n")

    def test_comments_and_blank_lines_ignored(self):
        program = parse("# a trick\n\ndeck a b  # two cards\ntake_hidden\nfinal_check\n")
        assert program.initial_deck == ("a", "b")


class TestValidationErrors:
    def test_take_hidden_missing(self):
        with pytest.raises(ProgramError, match="TakeHidden missing"):
            parse("deck a b\nfinal_check\n")

    def test_final_check_not_last(self):
        with pytest.raises(ProgramError, match="final_check"):
            parse("deck a b\ntake_hidden\nfinal_check\ndrop 1\n")

    def test_default_deck_when_omitted(self):
        program = parse("take_hidden\nfinal_check\n")
        assert program.initial_deck == ("a", "b", "c", "d", "a", "b", "c", "d")


class TestCorruptionPositions:
    def test_single_token_corruption_reported_nearby(self, builtin):
        """Replacing any one token with garbage yields an error within one
        token of the corruption. Declaration-name tokens are skipped: renaming
        a declaration relocates the fault to the first orphaned reference."""
        source = pretty_print(builtin).text
        lines = source.splitlines()
        declared = {c.name for c in builtin.choices}
        tokens = []
        for lineno, line in enumerate(lines, start=1):
            col = 0
            for piece in line.split():
                col = line.index(piece, col)
                tokens.append((lineno, col + 1, piece))
                col += len(piece)
        assert len(tokens) > 50
        for lineno, col, piece in tokens:
            if piece in declared and lines[lineno - 1].startswith("choice"):
                continue
            line = lines[lineno - 1]
            corrupted = line[:col - 1] + "zzzz" + line[col - 1 + len(piece):]
            text = "\n".join(lines[:lineno - 1] + [corrupted] + lines[lineno:])
            with pytest.raises((ParseError, ProgramError)) as err:
                parse(text)
            if isinstance(err.value, ParseError):
                assert abs(err.value.line - lineno) <= 1, (lineno, col, piece)

    def test_origin_kept(self):
        source = ScriptSource("deck a b\ntake_hidden\nfinal_check\n", origin="x.trick")
        assert parse(source).initial_deck == ("a", "b")
