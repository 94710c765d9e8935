"""Tests for trick programs, the path executor, and binding enumeration.

Expected values for the built-in routine were derived with an independent
step-by-step replay before being frozen here; the flag-counting checkers in
``trickcheck.oracle`` re-derive them continuously.
"""

import pytest

from trickcheck import (
    BindingError,
    Checkpoint,
    ChoiceKind,
    ChoiceRef,
    ChoiceVar,
    Drop,
    FinalCheck,
    IfMale,
    MalformedProgramError,
    MoveBlock,
    MoveFirstToEnd,
    ProgramError,
    Repeat,
    Rotate,
    SlotMode,
    TakeHidden,
    TrickProgram,
    action_word,
    builtin_shousuigongcishi,
    enumerate_bindings,
    iter_paths,
    operation_count,
    render_deck,
    run_path,
)

MALE_BINDING = {"n1": 2, "s2": 1, "native": 1, "s4": 1, "gender": 1}
FEMALE_BINDING = {"n1": 2, "s2": 1, "native": 1, "s4": 1, "gender": 2}


class TestBuiltinProgram:
    def test_choice_kinds(self, builtin):
        kinds = [c.kind for c in builtin.choices]
        assert kinds == [
            ChoiceKind.NAME_LENGTH, ChoiceKind.INSERT_SLOT,
            ChoiceKind.NATIVE_PLACE, ChoiceKind.INSERT_SLOT, ChoiceKind.GENDER,
        ]
        assert len(set(kinds)) == 4

    def test_final_check_is_last(self, builtin):
        assert isinstance(builtin.instructions[-1], FinalCheck)

    def test_canonical_initial_deck(self, builtin):
        assert render_deck(builtin.initial_deck) == "a b c d a b c d"

    def test_name_words_must_be_positive(self):
        with pytest.raises(ProgramError):
            builtin_shousuigongcishi(())
        with pytest.raises(ProgramError):
            builtin_shousuigongcishi((0,))


class TestRunPath:
    def test_male_example(self, builtin):
        record = run_path(builtin, MALE_BINDING)
        assert record.final_answer == "yes"
        assert record.hidden == "b"
        assert [c.p for c in record.checkpoints] == [True, True, False, False, True, True]
        assert [c.label for c in record.checkpoints] == [4, 5, 6, 7, 8, 9]

    def test_female_example(self, builtin):
        record = run_path(builtin, FEMALE_BINDING)
        assert record.final_answer == "yes"
        assert [c.p for c in record.checkpoints] == [True, True, False, True, True, True]

    def test_empty_is_terminal_only(self, builtin):
        record = run_path(builtin, FEMALE_BINDING)
        # the deck is already a single card at checkpoints 7 and 8, but only
        # the terminal checkpoint counts as the end of the observation
        assert [c.empty for c in record.checkpoints] == [False] * 5 + [True]
        assert len(record.checkpoints[-1].deck) == 1

    def test_determinism(self, builtin):
        assert run_path(builtin, MALE_BINDING) == run_path(builtin, MALE_BINDING)

    def test_incomplete_binding(self, builtin):
        with pytest.raises(BindingError, match="misses"):
            run_path(builtin, {"n1": 2})

    def test_out_of_domain_value(self, builtin):
        with pytest.raises(BindingError):
            run_path(builtin, {**MALE_BINDING, "n1": 9})

    def test_out_of_range_slot(self, builtin):
        with pytest.raises(BindingError, match="live domain"):
            run_path(builtin, {**MALE_BINDING, "s2": 5})

    def test_unknown_choice_name(self, builtin):
        with pytest.raises(BindingError, match="undeclared"):
            run_path(builtin, {**MALE_BINDING, "bogus": 1})

    def test_json_rendering(self, builtin):
        data = run_path(builtin, MALE_BINDING).to_json()
        assert data["binding"] == MALE_BINDING
        assert data["hidden"] == "b"
        assert data["final"] == "yes"
        assert data["checkpoints"][0] == {
            "label": 4, "deck": "d c a c d a b", "p": True, "empty": False,
        }
        assert data["actions"][:2] == ["rotate1", "rotate1"]


class TestActionWords:
    def test_word_prefix(self, builtin):
        word = action_word(run_path(builtin, MALE_BINDING))
        assert word[:4] == ["rotate1", "rotate1", "moveblock(3,1)", "takehidden"]

    def test_word_length_is_operation_count(self, builtin):
        record = run_path(builtin, MALE_BINDING)
        assert len(action_word(record)) == operation_count(record) == 23

    def test_gender_divergence_point(self, builtin):
        male = action_word(run_path(builtin, MALE_BINDING))
        female = action_word(run_path(builtin, FEMALE_BINDING))
        # same staging until the gender-dependent discard count
        divergence = next(i for i, (a, b) in enumerate(zip(male, female)) if a != b)
        assert divergence == 6  # rotate1 x2, moveblock, takehidden, moveblock, drop1
        assert male[divergence] == "movefirsttoend"
        assert female[divergence] == "drop1"


class TestEnumeration:
    def test_default_path_count(self, builtin):
        assert len(enumerate_bindings(builtin)) == 192

    def test_count_matches_choice_tree_product(self, builtin):
        # independent counter: walk the choice tree arithmetically
        expected = 0
        for _n1 in (2, 3):
            for _s2 in range(1, 5):  # 5 remaining cards -> 4 internal gaps
                for n2 in (1, 2, 3):
                    for _s4 in range(1, 7 - n2):  # 7-n2 remaining -> 6-n2 gaps
                        expected += 2  # gender
        assert expected == 2 * 4 * 12 * 2 == 192
        assert len(enumerate_bindings(builtin)) == expected

    def test_restricted_count(self):
        program = builtin_shousuigongcishi(name_words=(2,))
        bindings = enumerate_bindings(program, restrict={"gender": {1}})
        assert len(bindings) == 48

    def test_exclude_adjacent_count(self, builtin):
        bindings = enumerate_bindings(builtin, slot_mode=SlotMode.EXCLUDE_ADJACENT)
        assert len(bindings) == 48

    def test_singleton_restriction_leaves_slot4_free(self, builtin):
        bindings = enumerate_bindings(
            builtin, restrict={"n1": {2}, "s2": {1}, "native": {1}, "gender": {1}})
        assert len(bindings) == 5
        assert [b["s4"] for b in bindings] == [1, 2, 3, 4, 5]

    def test_zero_choice_program_has_one_branch(self):
        program = TrickProgram(
            ("a", "b", "a"), (),
            (TakeHidden(), Checkpoint(4), Drop(1), Checkpoint(9), FinalCheck()),
        )
        assert len(enumerate_bindings(program)) == 1

    def test_enumeration_order_is_lexicographic(self, builtin):
        bindings = enumerate_bindings(builtin)
        assert bindings[0] == {"n1": 2, "s2": 1, "native": 1, "s4": 1, "gender": 1}
        assert bindings[1] == {"n1": 2, "s2": 1, "native": 1, "s4": 1, "gender": 2}
        keys = [tuple(b.values()) for b in bindings]
        assert keys == sorted(keys)

    def test_every_enumerated_binding_replays(self, builtin):
        for record in iter_paths(builtin):
            assert run_path(builtin, record.binding) == record

    def test_restrict_unknown_name(self, builtin):
        with pytest.raises(BindingError):
            enumerate_bindings(builtin, restrict={"nope": {1}})


class TestBuiltinInvariants:
    def test_all_paths_end_matched(self, builtin):
        assert all(r.final_answer == "yes" for r in iter_paths(builtin))

    def test_partner_rides_last_after_hide(self, builtin):
        # observe the deck right after the hide by checkpointing there
        instrs = list(builtin.instructions)
        probe = TrickProgram(
            builtin.initial_deck, builtin.choices,
            tuple(instrs[:3]) + (Checkpoint(4),) + tuple(instrs[3:]),
        )
        for record in iter_paths(probe):
            assert record.checkpoints[0].p, record.binding

    def test_conservation_before_first_drop(self, builtin):
        initial = sorted(builtin.initial_deck)
        for record in iter_paths(builtin):
            at4 = record.checkpoints[0]
            assert sorted(at4.deck + (record.hidden,)) == initial

    def test_per_path_operations_bounded(self, builtin):
        assert all(operation_count(r) <= 40 for r in iter_paths(builtin))

    def test_six_checkpoints_per_path(self, builtin):
        for record in iter_paths(builtin):
            assert [c.label for c in record.checkpoints] == [4, 5, 6, 7, 8, 9]


class TestValidation:
    def test_missing_take_hidden(self):
        with pytest.raises(ProgramError, match="TakeHidden missing"):
            TrickProgram(("a", "b"), (), (FinalCheck(),))

    def test_final_check_not_last(self):
        with pytest.raises(ProgramError, match="final_check"):
            TrickProgram(("a", "b"), (), (TakeHidden(), FinalCheck(), Drop(1)))

    def test_checkpoint_before_take_hidden(self):
        with pytest.raises(ProgramError, match="checkpoint before"):
            TrickProgram(("a", "b"), (),
                         (Checkpoint(4), TakeHidden(), FinalCheck()))

    def test_undeclared_choice(self):
        with pytest.raises(ProgramError, match="undeclared"):
            TrickProgram(("a", "b"), (),
                         (Rotate(ChoiceRef("n1")), TakeHidden(), FinalCheck()))

    def test_slot_choice_outside_slot_position(self):
        with pytest.raises(ProgramError, match="slot"):
            TrickProgram(("a", "b"), (ChoiceVar("s", None),),
                         (Rotate(ChoiceRef("s")), TakeHidden(), FinalCheck()))

    def test_unconsumed_slot_choice(self):
        with pytest.raises(ProgramError, match="never consumed"):
            TrickProgram(("a", "b"), (ChoiceVar("s", None),),
                         (TakeHidden(), FinalCheck()))

    def test_if_male_needs_gender_choice(self):
        with pytest.raises(ProgramError, match="gender"):
            TrickProgram(("a", "b", "c"), (),
                         (TakeHidden(), IfMale((Drop(1),)), FinalCheck()))

    def test_gender_domain_bounded(self):
        with pytest.raises(ProgramError, match="gender"):
            TrickProgram(("a", "b"), (ChoiceVar("gender", (1, 2, 3)),),
                         (TakeHidden(), FinalCheck()))

    def test_duplicate_choice(self):
        with pytest.raises(ProgramError, match="twice"):
            TrickProgram(("a", "b"), (ChoiceVar("x", (1,)), ChoiceVar("x", (2,))),
                         (TakeHidden(), FinalCheck()))

    def test_checkpoint_label_range(self):
        with pytest.raises(ProgramError, match="label"):
            TrickProgram(("a", "b"), (),
                         (TakeHidden(), Checkpoint(3), FinalCheck()))

    def test_take_hidden_inside_block(self):
        with pytest.raises(ProgramError, match="take_hidden"):
            TrickProgram(("a", "b"), (),
                         (Repeat(2, (TakeHidden(),)), TakeHidden(), FinalCheck()))

    def test_empty_domain(self):
        with pytest.raises(ProgramError, match="empty domain"):
            TrickProgram(("a", "b"), (ChoiceVar("x", ()),),
                         (TakeHidden(), FinalCheck()))


class TestRuntimeGuards:
    def test_drop_emptying_deck_is_malformed(self):
        program = TrickProgram(("a", "b"), (),
                               (TakeHidden(), Drop(1), FinalCheck()))
        with pytest.raises(MalformedProgramError, match="emptied"):
            run_path(program, {})

    def test_block_too_large_at_runtime(self):
        program = TrickProgram(
            ("a", "b", "c"), (),
            (TakeHidden(), MoveBlock(2, 1), FinalCheck()))
        with pytest.raises(MalformedProgramError):
            run_path(program, {})

    def test_short_deck_means_mismatch_not_error(self):
        # two cards at the final comparison: answer is "no", not a crash
        program = TrickProgram(("a", "b", "a"), (), (TakeHidden(), FinalCheck()))
        assert run_path(program, {}).final_answer == "no"


class TestSlotModes:
    def test_exclude_adjacent_narrows_domains(self, builtin):
        default = enumerate_bindings(builtin)
        strict = enumerate_bindings(builtin, slot_mode=SlotMode.EXCLUDE_ADJACENT)
        assert {b["s2"] for b in default} == {1, 2, 3, 4}
        assert {b["s2"] for b in strict} == {2, 3}

    def test_slot_validity_depends_on_mode(self, builtin):
        binding = {**MALE_BINDING, "s2": 1}
        run_path(builtin, binding)  # fine under internal gaps
        with pytest.raises(BindingError):
            run_path(builtin, binding, slot_mode=SlotMode.EXCLUDE_ADJACENT)

    def test_trick_still_works_under_strict_gaps(self, builtin):
        records = list(iter_paths(builtin, slot_mode=SlotMode.EXCLUDE_ADJACENT))
        assert len(records) == 48
        assert all(r.final_answer == "yes" for r in records)
