"""Flag-counting reference checkers, independent of the tree evaluator.

Each checker replays every path of a program with its own tiny interpreter
(plain tuple slicing, no shared executor) and tallies flags the way the
routine's published verification recipe does: run all ``m`` choice
combinations, test "last card equals the hidden card" at each checkpoint,
and decide the property from the final counts. They are deliberately naive
— single threaded, no early exit — because their whole job is to be an
oracle the tree-based checker is validated against.

The transcribed recipe has three evident faults, repaired here and noted
inline where they apply:

* the eventually-checks (AF, EF) set a single shared flag to 1 instead of
  counting per path, which cannot distinguish "every path" from "some path";
  the AF tally therefore counts flagged paths and compares against ``m``,
  which is the only reading under which its final ``flag = m`` test means
  anything;
* both eventually-checks also increment the flag once more after the path
  loop, which would make the EF verdict unconditionally true; the increment
  is dropped;
* the globally-on-some-path check bumps one extra, never-read counter after
  the loop; ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Checkpoint,
    ChoiceRef,
    Drop,
    FinalCheck,
    IfMale,
    MoveBlock,
    MoveFirstToEnd,
    Repeat,
    Restrict,
    Rotate,
    SlotMode,
    TakeHidden,
    TrickProgram,
)


class OracleError(ValueError):
    """The checkers are only defined for programs with at least one path."""


@dataclass(frozen=True)
class OraclePath:
    """One replayed path: checkpoint outcomes, final comparison, work done."""

    binding: dict
    checks: tuple[bool, ...]
    final: bool
    ops: int


@dataclass(frozen=True)
class OracleReport:
    formula_name: str
    m: int
    per_path: tuple[int, ...]
    verdict: bool
    ops_total: int
    flag_total: int | None = None  # correctness and globally-everywhere tallies
    flag: int | None = None        # eventually tallies
    flag2: int | None = None       # globally-on-some-path bit

    def to_json(self) -> dict:
        data: dict = {"formula": self.formula_name, "m": self.m}
        if self.flag_total is not None:
            data["flag_total"] = self.flag_total
        if self.flag is not None:
            data["flag"] = self.flag
        if self.flag2 is not None:
            data["flag2"] = self.flag2
        data["verdict"] = self.verdict
        data["per_path"] = list(self.per_path)
        data["ops_total"] = self.ops_total
        return data


def _slot_range(remaining_len: int, mode: SlotMode) -> range:
    if mode is SlotMode.EXCLUDE_ADJACENT:
        return range(2, max(remaining_len - 1, 2))
    return range(1, max(remaining_len, 1))


def walk_paths(program: TrickProgram, *,
               slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
               restrict: Restrict | None = None) -> list[OraclePath]:
    """Replay every choice combination with a self-contained interpreter."""

    out: list[OraclePath] = []
    domains = {c.name: c.domain for c in program.choices}

    def allowed(name: str, candidates) -> list[int]:
        if restrict and name in restrict:
            keep = set(restrict[name])
            return [v for v in candidates if v in keep]
        return list(candidates)

    def go(todo: tuple, deck: tuple, hidden, env: dict,
           checks: tuple, final, ops: int) -> None:
        if not todo:
            out.append(OraclePath(env, checks, bool(final), ops))
            return
        instr, rest = todo[0], todo[1:]

        def need(expr) -> int | None:
            if isinstance(expr, int):
                return expr
            return env.get(expr.name)

        def branch(name: str, candidates) -> None:
            for value in allowed(name, candidates):
                go(todo, deck, hidden, {**env, name: value}, checks, final, ops)

        if isinstance(instr, Rotate):
            count = need(instr.count)
            if count is None:
                branch(instr.count.name, domains[instr.count.name])
                return
            for _ in range(count):
                deck = deck[1:] + deck[:1]
            go(rest, deck, hidden, env, checks, final, ops + count)
        elif isinstance(instr, MoveBlock):
            block_len = need(instr.block_len)
            if block_len is None:
                branch(instr.block_len.name, domains[instr.block_len.name])
                return
            slot = need(instr.slot)
            if slot is None:
                live = _slot_range(len(deck) - block_len, slot_mode)
                declared = domains[instr.slot.name]
                candidates = live if declared is None else [
                    v for v in declared if v in live
                ]
                branch(instr.slot.name, candidates)
                return
            block, remaining = deck[:block_len], deck[block_len:]
            if slot not in _slot_range(len(remaining), slot_mode):
                raise OracleError(f"slot {slot} not available here")
            deck = remaining[:slot] + block + remaining[slot:]
            go(rest, deck, hidden, env, checks, final, ops + 1)
        elif isinstance(instr, TakeHidden):
            if len(deck) < 2:
                raise OracleError("hiding a card would leave nothing in hand")
            go(rest, deck[1:], deck[0], env, checks, final, ops + 1)
        elif isinstance(instr, Drop):
            count = need(instr.count)
            if count is None:
                branch(instr.count.name, domains[instr.count.name])
                return
            if count >= len(deck):
                raise OracleError("dropping would leave nothing in hand")
            go(rest, deck[count:], hidden, env, checks, final, ops + count)
        elif isinstance(instr, MoveFirstToEnd):
            go(rest, deck[1:] + deck[:1], hidden, env, checks, final, ops + 1)
        elif isinstance(instr, Repeat):
            go(instr.body * instr.times + rest, deck, hidden, env,
               checks, final, ops)
        elif isinstance(instr, IfMale):
            gender_name = program.gender_choice().name
            gender = env.get(gender_name)
            if gender is None:
                branch(gender_name, domains[gender_name])
                return
            body = instr.body if gender == 1 else ()
            go(body + rest, deck, hidden, env, checks, final, ops)
        elif isinstance(instr, Checkpoint):
            go(rest, deck, hidden, env, checks + (deck[-1] == hidden,),
               final, ops)
        elif isinstance(instr, FinalCheck):
            matched = len(deck) == 1 and deck[0] == hidden
            go(rest, deck, hidden, env, checks, matched, ops)
        else:
            raise TypeError(f"not an instruction: {instr!r}")

    go(tuple(program.instructions), program.initial_deck, None, {}, (), None, 0)

    # bind any choice a path never consumed, so every binding is complete
    complete: list[OraclePath] = []
    for path in out:
        unconsumed = [c for c in program.choices if c.name not in path.binding]
        if not unconsumed:
            complete.append(path)
            continue
        stack = [dict(path.binding)]
        for var in unconsumed:
            if var.domain is None:
                raise OracleError(
                    f"slot choice {var.name!r} never consumed; domain unknown"
                )
            stack = [{**env, var.name: v}
                     for env in stack for v in allowed(var.name, var.domain)]
        for env in stack:
            complete.append(OraclePath(env, path.checks, path.final, path.ops))
    return complete


def _paths_or_fail(program, slot_mode, restrict) -> list[OraclePath]:
    paths = walk_paths(program, slot_mode=slot_mode, restrict=restrict)
    if not paths:
        raise OracleError("no paths: every checker needs at least one binding")
    return paths


def check_af_p_and_empty(program: TrickProgram, *,
                         slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
                         restrict: Restrict | None = None) -> OracleReport:
    """Trick correctness: the final lone card matches the hidden one on
    every path; one flag increment per matching final comparison."""
    paths = _paths_or_fail(program, slot_mode, restrict)
    per = tuple(1 if path.final else 0 for path in paths)
    flag_total = sum(per)
    return OracleReport(
        formula_name="AF_p_and_empty", m=len(paths), per_path=per,
        verdict=flag_total == len(paths), flag_total=flag_total,
        ops_total=sum(p.ops for p in paths),
    )


def check_af_p(program: TrickProgram, *,
               slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
               restrict: Restrict | None = None) -> OracleReport:
    """Eventually matched on every path.

    Repaired tally: the flag counts paths with at least one matching
    checkpoint, so the final test against ``m`` actually expresses "every
    path"; the transcribed recipe set one shared 0/1 flag instead.
    """
    paths = _paths_or_fail(program, slot_mode, restrict)
    per = tuple(1 if any(path.checks) else 0 for path in paths)
    flag = sum(per)
    return OracleReport(
        formula_name="AFp", m=len(paths), per_path=per,
        verdict=flag == len(paths), flag=flag,
        ops_total=sum(p.ops for p in paths),
    )


def check_ag_p(program: TrickProgram, *,
               slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
               restrict: Restrict | None = None) -> OracleReport:
    """Matched at every checkpoint of every path: the flag accumulates one
    per matching checkpoint and must reach the total checkpoint count
    (six per path for the built-in routine)."""
    paths = _paths_or_fail(program, slot_mode, restrict)
    per = tuple(sum(path.checks) for path in paths)
    flag_total = sum(per)
    expected = sum(len(path.checks) for path in paths)
    return OracleReport(
        formula_name="AGp", m=len(paths), per_path=per,
        verdict=flag_total == expected, flag_total=flag_total,
        ops_total=sum(p.ops for p in paths),
    )


def check_ef_p(program: TrickProgram, *,
               slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
               restrict: Restrict | None = None) -> OracleReport:
    """Matched at some checkpoint of some path. The shared 0/1 flag is the
    right tally here; the stray post-loop increment (which would force the
    verdict true) is dropped."""
    paths = _paths_or_fail(program, slot_mode, restrict)
    per = tuple(1 if any(path.checks) else 0 for path in paths)
    flag = 1 if any(per) else 0
    return OracleReport(
        formula_name="EFp", m=len(paths), per_path=per,
        verdict=flag > 0, flag=flag,
        ops_total=sum(p.ops for p in paths),
    )


def check_eg_p(program: TrickProgram, *,
               slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
               restrict: Restrict | None = None) -> OracleReport:
    """Matched at every checkpoint of some path: per-path counter, and a
    second flag set once any path's counter reaches that path's checkpoint
    count (six for the built-in routine)."""
    paths = _paths_or_fail(program, slot_mode, restrict)
    per = tuple(sum(path.checks) for path in paths)
    flag2 = 1 if any(
        sum(path.checks) == len(path.checks) for path in paths
    ) else 0
    return OracleReport(
        formula_name="EGp", m=len(paths), per_path=per,
        verdict=flag2 == 1, flag2=flag2,
        ops_total=sum(p.ops for p in paths),
    )


ALL_CHECKS = (
    ("AF_p_and_empty", check_af_p_and_empty, "AF (p & empty)"),
    ("AFp", check_af_p, "AF p"),
    ("AGp", check_ag_p, "AG p"),
    ("EFp", check_ef_p, "EF p"),
    ("EGp", check_eg_p, "EG p"),
)


def agreement_matrix(program: TrickProgram, *,
                     slot_mode: SlotMode = SlotMode.INTERNAL_GAPS,
                     restrict: Restrict | None = None,
                     evaluator=None) -> list[dict]:
    """Cross-validate all five checkers against the tree evaluator.

    ``evaluator`` maps (program, formula text) to a boolean and defaults to
    the tree checker; injectable so the disagreement path is testable.
    """
    if evaluator is None:
        from .ctl import build_tree, eval_formula, parse_formula

        tree = build_tree(program, slot_mode=slot_mode, restrict=restrict)

        def evaluator(prog, formula_text):
            return eval_formula(tree, parse_formula(formula_text)).value

    rows = []
    for name, checker, formula_text in ALL_CHECKS:
        report = checker(program, slot_mode=slot_mode, restrict=restrict)
        tree_verdict = evaluator(program, formula_text)
        rows.append({
            "formula": name,
            "oracle": report.verdict,
            "checker": bool(tree_verdict),
            "agree": report.verdict == bool(tree_verdict),
            "report": report,
        })
    return rows
