"""Card-sequence primitives for the torn-card routine.

A deck is an immutable tuple of half-card symbols. The four symbols
``a b c d`` name the four torn pairs; both halves of a pair carry the same
symbol, so "the halves match" is plain symbol equality. Every rearrangement
returns a new tuple, which lets state-space nodes share decks freely.
"""

from __future__ import annotations

SYMBOLS = ("a", "b", "c", "d")
CANONICAL_DECK = ("a", "b", "c", "d", "a", "b", "c", "d")

Deck = tuple[str, ...]


class DeckError(ValueError):
    """A rearrangement was applied outside its precondition."""


def validate_deck(cards) -> Deck:
    deck = tuple(cards)
    for card in deck:
        if card not in SYMBOLS:
            raise DeckError(f"unknown card symbol {card!r}; expected one of {SYMBOLS}")
    return deck


def render_deck(deck: Deck) -> str:
    """Canonical text form: symbols separated by single spaces."""
    return " ".join(deck)


def parse_deck(text: str) -> Deck:
    return validate_deck(text.split())


def rotate_left(deck: Deck, k: int) -> Deck:
    """Cyclically shift ``deck`` left by ``k`` positions.

    ``k`` may exceed the length (effective shift is ``k mod len``); rotating
    the empty deck is the empty deck.
    """
    if k < 0:
        raise DeckError("rotation count must be non-negative")
    if not deck:
        return deck
    k %= len(deck)
    return deck[k:] + deck[:k]


def tail(deck: Deck) -> Deck:
    """The deck without its first card."""
    if not deck:
        raise DeckError("tail of empty deck")
    return deck[1:]


def internal_slot_count(remaining_len: int) -> int:
    """Number of gaps strictly between ``remaining_len`` cards."""
    return max(remaining_len - 1, 0)


def move_block_internal(deck: Deck, block_len: int, slot: int) -> Deck:
    """Move the first ``block_len`` cards, in order, into an internal gap.

    The remaining cards keep their order; ``slot`` is 1-based and means
    "insert the block after the slot-th remaining card". Internal gaps only:
    the block never ends up leading or trailing the result.
    """
    if block_len < 1:
        raise DeckError("block must contain at least one card")
    if block_len >= len(deck):
        raise DeckError(
            f"block of {block_len} cannot be moved within a deck of {len(deck)}"
        )
    rest = deck[block_len:]
    if not 1 <= slot <= internal_slot_count(len(rest)):
        raise DeckError(
            f"slot {slot} out of range; {len(rest)} remaining cards offer "
            f"slots 1..{internal_slot_count(len(rest))}"
        )
    return rest[:slot] + deck[:block_len] + rest[slot:]


def move_first_to_end(deck: Deck) -> Deck:
    """Move the first card to the end; identical to a left rotation by one."""
    if not deck:
        raise DeckError("cannot move a card in an empty deck")
    return rotate_left(deck, 1)
