"""Binary metrical trees built by recursive equal-duration splitting.

Every internal node splits its span into two halves of equal duration; an
event straddling the midpoint is divided, its tail marked as a tied
continuation (rests split into two rests). A span containing exactly one
event becomes a leaf, so leaves hold single events and the tree is strict
binary (leaf count = internal count + 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .score import NoteEvent, NoteKind, RhythmSequence

__all__ = [
    "RhythmTree",
    "TreeError",
    "EmptySequenceError",
    "NonPowerOfTwoError",
    "pad_to_power_of_two",
    "build_tree",
    "leaf_events",
    "merge_ties",
    "coalesce_rests",
]


class TreeError(Exception):
    """Base class for tree-construction errors."""


class EmptySequenceError(TreeError):
    """The sequence holds no events."""


class NonPowerOfTwoError(TreeError):
    """Total duration in grid units is not a power of two; pad first."""


@dataclass(frozen=True)
class RhythmTree:
    """A node spanning `duration`; either a leaf holding one event or a split.

    Internal nodes have two children of exactly half the parent duration.
    """

    duration: Fraction
    event: NoteEvent | None = None
    left: "RhythmTree | None" = None
    right: "RhythmTree | None" = None

    def __post_init__(self):
        if self.event is not None:
            if self.left is not None or self.right is not None:
                raise ValueError("leaf cannot have children")
            if self.event.duration != self.duration:
                raise ValueError("leaf duration must equal its event duration")
        else:
            if self.left is None or self.right is None:
                raise ValueError("internal node needs both children")
            half = self.duration / 2
            if self.left.duration != half or self.right.duration != half:
                raise ValueError("children must each span half the parent duration")

    @staticmethod
    def make_leaf(event: NoteEvent) -> "RhythmTree":
        return RhythmTree(event.duration, event=event)

    @staticmethod
    def make_internal(left: "RhythmTree", right: "RhythmTree") -> "RhythmTree":
        return RhythmTree(left.duration + right.duration, left=left, right=right)

    @property
    def is_leaf(self) -> bool:
        return self.event is not None

    def node_count(self) -> int:
        if self.is_leaf:
            return 1
        return 1 + self.left.node_count() + self.right.node_count()

    def leaf_count(self) -> int:
        if self.is_leaf:
            return 1
        return self.left.leaf_count() + self.right.leaf_count()

    def internal_count(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + self.left.internal_count() + self.right.internal_count()

    def height(self) -> int:
        """Edges on the longest root-to-leaf path; 0 for a lone leaf."""
        if self.is_leaf:
            return 0
        return 1 + max(self.left.height(), self.right.height())


def pad_to_power_of_two(seq: RhythmSequence) -> RhythmSequence:
    """Append one trailing rest so the total grid-unit count is a power of two.

    No-op when the total is already a power of two. The input must be
    quantized (integer grid units).
    """
    if not seq.events:
        raise EmptySequenceError("cannot pad an empty sequence")
    units = seq.total / seq.grid
    if units.denominator != 1:
        raise NonPowerOfTwoError(
            f"total duration {seq.total} is not a whole number of grid units"
        )
    n = units.numerator
    target = 1
    while target < n:
        target *= 2
    if target == n:
        return seq
    pad = NoteEvent((target - n) * seq.grid, NoteKind.REST)
    return RhythmSequence(seq.events + (pad,), seq.grid)


# kind of the trailing portion of a divided event: sustained sound becomes a
# tie, silence stays silence
_TAIL_KIND = {
    NoteKind.SOUNDED: NoteKind.TIED,
    NoteKind.TIED: NoteKind.TIED,
    NoteKind.REST: NoteKind.REST,
}


def _split_events(events, total):
    """Split an event list at total/2, dividing any straddling event."""
    half = total / 2
    elapsed = Fraction(0)
    left: list[NoteEvent] = []
    right: list[NoteEvent] = []
    for event in events:
        end = elapsed + event.duration
        if end <= half:
            left.append(event)
        elif elapsed >= half:
            right.append(event)
        else:
            head = half - elapsed
            tail = end - half
            left.append(NoteEvent(head, event.kind))
            right.append(NoteEvent(tail, _TAIL_KIND[event.kind]))
        elapsed = end
    return left, right


def build_tree(seq: RhythmSequence) -> RhythmTree:
    """Build the metrical tree for a quantized, power-of-two-length sequence.

    Raises :class:`NonPowerOfTwoError` when the caller still needs to apply
    :func:`pad_to_power_of_two`.
    """
    if not seq.events:
        raise EmptySequenceError("cannot build a tree from an empty sequence")
    units = seq.total / seq.grid
    if units.denominator != 1 or units.numerator & (units.numerator - 1):
        raise NonPowerOfTwoError(
            f"total of {units} grid units is not a power of two; pad first"
        )

    def recurse(events, total):
        if len(events) == 1:
            return RhythmTree.make_leaf(events[0])
        left, right = _split_events(events, total)
        half = total / 2
        return RhythmTree(total, left=recurse(left, half), right=recurse(right, half))

    return recurse(list(seq.events), seq.total)


def leaf_events(tree: RhythmTree) -> list[NoteEvent]:
    """Left-to-right sequence of leaf events."""
    out: list[NoteEvent] = []

    def visit(node):
        if node.is_leaf:
            out.append(node.event)
        else:
            visit(node.left)
            visit(node.right)

    visit(tree)
    return out


def merge_ties(events) -> list[NoteEvent]:
    """Fold every tied continuation into its predecessor.

    Inverse of the note splitting performed by :func:`build_tree`. Rests are
    split without tie marking, so full reconstruction of an input sequence
    compares ``merge_ties`` + :func:`coalesce_rests` of the leaf events
    against the same normalization of the input.
    """
    merged: list[NoteEvent] = []
    for event in events:
        if event.kind is NoteKind.TIED:
            if not merged:
                raise ValueError("tied continuation with no predecessor")
            prev = merged[-1]
            merged[-1] = NoteEvent(prev.duration + event.duration, prev.kind)
        else:
            merged.append(event)
    return merged


def coalesce_rests(events) -> list[NoteEvent]:
    """Merge runs of adjacent rests into one (silence carries no boundaries)."""
    merged: list[NoteEvent] = []
    for event in events:
        if (
            event.kind is NoteKind.REST
            and merged
            and merged[-1].kind is NoteKind.REST
        ):
            merged[-1] = NoteEvent(merged[-1].duration + event.duration, NoteKind.REST)
        else:
            merged.append(event)
    return merged
