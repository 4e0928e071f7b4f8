import random
from fractions import Fraction

import pytest

from rhythmc import (
    EmptySequenceError,
    NonPowerOfTwoError,
    NoteEvent,
    NoteKind,
    RhythmSequence,
    RhythmTree,
    build_tree,
    coalesce_rests,
    leaf_events,
    merge_ties,
    pad_to_power_of_two,
)

from util import random_power_of_two_sequence, random_sequence

F = Fraction


def seq(*events, grid=F(1, 16)):
    return RhythmSequence(tuple(events), grid)


class TestBuildTree:
    def test_single_note_is_leaf(self):
        tree = build_tree(seq(NoteEvent.sounded(F(1, 2))))
        assert tree.is_leaf
        assert tree.internal_count() == 0
        assert tree.duration == F(1, 2)

    def test_two_quarters_split_once(self):
        tree = build_tree(seq(NoteEvent.sounded(F(1, 4)), NoteEvent.sounded(F(1, 4))))
        assert not tree.is_leaf
        assert tree.left.is_leaf and tree.right.is_leaf
        assert tree.left.duration == tree.right.duration == F(1, 4)

    def test_straddling_note_is_split_with_tie(self):
        tree = build_tree(seq(NoteEvent.sounded(F(3, 8)), NoteEvent.sounded(F(1, 8))))
        assert tree.left.is_leaf
        assert tree.left.event == NoteEvent(F(1, 4), NoteKind.SOUNDED)
        right = tree.right
        assert not right.is_leaf
        assert right.left.event == NoteEvent(F(1, 8), NoteKind.TIED)
        assert right.right.event == NoteEvent(F(1, 8), NoteKind.SOUNDED)

    def test_straddling_rest_splits_into_rests(self):
        tree = build_tree(seq(NoteEvent.sounded(F(1, 8)), NoteEvent.rest(F(1, 4)),
                              NoteEvent.sounded(F(1, 8))))
        kinds = [e.kind for e in leaf_events(tree)]
        assert kinds == [NoteKind.SOUNDED, NoteKind.REST, NoteKind.REST, NoteKind.SOUNDED]

    def test_empty_rejected(self):
        with pytest.raises(EmptySequenceError):
            build_tree(RhythmSequence((), F(1, 16)))

    def test_non_power_of_two_rejected(self):
        with pytest.raises(NonPowerOfTwoError):
            build_tree(seq(NoteEvent.sounded(F(3, 16))))

    def test_deterministic(self):
        rng = random.Random(3)
        for _ in range(20):
            s = pad_to_power_of_two(random_sequence(rng))
            assert build_tree(s) == build_tree(s)


class TestPad:
    def test_power_of_two_unchanged(self):
        s = seq(NoteEvent.sounded(F(1, 2)))  # 8 sixteenths
        assert pad_to_power_of_two(s) == s

    def test_five_units_padded_to_eight(self):
        s = seq(NoteEvent.sounded(F(5, 16)))
        out = pad_to_power_of_two(s)
        assert out.events[-1] == NoteEvent(F(3, 16), NoteKind.REST)
        assert out.total == F(1, 2)

    def test_twelve_units_padded_to_sixteen(self):
        s = seq(NoteEvent.sounded(F(12, 16)))
        out = pad_to_power_of_two(s)
        assert out.events[-1] == NoteEvent(F(4, 16), NoteKind.REST)
        assert out.total / out.grid == 16

    def test_empty_rejected(self):
        with pytest.raises(EmptySequenceError):
            pad_to_power_of_two(RhythmSequence((), F(1, 16)))


class TestLeafEvents:
    def test_leaf(self):
        tree = RhythmTree.make_leaf(NoteEvent.sounded(F(1, 2)))
        assert leaf_events(tree) == [NoteEvent.sounded(F(1, 2))]

    def test_one_split(self):
        tree = build_tree(seq(NoteEvent.sounded(F(1, 4)), NoteEvent.sounded(F(1, 4))))
        assert leaf_events(tree) == [NoteEvent.sounded(F(1, 4))] * 2

    def test_tie_consistency_with_build(self):
        tree = build_tree(seq(NoteEvent.sounded(F(3, 8)), NoteEvent.sounded(F(1, 8))))
        assert leaf_events(tree) == [
            NoteEvent(F(1, 4), NoteKind.SOUNDED),
            NoteEvent(F(1, 8), NoteKind.TIED),
            NoteEvent(F(1, 8), NoteKind.SOUNDED),
        ]


def assert_invariants(tree, padded):
    # exact duration conservation
    leaves = leaf_events(tree)
    assert sum(e.duration for e in leaves) == tree.duration == padded.total

    # sibling duration equality at every internal node
    def check(node):
        if node.is_leaf:
            assert node.event.duration == node.duration
            return
        assert node.left.duration == node.right.duration == node.duration / 2
        check(node.left)
        check(node.right)

    check(tree)
    assert tree.leaf_count() == tree.internal_count() + 1
    # merging continuation ties (and rest splits, which carry no tie)
    # recovers the padded input duration-exactly
    assert coalesce_rests(merge_ties(leaves)) == coalesce_rests(merge_ties(list(padded.events)))


class TestInvariants:
    def test_random_sequences(self):
        rng = random.Random(17)
        for _ in range(300):
            padded = pad_to_power_of_two(random_power_of_two_sequence(rng, allow_ties=True))
            assert_invariants(build_tree(padded), padded)

    def test_sounded_notes_reconstruct_exactly(self):
        # note boundaries always survive: only rest boundaries may coalesce
        rng = random.Random(19)
        for _ in range(300):
            padded = pad_to_power_of_two(random_sequence(rng, allow_ties=False))
            tree = build_tree(padded)
            rebuilt = merge_ties(leaf_events(tree))
            notes = [e for e in rebuilt if e.kind is NoteKind.SOUNDED]
            assert notes == [e for e in padded.events if e.kind is NoteKind.SOUNDED]


class TestMergeTies:
    def test_merges_into_predecessor(self):
        merged = merge_ties([
            NoteEvent.sounded(F(1, 4)),
            NoteEvent.tied(F(1, 8)),
            NoteEvent.tied(F(1, 8)),
        ])
        assert merged == [NoteEvent.sounded(F(1, 2))]

    def test_leading_tie_rejected(self):
        with pytest.raises(ValueError):
            merge_ties([NoteEvent.tied(F(1, 4))])
