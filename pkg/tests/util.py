"""Shared test helpers: fixture loading, random generators, oracles."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import rhythmc
from rhythmc import (
    NoteEvent,
    NoteKind,
    RhythmSequence,
    RhythmTree,
    build_tree,
    classify,
    extract_rules,
    isomorphic_at,
    pad_to_power_of_two,
    parse_text,
    quantize,
    to_grammar,
)

DATA_DIR = Path(rhythmc.__file__).parent / "data"
RUN22 = DATA_DIR / "run22.rtm"


def load_fixture_sequence(name="run22.rtm"):
    seq = parse_text((DATA_DIR / name).read_text(encoding="utf-8"))
    return quantize(seq, seq.grid)


def fixture_tree(name="run22.rtm"):
    return build_tree(pad_to_power_of_two(load_fixture_sequence(name)))


def fixture_ruleset(name="run22.rtm"):
    return extract_rules(fixture_tree(name))


def fixture_grammar(depth=1, name="run22.rtm"):
    rs = fixture_ruleset(name)
    return to_grammar(rs, classify(rs, depth))


def random_sequence(rng, max_units=64, allow_ties=False) -> RhythmSequence:
    """Random quantized sequence; total is whatever the events sum to."""
    grid = Fraction(1, rng.choice((8, 16, 32)))
    events = []
    remaining = rng.randint(1, max_units)
    while remaining > 0:
        units = rng.randint(1, min(remaining, 8))
        roll = rng.random()
        if events and allow_ties and roll < 0.1 and events[-1].kind is not NoteKind.REST:
            kind = NoteKind.TIED
        elif roll < 0.35:
            kind = NoteKind.REST
        else:
            kind = NoteKind.SOUNDED
        events.append(NoteEvent(units * grid, kind))
        remaining -= units
    if events[0].kind is NoteKind.TIED:
        events[0] = NoteEvent(events[0].duration, NoteKind.SOUNDED)
    return RhythmSequence(tuple(events), grid)


def random_power_of_two_sequence(rng, max_exponent=6, allow_ties=False) -> RhythmSequence:
    """Random quantized sequence whose total is exactly 2**k grid units."""
    grid = Fraction(1, rng.choice((8, 16, 32)))
    total = 2 ** rng.randint(0, max_exponent)
    events = []
    remaining = total
    while remaining > 0:
        units = rng.randint(1, min(remaining, 8))
        roll = rng.random()
        if events and allow_ties and roll < 0.1 and events[-1].kind is not NoteKind.REST:
            kind = NoteKind.TIED
        elif roll < 0.35:
            kind = NoteKind.REST
        else:
            kind = NoteKind.SOUNDED
        events.append(NoteEvent(units * grid, kind))
        remaining -= units
    if events[0].kind is NoteKind.TIED:
        events[0] = NoteEvent(events[0].duration, NoteKind.SOUNDED)
    return RhythmSequence(tuple(events), grid)


def random_tree(rng, max_leaves=32, duration=Fraction(1)) -> RhythmTree:
    """Random strict binary tree with at most ``max_leaves`` leaves."""
    if max_leaves <= 1 or rng.random() < 0.25:
        return RhythmTree.make_leaf(NoteEvent(duration, NoteKind.SOUNDED))
    left_budget = rng.randint(1, max_leaves - 1)
    half = duration / 2
    return RhythmTree(
        duration,
        left=random_tree(rng, left_budget, half),
        right=random_tree(rng, max_leaves - left_budget, half),
    )


def same_shape(a: RhythmTree, b: RhythmTree) -> bool:
    if a.is_leaf or b.is_leaf:
        return a.is_leaf and b.is_leaf
    return same_shape(a.left, b.left) and same_shape(a.right, b.right)


def brute_force_partition(rs, depth):
    """Pairwise-recursive classification; independent oracle for classify()."""
    groups = []
    for rule in rs.rules:
        for group in groups:
            if isomorphic_at(rule, group[0], depth, rs):
                group.append(rule)
                break
        else:
            groups.append([rule])
    parts = {frozenset(r.path for r in group) for group in groups}
    parts.add(frozenset({"<null>"}))
    return parts


def partition_as_sets(part):
    out = set()
    for cls, members in part.members().items():
        if cls == part.null_class:
            out.add(frozenset({"<null>"}))
        else:
            out.add(frozenset(members))
    return out


# ---------------------------------------------------------------------------
# Tiny Standard MIDI File writer
# ---------------------------------------------------------------------------

def vlq(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def midi_bytes(notes, division=480, fmt=0, meta_track=False, pitch=60) -> bytes:
    """Build an SMF with one melodic track from (on_tick, off_tick[, pitch]) triples."""
    messages = []
    for note in notes:
        on, off = note[0], note[1]
        p = note[2] if len(note) > 2 else pitch
        messages.append((on, 1, bytes([0x90, p, 0x40])))
        messages.append((off, 0, bytes([0x80, p, 0x00])))
    messages.sort(key=lambda m: (m[0], m[1]))  # note-offs precede note-ons at a tick

    track = b""
    cursor = 0
    for tick, _, payload in messages:
        track += vlq(tick - cursor) + payload
        cursor = tick
    track += vlq(0) + b"\xff\x2f\x00"

    chunks = []
    if meta_track:
        tempo = vlq(0) + b"\xff\x51\x03\x07\xa1\x20" + vlq(0) + b"\xff\x2f\x00"
        chunks.append(b"MTrk" + len(tempo).to_bytes(4, "big") + tempo)
        fmt = max(fmt, 1)
    chunks.append(b"MTrk" + len(track).to_bytes(4, "big") + track)

    header = b"MThd" + (6).to_bytes(4, "big") + fmt.to_bytes(2, "big") \
        + len(chunks).to_bytes(2, "big") + division.to_bytes(2, "big")
    return header + b"".join(chunks)
