"""Score ingestion: rhythm-text and minimal MIDI parsing into quantized sequences.

All durations are exact rationals (:class:`fractions.Fraction`) measured in
whole-note units; no floating point is used anywhere in this module.

Rhythm-text format (``.rtm``)
-----------------------------
UTF-8 text. ``#`` starts a comment running to end of line. An optional
header line ``grid=<p>/<q>`` fixes the quantization grid. Remaining tokens
are whitespace-separated durations::

    [r|t]<p>/<q>

where ``<p>/<q>`` is a positive rational in whole-note units, ``r`` marks a
rest and ``t`` marks the tied continuation of the previous event. A tied
continuation may not open a sequence. Example::

    grid=1/16
    1/4 1/8 1/8 r1/2
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "DEFAULT_GRID",
    "Duration",
    "NoteKind",
    "NoteEvent",
    "RhythmSequence",
    "ScoreError",
    "ParseError",
    "MidiError",
    "PolyphonyError",
    "parse_text",
    "format_text",
    "parse_midi",
    "parse_midi_raw",
    "quantize",
    "quantization_error",
]

# Durations are plain Fractions: always lowest terms, exact add/halve/compare.
Duration = Fraction

#: Default quantization grid: one sixteenth of a whole note.
DEFAULT_GRID = Fraction(1, 16)


class ScoreError(Exception):
    """Base class for ingestion errors."""


class ParseError(ScoreError):
    """Malformed rhythm-text input; carries 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class MidiError(ScoreError):
    """Malformed or unsupported MIDI input."""


class PolyphonyError(MidiError):
    """Overlapping sounding notes; carries the tick of the first overlap."""

    def __init__(self, tick):
        super().__init__(f"polyphonic overlap at tick {tick}")
        self.tick = tick


class NoteKind(enum.Enum):
    SOUNDED = "sounded"
    REST = "rest"
    TIED = "tied"

    @property
    def token_prefix(self) -> str:
        return {NoteKind.SOUNDED: "", NoteKind.REST: "r", NoteKind.TIED: "t"}[self]


@dataclass(frozen=True)
class NoteEvent:
    """A single rhythmic event: a sounded note, a rest, or a tied continuation."""

    duration: Fraction
    kind: NoteKind = NoteKind.SOUNDED

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError(f"event duration must be positive, got {self.duration}")

    @staticmethod
    def sounded(duration) -> "NoteEvent":
        return NoteEvent(Fraction(duration), NoteKind.SOUNDED)

    @staticmethod
    def rest(duration) -> "NoteEvent":
        return NoteEvent(Fraction(duration), NoteKind.REST)

    @staticmethod
    def tied(duration) -> "NoteEvent":
        return NoteEvent(Fraction(duration), NoteKind.TIED)


@dataclass(frozen=True)
class RhythmSequence:
    """Ordered events plus the quantization grid they are measured against.

    After :func:`quantize`, every event duration is an integer multiple of
    ``grid``.
    """

    events: tuple[NoteEvent, ...]
    grid: Fraction = DEFAULT_GRID

    def __post_init__(self):
        if self.grid <= 0:
            raise ValueError("grid must be positive")
        if self.events and self.events[0].kind is NoteKind.TIED:
            raise ValueError("tied continuation cannot open a sequence")

    @property
    def total(self) -> Fraction:
        return sum((e.duration for e in self.events), Fraction(0))

    @property
    def total_grid_units(self) -> Fraction:
        return self.total / self.grid


_KIND_BY_PREFIX = {"": NoteKind.SOUNDED, "r": NoteKind.REST, "t": NoteKind.TIED}


def _parse_fraction(text: str, line: int, column: int) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep or not num.isdigit() or not den.isdigit():
        raise ParseError(f"malformed duration {text!r}", line, column)
    denominator = int(den)
    if denominator == 0:
        raise ParseError(f"zero denominator in {text!r}", line, column)
    value = Fraction(int(num), denominator)
    if value == 0:
        raise ParseError(f"zero-length duration {text!r}", line, column)
    return value


def parse_text(source: str, default_grid: Fraction = DEFAULT_GRID) -> RhythmSequence:
    """Parse rhythm text into a :class:`RhythmSequence`.

    Events are transcribed exactly as written, in source order. The grid is
    taken from a ``grid=`` header when present, otherwise ``default_grid``.
    Raises :class:`ParseError` with line/column on malformed input.
    """
    grid = default_grid
    events: list[NoteEvent] = []
    seen_grid_header = False
    for lineno, raw_line in enumerate(source.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        search_from = 0
        for token in line.split():
            col = raw_line.index(token, search_from) + 1
            search_from = col - 1 + len(token)
            if token.startswith("grid="):
                if events or seen_grid_header:
                    raise ParseError("grid header must precede all events", lineno, col)
                grid = _parse_fraction(token[5:], lineno, col)
                seen_grid_header = True
                continue
            prefix = token[0] if token[:1] in ("r", "t") else ""
            kind = _KIND_BY_PREFIX[prefix]
            if kind is NoteKind.TIED and not events:
                raise ParseError("tied continuation cannot be the first event", lineno, col)
            duration = _parse_fraction(token[len(prefix):], lineno, col)
            events.append(NoteEvent(duration, kind))
    return RhythmSequence(tuple(events), grid)


def format_text(seq: RhythmSequence) -> str:
    """Serialize a sequence to rhythm text. Inverse of :func:`parse_text`."""
    tokens = [
        f"{e.kind.token_prefix}{e.duration.numerator}/{e.duration.denominator}"
        for e in seq.events
    ]
    header = f"grid={seq.grid.numerator}/{seq.grid.denominator}"
    return header + "\n" + " ".join(tokens) + "\n"


def quantize(seq: RhythmSequence, grid: Fraction) -> RhythmSequence:
    """Round every event duration to the nearest multiple of ``grid``.

    Half-grid remainders round up. Events that round to zero are dropped if
    rests and promoted to one grid unit otherwise, so no note disappears.
    Idempotent for sequences already on the grid.
    """
    if grid <= 0:
        raise ValueError("grid must be positive")
    events = []
    for event in seq.events:
        units = (event.duration / grid + Fraction(1, 2)).__floor__()
        if units == 0:
            if event.kind is NoteKind.REST:
                continue
            units = 1
        events.append(NoteEvent(units * grid, event.kind))
    if events and events[0].kind is NoteKind.TIED:
        # the opening sounded note quantized away its predecessor: cannot
        # happen (sounded events are promoted), but a rest-led tie could if
        # the leading rest vanished; sound the continuation instead
        events[0] = NoteEvent(events[0].duration, NoteKind.SOUNDED)
    return RhythmSequence(tuple(events), grid)


def quantization_error(seq: RhythmSequence, grid: Fraction) -> Fraction:
    """Total absolute rounding error :func:`quantize` would introduce, in whole notes."""
    total = Fraction(0)
    for event in seq.events:
        units = (event.duration / grid + Fraction(1, 2)).__floor__()
        if units == 0 and event.kind is not NoteKind.REST:
            units = 1
        total += abs(event.duration - units * grid)
    return total


# ---------------------------------------------------------------------------
# Minimal Standard MIDI File ingestion (format 0/1, one melodic track)
# ---------------------------------------------------------------------------

_NOTE_OFF = 0x80
_NOTE_ON = 0x90
_CHANNEL_MESSAGE_LENGTH = {
    0x80: 2, 0x90: 2, 0xA0: 2, 0xB0: 2, 0xC0: 1, 0xD0: 1, 0xE0: 2,
}


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def read(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise MidiError("unexpected end of file")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def u32(self) -> int:
        return int.from_bytes(self.read(4), "big")

    def u16(self) -> int:
        return int.from_bytes(self.read(2), "big")

    def u8(self) -> int:
        return self.read(1)[0]

    def varlen(self) -> int:
        value = 0
        for _ in range(4):
            byte = self.u8()
            value = (value << 7) | (byte & 0x7F)
            if not byte & 0x80:
                return value
        raise MidiError("variable-length quantity longer than 4 bytes")


def _parse_track(reader: _Reader) -> list[tuple[int, int, bytes]]:
    """Return (tick, status, data) triples for one MTrk chunk."""
    if reader.read(4) != b"MTrk":
        raise MidiError("expected MTrk chunk")
    length = reader.u32()
    end = reader.pos + length
    tick = 0
    running_status = None
    out = []
    while reader.pos < end:
        tick += reader.varlen()
        first = reader.u8()
        if first < 0x80:  # running status: first byte is already data
            if running_status is None:
                raise MidiError(f"data byte {first:#04x} with no running status at tick {tick}")
            status = running_status
            need = _CHANNEL_MESSAGE_LENGTH[status & 0xF0]
            data = bytes([first]) + reader.read(need - 1)
        elif first < 0xF0:
            status = first
            running_status = status
            data = reader.read(_CHANNEL_MESSAGE_LENGTH[status & 0xF0])
        elif first in (0xF0, 0xF7):  # sysex: skipped
            running_status = None
            reader.read(reader.varlen())
            continue
        elif first == 0xFF:  # meta: skipped (end-of-track included)
            reader.u8()
            reader.read(reader.varlen())
            continue
        else:
            raise MidiError(f"unsupported event {first:#04x} at tick {tick}")
        out.append((tick, status, data))
    if reader.pos != end:
        raise MidiError("track chunk length mismatch")
    return out


def parse_midi(data: bytes, grid: Fraction = DEFAULT_GRID) -> RhythmSequence:
    """Parse a Standard MIDI File (format 0 or 1) into a quantized sequence.

    Inter-onset intervals become exact rationals via the file's division
    (ticks per quarter note, whole note = 4 quarters). Gaps between a
    note-off and the next note-on become rests. Notes must be strictly
    monophonic; the result is passed through :func:`quantize` before return.
    """
    return quantize(parse_midi_raw(data, grid), grid)


def parse_midi_raw(data: bytes, grid: Fraction = DEFAULT_GRID) -> RhythmSequence:
    """Like :func:`parse_midi` but with exact tick durations, not yet quantized."""
    reader = _Reader(bytes(data))
    if reader.read(4) != b"MThd":
        raise MidiError("not a Standard MIDI File (missing MThd)")
    if reader.u32() != 6:
        raise MidiError("malformed MThd length")
    fmt = reader.u16()
    ntrks = reader.u16()
    division = reader.u16()
    if fmt not in (0, 1):
        raise MidiError(f"unsupported SMF format {fmt}")
    if division & 0x8000:
        raise MidiError("SMPTE division is not supported")
    if division == 0:
        raise MidiError("division of zero ticks per quarter")

    tracks = [_parse_track(reader) for _ in range(ntrks)]
    melodic = [t for t in tracks if any(s & 0xF0 == _NOTE_ON and d[1] > 0 for _, s, d in t)]
    if not melodic:
        raise MidiError("no note events in any track")
    if len(melodic) > 1:
        raise MidiError(f"{len(melodic)} tracks contain notes; expected exactly one")

    whole = 4 * division  # ticks per whole note
    notes: list[tuple[int, int]] = []  # (on_tick, off_tick)
    sounding: tuple[int, int] | None = None  # (pitch, on_tick)
    for tick, status, data in melodic[0]:
        kind = status & 0xF0
        if kind == _NOTE_ON and data[1] > 0:
            if sounding is not None:
                raise PolyphonyError(tick)
            sounding = (data[0], tick)
        elif kind == _NOTE_OFF or (kind == _NOTE_ON and data[1] == 0):
            if sounding is not None and sounding[0] == data[0]:
                on_tick = sounding[1]
                if tick > on_tick:
                    notes.append((on_tick, tick))
                sounding = None
    if sounding is not None:
        raise MidiError(f"note at tick {sounding[1]} never released")
    if not notes:
        raise MidiError("no complete notes found")

    events: list[NoteEvent] = []
    cursor = 0
    for on_tick, off_tick in notes:
        if on_tick > cursor:
            events.append(NoteEvent(Fraction(on_tick - cursor, whole), NoteKind.REST))
        events.append(NoteEvent(Fraction(off_tick - on_tick, whole), NoteKind.SOUNDED))
        cursor = off_tick
    return RhythmSequence(tuple(events), grid)
