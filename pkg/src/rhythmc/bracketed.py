"""Bracketed-string encoding of metrical trees and turtle SVG rendering.

Canonical encoding over the alphabet ``{F, +, -, [, ]}``::

    B := "F" | "[-" B "][+" B "]"

A leaf is ``F``; an internal node is its two children in brackets, left
marked ``-`` and right ``+``. Brackets behave as a pushdown stack in the
turtle interpretation: ``[`` saves the turtle state, ``]`` restores it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .score import NoteEvent, NoteKind
from .tree import RhythmTree

__all__ = [
    "BracketError",
    "TurtleState",
    "encode",
    "parse",
    "turtle_segments",
    "render_svg",
]


class BracketError(ValueError):
    """Malformed bracketed string; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"position {position}: {message}")
        self.position = position


def encode(tree: RhythmTree, style: str = "canonical") -> str:
    """Encode a tree as a bracketed string.

    ``canonical`` leaves the node's own F implicit: a leaf is ``F`` and an
    internal node ``[-L][+R]``. ``root-f`` is a compatibility style that
    draws every node explicitly as ``F[+left][-right]``.
    """
    if style == "canonical":
        def enc(node):
            if node.is_leaf:
                return "F"
            return f"[-{enc(node.left)}][+{enc(node.right)}]"
        return enc(tree)
    if style == "root-f":
        def enc(node):
            if node.is_leaf:
                return "F"
            return f"F[+{enc(node.left)}][-{enc(node.right)}]"
        return enc(tree)
    raise ValueError(f"unknown style {style!r}")


def parse(s: str, root_duration: Fraction = Fraction(1)) -> RhythmTree:
    """Parse a canonical bracketed string back into a tree shape.

    Durations are assigned by halving from ``root_duration``; leaves carry
    sounded events. ``parse(encode(t))`` has the shape of ``t``.
    """
    pos = 0

    def expect(literal):
        nonlocal pos
        if not s.startswith(literal, pos):
            found = s[pos] if pos < len(s) else "end of input"
            raise BracketError(f"expected {literal!r}, found {found!r}", pos)
        pos += len(literal)

    def node(duration):
        nonlocal pos
        if pos < len(s) and s[pos] == "F":
            pos += 1
            return RhythmTree.make_leaf(NoteEvent(duration, NoteKind.SOUNDED))
        half = duration / 2
        expect("[-")
        left = node(half)
        expect("][+")
        right = node(half)
        expect("]")
        return RhythmTree(duration, left=left, right=right)

    tree = node(Fraction(root_duration))
    if pos != len(s):
        raise BracketError(f"trailing input {s[pos:]!r}", pos)
    return tree


@dataclass(frozen=True)
class TurtleState:
    """Turtle pose: plane position and heading in degrees (counterclockwise)."""

    x: float
    y: float
    heading: float

    def forward(self, step: float) -> "TurtleState":
        rad = math.radians(self.heading)
        return TurtleState(self.x + step * math.cos(rad), self.y + step * math.sin(rad), self.heading)

    def turn(self, delta: float) -> "TurtleState":
        return TurtleState(self.x, self.y, self.heading + delta)


def turtle_segments(tree: RhythmTree, step: float = 20.0, angle: float = 25.0):
    """Simulate the turtle over the tree and return its line segments.

    The root is drawn as one forward stroke; each internal node pushes the
    turtle state, turns +angle for the left child and -angle for the right,
    and pops back, so siblings grow from their parent's endpoint. Returns
    ``(segments, final_state)`` where each segment is ``(x1, y1, x2, y2)``
    and ``final_state`` equals the state after the root stroke (the stack is
    fully unwound).
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if not 0 < angle < 90:
        raise ValueError("angle must be between 0 and 90 degrees")
    segments: list[tuple[float, float, float, float]] = []
    stack: list[TurtleState] = []

    def draw(state: TurtleState) -> TurtleState:
        moved = state.forward(step)
        segments.append((state.x, state.y, moved.x, moved.y))
        return moved

    def visit(node, state):
        state = draw(state)
        if node.is_leaf:
            return state
        stack.append(state)
        visit(node.left, state.turn(angle))
        state = stack.pop()
        stack.append(state)
        visit(node.right, state.turn(-angle))
        return stack.pop()

    final = visit(tree, TurtleState(0.0, 0.0, 90.0))
    assert not stack
    return segments, final


def render_svg(tree: RhythmTree, step: float = 20.0, angle: float = 25.0) -> str:
    """Render the tree as a deterministic SVG line drawing.

    One ``<line>`` element per tree node.
    """
    segments, _ = turtle_segments(tree, step, angle)
    xs = [c for x1, _, x2, _ in segments for c in (x1, x2)]
    ys = [c for _, y1, _, y2 in segments for c in (y1, y2)]
    margin = step / 2
    min_x, max_x = min(xs) - margin, max(xs) + margin
    min_y, max_y = min(ys) - margin, max(ys) + margin

    def fmt(value: float) -> str:
        return f"{value:.3f}"

    lines = [
        f'  <line x1="{fmt(x1)}" y1="{fmt(-y1)}" x2="{fmt(x2)}" y2="{fmt(-y2)}" />'
        for x1, y1, x2, y2 in segments
    ]
    width = fmt(max_x - min_x)
    height = fmt(max_y - min_y)
    view = f"{fmt(min_x)} {fmt(-max_y)} {width} {height}"
    header = (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{view}" '
        f'width="{width}" height="{height}" stroke="black" stroke-width="1.5" '
        'stroke-linecap="round">'
    )
    return "\n".join([header, *lines, "</svg>"]) + "\n"
