"""Rewriting rules extracted from metrical trees.

Each internal node yields one rule whose two child slots hold either the
child rule's id (an L/R path from the root) or null for a leaf child. All
leaves share a single counted null rule; classification and the grammar
only ever need the leaf count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .tree import RhythmTree

__all__ = [
    "RewritingRule",
    "RuleSet",
    "rule_name",
    "extract_rules",
    "rules_to_productions",
]


def rule_name(path: str) -> str:
    """Readable rule name for an L/R path: P for the root, then L_RL style."""
    if not path:
        return "P"
    if len(path) == 1:
        return path
    return f"{path[0]}_{path[1:]}"


@dataclass(frozen=True)
class RewritingRule:
    """One production attached to an internal node.

    ``children`` holds one entry per child slot, each a child path or None
    for a leaf. Extraction always produces two slots; other arities exist
    only so degenerate rules can be expressed in tests.
    """

    path: str
    children: tuple[str | None, ...]

    @property
    def left(self) -> str | None:
        return self.children[0]

    @property
    def right(self) -> str | None:
        return self.children[1]

    @property
    def name(self) -> str:
        return rule_name(self.path)

    def skeleton(self) -> str:
        """Bracketed string with nonterminals ignored: the rule's shape.

        Two rules are homomorphic exactly when their skeletons match; every
        two-slot rule prints ``[-F][+F]`` whatever its children hold.
        """
        signs = "-+"
        return "".join(f"[{signs[min(i, 1)]}F]" for i in range(len(self.children)))


@dataclass(frozen=True)
class RuleSet:
    """Rules for every internal node (preorder) plus the counted null rule."""

    rules: tuple[RewritingRule, ...]
    null_count: int
    _by_path: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.null_count < 1:
            raise ValueError("a rule set describes at least one leaf")
        if self.null_count != len(self.rules) + 1:
            raise ValueError("null count must exceed the rule count by one")
        self._by_path.update({r.path: r for r in self.rules})
        if len(self._by_path) != len(self.rules):
            raise ValueError("duplicate rule paths")

    def __getitem__(self, path: str) -> RewritingRule:
        return self._by_path[path]

    def __contains__(self, path: str) -> bool:
        return path in self._by_path

    @property
    def root(self) -> RewritingRule | None:
        return self._by_path.get("")


def extract_rules(tree: RhythmTree) -> RuleSet:
    """One rule per internal node, children mapped to child ids or null."""
    rules: list[RewritingRule] = []

    def visit(node, path):
        if node.is_leaf:
            return
        children = tuple(
            None if child.is_leaf else path + step
            for step, child in (("L", node.left), ("R", node.right))
        )
        rules.append(RewritingRule(path, children))
        visit(node.left, path + "L")
        visit(node.right, path + "R")

    visit(tree, "")
    return RuleSet(tuple(rules), tree.leaf_count())


def rules_to_productions(rs: RuleSet) -> str:
    """Table-style listing, one rule per line.

    Leaf children print as bare F brackets, internal children as named
    nonterminals: ``R_LL → [-F R_LLL][+F]``. Empty for a leaf-only tree.
    """
    lines = []
    for rule in rs.rules:
        signs = "-+"
        parts = []
        for i, child in enumerate(rule.children):
            inner = f"F {rule_name(child)}" if child is not None else "F"
            parts.append(f"[{signs[min(i, 1)]}{inner}]")
        lines.append(f"{rule.name} → {''.join(parts)}")
    return "\n".join(lines) + ("\n" if lines else "")
