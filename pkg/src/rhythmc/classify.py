"""Depth-bounded isomorphism of rewriting rules and grammar construction.

Two rules are homomorphic when they have the same shape once nonterminals
are ignored (identical skeleton strings); every two-child rule therefore
shares one depth-0 class, with the null rule in its own class. Isomorphism
on depth X additionally requires corresponding children to be isomorphic on
depth X-1, a null child matching only a null child.

:func:`classify` computes the depth-X partition by refinement: the round-0
key is the skeleton, and round d+1 keys each rule on (skeleton, round-d
class of left child, round-d class of right child). Because a rule's
round-d class is itself determined by that triple one round earlier, each
round refines the last, so class counts never decrease with depth. The
recursive pairwise definition stays available in
:func:`isomorphic_at` as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rules import RewritingRule, RuleSet

__all__ = [
    "Partition",
    "Production",
    "RuleClass",
    "ClassifiedGrammar",
    "homomorphic",
    "isomorphic_at",
    "classify",
    "to_grammar",
]


def homomorphic(r1: RewritingRule | None, r2: RewritingRule | None) -> bool:
    """True when both rules print the same bracketed string with nonterminals ignored.

    ``None`` stands for the null rule, whose skeleton is empty.
    """
    s1 = "" if r1 is None else r1.skeleton()
    s2 = "" if r2 is None else r2.skeleton()
    return s1 == s2


def isomorphic_at(
    r1: RewritingRule | None,
    r2: RewritingRule | None,
    depth: int,
    rules1: RuleSet,
    rules2: RuleSet | None = None,
) -> bool:
    """Recursive depth-bounded isomorphism; depth 0 is plain homomorphism.

    Child ids are resolved against ``rules1``/``rules2`` (the second
    defaults to the first, for rules drawn from one set).
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if rules2 is None:
        rules2 = rules1
    if not homomorphic(r1, r2):
        return False
    if depth == 0 or r1 is None:
        return True
    for c1, c2 in zip(r1.children, r2.children):
        if (c1 is None) != (c2 is None):
            return False
        if c1 is not None and not isomorphic_at(
            rules1[c1], rules2[c2], depth - 1, rules1, rules2
        ):
            return False
    return True


@dataclass(frozen=True)
class Partition:
    """Classes of a rule set under depth-bounded isomorphism.

    Class indices run 1..n. The root rule's class is 1 whenever the root
    rule exists; the null rule always takes the last index.
    """

    depth: int
    class_of: dict  # rule path -> class index
    null_class: int
    n: int

    def members(self) -> dict[int, list[str]]:
        """Class index -> member rule paths, preorder within each class."""
        out: dict[int, list[str]] = {i: [] for i in range(1, self.n + 1)}
        for path, cls in self.class_of.items():
            out[cls].append(path)
        return out

    def sizes(self, null_count: int) -> tuple[int, ...]:
        """Member counts per class, the null class counted ``null_count`` strong."""
        counts = [0] * self.n
        for cls in self.class_of.values():
            counts[cls - 1] += 1
        counts[self.null_class - 1] = null_count
        return tuple(counts)


def classify(rs: RuleSet, depth: int) -> Partition:
    """Partition a rule set by isomorphism on ``depth``.

    Classes are renumbered after every refinement round: the root rule's
    class first, the remaining rule classes in ascending order of their
    refinement keys (skeleton, previous class of left child, previous class
    of right child), and the null class last. On rule sets whose rules all
    share one skeleton this orders depth-1 classes by (left-child kind,
    right-child kind) with internal before null.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")

    skeletons = sorted({rule.skeleton() for rule in rs.rules})
    skeleton_rank = {s: i for i, s in enumerate(skeletons)}

    def renumber(keyed: dict[str, tuple]) -> tuple[dict[str, int], int]:
        """Assign class numbers: root's class 1, then key order, null last."""
        ordered_keys = sorted(set(keyed.values()))
        if "" in keyed:
            root_key = keyed[""]
            ordered_keys.remove(root_key)
            ordered_keys.insert(0, root_key)
        index = {key: i + 1 for i, key in enumerate(ordered_keys)}
        null_class = len(ordered_keys) + 1
        return {path: index[key] for path, key in keyed.items()}, null_class

    keyed = {rule.path: (skeleton_rank[rule.skeleton()],) for rule in rs.rules}
    class_of, null_class = renumber(keyed)

    for _ in range(depth):
        def child_class(child):
            return null_class if child is None else class_of[child]

        keyed = {
            rule.path: (
                skeleton_rank[rule.skeleton()],
                child_class(rule.left),
                child_class(rule.right),
            )
            for rule in rs.rules
        }
        class_of, null_class = renumber(keyed)

    return Partition(depth=depth, class_of=class_of, null_class=null_class, n=null_class)


@dataclass(frozen=True)
class Production:
    """A distinct class production with its multiplicity and target classes."""

    mult: int
    left: int
    right: int


@dataclass(frozen=True)
class RuleClass:
    size: int
    terminal: bool
    productions: tuple[Production, ...]


@dataclass(frozen=True)
class ClassifiedGrammar:
    """Context-free grammar over rule classes; classes[i] is class i+1."""

    classes: tuple[RuleClass, ...]
    root: int

    def __post_init__(self):
        for idx, cls in enumerate(self.classes, start=1):
            if cls.terminal:
                if cls.productions:
                    raise ValueError(f"terminal class {idx} cannot have productions")
                continue
            if not cls.productions:
                raise ValueError(f"non-terminal class {idx} needs productions")
            if sum(p.mult for p in cls.productions) != cls.size:
                raise ValueError(f"class {idx}: multiplicities must sum to its size")
            for p in cls.productions:
                if not (1 <= p.left <= self.n and 1 <= p.right <= self.n):
                    raise ValueError(f"class {idx}: production target out of range")
        if not 1 <= self.root <= self.n:
            raise ValueError("root class out of range")

    @property
    def n(self) -> int:
        return len(self.classes)

    def to_dict(self) -> dict:
        """JSON-ready grammar dump."""
        return {
            "n": self.n,
            "root": self.root,
            "classes": [
                {
                    "id": i + 1,
                    "size": cls.size,
                    "terminal": cls.terminal,
                    "productions": [
                        {"mult": p.mult, "left": p.left, "right": p.right}
                        for p in cls.productions
                    ],
                }
                for i, cls in enumerate(self.classes)
            ],
        }


def to_grammar(rs: RuleSet, part: Partition) -> ClassifiedGrammar:
    """Collapse a partitioned rule set into its class grammar.

    Members of each non-terminal class are grouped by the classes of their
    children under the same partition (null children map to the null
    class), giving distinct productions with multiplicities. The null class
    becomes the terminal class; the root class is the root rule's class, or
    the terminal class for a leaf-only tree.
    """
    sizes = part.sizes(rs.null_count)
    grouped: dict[int, dict[tuple[int, int], int]] = {}
    for rule in rs.rules:
        cls = part.class_of[rule.path]
        left = part.null_class if rule.left is None else part.class_of[rule.left]
        right = part.null_class if rule.right is None else part.class_of[rule.right]
        bucket = grouped.setdefault(cls, {})
        bucket[(left, right)] = bucket.get((left, right), 0) + 1

    classes = []
    for idx in range(1, part.n + 1):
        if idx == part.null_class:
            classes.append(RuleClass(size=sizes[idx - 1], terminal=True, productions=()))
            continue
        productions = tuple(
            Production(mult, left, right)
            for (left, right), mult in sorted(grouped[idx].items())
        )
        classes.append(RuleClass(size=sizes[idx - 1], terminal=False, productions=productions))

    root = part.class_of[""] if rs.root is not None else part.null_class
    return ClassifiedGrammar(classes=tuple(classes), root=root)
