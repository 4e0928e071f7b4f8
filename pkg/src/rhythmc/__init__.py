"""rhythmc: rhythmic trees, rewriting-rule grammars, and their complexity.

Pipeline: a monophonic score is quantized to an exact rational grid, built
into a binary metrical tree by equal-duration splitting, encoded as a
bracketed string, reduced to one rewriting rule per internal node,
partitioned by depth-bounded isomorphism into a context-free grammar, and
scored with the grammar-entropy complexity k0 = -ln R, where R is the
radius of convergence of the root class's generating function.
"""

from .score import (
    DEFAULT_GRID,
    Duration,
    MidiError,
    NoteEvent,
    NoteKind,
    ParseError,
    PolyphonyError,
    RhythmSequence,
    ScoreError,
    format_text,
    parse_midi,
    parse_midi_raw,
    parse_text,
    quantization_error,
    quantize,
)
from .tree import (
    EmptySequenceError,
    NonPowerOfTwoError,
    RhythmTree,
    TreeError,
    build_tree,
    coalesce_rests,
    leaf_events,
    merge_ties,
    pad_to_power_of_two,
)
from .bracketed import (
    BracketError,
    TurtleState,
    encode,
    parse as parse_bracketed,
    render_svg,
    turtle_segments,
)
from .rules import RewritingRule, RuleSet, extract_rules, rule_name, rules_to_productions
from .classify import (
    ClassifiedGrammar,
    Partition,
    Production,
    RuleClass,
    classify,
    homomorphic,
    isomorphic_at,
    to_grammar,
)
from .entropy import (
    KERNEL_BACKEND,
    ComplexityReport,
    EvalOutcome,
    EvalParams,
    EvalStatus,
    RadiusResult,
    closed_form_discriminant_root,
    closed_form_root_value,
    complexity,
    eval_fixed_point,
    radius_of_convergence,
)
from .analysis import (
    AnalysisConfig,
    CorpusRow,
    analyze_file,
    analyze_sequence,
    load_score,
    run_corpus,
)

__version__ = "0.1.0"
