"""Grammar-entropy complexity via generating-function fixed points.

Each non-terminal class i gets the normalized generating function

    V_i(z) = sum_p n_ip * z * V_{a_ip1}(z) * V_{a_ip2}(z) / sum_q n_iq

with terminal classes pinned at V = 1. Values are computed by simultaneous
fixed-point iteration from V_i^0 = 1; a probe z is judged convergent when
the largest relative step falls below ``epsilon``, divergent when any value
exceeds ``blowup_bound``, and (following the m=1000 judgment rule)
convergent when the iteration budget runs out without a blow-up.

The radius of convergence R of the root class is located by binary search
over z in (0, 1), and the complexity is k0 = -ln R. Grammars whose root
cannot reach a production cycle have polynomial generating functions, so
they converge for every z: these are reported converged-everywhere with
radius 1 and k0 = 0 without searching.

The hot loop lives in a compiled extension when available; set
``RHYTHMC_PURE_PYTHON=1`` to force the pure-Python kernel.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .classify import ClassifiedGrammar

__all__ = [
    "KERNEL_BACKEND",
    "EvalParams",
    "EvalStatus",
    "EvalOutcome",
    "RadiusResult",
    "ComplexityReport",
    "eval_fixed_point",
    "radius_of_convergence",
    "complexity",
    "closed_form_root_value",
    "closed_form_discriminant_root",
]


def _load_kernel():
    if os.environ.get("RHYTHMC_PURE_PYTHON", "") not in ("", "0"):
        from . import _kernel_py
        return _kernel_py
    try:
        from . import _kernel
        return _kernel
    except ImportError:
        from . import _kernel_py
        return _kernel_py


_kernel = _load_kernel()
KERNEL_BACKEND = _kernel.BACKEND


@dataclass(frozen=True)
class EvalParams:
    """Evaluation and search parameters.

    ``m_max`` caps the iteration count per probe; ``epsilon`` is the
    relative-change convergence threshold; ``blowup_bound`` declares
    divergence; ``search_tol`` is the binary-search interval width.
    """

    m_max: int = 1000
    epsilon: float = 1e-12
    blowup_bound: float = 1e100
    search_tol: float = 1e-6

    def __post_init__(self):
        if self.m_max <= 0:
            raise ValueError("m_max must be positive")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.blowup_bound <= 0:
            raise ValueError("blowup_bound must be positive")
        if not 0 < self.search_tol < 1:
            raise ValueError("search_tol must lie in (0, 1)")


class EvalStatus(enum.Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    INCONCLUSIVE = "inconclusive"

    @property
    def judged_convergent(self) -> bool:
        """Inconclusive probes are judged convergent (no blow-up within budget)."""
        return self is not EvalStatus.DIVERGED


_STATUS_BY_CODE = {
    0: EvalStatus.CONVERGED,
    1: EvalStatus.DIVERGED,
    2: EvalStatus.INCONCLUSIVE,
}


@dataclass(frozen=True)
class EvalOutcome:
    status: EvalStatus
    values: tuple[float, ...]
    iterations: int


@dataclass(frozen=True, eq=False)
class _GrammarArrays:
    offsets: np.ndarray
    coeff: np.ndarray
    left: np.ndarray
    right: np.ndarray
    terminal: np.ndarray
    recursive_root: bool


@lru_cache(maxsize=128)
def _arrays(g: ClassifiedGrammar) -> _GrammarArrays:
    offsets = [0]
    coeff: list[float] = []
    left: list[int] = []
    right: list[int] = []
    terminal = []
    for cls in g.classes:
        terminal.append(1 if cls.terminal else 0)
        total = sum(p.mult for p in cls.productions)
        for p in cls.productions:
            # exact rational, converted to float exactly once
            coeff.append(float(Fraction(p.mult, total)))
            left.append(p.left - 1)
            right.append(p.right - 1)
        offsets.append(len(coeff))
    return _GrammarArrays(
        offsets=np.asarray(offsets, dtype=np.intc),
        coeff=np.asarray(coeff, dtype=np.float64),
        left=np.asarray(left, dtype=np.intc),
        right=np.asarray(right, dtype=np.intc),
        terminal=np.asarray(terminal, dtype=np.uint8),
        recursive_root=_root_reaches_cycle(g),
    )


def _root_reaches_cycle(g: ClassifiedGrammar) -> bool:
    """True when a production cycle is reachable from the root class.

    Acyclic-from-root grammars have polynomial generating functions and
    therefore converge for every z.
    """
    targets = {
        i + 1: {t for p in cls.productions for t in (p.left, p.right)}
        for i, cls in enumerate(g.classes)
    }
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {i: WHITE for i in targets}
    stack = [(g.root, iter(sorted(targets[g.root])))]
    color[g.root] = GRAY
    while stack:
        node, it = stack[-1]
        advanced = False
        for nxt in it:
            if color[nxt] == GRAY:
                return True
            if color[nxt] == WHITE:
                color[nxt] = GRAY
                stack.append((nxt, iter(sorted(targets[nxt]))))
                advanced = True
                break
        if not advanced:
            color[node] = BLACK
            stack.pop()
    return False


def eval_fixed_point(
    g: ClassifiedGrammar, z: float, params: EvalParams = EvalParams()
) -> EvalOutcome:
    """Iterate all class values at ``z`` from all-ones and judge the probe."""
    if z <= 0:
        raise ValueError("z must be positive")
    a = _arrays(g)
    code, values, iterations = _kernel.iterate_system(
        float(z), a.offsets, a.coeff, a.left, a.right, a.terminal,
        params.m_max, params.epsilon, params.blowup_bound,
    )
    return EvalOutcome(_STATUS_BY_CODE[code], tuple(values), iterations)


@dataclass(frozen=True)
class RadiusResult:
    radius: float
    converged_everywhere: bool
    inconclusive_probes: int = 0
    probes: int = 0


def radius_of_convergence(
    g: ClassifiedGrammar, params: EvalParams = EvalParams()
) -> RadiusResult:
    """Binary-search the largest convergent z in (0, 1) for the root class.

    Keeps lo on convergent probes and hi on divergent ones, returning lo
    once the bracket is narrower than ``search_tol`` (biasing k0 upward by
    at most search_tol/R). Grammars with no production cycle reachable from
    the root converge everywhere and short-circuit to radius 1.
    """
    a = _arrays(g)
    if not a.recursive_root:
        return RadiusResult(radius=1.0, converged_everywhere=True)
    lo, hi = 0.0, 1.0
    probes = 0
    inconclusive = 0
    while hi - lo >= params.search_tol:
        mid = (lo + hi) / 2.0
        outcome = eval_fixed_point(g, mid, params)
        probes += 1
        if outcome.status is EvalStatus.INCONCLUSIVE:
            inconclusive += 1
        if outcome.status.judged_convergent:
            lo = mid
        else:
            hi = mid
    return RadiusResult(
        radius=lo,
        converged_everywhere=False,
        inconclusive_probes=inconclusive,
        probes=probes,
    )


@dataclass(frozen=True)
class ComplexityReport:
    """Complexity of one grammar at one isomorphism depth, with diagnostics."""

    radius: float
    k0: float
    depth: int
    converged_everywhere: bool
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "k0": self.k0,
            "depth": self.depth,
            "converged_everywhere": self.converged_everywhere,
            "diagnostics": dict(self.diagnostics),
        }


def complexity(
    g: ClassifiedGrammar,
    params: EvalParams = EvalParams(),
    depth: int = 0,
    diagnostics: dict | None = None,
) -> ComplexityReport:
    """Complexity k0 = -ln R of the classified grammar.

    k0 is exactly 0 for converged-everywhere grammars.
    """
    result = radius_of_convergence(g, params)
    if result.converged_everywhere:
        k0 = 0.0
    elif result.radius > 0:
        k0 = -math.log(result.radius)
    else:
        k0 = math.inf
    diag = dict(diagnostics or {})
    diag.setdefault("inconclusive_probes", result.inconclusive_probes)
    return ComplexityReport(
        radius=result.radius,
        k0=k0,
        depth=depth,
        converged_everywhere=result.converged_everywhere,
        diagnostics=diag,
    )


# ---------------------------------------------------------------------------
# Closed-form cross-check for the reference grammar (shipped fixture)
# ---------------------------------------------------------------------------

def closed_form_root_value(z: float) -> float:
    """Minus-branch root value for the reference grammar of the shipped
    fixture ``data/run22.rtm`` classified at depth 1.

    That grammar's root satisfies (3z/7) V^2 - V + (2/7)(z^5 + z^4) = 0, so

        V(z) = (1 - sqrt(1 - (24/49)(z^6 + z^5))) / (6z/7)

    taking the power-series branch through the origin. Valid only for that
    grammar; used as an independent oracle against the iteration.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    disc = 1.0 - (24.0 / 49.0) * (z**6 + z**5)
    if disc < 0:
        raise ValueError(f"negative discriminant at z={z}")
    return (1.0 - math.sqrt(disc)) / (6.0 * z / 7.0)


def closed_form_discriminant_root(tol: float = 1e-12) -> float:
    """Positive root of 1 - (24/49)(z^6 + z^5) = 0, by bisection.

    Lies above 1, so the reference grammar's closed form stays real on the
    whole (0, 1) search interval; reported as a diagnostic only.
    """
    def f(z):
        return 1.0 - (24.0 / 49.0) * (z**6 + z**5)

    lo, hi = 1.0, 1.5
    if not (f(lo) > 0 > f(hi)):
        raise RuntimeError("discriminant root not bracketed")
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0
