"""Pure-Python fixed-point iteration kernel.

Fallback for the compiled extension; both must produce bit-identical
results, so the arithmetic here mirrors the C loop expression for
expression.
"""

CONVERGED = 0
DIVERGED = 1
INCONCLUSIVE = 2

BACKEND = "python"


def iterate_system(z, offsets, coeff, left, right, terminal, m_max, epsilon, blowup):
    """Iterate the normalized class system at ``z`` from all-ones.

    CSR layout: class i owns productions offsets[i]..offsets[i+1], each
    contributing coeff[p] * V[left[p]] * V[right[p]]. Terminal classes stay
    pinned at 1. Returns (status, values, iterations).
    """
    offsets = [int(x) for x in offsets]
    coeff = [float(x) for x in coeff]
    left = [int(x) for x in left]
    right = [int(x) for x in right]
    terminal = [int(x) for x in terminal]
    n = len(terminal)
    v = [1.0] * n
    new = [0.0] * n
    m = 0
    for m in range(1, m_max + 1):
        for i in range(n):
            if terminal[i]:
                new[i] = 1.0
                continue
            acc = 0.0
            for p in range(offsets[i], offsets[i + 1]):
                acc += coeff[p] * (v[left[p]] * v[right[p]])
            new[i] = z * acc
        worst = 0.0
        for i in range(n):
            value = new[i]
            if value != value:
                raise ValueError("non-finite value during iteration (malformed grammar)")
            if value > blowup:
                return DIVERGED, list(new), m
            diff = value - v[i]
            if diff < 0.0:
                diff = -diff
            base = v[i] if v[i] > 1e-300 else 1e-300
            rel = diff / base
            if rel > worst:
                worst = rel
        if worst < epsilon:
            return CONVERGED, list(new), m
        v, new = new, v
    return INCONCLUSIVE, list(v), m
