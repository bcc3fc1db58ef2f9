"""Entropy and mutual-information functionals, plus channel capacity.

All logarithms are base 2 (bits) with the continuity conventions
``0 log 0 = 0`` and ``0 log(0/0) = 0``.  Every quantity is computed from
entropies, so `entropy_bits` is the only place that handles zeros.

Conditional mutual information is mathematically non-negative; float error
within ``-1e-9`` of zero is clamped to 0 and anything more negative raises,
since it would indicate an inconsistent joint law.
"""

from __future__ import annotations

import numpy as np

from .channels import DiscreteChannel, JointLaw, Pmf, _name_tuple
from .errors import AuthcapError, ConvergenceError, ValidationError

NEG_FLOOR = -1e-9


def entropy_bits(probs) -> float:
    """Shannon entropy of a (possibly unnormalized-by-roundoff) mass vector."""
    arr = np.asarray(probs, dtype=np.float64).ravel()
    pos = arr[arr > 0]
    return float(-(pos * np.log2(pos)).sum())


def entropy(p: Pmf) -> float:
    return entropy_bits(p.probs)


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) in bits."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"binary_entropy expects p in [0, 1], got {p}")
    return entropy_bits([p, 1.0 - p])


def _clamped(value: float, what: str) -> float:
    if value < NEG_FLOOR:
        raise AuthcapError(f"{what} = {value} is below the numerical floor {NEG_FLOOR}")
    return max(value, 0.0)


def conditional_entropy(joint: JointLaw, target, given=()) -> float:
    """H(target | given) in bits; equals H(target) when `given` is empty."""
    target = _name_tuple(target)
    given = _name_tuple(given)
    overlap = set(target) & set(given)
    if overlap:
        raise ValidationError(f"target and conditioning sets overlap: {sorted(overlap)}")
    h_joint = entropy_bits(joint.marginal(target + given).table)
    h_given = entropy_bits(joint.marginal(given).table) if given else 0.0
    return _clamped(h_joint - h_given, "conditional entropy")


def mutual_information(joint: JointLaw, a, b, given=()) -> float:
    """I(a; b | given) = H(a|given) + H(b|given) - H(a,b|given), in bits."""
    a = _name_tuple(a)
    b = _name_tuple(b)
    given = _name_tuple(given)
    overlap = (set(a) & set(b)) | (set(a) & set(given)) | (set(b) & set(given))
    if overlap:
        raise ValidationError(f"variable sets overlap: {sorted(overlap)}")
    value = (
        conditional_entropy(joint, a, given)
        + conditional_entropy(joint, b, given)
        - conditional_entropy(joint, a + b, given)
    )
    return _clamped(value, "mutual information")


def channel_capacity(
    ch: DiscreteChannel, tol: float = 1e-9, max_iter: int = 100_000
) -> tuple[float, Pmf]:
    """Capacity of a discrete memoryless channel by alternating maximization.

    Starts from the uniform input and iterates the Blahut-Arimoto update; the
    per-iteration divergence terms give the standard bracket
    ``I(r) <= C <= max_x D(p(.|x) || q)``.  Returns once the bracket width is
    at most `tol`, reporting the achieved rate and the maximizing input.

    Raises ConvergenceError (with the final bracket in the message) if the
    bracket has not closed after `max_iter` iterations.
    """
    if tol <= 0:
        raise ValidationError(f"capacity tolerance must be positive, got {tol}")
    rows = ch.rows
    m = ch.input_size
    r = np.full(m, 1.0 / m)
    support = rows > 0
    log_rows = np.zeros_like(rows)
    log_rows[support] = np.log2(rows[support])

    lower = 0.0
    upper = np.inf
    for _ in range(max_iter):
        q = r @ rows
        # D[x] = KL(p(.|x) || q) in bits; q > 0 wherever any supported row is.
        with np.errstate(divide="ignore"):
            log_q = np.where(q > 0, np.log2(np.maximum(q, 1e-300)), 0.0)
        div = ((log_rows - log_q[None, :]) * np.where(support, rows, 0.0)).sum(axis=1)
        lower = float(r @ div)
        upper = float(div.max())
        if upper - lower <= tol:
            return lower, Pmf(r)
        r = r * np.exp2(div - div.max())
        r = r / r.sum()
    raise ConvergenceError(
        f"capacity bracket [{lower}, {upper}] (width {upper - lower}) "
        f"did not reach tolerance {tol} in {max_iter} iterations"
    )
