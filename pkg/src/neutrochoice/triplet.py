"""Exact probability triplets and their verdicts.

A triplet holds the probabilities of an element being chosen, not chosen,
and left indeterminate.  All arithmetic is exact: components are
``fractions.Fraction`` values, comparisons are strict, and floats are
rejected everywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    BoundTooSmallError,
    OutOfRangeError,
    RetryLimitError,
    SumNotOneError,
    ThresholdOutOfRangeError,
    TieViolationError,
)

#: Smallest denominator bound the sampler accepts.
MIN_DENOMINATOR_BOUND = 4

_RETRY_CAP = 1000

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce an int, a ``"num/den"`` string, or a Fraction to a Fraction.

    Floats are rejected: the core is exact end to end.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use Fraction, int, or 'num/den' strings")
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    """Render a Fraction as a ``"num/den"`` string in lowest terms."""
    return f"{value.numerator}/{value.denominator}"


class Verdict(Enum):
    """Outcome of a triplet: the component holding the unique strict maximum."""

    CHOSEN = "chosen"
    NOT_CHOSEN = "not_chosen"
    INDETERMINATE = "indeterminate"


class ThresholdVerdict(Enum):
    """Outcome of comparing the choice probability against a threshold."""

    CHOSEN_AT_THRESHOLD = "chosen_at_threshold"
    NOT_CHOSEN_AT_THRESHOLD = "not_chosen_at_threshold"


@dataclass(frozen=True)
class Triplet:
    """Probabilities of choosing, not choosing, and leaving open.

    Instances built through :func:`make_triplet` satisfy: every component
    lies in [0, 1], the components sum to exactly 1, and no two components
    are equal (so the strict maximum is unique).
    """

    p_chosen: Fraction
    p_not_chosen: Fraction
    p_indeterminate: Fraction

    def components(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.p_chosen, self.p_not_chosen, self.p_indeterminate)

    def serialize(self) -> list[str]:
        return [format_rational(c) for c in self.components()]


def make_triplet(p_chosen, p_not_chosen, p_indeterminate) -> Triplet:
    """Validate components and build a :class:`Triplet`.

    Checks run in a fixed order: range, then sum, then pairwise ties.
    """
    i = as_rational(p_chosen)
    j = as_rational(p_not_chosen)
    k = as_rational(p_indeterminate)
    for name, c in (("p_chosen", i), ("p_not_chosen", j), ("p_indeterminate", k)):
        if c < _ZERO or c > _ONE:
            raise OutOfRangeError(
                f"{name}={format_rational(c)} lies outside [0, 1]", address=name
            )
    total = i + j + k
    if total != _ONE:
        raise SumNotOneError(f"components sum to {format_rational(total)}, not 1")
    if i == j or j == k or i == k:
        raise TieViolationError(
            f"components must be pairwise distinct, got "
            f"({format_rational(i)}, {format_rational(j)}, {format_rational(k)})"
        )
    return Triplet(i, j, k)


def parse_triplet(values) -> Triplet:
    """Build a triplet from a three-item sequence of rational-like values."""
    items = list(values)
    if len(items) != 3:
        raise ValueError(f"a triplet needs exactly 3 components, got {len(items)}")
    return make_triplet(*items)


def classify(triplet: Triplet) -> Verdict:
    """Return the verdict of a valid triplet: its unique strict maximum."""
    i, j, k = triplet.components()
    if i > j and i > k:
        return Verdict.CHOSEN
    if j > i and j > k:
        return Verdict.NOT_CHOSEN
    return Verdict.INDETERMINATE


def classify_threshold(triplet: Triplet, threshold) -> ThresholdVerdict:
    """Compare the choice probability against a threshold (``>=`` convention)."""
    p = as_rational(threshold)
    if p < _ZERO or p > _ONE:
        raise ThresholdOutOfRangeError(f"threshold {format_rational(p)} lies outside [0, 1]")
    if triplet.p_chosen >= p:
        return ThresholdVerdict.CHOSEN_AT_THRESHOLD
    return ThresholdVerdict.NOT_CHOSEN_AT_THRESHOLD


def random_triplet(rng: random.Random, denominator_bound: int) -> Triplet:
    """Sample a uniform tie-free triplet with denominators dividing the bound.

    The sampler draws uniform compositions of ``denominator_bound`` into
    three non-negative parts (stars and bars) and rejects draws with tied
    parts.  The ``rng`` argument is the explicit generator state: two
    generators seeded identically produce identical triplet sequences, and
    no hidden global state is touched.
    """
    if denominator_bound < MIN_DENOMINATOR_BOUND:
        raise BoundTooSmallError(
            f"denominator bound must be at least {MIN_DENOMINATOR_BOUND}, "
            f"got {denominator_bound}"
        )
    n = denominator_bound
    for _ in range(_RETRY_CAP):
        first, second = sorted(rng.sample(range(n + 2), 2))
        a = first
        b = second - first - 1
        c = n + 1 - second
        if a != b and b != c and a != c:
            return make_triplet(Fraction(a, n), Fraction(b, n), Fraction(c, n))
    raise RetryLimitError(
        f"no tie-free composition of {n} found after {_RETRY_CAP} draws"
    )
