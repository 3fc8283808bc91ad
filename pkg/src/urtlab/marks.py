"""Marks carried by vertices and edge endpoints.

A mark is a small tagged vector: an integer tag plus up to eight finite
reals.  The distance between two marks is infinite when the tags differ
and otherwise the max of the componentwise absolute differences (vectors
of different lengths are at infinite distance).  This covers the mark
uses in this package: percolation colors in ``values[0]``, direction
labels in ``values[1]``, and IID real decorations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MarkError

MAX_VALUES = 8


@dataclass(frozen=True)
class Mark:
    tag: int = 0
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if not isinstance(self.tag, int) or self.tag < 0:
            raise MarkError(f"mark tag must be a nonnegative int, got {self.tag!r}")
        if len(self.values) > MAX_VALUES:
            raise MarkError(f"mark carries {len(self.values)} values, max is {MAX_VALUES}")
        for v in self.values:
            if not math.isfinite(v):
                raise MarkError(f"mark values must be finite, got {v!r}")

    def with_prefix(self, value: float) -> "Mark":
        """New mark with `value` prepended to the value vector."""
        if not self.values and self.tag == 0:
            if value == 1.0:
                return OPEN_MARK
            if value == 0.0:
                return CLOSED_MARK
        return _unchecked_mark(self.tag, (float(value),) + self.values)

    def drop_first_value(self) -> "Mark":
        """New mark with the leading value removed (no-op on empty values)."""
        if not self.values:
            return self
        return _unchecked_mark(self.tag, self.values[1:])


def _unchecked_mark(tag: int, values: tuple[float, ...]) -> Mark:
    # fast path for marks derived from already-validated ones
    m = object.__new__(Mark)
    object.__setattr__(m, "tag", tag)
    object.__setattr__(m, "values", values)
    return m


EMPTY_MARK = Mark()

# Percolation color convention: values[0] is 1.0 for open, 0.0 for closed.
OPEN, CLOSED = 1.0, 0.0
OPEN_MARK = Mark(0, (OPEN,))
CLOSED_MARK = Mark(0, (CLOSED,))


def mark_distance(a: Mark, b: Mark) -> float:
    """Max-metric distance; inf on tag or arity mismatch."""
    if a.tag != b.tag or len(a.values) != len(b.values):
        return math.inf
    if not a.values:
        return 0.0
    return max(abs(x - y) for x, y in zip(a.values, b.values))


def quantize_mark(m: Mark, step: float) -> Mark:
    """Round each value to the nearest multiple of `step` (0 = no rounding)."""
    if step <= 0.0 or not m.values:
        return m
    return Mark(m.tag, tuple(round(v / step) * step for v in m.values))


def mark_key(m: Mark, step: float) -> tuple:
    """Hashable exact key of a mark after quantization at `step`.

    Quantized values are kept as integer multiples of the step so the key
    is exact; with step 0 the raw float bits are used.
    """
    if step > 0.0:
        return (m.tag,) + tuple(round(v / step) for v in m.values)
    return (m.tag,) + m.values
