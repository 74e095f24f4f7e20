"""Constellations: finite ordered sequences of even gaps."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Sequence, Union

__all__ = ["Constellation", "as_constellation", "ConstellationLike"]


@dataclass(frozen=True, order=True)
class Constellation:
    """A sequence of ``j >= 1`` even gaps, each at least 2.

    The text form is comma separated, ``"2,10,2"``.
    """

    gaps: tuple[int, ...]

    def __post_init__(self):
        gaps = tuple(int(g) for g in self.gaps)
        object.__setattr__(self, "gaps", gaps)
        if not gaps:
            raise ValueError("a constellation needs at least one gap")
        bad = [g for g in gaps if g < 2 or g % 2]
        if bad:
            raise ValueError(f"gaps must be even and >= 2, got {bad} in {gaps}")

    @classmethod
    def parse(cls, text: str) -> "Constellation":
        parts = [t.strip() for t in text.split(",")]
        if any(not t for t in parts):
            raise ValueError(f"malformed constellation {text!r}; use e.g. '2,10,2'")
        try:
            return cls(tuple(int(t) for t in parts))
        except ValueError as exc:
            raise ValueError(f"malformed constellation {text!r}: {exc}") from None

    @classmethod
    def from_offsets(cls, offsets: Sequence[int]) -> "Constellation":
        """Consecutive differences of a strictly ascending tuple."""
        if len(offsets) < 2:
            raise ValueError("need at least two offsets")
        diffs = tuple(b - a for a, b in zip(offsets, offsets[1:]))
        if any(d <= 0 for d in diffs):
            raise ValueError(f"offsets must be strictly ascending: {tuple(offsets)}")
        return cls(diffs)

    def offsets(self) -> tuple[int, ...]:
        """Prefix sums starting at 0; inverse of :meth:`from_offsets`."""
        return (0, *accumulate(self.gaps))

    @property
    def gap_count(self) -> int:
        return len(self.gaps)

    @property
    def gap_sum(self) -> int:
        return sum(self.gaps)

    def reversed(self) -> "Constellation":
        return Constellation(self.gaps[::-1])

    def __len__(self) -> int:
        return len(self.gaps)

    def __iter__(self):
        return iter(self.gaps)

    def __str__(self) -> str:
        return ",".join(map(str, self.gaps))

    def __repr__(self) -> str:
        return f"Constellation({str(self)!r})"


ConstellationLike = Union[Constellation, str, Iterable[int]]


def as_constellation(s: ConstellationLike) -> Constellation:
    if isinstance(s, Constellation):
        return s
    if isinstance(s, str):
        return Constellation.parse(s)
    return Constellation(tuple(s))
