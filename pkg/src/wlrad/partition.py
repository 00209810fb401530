"""Sample partitions induced by graph colors, and multiplicity differences.

A color histogram is the canonical tuple of ``(color, count)`` pairs sorted by
color. Graphs with equal histograms fall in the same class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

ColorHistogram = tuple[tuple[int, int], ...]


def make_histogram(colors) -> ColorHistogram:
    return tuple(sorted(Counter(int(c) for c in colors).items()))


def histogram_to_json(hist: ColorHistogram) -> list[list[int]]:
    return [[c, k] for c, k in hist]


@dataclass(frozen=True)
class SamplePartition:
    """Disjoint classes ``I_1..I_p`` covering sample indices ``0..m-1``."""

    classes: tuple[tuple[int, ...], ...]
    class_keys: tuple[ColorHistogram, ...]
    m: int

    def __post_init__(self):
        if len(self.classes) != len(self.class_keys):
            raise ValueError("one key per class required")
        if not self.classes or any(len(c) == 0 for c in self.classes):
            raise ValueError("classes must be non-empty")
        members = sorted(i for c in self.classes for i in c)
        if members != list(range(self.m)):
            raise ValueError("classes must be disjoint and cover range(m)")

    @property
    def p(self) -> int:
        return len(self.classes)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.multiplicities)) == 1

    def class_index(self) -> list[int]:
        """Class position of every sample index."""
        out = [0] * self.m
        for j, cls in enumerate(self.classes):
            for i in cls:
                out[i] = j
        return out

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "p": self.p,
            "classes": [
                {"key": histogram_to_json(k), "members": list(c), "multiplicity": len(c)}
                for k, c in zip(self.class_keys, self.classes)
            ],
        }

    @classmethod
    def from_multiplicities(cls, mu: Sequence[int]) -> SamplePartition:
        """Partition with consecutive index blocks of the given sizes.

        Keys are synthetic single-color histograms ``((j, 1),)``; handy for
        exercising the bounds without graphs.
        """
        classes = []
        start = 0
        for k in mu:
            if k < 1:
                raise ValueError("multiplicities must be positive")
            classes.append(tuple(range(start, start + k)))
            start += k
        keys = tuple(((j, 1),) for j in range(len(classes)))
        return cls(tuple(classes), keys, start)


def partition_sample(histograms: Sequence[ColorHistogram]) -> SamplePartition:
    """Group sample indices by histogram; classes ordered by sorted key."""
    if not histograms:
        raise ValueError("need at least one histogram")
    groups: dict[ColorHistogram, list[int]] = {}
    for i, h in enumerate(histograms):
        groups.setdefault(tuple(h), []).append(i)
    keys = sorted(groups)
    return SamplePartition(tuple(tuple(groups[k]) for k in keys), tuple(keys), len(histograms))


@dataclass(frozen=True)
class DiffEntry:
    key: ColorHistogram
    mu_a: int
    mu_b: int

    @property
    def eps(self) -> int:
        return abs(self.mu_a - self.mu_b)


@dataclass(frozen=True)
class MultiplicityDiff:
    entries: tuple[DiffEntry, ...]
    m: int

    @property
    def eps(self) -> tuple[int, ...]:
        return tuple(e.eps for e in self.entries)

    @property
    def total(self) -> int:
        return sum(self.eps)

    def to_json(self) -> list[dict]:
        return [
            {"key": histogram_to_json(e.key), "mu_s": e.mu_a, "mu_s_prime": e.mu_b, "eps": e.eps}
            for e in self.entries
        ]


def multiplicity_diff(part_a: SamplePartition, part_b: SamplePartition) -> MultiplicityDiff:
    """Per-color multiplicities of two equal-size samples, zero-filled over the key union.

    Keys are compared by content, so both partitions must come from one joint
    refinement run for the color ids to be aligned.
    """
    if part_a.m != part_b.m:
        raise ValueError(f"sample sizes differ: {part_a.m} vs {part_b.m}")
    mu_a = dict(zip(part_a.class_keys, part_a.multiplicities))
    mu_b = dict(zip(part_b.class_keys, part_b.multiplicities))
    entries = tuple(
        DiffEntry(k, mu_a.get(k, 0), mu_b.get(k, 0)) for k in sorted(set(mu_a) | set(mu_b))
    )
    return MultiplicityDiff(entries, part_a.m)
