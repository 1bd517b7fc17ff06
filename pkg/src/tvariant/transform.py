"""Transformations of {1..n}, subsets, set partitions and the three predicates
(separates, saturates, cross-section) the rest of the package is built on.

Maps are written on the right, so ``compose(a, b)`` applies ``a`` first.
Everything is one-indexed.  Values are immutable and carry their ground-set
size, so mixing arities raises instead of silently misbehaving.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

from .errors import ParseError, SaturationError, SizeMismatchError

__all__ = [
    "Transformation", "Subset", "SetPartition", "Analysis",
    "parse_transformation", "parse_subset", "parse_partition",
    "compose", "identity", "constant", "analyze",
    "separates", "saturates", "is_cross_section", "preimage_partition",
    "all_transformations", "all_subsets", "all_partitions", "cross_sections",
]


def _check_same_n(*values) -> int:
    ns = {v.n for v in values}
    if len(ns) != 1:
        raise SizeMismatchError(f"ground-set sizes differ: {sorted(ns)}")
    return ns.pop()


def _fmt_members(n: int, members: Iterable[int]) -> str:
    if n <= 9:
        return "".join(str(x) for x in members)
    return ",".join(str(x) for x in members)


# ---------------------------------------------------------------- values

@dataclass(frozen=True)
class Transformation:
    """A total map of {1..n}; ``images[i - 1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n == 0:
            raise ValueError("a transformation needs n >= 1")
        for v in self.images:
            if not 1 <= v <= n:
                raise ValueError(f"entry {v} out of range 1..{n}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __str__(self) -> str:
        if self.n <= 9:
            return "".join(map(str, self.images))
        return "[" + ",".join(map(str, self.images)) + "]"

    def __repr__(self) -> str:
        return f"Transformation({self})"

    def __lt__(self, other: "Transformation") -> bool:
        return self.images < other.images

    @cached_property
    def image(self) -> "Subset":
        return Subset(self.n, frozenset(self.images))

    @cached_property
    def kernel(self) -> "SetPartition":
        groups: dict[int, list[int]] = {}
        for x, y in enumerate(self.images, start=1):
            groups.setdefault(y, []).append(x)
        return SetPartition.from_blocks(self.n, groups.values())

    @property
    def rank(self) -> int:
        return len(set(self.images))

    def restrict(self, domain: Iterable[int]) -> dict[int, int]:
        return {x: self.images[x - 1] for x in domain}

    def is_permutation(self) -> bool:
        return self.rank == self.n


@dataclass(frozen=True)
class Subset:
    n: int
    members: frozenset

    def __post_init__(self):
        if not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))
        for x in self.members:
            if not 1 <= x <= self.n:
                raise ValueError(f"member {x} out of range 1..{self.n}")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "Subset":
        return cls(n, frozenset(members))

    @cached_property
    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __iter__(self) -> Iterator[int]:
        return iter(self.sorted)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return x in self.members

    def __le__(self, other: "Subset") -> bool:
        _check_same_n(self, other)
        return self.members <= other.members

    def __str__(self) -> str:
        return "{" + _fmt_members(self.n, self.sorted) + "}"

    def __repr__(self) -> str:
        return f"Subset({self})"

    def sort_key(self):
        """Larger sets first, then lexicographic."""
        return (-len(self.members), self.sorted)

    def image_under(self, a: Transformation) -> "Subset":
        _check_same_n(self, a)
        return Subset(self.n, frozenset(a(x) for x in self.members))


@dataclass(frozen=True)
class SetPartition:
    """A partition of {1..n}.  Always stored in canonical form: each block
    ascending, blocks ordered by least element."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: list[int] = []
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            seen.extend(b)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {self.blocks} do not partition 1..{self.n}")
        canon = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        if canon != self.blocks:
            object.__setattr__(self, "blocks", canon)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        return cls(n, tuple(tuple(b) for b in blocks))

    @classmethod
    def discrete(cls, n: int) -> "SetPartition":
        return cls(n, tuple((x,) for x in range(1, n + 1)))

    @classmethod
    def single(cls, n: int) -> "SetPartition":
        return cls(n, (tuple(range(1, n + 1)),))

    @cached_property
    def _index(self) -> dict[int, int]:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def block_index(self, x: int) -> int:
        return self._index[x]

    def block_of(self, x: int) -> tuple[int, ...]:
        return self.blocks[self._index[x]]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def refines(self, other: "SetPartition") -> bool:
        """Every block of ``self`` lies inside a block of ``other``."""
        _check_same_n(self, other)
        return all(len({other._index[x] for x in b}) == 1 for b in self.blocks)

    def __str__(self) -> str:
        return "{" + "|".join(_fmt_members(self.n, b) for b in self.blocks) + "}"

    def __repr__(self) -> str:
        return f"SetPartition({self})"

    def sort_key(self):
        """More blocks first, then lexicographic on the canonical blocks."""
        return (-len(self.blocks), self.blocks)


class Analysis(NamedTuple):
    image: Subset
    kernel: SetPartition
    rank: int


# ---------------------------------------------------------------- codecs

def parse_transformation(word: str, n: int) -> Transformation:
    """Parse ``"1233"`` (n <= 9), ``"(1233)"`` or ``"[1,2,3,3]"``."""
    w = word.strip()
    if w.startswith("(") and w.endswith(")"):
        w = w[1:-1]
    if w.startswith("["):
        if not w.endswith("]"):
            raise ParseError(f"unterminated list: {word!r}")
        body = w[1:-1].strip()
        try:
            entries = [int(t) for t in body.split(",")] if body else []
        except ValueError:
            raise ParseError(f"non-integer entry in {word!r}") from None
    else:
        if not w.isdigit():
            raise ParseError(f"not a digit word: {word!r}")
        if n > 9:
            raise ParseError("digit words need n <= 9; use the bracket form")
        entries = [int(c) for c in w]
    if len(entries) != n:
        raise ParseError(f"{word!r} has length {len(entries)}, expected {n}")
    for v in entries:
        if not 1 <= v <= n:
            raise ParseError(f"entry {v} in {word!r} out of range 1..{n}")
    return Transformation(tuple(entries))


def _parse_members(text: str, n: int) -> list[int]:
    text = text.strip()
    if not text:
        return []
    if "," in text or n > 9:
        return [int(t) for t in text.split(",")]
    if not text.isdigit():
        raise ParseError(f"bad members {text!r}")
    return [int(c) for c in text]


def parse_subset(text: str, n: int) -> Subset:
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise ParseError(f"subset must be braced: {text!r}")
    try:
        members = _parse_members(t[1:-1], n)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if len(set(members)) != len(members):
        raise ParseError(f"repeated member in {text!r}")
    try:
        return Subset(n, frozenset(members))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_partition(text: str, n: int) -> SetPartition:
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise ParseError(f"partition must be braced: {text!r}")
    try:
        blocks = [_parse_members(b, n) for b in re.split(r"\|", t[1:-1])]
        return SetPartition.from_blocks(n, blocks)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# ---------------------------------------------------------------- operations

def compose(a: Transformation, b: Transformation) -> Transformation:
    """x -> b(a(x))."""
    _check_same_n(a, b)
    bi = b.images
    return Transformation(tuple(bi[x - 1] for x in a.images))


def identity(n: int) -> Transformation:
    return Transformation(tuple(range(1, n + 1)))


def constant(n: int, value: int) -> Transformation:
    return Transformation((value,) * n)


def analyze(a: Transformation) -> Analysis:
    return Analysis(a.image, a.kernel, a.rank)


def separates(pi: SetPartition, A: Subset) -> bool:
    _check_same_n(pi, A)
    hit = [pi.block_index(x) for x in A.members]
    return len(hit) == len(set(hit))


def saturates(A: Subset, pi: SetPartition) -> bool:
    _check_same_n(pi, A)
    return len({pi.block_index(x) for x in A.members}) == len(pi)


def is_cross_section(A: Subset, pi: SetPartition) -> bool:
    _check_same_n(pi, A)
    hit = [pi.block_index(x) for x in A.members]
    return len(hit) == len(set(hit)) == len(pi)


def preimage_partition(pi: SetPartition, theta: Transformation) -> SetPartition:
    """The partition whose blocks are theta^-1(B) for the blocks B of ``pi``."""
    _check_same_n(pi, theta)
    groups: dict[int, list[int]] = {}
    for x in range(1, theta.n + 1):
        groups.setdefault(pi.block_index(theta(x)), []).append(x)
    if len(groups) != len(pi):
        empty = [pi.blocks[i] for i in range(len(pi)) if i not in groups]
        raise SaturationError(f"image of {theta} misses block(s) {empty} of {pi}")
    return SetPartition.from_blocks(theta.n, groups.values())


# ---------------------------------------------------------------- enumeration

def all_transformations(n: int) -> Iterator[Transformation]:
    """All n**n maps, lexicographic on the image word."""
    for images in itertools.product(range(1, n + 1), repeat=n):
        yield Transformation(images)


def all_subsets(n: int, nonempty: bool = True) -> list[Subset]:
    out = []
    for k in range(0 if not nonempty else 1, n + 1):
        for c in itertools.combinations(range(1, n + 1), k):
            out.append(Subset(n, frozenset(c)))
    return sorted(out, key=Subset.sort_key)


def _rgs(n: int) -> Iterator[list[int]]:
    # restricted growth strings
    def rec(prefix, top):
        if len(prefix) == n:
            yield prefix
            return
        for v in range(top + 2):
            yield from rec(prefix + [v], max(top, v))
    yield from rec([0], 0)


def all_partitions(n: int) -> list[SetPartition]:
    out = []
    for s in _rgs(n):
        blocks: dict[int, list[int]] = {}
        for x, b in enumerate(s, start=1):
            blocks.setdefault(b, []).append(x)
        out.append(SetPartition.from_blocks(n, blocks.values()))
    return sorted(out, key=SetPartition.sort_key)


def cross_sections(pi: SetPartition, within: Subset | None = None) -> list[Subset]:
    """All cross-sections of ``pi`` (optionally drawing only from ``within``)."""
    choices = [[x for x in b if within is None or x in within] for b in pi.blocks]
    return [Subset(pi.n, frozenset(c)) for c in itertools.product(*choices)]
