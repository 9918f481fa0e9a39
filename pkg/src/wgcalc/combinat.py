"""Permutations, integer partitions, set partitions, pairings and index sequences.

Everything here is 1-based and immutable.  Composition is right-to-left,
``(p * q)(x) == p(q(x))``; every other module relies on that single
convention.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``[d]`` in one-line notation (1-based images)."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of [{len(images)}]: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, d: int) -> Permutation:
        return cls(tuple(range(1, d + 1)))

    @classmethod
    def transposition(cls, d: int, i: int, j: int) -> Permutation:
        images = list(range(1, d + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, d: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(1, d + 1))
        for cyc in cycles:
            cyc = tuple(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise ValueError("cannot compose permutations of different degree")
        img = self.images
        return Permutation._unchecked(tuple(img[v - 1] for v in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for x, y in enumerate(self.images, start=1):
            inv[y - 1] = x
        return Permutation._unchecked(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == x for x, v in enumerate(self.images, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles including fixed points, each starting at its minimum."""
        seen = [False] * (self.degree + 1)
        out = []
        for start in range(1, self.degree + 1):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x - 1]
            out.append(tuple(cyc))
        return out

    def num_cycles(self) -> int:
        return len(self.cycles())

    def __str__(self):
        nontrivial = [c for c in self.cycles() if len(c) > 1]
        if not nontrivial:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in nontrivial)

    @classmethod
    def _unchecked(cls, images: tuple[int, ...]) -> Permutation:
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj


def all_permutations(d: int) -> list[Permutation]:
    """All of S(d) in lexicographic one-line order."""
    return [Permutation._unchecked(p) for p in itertools.permutations(range(1, d + 1))]


@dataclass(frozen=True, order=True)
class IntegerPartition:
    """Weakly decreasing tuple of positive parts."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> IntegerPartition:
        parts = sorted((int(t) for t in text.replace(" ", "").split(",") if t), reverse=True)
        return cls(tuple(parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, k):
        return self.parts[k]

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def integer_partitions(d: int) -> list[IntegerPartition]:
    """Partitions of d in reverse lexicographic order, (d) first."""

    def gen(n: int, largest: int) -> Iterator[tuple[int, ...]]:
        if n == 0:
            yield ()
            return
        for first in range(min(n, largest), 0, -1):
            for rest in gen(n - first, first):
                yield (first,) + rest

    return [IntegerPartition(p) for p in gen(d, d)]


@dataclass(frozen=True)
class SetPartition:
    """Set partition of ``[d]`` in canonical order (blocks by minimum, ascending)."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        if any(len(b) == 0 for b in blocks):
            raise ValueError("set partition blocks must be nonempty")
        flat = sorted(x for b in blocks for x in b)
        if flat != list(range(1, len(flat) + 1)):
            raise ValueError(f"blocks do not partition [{len(flat)}]: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


@dataclass(frozen=True)
class Pairing:
    """Perfect matching of ``[2d]``; pairs stored as ``(a, b)`` with a < b, sorted."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        if any(len(p) != 2 for p in pairs):
            raise ValueError("pairing blocks must have size two")
        flat = sorted(x for p in pairs for x in p)
        if flat != list(range(1, len(flat) + 1)):
            raise ValueError(f"pairs do not cover [{len(flat)}]: {pairs}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def d(self) -> int:
        return len(self.pairs)

    def __str__(self):
        return "{" + ",".join("{%d,%d}" % p for p in self.pairs) + "}"


@dataclass(frozen=True)
class IndexSequence:
    """A function ``[len(entries)] -> [N]``."""

    entries: tuple[int, ...]
    N: int

    def __post_init__(self):
        entries = tuple(int(v) for v in self.entries)
        if any(not 1 <= v <= self.N for v in entries):
            raise ValueError(f"index out of range [1, {self.N}]: {entries}")
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _entries(i) -> tuple:
    return i.entries if isinstance(i, IndexSequence) else tuple(i)


def cycle_type(p: Permutation) -> IntegerPartition:
    return IntegerPartition(tuple(sorted((len(c) for c in p.cycles()), reverse=True)))


def word_norm(p: Permutation) -> int:
    """Transposition distance to the identity: ``d - #cycles``."""
    return p.degree - p.num_cycles()


def sign(p: Permutation) -> int:
    return -1 if word_norm(p) % 2 else 1


def fiber_type(i) -> SetPartition:
    """Level sets of ``i`` as a set partition of its domain."""
    fibers: dict = {}
    for x, v in enumerate(_entries(i), start=1):
        fibers.setdefault(v, []).append(x)
    return SetPartition(tuple(tuple(b) for b in fibers.values()))


def enumerate_set_partitions(d: int, max_blocks: int | None = None) -> list[SetPartition]:
    """Set partitions of [d] with at most ``max_blocks`` blocks.

    Generated from restricted-growth strings, then listed by decreasing
    block count (ties in block order), so the all-singletons partition is
    first and ``{{1,...,d}}`` last.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if max_blocks is None:
        max_blocks = d
    if max_blocks < 1:
        raise ValueError("max_blocks must be positive")
    out = []

    def rec(prefix: list[int], top: int):
        if len(prefix) == d:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for x, b in enumerate(prefix, start=1):
                blocks[b].append(x)
            out.append(SetPartition(tuple(tuple(b) for b in blocks)))
            return
        for b in range(min(top + 1, max_blocks - 1) + 1):
            prefix.append(b)
            rec(prefix, max(top, b))
            prefix.pop()

    rec([0], 0)
    out.sort(key=lambda p: (-p.n_blocks, p.blocks))
    return out


def enumerate_pairings(two_d: int) -> list[Pairing]:
    """All (2d-1)!! pairings of [two_d]; smallest unpaired point paired first."""
    if two_d < 2 or two_d % 2:
        raise ValueError("pairings require even ground set")
    out = []

    def rec(rest: tuple[int, ...], acc: list[tuple[int, int]]):
        if not rest:
            out.append(Pairing(tuple(acc)))
            return
        a = rest[0]
        for k in range(1, len(rest)):
            acc.append((a, rest[k]))
            rec(rest[1:k] + rest[k + 1:], acc)
            acc.pop()

    rec(tuple(range(1, two_d + 1)), [])
    return out


def pairing_to_permutation(p: Pairing) -> Permutation:
    # pairs are already sorted by their smaller element, each as (small, large)
    return Permutation(tuple(x for pair in p.pairs for x in pair))


def permutation_to_pairing(s: Permutation) -> Pairing:
    if s.degree % 2:
        raise ValueError("pairings require even ground set")
    im = s.images
    return Pairing(tuple((im[2 * r], im[2 * r + 1]) for r in range(s.degree // 2)))


def coset_type(s: Permutation) -> IntegerPartition:
    """Half-lengths of the loops formed by ``{2i-1,2i}`` and ``{s(2i-1),s(2i)}``."""
    n = s.degree
    if n % 2:
        raise ValueError("coset type requires a permutation of even degree")
    # partner across the standard pairing and across the s-pairing
    std = [0] * (n + 1)
    other = [0] * (n + 1)
    for r in range(1, n, 2):
        std[r], std[r + 1] = r + 1, r
        a, b = s(r), s(r + 1)
        other[a], other[b] = b, a
    seen = [False] * (n + 1)
    halves = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        length = 0
        x = start
        use_std = True
        while not seen[x]:
            seen[x] = True
            length += 1
            x = std[x] if use_std else other[x]
            use_std = not use_std
        halves.append(length // 2)
    return IntegerPartition(tuple(sorted(halves, reverse=True)))


def kappa(s: Permutation) -> int:
    return len(coset_type(s))


def longest_decreasing_subsequence(p: Permutation | Sequence[int]) -> int:
    """Patience sorting on the negated sequence (strictly decreasing runs)."""
    seq = p.images if isinstance(p, Permutation) else tuple(p)
    tails: list[int] = []
    for v in seq:
        k = bisect.bisect_left(tails, -v)
        if k == len(tails):
            tails.append(-v)
        else:
            tails[k] = -v
    return len(tails)


def index_tuples(n: int, length: int) -> Iterable[tuple[int, ...]]:
    """``Fun(length, n)`` in lexicographic order."""
    return itertools.product(range(1, n + 1), repeat=length)
