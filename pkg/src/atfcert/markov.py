"""Markov triples, their mutations, and the Markov tree.

A Markov triple is a triple of positive integers with
``a**2 + b**2 + c**2 == 3*a*b*c``.  Mutating one entry ``x`` replaces it by
``3 * (product of the other two) - x``; every Markov triple is reached from
``(1, 1, 1)`` by a finite sequence of mutations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Sequence

SLOTS = ("A", "B", "C")


class MarkovError(ValueError):
    pass


def is_markov(a: int, b: int, c: int) -> bool:
    if min(a, b, c) < 1:
        raise MarkovError(f"Markov entries must be positive, got {(a, b, c)}")
    return a * a + b * b + c * c == 3 * a * b * c


def _slot_index(slot) -> int:
    if isinstance(slot, int):
        if slot not in (0, 1, 2):
            raise MarkovError(f"slot index out of range: {slot}")
        return slot
    try:
        return SLOTS.index(str(slot).upper())
    except ValueError:
        raise MarkovError(f"unknown slot {slot!r}; expected one of {SLOTS}") from None


@dataclass(frozen=True)
class MarkovTriple:
    """An ordered Markov triple.

    The order matters: the polytope and diagram code give the three entries
    different roles.  Use :meth:`canonical` for the sorted representative.
    """

    a: int
    b: int
    c: int

    def __post_init__(self):
        if not is_markov(self.a, self.b, self.c):
            raise MarkovError(
                f"{self.as_tuple()} does not satisfy a^2 + b^2 + c^2 = 3abc"
            )

    @classmethod
    def parse(cls, text: str) -> "MarkovTriple":
        parts = [p for p in text.replace("(", "").replace(")", "").split(",") if p.strip()]
        if len(parts) != 3:
            raise MarkovError(f"expected three comma-separated integers, got {text!r}")
        try:
            a, b, c = (int(p) for p in parts)
        except ValueError:
            raise MarkovError(f"non-integer entry in {text!r}") from None
        return cls(a, b, c)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __iter__(self) -> Iterator[int]:
        return iter(self.as_tuple())

    def __getitem__(self, i: int) -> int:
        return self.as_tuple()[i]

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    @property
    def is_canonical(self) -> bool:
        return self.a <= self.b <= self.c

    def canonical(self) -> "MarkovTriple":
        return MarkovTriple(*sorted(self))

    def canonical_with_permutation(self) -> tuple["MarkovTriple", tuple[int, int, int]]:
        """Sorted triple plus ``perm`` with ``sorted[i] == self[perm[i]]``.

        Ties are broken by original position so the permutation is stable.
        """
        perm = tuple(sorted(range(3), key=lambda i: (self[i], i)))
        return MarkovTriple(*(self[i] for i in perm)), perm

    def pairwise_coprime(self) -> bool:
        a, b, c = self
        return gcd(a, b) == gcd(b, c) == gcd(a, c) == 1


def mutate(t: MarkovTriple, slot) -> MarkovTriple:
    """Replace entry ``slot`` by three times the product of the others minus itself.

    Positions are kept; call ``.canonical()`` on the result for sorted form.
    """
    i = _slot_index(slot)
    vals = list(t)
    others = [vals[j] for j in range(3) if j != i]
    vals[i] = 3 * others[0] * others[1] - vals[i]
    return MarkovTriple(*vals)


ROOT = MarkovTriple(1, 1, 1)


def parent(t: MarkovTriple) -> MarkovTriple:
    """The unique neighbour with strictly smaller entry sum, in canonical form.

    For (1,1,2) two slots lead to (1,1,1); that is the parent by convention.
    """
    t = t.canonical()
    if t == ROOT:
        raise MarkovError("(1,1,1) is the root of the Markov tree and has no parent")
    return mutate(t, 2).canonical()


def children(t: MarkovTriple) -> list[MarkovTriple]:
    """Canonical neighbours with a larger maximum entry (deduplicated)."""
    t = t.canonical()
    if t == ROOT:
        return [MarkovTriple(1, 1, 2)]
    out = []
    for slot in (0, 1):
        child = mutate(t, slot).canonical()
        if child not in out:
            out.append(child)
    return out


def enumerate_triples(max_c: int) -> set[MarkovTriple]:
    """All canonical Markov triples whose largest entry is at most ``max_c``.

    Breadth-first walk of the Markov tree; mutations away from the root only
    increase the largest entry, so a branch is cut as soon as it passes
    ``max_c``.
    """
    found: set[MarkovTriple] = set()
    if max_c < 1:
        return found
    queue = deque([ROOT])
    while queue:
        t = queue.popleft()
        if t in found:
            continue
        found.add(t)
        for child in children(t):
            if child.c <= max_c and child not in found:
                queue.append(child)
    return found


def sorted_triples(max_c: int) -> list[MarkovTriple]:
    return sorted(enumerate_triples(max_c), key=lambda t: (t.c, t.b, t.a))


def replay(word: Iterable, start: MarkovTriple = ROOT) -> list[MarkovTriple]:
    """Apply the slots of ``word`` in order; returns every prefix result."""
    out = [start]
    for slot in word:
        out.append(mutate(out[-1], slot))
    return out


def word_to(t: MarkovTriple) -> list[int]:
    """A mutation word (on positions of the running triple) reaching ``t`` from the root.

    The running triple is kept in canonical order after each step, so the
    word refers to sorted positions.
    """
    path = [t.canonical()]
    while path[-1] != ROOT:
        path.append(parent(path[-1]))
    path.reverse()
    word = []
    for cur, nxt in zip(path, path[1:]):
        for slot in range(3):
            if mutate(cur, slot).canonical() == nxt:
                word.append(slot)
                break
    return word


@dataclass(frozen=True)
class GrowthReport:
    triple: MarkovTriple
    applies: bool  # c >= 2, the hypothesis of (i) and (ii)
    twice_ab_le_c: bool
    square_ratio: tuple[int, int]  # c^2 / (a^2 + b^2 + c^2) as (num, den)
    ratio_ge_two_thirds: bool
    mutations_exceed_c: bool

    @property
    def ok(self) -> bool:
        return self.twice_ab_le_c and self.ratio_ge_two_thirds and self.mutations_exceed_c


def check_growth_facts(t: MarkovTriple) -> GrowthReport:
    """Evaluate the three size facts for a canonical triple.

    (i) ``2ab <= c`` and (ii) ``c^2/(a^2+b^2+c^2) >= 2/3`` are only claimed
    for ``c >= 2`` and report True (vacuously) otherwise; (iii) checks that
    mutating either of the two smaller entries produces something larger
    than ``c``.
    """
    if not t.is_canonical:
        raise MarkovError(f"check_growth_facts needs a canonical triple, got {t}")
    a, b, c = t
    applies = c >= 2
    total = a * a + b * b + c * c
    ratio_ok = 3 * c * c >= 2 * total
    grow = 3 * b * c - a > c and 3 * a * c - b > c
    return GrowthReport(
        triple=t,
        applies=applies,
        twice_ab_le_c=(2 * a * b <= c) if applies else True,
        square_ratio=(c * c, total),
        ratio_ge_two_thirds=ratio_ok if applies else True,
        mutations_exceed_c=grow,
    )


def brute_force_triples(max_c: int) -> set[MarkovTriple]:
    """Independent oracle: scan b <= c <= max_c and solve the quadratic for a."""
    from math import isqrt

    out = set()
    for c in range(1, max_c + 1):
        for b in range(1, c + 1):
            # a^2 - 3bc a + (b^2 + c^2) = 0
            disc = 9 * b * b * c * c - 4 * (b * b + c * c)
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc:
                continue
            for num in (3 * b * c - r, 3 * b * c + r):
                if num > 0 and num % 2 == 0:
                    a = num // 2
                    if a <= b:
                        out.add(MarkovTriple(a, b, c))
    return out


def sum_decreasing_slots(t: MarkovTriple) -> list[int]:
    s = sum(t)
    return [i for i in range(3) if sum(mutate(t, i)) < s]


__all__: Sequence[str] = [
    "MarkovError",
    "MarkovTriple",
    "ROOT",
    "SLOTS",
    "brute_force_triples",
    "check_growth_facts",
    "children",
    "enumerate_triples",
    "is_markov",
    "mutate",
    "parent",
    "replay",
    "sorted_triples",
    "sum_decreasing_slots",
    "word_to",
]
