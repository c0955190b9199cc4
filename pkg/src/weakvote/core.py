"""Weak orders, profiles and positional scoring systems.

Candidates are dense integer ids ``0..m-1`` into a profile's roster of names.
A ballot is a :class:`WeakOrder`, an ordered tuple of disjoint indifference
classes.  All weights and scores are :class:`fractions.Fraction` values so
that eliminations never depend on floating point round-off.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

OrderType = tuple[int, ...]


class ProfileError(ValueError):
    """Raised for malformed ballots, rosters or profiles."""


@dataclass(frozen=True)
class WeakOrder:
    """Ordered indifference classes ``C_1 > C_2 > ... > C_k``."""

    classes: tuple[frozenset[int], ...]

    def __post_init__(self):
        classes = tuple(frozenset(c) for c in self.classes)
        if not classes:
            raise ProfileError("a weak order needs at least one class")
        seen: set[int] = set()
        for cls in classes:
            if not cls:
                raise ProfileError("indifference classes must be nonempty")
            if seen & cls:
                raise ProfileError(f"candidate(s) {sorted(seen & cls)} appear twice")
            seen |= cls
        object.__setattr__(self, "classes", classes)

    @classmethod
    def linear(cls, ranking: Iterable[int]) -> WeakOrder:
        return cls(tuple(frozenset([c]) for c in ranking))

    @property
    def domain(self) -> frozenset[int]:
        return frozenset().union(*self.classes)

    @property
    def order_type(self) -> OrderType:
        return tuple(len(c) for c in self.classes)

    @property
    def top(self) -> frozenset[int]:
        return self.classes[0]

    @property
    def is_linear(self) -> bool:
        return all(len(c) == 1 for c in self.classes)

    def level(self, c: int) -> int:
        """Index of the class containing ``c`` (0 is the top class)."""
        for j, cls in enumerate(self.classes):
            if c in cls:
                return j
        raise KeyError(c)

    def weakly_prefers(self, a: int, b: int) -> bool:
        return self.level(a) <= self.level(b)

    def prefers(self, a: int, b: int) -> bool:
        return self.level(a) < self.level(b)

    def restrict(self, keep: Iterable[int]) -> WeakOrder:
        keep = frozenset(keep)
        classes = tuple(c & keep for c in self.classes if c & keep)
        if not classes:
            raise ProfileError("cannot restrict a weak order to an empty set")
        return WeakOrder(classes)

    def relabel(self, mapping: Mapping[int, int]) -> WeakOrder:
        return WeakOrder(tuple(frozenset(mapping[c] for c in cls) for cls in self.classes))

    def flatten(self) -> tuple[int, ...]:
        """Linear extension breaking ties by candidate id."""
        return tuple(c for cls in self.classes for c in sorted(cls))


def order_type(order: WeakOrder) -> OrderType:
    return order.order_type


def restrict(order: WeakOrder, keep: Iterable[int]) -> WeakOrder:
    return order.restrict(keep)


def top_set(order: WeakOrder) -> frozenset[int]:
    return order.top


# ---------------------------------------------------------------------------
# scoring systems


def compositions(m: int) -> Iterable[OrderType]:
    """All order types over ``m`` candidates (ordered compositions of m)."""
    for cuts in itertools.product((False, True), repeat=m - 1):
        sizes, run = [], 1
        for cut in cuts:
            if cut:
                sizes.append(run)
                run = 1
            else:
                run += 1
        sizes.append(run)
        yield tuple(sizes)


def _check_vector(tau: OrderType, vec: Sequence[Fraction]) -> None:
    if len(vec) != len(tau):
        raise ProfileError(f"score vector {vec} has wrong length for order type {tau}")
    if vec[-1] != 0:
        raise ProfileError(f"score vector for {tau} must end in 0, got {vec}")
    if any(a < b for a, b in zip(vec, vec[1:])):
        raise ProfileError(f"score vector for {tau} is not monotone: {vec}")


@dataclass(frozen=True)
class ScoringSystem:
    """Assignment of a score vector to every order type.

    ``kind`` is one of ``"approval"``, ``"split"``, ``"borda"`` or ``"table"``.
    Table systems carry an explicit mapping; order types missing from it
    either raise (``fallback="error"``) or score like approval
    (``fallback="approval"``).  A fully indifferent ballot (one class) scores
    ``(0,)`` under every kind.
    """

    kind: str
    table: Mapping[OrderType, tuple[Fraction, ...]] | None = field(default=None, compare=False)
    fallback: str = "error"
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("approval", "split", "borda", "table"):
            raise ValueError(f"unknown scoring system kind {self.kind!r}")
        if self.fallback not in ("error", "approval"):
            raise ValueError(f"unknown fallback {self.fallback!r}")
        if self.kind == "table":
            if self.table is None:
                raise ValueError("table systems need a table")
            clean = {}
            for tau, vec in self.table.items():
                tau = tuple(int(t) for t in tau)
                if not tau or min(tau) < 1:
                    raise ProfileError(f"invalid order type {tau}")
                vec = tuple(Fraction(v) for v in vec)
                if len(tau) == 1:
                    vec = (Fraction(0),)
                _check_vector(tau, vec)
                if vec[0] < 0:
                    raise ProfileError(f"negative score in {vec}")
                clean[tau] = vec
            object.__setattr__(self, "table", clean)
        if not self.name:
            object.__setattr__(self, "name", self.kind)

    @classmethod
    def from_function(
        cls,
        fn: Callable[[OrderType], Sequence],
        max_m: int,
        name: str = "table",
        fallback: str = "error",
    ) -> ScoringSystem:
        """Tabulate ``fn`` over every order type on up to ``max_m`` candidates."""
        table = {tau: tuple(fn(tau)) for m in range(1, max_m + 1) for tau in compositions(m)}
        return cls("table", table, fallback=fallback, name=name)

    def vector(self, tau: OrderType) -> tuple[Fraction, ...]:
        k = len(tau)
        if k == 1:
            return (Fraction(0),)
        zeros = (Fraction(0),) * (k - 1)
        if self.kind == "approval":
            return (Fraction(1),) + zeros
        if self.kind == "split":
            return (Fraction(1, tau[0]),) + zeros
        if self.kind == "borda":
            m = sum(tau)
            # m-1-sum(tau[:j]) shifted down by tau[-1]-1 so the bottom class scores 0
            shift = tau[-1] - 1
            out, above = [], 0
            for t in tau:
                out.append(Fraction(m - 1 - above - shift))
                above += t
            return tuple(out)
        try:
            return self.table[tau]
        except KeyError:
            if self.fallback == "approval":
                return (Fraction(1),) + zeros
            raise KeyError(f"scoring table {self.name!r} has no entry for order type {tau}")

    def denominator(self, m: int) -> int:
        """A common denominator of every score this system hands out on <= m candidates."""
        if self.kind in ("approval", "borda"):
            return 1
        if self.kind == "split":
            return math.lcm(*range(1, m + 1))
        return math.lcm(1, *(v.denominator for vec in self.table.values() for v in vec))


APPROVAL = ScoringSystem("approval")
SPLIT = ScoringSystem("split")
BORDA = ScoringSystem("borda")


def score_vector(system: ScoringSystem, tau: OrderType) -> tuple[Fraction, ...]:
    return system.vector(tuple(tau))


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Profile:
    """A roster of candidate names and a weighted list of weak orders."""

    candidates: tuple[str, ...]
    votes: tuple[tuple[Fraction, WeakOrder], ...]

    def __post_init__(self):
        candidates = tuple(self.candidates)
        if not candidates:
            raise ProfileError("a profile needs at least one candidate")
        if len(set(candidates)) != len(candidates):
            raise ProfileError("duplicate candidate names in roster")
        full = frozenset(range(len(candidates)))
        votes = []
        for w, order in self.votes:
            w = Fraction(w)
            if w < 0:
                raise ProfileError(f"negative weight {w}")
            if order.domain != full:
                raise ProfileError("every ballot must rank the whole roster")
            votes.append((w, order))
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "votes", tuple(votes))

    @classmethod
    def build(cls, candidates: Sequence[str], votes: Iterable[tuple]) -> Profile:
        """Build from ``(weight, [[names...], [names...], ...])`` pairs.

        Candidates a ballot leaves out are appended as one bottom class.
        """
        index = {c: i for i, c in enumerate(candidates)}
        out = []
        for w, classes in votes:
            ids = []
            for group in classes:
                if isinstance(group, str):
                    group = [group]
                ids.append(frozenset(index[c] for c in group))
            rest = frozenset(index.values()) - frozenset().union(*ids)
            if rest:
                ids.append(rest)
            out.append((Fraction(w), WeakOrder(tuple(ids))))
        return cls(tuple(candidates), tuple(out))

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> Fraction:
        return sum((w for w, _ in self.votes), Fraction(0))

    @property
    def is_linear(self) -> bool:
        return all(o.is_linear for _, o in self.votes)

    def index(self, name: str) -> int:
        try:
            return self.candidates.index(name)
        except ValueError:
            raise ProfileError(f"unknown candidate {name!r}") from None

    def ids(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(x) for x in names)

    def names(self, ids: Iterable[int]) -> frozenset[str]:
        return frozenset(self.candidates[i] for i in ids)

    def restrict(self, keep: Iterable[int]) -> Profile:
        """Profile over the kept candidates only, re-indexed in roster order."""
        keep = sorted(set(keep))
        if not keep:
            raise ProfileError("cannot restrict a profile to no candidates")
        mapping = {old: new for new, old in enumerate(keep)}
        votes = tuple((w, o.restrict(keep).relabel(mapping)) for w, o in self.votes)
        return Profile(tuple(self.candidates[i] for i in keep), votes)

    def scaled(self, factor) -> Profile:
        factor = Fraction(factor)
        return Profile(self.candidates, tuple((w * factor, o) for w, o in self.votes))

    def canonical(self) -> Profile:
        """Merge identical ballots (first occurrence order) and drop zero weights."""
        merged: dict[WeakOrder, Fraction] = {}
        for w, o in self.votes:
            if w:
                merged[o] = merged.get(o, Fraction(0)) + w
        return Profile(self.candidates, tuple((w, o) for o, w in merged.items()))

    def with_votes(self, votes: Iterable[tuple[Fraction, WeakOrder]]) -> Profile:
        return Profile(self.candidates, tuple(votes))

    def format_order(self, order: WeakOrder) -> str:
        parts = []
        for cls in order.classes:
            names = [self.candidates[c] for c in sorted(cls)]
            parts.append(names[0] if len(names) == 1 else "{" + ",".join(names) + "}")
        return " > ".join(parts)

    def __str__(self):
        lines = [f"candidates: {','.join(self.candidates)}"]
        lines += [f"{w}: {self.format_order(o)}" for w, o in self.votes]
        return "\n".join(lines)


def positional_scores(profile: Profile, system: ScoringSystem) -> dict[int, Fraction]:
    """Weighted sum over ballots of each candidate's positional score."""
    scores = {c: Fraction(0) for c in range(profile.m)}
    for w, order in profile.votes:
        vec = system.vector(order.order_type)
        for cls, s in zip(order.classes, vec):
            if s:
                for c in cls:
                    scores[c] += w * s
    return scores
