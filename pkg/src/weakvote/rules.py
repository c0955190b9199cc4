"""Elimination scoring rules with parallel-universe tie-breaking.

``put_winners`` is the rule proper: the union of the winners over every way
of breaking elimination ties.  It memoizes on the bitmask of remaining
candidates, so the work is bounded by the number of reachable subsets
(at most ``2**m``) times one scoring pass over the ballots.
``elimination_trace`` follows a single universe under an explicit tie-break
policy and is meant for audit output only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import APPROVAL, BORDA, SPLIT, Profile, ProfileError, ScoringSystem, positional_scores

MAX_CANDIDATES = 20


class RuleError(ValueError):
    """Raised when a rule cannot be evaluated on the given input."""


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class ScoreKernel:
    """Integer-scaled scores of the profile restricted to a candidate bitmask.

    Weights and score vectors are multiplied by a common denominator so the
    inner loop runs on Python ints; ``scale`` converts back to exact scores.
    """

    def __init__(self, profile: Profile, system: ScoringSystem):
        if not profile.votes or profile.n == 0:
            raise ProfileError("empty profile")
        self.m = profile.m
        self.system = system
        wden = math.lcm(*(w.denominator for w, _ in profile.votes))
        self.sden = system.denominator(profile.m)
        self.scale = Fraction(1, wden * self.sden)
        self.ballots = []
        for w, order in profile.votes:
            if w:
                masks = tuple(sum(1 << c for c in cls) for cls in order.classes)
                self.ballots.append((int(w * wden), masks))
        self._fast = system.kind in ("approval", "split")
        self._vectors: dict[tuple, tuple[int, ...]] = {}

    def _vector(self, tau: tuple) -> tuple[int, ...]:
        vec = self._vectors.get(tau)
        if vec is None:
            vec = tuple(int(s * self.sden) for s in self.system.vector(tau))
            self._vectors[tau] = vec
        return vec

    def scores(self, mask: int) -> list[int]:
        sc = [0] * self.m
        if self._fast:
            split = self.system.kind == "split"
            for w, masks in self.ballots:
                for cls in masks:
                    top = cls & mask
                    if top:
                        break
                if top == mask:
                    continue  # fully indifferent among the remaining candidates
                members = bits(top)
                pts = w * self.sden // len(members) if split else w
                for c in members:
                    sc[c] += pts
            return sc
        for w, masks in self.ballots:
            classes = [cls & mask for cls in masks if cls & mask]
            vec = self._vector(tuple(bin(c).count("1") for c in classes))
            for cls, s in zip(classes, vec):
                if s:
                    for c in bits(cls):
                        sc[c] += w * s
        return sc

    def exact(self, mask: int) -> dict[int, Fraction]:
        sc = self.scores(mask)
        return {c: sc[c] * self.scale for c in bits(mask)}


def _check_size(profile: Profile, max_candidates: int) -> None:
    if profile.m > max_candidates:
        raise RuleError(
            f"{profile.m} candidates exceeds the cap of {max_candidates} for exact tie-breaking"
        )


def put_winners(
    profile: Profile, system: ScoringSystem, max_candidates: int = MAX_CANDIDATES
) -> frozenset[int]:
    """Winner set of the elimination scoring rule under parallel-universe tie-breaking."""
    _check_size(profile, max_candidates)
    kernel = ScoreKernel(profile, system)
    memo: dict[int, int] = {}

    def winners(mask: int) -> int:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        if mask & (mask - 1) == 0:
            memo[mask] = mask
            return mask
        sc = kernel.scores(mask)
        remaining = bits(mask)
        low = min(sc[c] for c in remaining)
        out = 0
        for c in remaining:
            if sc[c] == low:
                out |= winners(mask & ~(1 << c))
        memo[mask] = out
        return out

    return frozenset(bits(winners((1 << profile.m) - 1)))


def put_winners_naive(profile: Profile, system: ScoringSystem) -> frozenset[int]:
    """Unmemoized recursion over restricted profiles; exponential, used as an oracle."""
    if not profile.votes or profile.n == 0:
        raise ProfileError("empty profile")
    if profile.m == 1:
        return frozenset([0])
    scores = positional_scores(profile, system)
    low = min(scores.values())
    out: set[str] = set()
    for c, s in scores.items():
        if s == low:
            sub = profile.restrict(set(range(profile.m)) - {c})
            out |= sub.names(put_winners_naive(sub, system))
    return profile.ids(out)


# ---------------------------------------------------------------------------
# single-universe traces


def tiebreak_order(profile: Profile, tiebreak: str | Sequence[str] = "lexicographic") -> list[int]:
    """Candidate ids from most to least favoured when breaking ties.

    ``"lexicographic"`` favours lower roster indices; a sequence of names is
    an explicit priority list and must mention every candidate.
    """
    if isinstance(tiebreak, str):
        if tiebreak != "lexicographic":
            raise RuleError(f"unknown tie-break policy {tiebreak!r}")
        return list(range(profile.m))
    order = [profile.index(name) for name in tiebreak]
    if sorted(order) != list(range(profile.m)):
        raise RuleError("priority list must name every candidate exactly once")
    return order


def describe_tiebreak(profile: Profile, tiebreak) -> str:
    if isinstance(tiebreak, str):
        return tiebreak
    return "priority:" + ",".join(tiebreak)


@dataclass(frozen=True)
class EliminationRound:
    remaining: frozenset[int]
    scores: dict[int, Fraction]
    eliminated: int
    tied: frozenset[int]


@dataclass(frozen=True)
class EliminationTrace:
    rounds: tuple[EliminationRound, ...]
    winner: int
    system: str
    policy: str

    @property
    def elimination_order(self) -> list[int]:
        return [r.eliminated for r in self.rounds]


def elimination_trace(
    profile: Profile,
    system: ScoringSystem,
    tiebreak: str | Sequence[str] = "lexicographic",
    max_candidates: int = MAX_CANDIDATES,
) -> EliminationTrace:
    """Run one universe: among tied lowest scorers, eliminate the least favoured."""
    _check_size(profile, max_candidates)
    kernel = ScoreKernel(profile, system)
    rank = {c: i for i, c in enumerate(tiebreak_order(profile, tiebreak))}
    mask = (1 << profile.m) - 1
    rounds = []
    while mask & (mask - 1):
        scores = kernel.exact(mask)
        low = min(scores.values())
        tied = frozenset(c for c, s in scores.items() if s == low)
        out = max(tied, key=rank.__getitem__)
        rounds.append(EliminationRound(frozenset(bits(mask)), scores, out, tied))
        mask &= ~(1 << out)
    return EliminationTrace(
        tuple(rounds), bits(mask)[0], system.name, describe_tiebreak(profile, tiebreak)
    )


# ---------------------------------------------------------------------------
# named rules


def approval_irv(profile: Profile) -> frozenset[int]:
    return put_winners(profile, APPROVAL)


def split_irv(profile: Profile) -> frozenset[int]:
    return put_winners(profile, SPLIT)


def baldwin_weak(profile: Profile) -> frozenset[int]:
    """Elimination rule on the Borda-style vector for weak orders."""
    return put_winners(profile, BORDA)


def irv(profile: Profile) -> frozenset[int]:
    """Classic plurality-elimination IRV on linear orders (PUT tie-breaking).

    Works directly on rankings rather than through scoring systems.
    """
    if not profile.is_linear:
        raise RuleError("IRV needs a profile of linear orders")
    if not profile.votes or profile.n == 0:
        raise ProfileError("empty profile")
    rankings = [(w, [next(iter(cls)) for cls in o.classes]) for w, o in profile.votes]
    memo: dict[frozenset, frozenset] = {}

    def go(remaining: frozenset) -> frozenset:
        if remaining in memo:
            return memo[remaining]
        if len(remaining) == 1:
            return remaining
        tally = dict.fromkeys(remaining, Fraction(0))
        for w, ranking in rankings:
            first = next(c for c in ranking if c in remaining)
            tally[first] += w
        low = min(tally.values())
        out = frozenset().union(*(go(remaining - {c}) for c, s in tally.items() if s == low))
        memo[remaining] = out
        return out

    return go(frozenset(range(profile.m)))


RULES = {
    "approval-irv": APPROVAL,
    "split-irv": SPLIT,
    "baldwin-weak": BORDA,
}
