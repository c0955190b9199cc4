"""Approval-STV and Split-STV with budgets.

Every voter starts with a budget of 1.  A remaining candidate whose
supporters (voters with it in their current top class) hold more than the
quota is elected and its supporters pay exactly the quota; otherwise some
candidate is eliminated.  Under Split-STV a supporter with ``t`` tied top
candidates offers only ``b/t`` of their budget to each.

A vote of weight ``w`` is treated as ``w`` identical voters, so the money in
play is ``sum(w * b)`` and the invariant ``sum(w * b) + q * |W| == n`` holds
exactly after every round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import Profile, ProfileError
from .rules import RuleError, describe_tiebreak, tiebreak_order

QUOTAS = ("droop", "hare")
SELECTIONS = ("highest-budget", "priority")
PAYMENTS = ("gregory", "uniform-cap")
ELIMINATIONS = ("lowest-budget", "lowest-support", "priority")


def quota(n, k: int, kind: str = "droop") -> Fraction:
    n = Fraction(n)
    if n <= 0 or k < 1:
        raise ValueError("quota needs n > 0 and k >= 1")
    if kind == "droop":
        return n / (k + 1)
    if kind == "hare":
        return n / k
    raise ValueError(f"unknown quota {kind!r}")


def electable(total: Fraction, q: Fraction, kind: str) -> bool:
    """Droop needs strictly more than the quota, Hare at least the quota."""
    return total > q if kind == "droop" else total >= q


@dataclass(frozen=True)
class StvConfig:
    quota: str = "droop"
    selection: str = "highest-budget"
    payment: str = "gregory"
    elimination: str = "lowest-budget"
    tiebreak: str | tuple[str, ...] = "lexicographic"

    def __post_init__(self):
        for value, allowed in (
            (self.quota, QUOTAS),
            (self.selection, SELECTIONS),
            (self.payment, PAYMENTS),
            (self.elimination, ELIMINATIONS),
        ):
            if value not in allowed:
                raise ValueError(f"{value!r} is not one of {allowed}")
        if not isinstance(self.tiebreak, str):
            object.__setattr__(self, "tiebreak", tuple(self.tiebreak))


@dataclass(frozen=True)
class StvRound:
    number: int
    action: str  # "elect" or "eliminate"
    candidate: int
    remaining: frozenset[int]  # before the action
    support: dict[int, Fraction]  # money offered to each remaining candidate
    supporters: dict[int, Fraction]  # weight of voters with it in their top class
    budgets: tuple[Fraction, ...]  # per-vote unit budgets after the action
    elected: tuple[int, ...]  # committee after the action
    payment: dict = field(default_factory=dict)


@dataclass(frozen=True)
class StvTrace:
    rule: str
    k: int
    n: Fraction
    q: Fraction
    config: StvConfig
    weights: tuple[Fraction, ...]
    rounds: tuple[StvRound, ...]
    committee: tuple[int, ...]

    @property
    def eliminations(self) -> list[int]:
        return [r.candidate for r in self.rounds if r.action == "eliminate"]

    @property
    def policy(self) -> str:
        c = self.config
        return (
            f"quota={c.quota} selection={c.selection} payment={c.payment} "
            f"elimination={c.elimination} tiebreak={describe_tiebreak(None, c.tiebreak)}"
        )

    def money(self, rnd: StvRound) -> Fraction:
        return sum((w * b for w, b in zip(self.weights, rnd.budgets)), Fraction(0))

    def money_conserved(self) -> bool:
        """``sum(w*b) + q*|W| == n`` after every round, budgets within [0, 1]."""
        for rnd in self.rounds:
            if any(b < 0 or b > 1 for b in rnd.budgets):
                return False
            if self.money(rnd) + self.q * len(rnd.elected) != self.n:
                return False
        return True


def gregory_reduce(budgets: Sequence, supporters: Sequence[int], q, weights=None) -> list[Fraction]:
    """Scale every supporter's budget by ``(B - q) / B`` so they pay exactly ``q``."""
    return _gregory(budgets, supporters, q, weights, list(budgets))


def _gregory(budgets, supporters, q, weights, offers) -> list[Fraction]:
    q = Fraction(q)
    weights = weights or [1] * len(budgets)
    total = sum((Fraction(weights[i]) * Fraction(offers[i]) for i in supporters), Fraction(0))
    if total < q or total == 0:
        raise RuleError(f"supporters hold {total}, cannot pay quota {q}")
    out = [Fraction(b) for b in budgets]
    for i in supporters:
        out[i] -= Fraction(offers[i]) * q / total
    return out


def uniform_cap_reduce(budgets: Sequence, supporters: Sequence[int], q, weights=None, offers=None):
    """Each supporter pays ``min(offer, cap)`` with the cap chosen so payments total ``q``.

    Returns ``(new_budgets, cap)``.
    """
    q = Fraction(q)
    weights = weights or [1] * len(budgets)
    offers = list(budgets) if offers is None else offers
    order = sorted(supporters, key=lambda i: Fraction(offers[i]))
    left = q
    mass = sum((Fraction(weights[i]) for i in order), Fraction(0))
    cap = None
    for i in order:
        o, w = Fraction(offers[i]), Fraction(weights[i])
        if o * mass >= left:
            cap = left / mass
            break
        left -= w * o
        mass -= w
    if cap is None:
        raise RuleError(f"supporters cannot pay quota {q}")
    out = [Fraction(b) for b in budgets]
    for i in supporters:
        out[i] -= min(Fraction(offers[i]), cap)
    return out, cap


def _run(profile: Profile, k: int, config: StvConfig, split: bool) -> tuple[frozenset[int], StvTrace]:
    if not profile.votes or profile.n == 0:
        raise ProfileError("empty profile")
    if k < 1 or k > profile.m:
        raise RuleError(f"cannot elect {k} of {profile.m} candidates")
    favour = {c: i for i, c in enumerate(tiebreak_order(profile, config.tiebreak))}
    n = profile.n
    q = quota(n, k, config.quota)
    weights = [w for w, _ in profile.votes]
    orders = [o for _, o in profile.votes]
    budgets = [Fraction(1)] * len(orders)
    remaining = set(range(profile.m))
    elected: list[int] = []
    rounds = []

    while remaining and len(elected) < k:
        tops = []
        for o in orders:
            for cls in o.classes:
                top = cls & remaining
                if top:
                    break
            tops.append(top)
        offers = [b / len(t) if split else b for b, t in zip(budgets, tops)]
        support = dict.fromkeys(remaining, Fraction(0))
        heads = dict.fromkeys(remaining, Fraction(0))
        for w, off, top in zip(weights, offers, tops):
            for c in top:
                support[c] += w * off
                heads[c] += w

        eligible = [c for c in remaining if electable(support[c], q, config.quota)]
        before = frozenset(remaining)
        if eligible:
            if config.selection == "highest-budget":
                c = min(eligible, key=lambda x: (-support[x], favour[x]))
            else:
                c = min(eligible, key=favour.__getitem__)
            payers = [i for i, t in enumerate(tops) if c in t]
            if config.payment == "gregory":
                budgets = _gregory(budgets, payers, q, weights, offers)
                detail = {"method": "gregory", "factor": (support[c] - q) / support[c]}
            else:
                budgets, cap = uniform_cap_reduce(budgets, payers, q, weights, offers)
                detail = {"method": "uniform-cap", "cap": cap}
            elected.append(c)
            remaining.discard(c)
            action = "elect"
        else:
            if config.elimination == "lowest-budget":
                c = max(remaining, key=lambda x: (-support[x], favour[x]))
            elif config.elimination == "lowest-support":
                c = max(remaining, key=lambda x: (-heads[x], favour[x]))
            else:
                c = max(remaining, key=favour.__getitem__)
            remaining.discard(c)
            action, detail = "eliminate", {}
        rounds.append(
            StvRound(
                len(rounds) + 1, action, c, before, support, heads,
                tuple(budgets), tuple(elected), detail,
            )
        )

    if len(elected) != k:
        raise RuleError(f"internal error: elected {len(elected)} of {k} seats")
    trace = StvTrace(
        "split-stv" if split else "approval-stv",
        k, n, q, config, tuple(weights), tuple(rounds), tuple(elected),
    )
    return frozenset(elected), trace


def approval_stv(profile: Profile, k: int, config: StvConfig | None = None):
    """Committee of size ``k`` and the full round-by-round trace.

    The count stops once ``k`` candidates are elected; any further rounds of
    the open-ended loop could only be eliminations.
    """
    return _run(profile, k, config or StvConfig(), split=False)


def split_stv(profile: Profile, k: int, config: StvConfig | None = None):
    return _run(profile, k, config or StvConfig(), split=True)


STV_RULES = {"approval-stv": approval_stv, "split-stv": split_stv}
