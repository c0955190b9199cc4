"""Axiom checkers, profile transformations and a counterexample search.

Every checker returns an :class:`AxiomVerdict`.  A violation carries a
certificate, and :func:`revalidate` recomputes the violated definition from
scratch (using only :mod:`weakvote.core` primitives and the rule itself) so a
certificate never has to be taken on trust.

Rules are plain callables ``Profile -> frozenset[int]``; :func:`make_rule`
builds them from a scoring system or an STV configuration.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import Profile, ProfileError, ScoringSystem, WeakOrder
from .rules import ScoreKernel, put_winners
from .stv import StvConfig, StvTrace, approval_stv, quota, split_stv

Rule = Callable[[Profile], frozenset]

AXIOMS = ("clones", "cohesive-majorities", "unanimous-majorities", "majority-alternative",
          "indiff-mono", "gpsc")


class AxiomError(ValueError):
    """Raised when a checker's precondition does not hold."""


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    passed: bool
    certificate: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "violation"


@dataclass(frozen=True)
class RuleSpec:
    """Picklable rule: PUT winners of a scoring system, or an STV committee."""

    system: ScoringSystem | None = None
    stv: str | None = None
    config: StvConfig | None = None
    k: int = 1

    def __call__(self, profile: Profile) -> frozenset[int]:
        if self.system is not None:
            return put_winners(profile, self.system)
        run = {"approval-stv": approval_stv, "split-stv": split_stv}[self.stv]
        return run(profile, self.k, self.config or StvConfig())[0]

    @property
    def __name__(self) -> str:
        return f"put[{self.system.name}]" if self.system is not None else self.stv


def make_rule(spec, k: int = 1) -> Rule:
    """Wrap a scoring system (PUT winners) or an ``(stv_rule_name, StvConfig)`` pair."""
    if isinstance(spec, RuleSpec):
        return spec
    if isinstance(spec, ScoringSystem):
        return RuleSpec(system=spec)
    name, config = spec
    if name not in ("approval-stv", "split-stv"):
        raise AxiomError(f"unknown STV rule {name!r}")
    return RuleSpec(stv=name, config=config, k=k)


def _weight(profile: Profile, voters: Iterable[int]) -> Fraction:
    return sum((profile.votes[i][0] for i in voters), Fraction(0))


# ---------------------------------------------------------------------------
# clones


def is_clone_set(profile: Profile, X: Iterable[int]) -> bool:
    X = frozenset(X)
    if not X or not X <= frozenset(range(profile.m)):
        raise AxiomError("clone set must be a nonempty subset of the roster")
    outside = [c for c in range(profile.m) if c not in X]
    for _, order in profile.votes:
        levels = {order.level(x) for x in X}
        lo, hi = min(levels), max(levels)
        for c in outside:
            lc = order.level(c)
            # all above c, all tied with c, or all below c
            if not (hi < lc or lo > lc or lo == hi == lc):
                return False
    return True


def collapse_clones(profile: Profile, X: Iterable[int], keep: int) -> Profile:
    """Remove every member of the clone set ``X`` except ``keep``."""
    X = frozenset(X)
    if keep not in X:
        raise AxiomError("the kept clone must belong to the clone set")
    if not is_clone_set(profile, X):
        raise AxiomError("not a clone set")
    return profile.restrict(set(range(profile.m)) - (X - {keep}))


def expand_clone(profile: Profile, c: int, count: int, seed=None,
                 placement: str = "random") -> tuple[Profile, frozenset[int]]:
    """Replace candidate ``c`` by ``count`` clones, appended to the roster.

    ``placement`` is ``"tied"`` (clones share c's class), ``"adjacent"``
    (clones form consecutive classes where c was), or ``"random"``: per
    ballot, a random ordered partition of the clones inserted in c's place,
    and with some probability merged into c's original class when that class
    holds other candidates.
    """
    if count < 2:
        raise AxiomError("need at least two clones")
    rng = random.Random(seed)
    name = profile.candidates[c]
    used = set(profile.candidates)
    new_names = []
    j = 1
    while len(new_names) < count - 1:
        cand = f"{name}'" if j == 1 else f"{name}'{j}"
        if cand not in used:
            new_names.append(cand)
            used.add(cand)
        j += 1
    clones = [c] + list(range(profile.m, profile.m + count - 1))
    votes = []
    for w, order in profile.votes:
        classes = [set(cls) for cls in order.classes]
        at = order.level(c)
        mode = placement
        if mode == "random":
            mode = rng.choice(["tied", "adjacent", "mixed"])
        if mode == "tied":
            classes[at] |= set(clones)
        else:
            perm = clones[:]
            rng.shuffle(perm)
            if mode == "mixed":
                # random ordered partition of the clones
                groups, cur = [], [perm[0]]
                for x in perm[1:]:
                    if rng.random() < 0.5:
                        groups.append(cur)
                        cur = [x]
                    else:
                        cur.append(x)
                groups.append(cur)
            else:
                groups = [[x] for x in perm]
            rest = classes[at] - {c}
            if rest:
                # c was tied with outsiders: the clones stay together in one class
                classes[at] = rest | set(clones)
            else:
                classes[at:at + 1] = [set(g) for g in groups]
        votes.append((w, WeakOrder(tuple(frozenset(s) for s in classes))))
    out = Profile(profile.candidates + tuple(new_names), tuple(votes))
    return out, frozenset(clones)


def check_independence_of_clones(rule: Rule, profile: Profile, X: Iterable[int], keep: int) -> AxiomVerdict:
    X = frozenset(X)
    reduced = collapse_clones(profile, X, keep)
    before = profile.names(rule(profile))
    after = reduced.names(rule(reduced))
    clone_names = profile.names(X)
    keep_name = profile.candidates[keep]
    cert = {
        "clones": sorted(clone_names),
        "kept": keep_name,
        "winners": sorted(before),
        "winners_collapsed": sorted(after),
    }
    bad = sorted((before ^ after) - clone_names)
    if bad:
        return AxiomVerdict("clones", False, {**cert, "clause": "non-clone", "candidates": bad})
    if bool(before & clone_names) != (keep_name in after):
        return AxiomVerdict("clones", False, {**cert, "clause": "clone"})
    return AxiomVerdict("clones", True, cert)


# ---------------------------------------------------------------------------
# majorities


def tops(profile: Profile) -> list[frozenset[int]]:
    return [o.top for _, o in profile.votes]


def check_cohesive_majorities(profile: Profile, winners: Iterable[int]) -> AxiomVerdict:
    """Every winner must be top-ranked by someone in any cohesive majority.

    For a pair (c, w) the strongest possible cohesive group is every voter
    with c on top and w not on top, so checking those groups is exhaustive.
    """
    winners = frozenset(winners)
    if not winners:
        raise AxiomError("winner set must be nonempty")
    half = profile.n / 2
    top = tops(profile)
    for w in sorted(winners):
        for c in range(profile.m):
            group = [i for i, t in enumerate(top) if c in t and w not in t]
            if _weight(profile, group) > half:
                return AxiomVerdict("cohesive-majorities", False, {
                    "common": profile.candidates[c],
                    "voters": group,
                    "weight": _weight(profile, group),
                    "winner": profile.candidates[w],
                })
    return AxiomVerdict("cohesive-majorities", True)


def check_cohesive_majorities_bruteforce(profile: Profile, winners: Iterable[int]) -> bool:
    """Literal check over every voter subset; for small profiles only."""
    winners = frozenset(winners)
    top = tops(profile)
    half = profile.n / 2
    idx = range(len(profile.votes))
    for r in range(1, len(top) + 1):
        for S in itertools.combinations(idx, r):
            if _weight(profile, S) <= half:
                continue
            if not frozenset.intersection(*(top[i] for i in S)):
                continue
            if not winners <= frozenset().union(*(top[i] for i in S)):
                return False
    return True


def check_unanimous_majorities(profile: Profile, winners: Iterable[int]) -> AxiomVerdict:
    winners = frozenset(winners)
    weight: dict[frozenset, Fraction] = {}
    for (w, _), t in zip(profile.votes, tops(profile)):
        weight[t] = weight.get(t, Fraction(0)) + w
    for t, wt in weight.items():
        if wt > profile.n / 2 and not winners <= t:
            return AxiomVerdict("unanimous-majorities", False, {
                "top_set": sorted(profile.names(t)),
                "weight": wt,
                "outside_winners": sorted(profile.names(winners - t)),
            })
    return AxiomVerdict("unanimous-majorities", True)


def majority_alternatives(profile: Profile) -> frozenset[int]:
    top = tops(profile)
    return frozenset(
        c for c in range(profile.m)
        if _weight(profile, [i for i, t in enumerate(top) if c in t]) > profile.n / 2
    )


def check_select_majority_alternative(profile: Profile, winners: Iterable[int]) -> AxiomVerdict:
    winners = frozenset(winners)
    maj = majority_alternatives(profile)
    if maj and not winners <= maj:
        return AxiomVerdict("majority-alternative", False, {
            "majority_alternatives": sorted(profile.names(maj)),
            "outside_winners": sorted(profile.names(winners - maj)),
        })
    return AxiomVerdict("majority-alternative", True)


# ---------------------------------------------------------------------------
# indifference monotonicity


def c_hover(order: WeakOrder, c: int) -> WeakOrder:
    """Merge the singleton class ``{c}`` into the class directly above it."""
    j = order.level(c)
    if len(order.classes[j]) != 1:
        raise AxiomError("c-hover needs c alone in its class")
    if j == 0:
        raise AxiomError("c-hover needs a class above c")
    classes = list(order.classes)
    classes[j - 1:j + 1] = [classes[j - 1] | classes[j]]
    return WeakOrder(tuple(classes))


def hoverable(profile: Profile, c: int) -> list[int]:
    """Indices of votes a c-hover can be applied to."""
    out = []
    for i, (_, o) in enumerate(profile.votes):
        j = o.level(c)
        if j > 0 and len(o.classes[j]) == 1:
            out.append(i)
    return out


def apply_hovers(profile: Profile, c: int, pattern: Iterable[int]) -> Profile:
    pattern = set(pattern)
    votes = [(w, c_hover(o, c) if i in pattern else o) for i, (w, o) in enumerate(profile.votes)]
    return profile.with_votes(votes)


def check_indifference_monotonicity(rule: Rule, profile: Profile, c: int,
                                    pattern: Iterable[int]) -> AxiomVerdict:
    pattern = sorted(set(pattern))
    if c not in rule(profile):
        raise AxiomError(f"{profile.candidates[c]} is not a winner")
    hovered = apply_hovers(profile, c, pattern)
    after = rule(hovered)
    cert = {"candidate": profile.candidates[c], "pattern": pattern,
            "winners_after": sorted(profile.names(after))}
    return AxiomVerdict("indiff-mono", c in after, cert)


# ---------------------------------------------------------------------------
# generalized PSC


def is_t_supporting(order: WeakOrder, T: frozenset[int]) -> bool:
    worst_t = max(order.level(t) for t in T)
    return all(order.level(c) >= worst_t for c in order.domain - T)


def t_supporting_voters(profile: Profile, T: Iterable[int]) -> frozenset[int]:
    T = frozenset(T)
    if not T:
        raise AxiomError("T must be nonempty")
    return frozenset(i for i, (_, o) in enumerate(profile.votes) if is_t_supporting(o, T))


def voter_closure(order: WeakOrder, T: frozenset[int]) -> frozenset[int]:
    worst_t = max(order.level(t) for t in T)
    return frozenset().union(*order.classes[:worst_t + 1])


def closure(profile: Profile, S: Iterable[int], T: Iterable[int]) -> frozenset[int]:
    """Candidates that some voter in S ranks weakly above some member of T."""
    S, T = frozenset(S), frozenset(T)
    if not S <= t_supporting_voters(profile, T):
        raise AxiomError("S contains a voter that is not T-supporting")
    out = set(T)
    for i in S:
        o = profile.votes[i][1]
        out |= {c for c in o.domain if any(o.weakly_prefers(c, t) for t in T)}
    return frozenset(out)


def _psc_threshold(profile: Profile, k: int, quota_kind: str):
    q = quota(profile.n, k, quota_kind)
    if quota_kind == "droop":
        return q, lambda weight, ell: weight > ell * q
    return q, lambda weight, ell: weight >= ell * q


def check_generalized_psc(profile: Profile, committee: Iterable[int], k: int,
                          quota_kind: str = "droop", max_candidates: int = 12) -> AxiomVerdict:
    """Exhaustive check over every T and every under-served committee subset V.

    A violation for (T, l) exists iff some V within W, |V| = l - 1, has
    T-supporting voters whose own closures meet W only inside V with total
    weight above l*q; closure_S(T) is the union of the per-voter closures.
    With ``quota_kind="hare"`` the weight condition is ``>= l*q`` with
    ``q = n/k``.
    """
    W = frozenset(committee)
    if len(W) != k:
        raise AxiomError(f"committee has {len(W)} members, expected {k}")
    if profile.m > max_candidates:
        raise AxiomError(f"{profile.m} candidates exceeds the PSC checker cap {max_candidates}")
    q, enough = _psc_threshold(profile, k, quota_kind)
    orders = [o for _, o in profile.votes]
    cands = range(profile.m)
    for size in range(1, profile.m + 1):
        for T in itertools.combinations(cands, size):
            T = frozenset(T)
            support = [(i, voter_closure(orders[i], T) & W)
                       for i in range(len(orders)) if is_t_supporting(orders[i], T)]
            if not support:
                continue
            for ell in range(1, min(len(T), k + 1) + 1):
                for V in itertools.combinations(sorted(W), ell - 1):
                    V = frozenset(V)
                    S = [i for i, hit in support if hit <= V]
                    if S and enough(_weight(profile, S), ell):
                        return AxiomVerdict("gpsc", False, {
                            "T": sorted(profile.names(T)),
                            "ell": ell,
                            "V": sorted(profile.names(V)),
                            "voters": S,
                            "weight": _weight(profile, S),
                            "quota": q,
                            "committee": sorted(profile.names(W)),
                        })
    return AxiomVerdict("gpsc", True, {"quota": q})


def check_generalized_psc_bruteforce(profile: Profile, committee: Iterable[int], k: int,
                                     quota_kind: str = "droop") -> bool:
    """Literal definition: enumerate every T and every T-supporting voter subset S."""
    W = frozenset(committee)
    _, enough = _psc_threshold(profile, k, quota_kind)
    for size in range(1, profile.m + 1):
        for T in itertools.combinations(range(profile.m), size):
            sup = sorted(t_supporting_voters(profile, T))
            for r in range(1, len(sup) + 1):
                for S in itertools.combinations(sup, r):
                    U = closure(profile, S, T)
                    for ell in range(1, size + 1):
                        if enough(_weight(profile, S), ell) and len(W & U) < ell:
                            return False
    return True


def psc_invariant(trace: StvTrace, profile: Profile, S: Iterable[int], T: Iterable[int],
                  ell: int) -> list[tuple[int, int, int]]:
    """Per-round ``(round, s, r)`` with s = |W & closure_S(T)| and r = |remaining & T|.

    For a certificate with enough voter weight, ``s + r >= ell`` must hold at
    every round of an Approval-STV count.
    """
    T = frozenset(T)
    U = closure(profile, S, T)
    rows = [(0, 0, len(T))]
    for rnd in trace.rounds:
        remaining = rnd.remaining - {rnd.candidate}
        rows.append((rnd.number, len(U & set(rnd.elected)), len(T & remaining)))
    return rows


# ---------------------------------------------------------------------------
# certificate re-validation


def revalidate(verdict: AxiomVerdict, profile: Profile, rule: Rule | None = None,
               k: int = 1, quota_kind: str = "droop") -> bool:
    """Recompute a violation from its certificate; True iff it is genuine."""
    if verdict.passed:
        raise AxiomError("only violations carry certificates")
    cert = verdict.certificate
    if verdict.axiom == "cohesive-majorities":
        c, w = profile.index(cert["common"]), profile.index(cert["winner"])
        S = cert["voters"]
        top = tops(profile)
        group_ok = (
            _weight(profile, S) > profile.n / 2
            and all(c in top[i] for i in S)
            and all(w not in top[i] for i in S)
        )
        return group_ok and (rule is None or w in rule(profile))
    if verdict.axiom == "clones":
        X = profile.ids(cert["clones"])
        keep = profile.index(cert["kept"])
        if not is_clone_set(profile, X):
            return False
        reduced = profile.restrict(set(range(profile.m)) - (X - {keep}))
        before = profile.names(rule(profile))
        after = reduced.names(rule(reduced))
        names = profile.names(X)
        clause1 = all((c in before) == (c in after) for c in set(profile.candidates) - names)
        clause2 = (cert["kept"] in after) == bool(before & names)
        return not (clause1 and clause2)
    if verdict.axiom == "indiff-mono":
        c = profile.index(cert["candidate"])
        if c not in rule(profile):
            return False
        hovered = profile.with_votes(
            (w, c_hover(o, c) if i in set(cert["pattern"]) else o)
            for i, (w, o) in enumerate(profile.votes)
        )
        return c not in rule(hovered)
    if verdict.axiom == "gpsc":
        T = profile.ids(cert["T"])
        S = cert["voters"]
        W = profile.ids(cert["committee"])
        _, enough = _psc_threshold(profile, k, quota_kind)
        return (
            S and set(S) <= t_supporting_voters(profile, T)
            and enough(_weight(profile, S), cert["ell"])
            and len(W & closure(profile, S, T)) < cert["ell"]
        )
    if verdict.axiom == "unanimous-majorities":
        return check_unanimous_majorities(profile, rule(profile)).passed is False
    if verdict.axiom == "majority-alternative":
        return check_select_majority_alternative(profile, rule(profile)).passed is False
    raise AxiomError(f"unknown axiom {verdict.axiom!r}")


# ---------------------------------------------------------------------------
# counterexample search


@dataclass(frozen=True)
class SearchBounds:
    max_m: int = 5
    max_ballots: int = 6
    max_weight: int = 10
    tries: int = 2000
    min_m: int = 3


def random_weak_order(rng: random.Random, m: int, p_tie: float = 0.4) -> WeakOrder:
    perm = list(range(m))
    rng.shuffle(perm)
    classes, cur = [], [perm[0]]
    for c in perm[1:]:
        if rng.random() < p_tie:
            cur.append(c)
        else:
            classes.append(cur)
            cur = [c]
    classes.append(cur)
    return WeakOrder(tuple(frozenset(x) for x in classes))


def random_profile(rng: random.Random, m: int, ballots: int, max_weight: int,
                   p_tie: float = 0.4, names: Sequence[str] | None = None) -> Profile:
    names = names or [chr(ord("a") + i) for i in range(m)]
    votes = [(Fraction(rng.randint(1, max_weight)), random_weak_order(rng, m, p_tie))
             for _ in range(ballots)]
    # identical ballots stay separate lines so every weight respects max_weight
    return Profile(tuple(names), tuple(votes))


def _plant_common_top(rng: random.Random, profile: Profile) -> Profile:
    """Merge one candidate into the top class of a random subset of ballots.

    Cohesive groups are rare in uniform samples; planting one makes the
    search probe the situation the axiom is about.
    """
    c = rng.randrange(profile.m)
    votes = []
    for w, o in profile.votes:
        if rng.random() < 0.6 and c not in o.top:
            rest = tuple(cls - {c} for cls in o.classes[1:])
            o = WeakOrder((o.top | {c},) + tuple(cls for cls in rest if cls))
        votes.append((w, o))
    return profile.with_votes(votes)


def _shuffled_classes(rng: random.Random, items: Iterable[int], p_tie: float) -> list[frozenset]:
    items = list(items)
    rng.shuffle(items)
    classes: list[list[int]] = []
    for c in items:
        if classes and rng.random() < p_tie:
            classes[-1].append(c)
        else:
            classes.append([c])
    return [frozenset(x) for x in classes]


def cohesive_structure(rng: random.Random, m: int, ballots: int) -> tuple[Profile, int, int]:
    """Unit-weight ballots shaped like a potential cohesive-majority failure.

    A common candidate ``c`` shares the top class of the first ``g`` ballots
    with a random set of partners; the other ballots top partners or an
    outsider ``w`` and rank ``c`` last.  Returns ``(profile, c, w)``.
    """
    c, w = rng.sample(range(m), 2)
    partners = [x for x in range(m) if x not in (c, w)]
    g = rng.randint(2, max(2, ballots - 1))
    votes = []
    for i in range(ballots):
        if i < g:
            top = frozenset([c, *([x for x in partners if rng.random() < 0.5]
                                  or [rng.choice(partners)])])
            left = [x for x in range(m) if x not in top]
            if w in left and rng.random() < 0.7:
                rest = [frozenset([w])] + _shuffled_classes(rng, set(left) - {w}, 0.3)
            else:
                rest = _shuffled_classes(rng, left, 0.3)
            order = [top] + rest
        else:
            pool = partners + [w]
            top = frozenset([x for x in pool if rng.random() < 0.5] or [rng.choice(pool)])
            rest = _shuffled_classes(rng, set(range(m)) - top - {c}, 0.3)
            order = [top] + rest + [frozenset([c])]
        votes.append((Fraction(1), WeakOrder(tuple(x for x in order if x))))
    names = tuple(chr(ord("a") + i) for i in range(m))
    return Profile(names, tuple(votes)).canonical(), c, w


def sweep_cohesive_weights(profile: Profile, system: ScoringSystem, max_weight: int):
    """First weight vector in ``1..max_weight`` (lexicographic) under which the
    PUT winners of ``system`` include a candidate outside some cohesive
    majority's tops, or None.

    Every weighting of the fixed ballots is tallied at once: per-ballot
    integer scores on each candidate subset form a tensor, and the set of
    subsets reachable under parallel-universe elimination is tracked as one
    boolean column per subset.  Only a proposal: callers re-check the
    resulting profile with the exact rule.
    """
    b, m = len(profile.votes), profile.m
    full = (1 << m) - 1
    A = np.zeros((full + 1, m, b), dtype=np.int64)
    for j, (_, order) in enumerate(profile.votes):
        kernel = ScoreKernel(profile.with_votes([(Fraction(1), order)]), system)
        for mask in range(1, full + 1):
            A[mask, :, j] = kernel.scores(mask)
    W = np.array(list(itertools.product(range(1, max_weight + 1), repeat=b)), dtype=np.int64)
    rows = len(W)
    reach = {full: np.ones(rows, dtype=bool)}
    for mask in sorted(range(1, full + 1), key=lambda x: -bin(x).count("1")):
        live = reach.get(mask)
        if live is None or mask & (mask - 1) == 0 or not live.any():
            continue
        alive = [c for c in range(m) if mask >> c & 1]
        idx = np.flatnonzero(live)
        S = W[idx] @ A[mask][alive].T
        tied = S == S.min(axis=1, keepdims=True)
        for j, c in enumerate(alive):
            child = reach.setdefault(mask & ~(1 << c), np.zeros(rows, dtype=bool))
            child[idx[tied[:, j]]] = True
    hit = np.zeros(rows, dtype=bool)
    n2 = W.sum(axis=1)
    for c in range(m):
        group = np.array([c in o.top for _, o in profile.votes])
        if not group.any():
            continue
        union = frozenset().union(*(o.top for _, o in profile.votes if c in o.top))
        majority = 2 * W[:, group].sum(axis=1) > n2
        for x in range(m):
            if x not in union and (1 << x) in reach:
                hit |= majority & reach[1 << x]
    found = np.flatnonzero(hit)
    return None if not len(found) else tuple(int(v) for v in W[found[0]])


def _attempt(rule: Rule, axiom: str, rng: random.Random, b: SearchBounds, k: int,
             quota_kind: str):
    m = rng.randint(b.min_m, b.max_m)
    ballots = rng.randint(2, b.max_ballots)
    p_tie = rng.choice([0.2, 0.4, 0.6])
    if axiom == "clones":
        base = random_profile(rng, m - 1, ballots, b.max_weight, p_tie)
        c = rng.randrange(base.m)
        prof, X = expand_clone(base, c, 2, seed=rng.random())
        v = check_independence_of_clones(rule, prof, X, c)
        return prof, v
    if axiom == "cohesive-majorities" and getattr(rule, "system", None) is not None:
        # structured ballots, every weighting swept at once; the proposal
        # is re-checked below with the exact rule
        structure, _, _ = cohesive_structure(rng, max(m, 3), min(ballots + 3, b.max_ballots, 5))
        weights = sweep_cohesive_weights(structure, rule.system, b.max_weight)
        if weights is None:
            return structure, None
        prof = structure.with_votes(
            (Fraction(w), o) for w, (_, o) in zip(weights, structure.votes))
        return prof, check_cohesive_majorities(prof, rule(prof))
    prof = random_profile(rng, m, ballots, b.max_weight, p_tie)
    if axiom == "cohesive-majorities":
        if rng.random() < 0.5:
            prof = _plant_common_top(rng, prof)
        return prof, check_cohesive_majorities(prof, rule(prof))
    if axiom == "unanimous-majorities":
        return prof, check_unanimous_majorities(prof, rule(prof))
    if axiom == "majority-alternative":
        return prof, check_select_majority_alternative(prof, rule(prof))
    if axiom == "gpsc":
        return prof, check_generalized_psc(prof, rule(prof), k, quota_kind)
    if axiom == "indiff-mono":
        # every winner against every single-ballot hover, the all-ballot
        # hover and one random subset; the first violation is returned
        verdict = None
        for c in sorted(rule(prof)):
            options = hoverable(prof, c)
            if not options:
                continue
            subset = [i for i in options if rng.random() < 0.5] or [rng.choice(options)]
            for pattern in [[i] for i in options] + [options, subset]:
                verdict = check_indifference_monotonicity(rule, prof, c, pattern)
                if not verdict.passed:
                    return prof, verdict
        return prof, verdict
    raise AxiomError(f"unknown axiom {axiom!r}")


def _search_range(rule, axiom, bounds, seed, k, quota_kind, start, stop):
    for t in range(start, stop):
        rng = random.Random(f"{seed}:{t}")
        prof, verdict = _attempt(rule, axiom, rng, bounds, k, quota_kind)
        if verdict is not None and not verdict.passed:
            return prof, verdict, t
    return None


def search_counterexample(rule: Rule, axiom: str, bounds: SearchBounds = SearchBounds(),
                          seed: int = 0, k: int = 1, quota_kind: str = "droop",
                          workers: int = 1, batch: int = 64):
    """Randomized search for a violation; returns ``(profile, verdict, try_index)`` or None.

    Each try derives its own RNG from ``(seed, try_index)``, so the witness
    returned is always the one with the lowest try index, whatever the
    number of workers (``rule`` must be picklable when ``workers > 1``).
    """
    if axiom not in AXIOMS:
        raise AxiomError(f"unknown axiom {axiom!r}")
    if workers <= 1:
        return _search_range(rule, axiom, bounds, seed, k, quota_kind, 0, bounds.tries)
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(workers) as pool:
        for lo in range(0, bounds.tries, batch * workers):
            hi = min(lo + batch * workers, bounds.tries)
            cuts = list(range(lo, hi, batch)) + [hi]
            jobs = [pool.submit(_search_range, rule, axiom, bounds, seed, k, quota_kind, a, b)
                    for a, b in zip(cuts, cuts[1:])]
            hits = [h for h in (j.result() for j in jobs) if h is not None]
            if hits:
                return min(hits, key=lambda h: h[2])
    return None
