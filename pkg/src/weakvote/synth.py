"""Synthetic elections: samplers, indifference-introducing transforms, metrics
and the experiment runner.

All randomness flows from explicit integer seeds through
``numpy.random.SeedSequence``; a sample's base profile depends only on
``(seed, sample index)`` and its weakening additionally on the parameter
index, so sweeping a parameter reuses the same underlying elections and
results do not depend on the number of worker processes.

Winners are computed exactly (rational engines); metrics are converted to
floats only for aggregation.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from statistics import fmean
from typing import Sequence

import numpy as np

from .core import APPROVAL, SPLIT, Profile, ProfileError, WeakOrder
from .rules import irv, put_winners
from .stv import StvConfig, approval_stv, split_stv


def default_names(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(chr(ord("a") + i) for i in range(m))
    return tuple(f"c{i + 1}" for i in range(m))


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _linear_profile(rankings, names) -> Profile:
    return Profile(
        tuple(names),
        tuple((Fraction(1), WeakOrder.linear(int(c) for c in r)) for r in rankings),
    )


# ---------------------------------------------------------------------------
# samplers


def sample_impartial_culture(n: int, m: int, seed=None, names=None) -> Profile:
    """``n`` rankings drawn uniformly from all ``m!`` (one weight-1 ballot each)."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    rng = _rng(seed)
    rankings = [rng.permutation(m) for _ in range(n)]
    return _linear_profile(rankings, names or default_names(m))


def mallows_insertion(rng: np.random.Generator, center: Sequence[int], phi: float) -> list[int]:
    """One draw from the Mallows model ``P(r) ~ phi**KT(center, r)``.

    Repeated insertion: the ``i``-th item of the center is inserted at
    position ``j`` of the partial ranking (``0 <= j <= i``) with probability
    proportional to ``phi**(i - j)``, i.e. each step past a previously placed
    item creates one inversion.
    """
    out: list[int] = []
    for i, item in enumerate(center):
        weights = phi ** (i - np.arange(i + 1, dtype=float))
        j = int(rng.choice(i + 1, p=weights / weights.sum()))
        out.insert(j, int(item))
    return out


def sample_mallows_mixture(n: int, m: int, centers: int = 4, phi: float = 0.5,
                           seed=None, names=None) -> Profile:
    """Mixture of ``centers`` Mallows models with uniformly random centers."""
    if not 0 < phi <= 1:
        raise ValueError("phi must lie in (0, 1]")
    if centers < 1:
        raise ValueError("need at least one center")
    rng = _rng(seed)
    centres = [rng.permutation(m) for _ in range(centers)]
    rankings = [mallows_insertion(rng, centres[rng.integers(centers)], phi) for _ in range(n)]
    return _linear_profile(rankings, names or default_names(m))


@dataclass(frozen=True)
class EuclideanInstance:
    voters: np.ndarray  # shape (n, d)
    candidates: np.ndarray  # shape (m, d)
    shape: str
    profile: Profile
    ties: tuple[tuple[int, tuple[int, ...]], ...] = ()  # (voter, equidistant candidates)

    def distances(self) -> np.ndarray:
        return np.linalg.norm(self.voters[:, None, :] - self.candidates[None, :, :], axis=2)


def _uniform_points(rng: np.random.Generator, count: int, d: int, shape: str) -> np.ndarray:
    if shape == "square":
        return rng.random((count, d))
    if shape == "disc":
        # polar method on the radius-1 disc centred at the origin: r = sqrt(U)
        # makes the density uniform in area; in one dimension this is [-1, 1]
        if d == 1:
            return rng.uniform(-1.0, 1.0, (count, 1))
        r = np.sqrt(rng.random(count))
        theta = rng.uniform(0.0, 2 * math.pi, count)
        return np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    raise ValueError(f"unknown shape {shape!r}")


def euclidean_instance(voters, candidates, shape: str = "square", names=None) -> EuclideanInstance:
    """Instance from explicit positions; rankings sort by distance, ties by candidate index."""
    voters = np.atleast_2d(np.asarray(voters, dtype=float))
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    dist = np.linalg.norm(voters[:, None, :] - candidates[None, :, :], axis=2)
    rankings = np.argsort(dist, axis=1, kind="stable")
    ties = []
    for v, row in enumerate(dist):
        values, counts = np.unique(row, return_counts=True)
        for value in values[counts > 1]:
            ties.append((v, tuple(int(c) for c in np.flatnonzero(row == value))))
    profile = _linear_profile(rankings, names or default_names(len(candidates)))
    return EuclideanInstance(voters, candidates, shape, profile, tuple(ties))


def sample_euclidean(n: int, m: int, d: int = 2, shape: str = "square", seed=None,
                     names=None) -> EuclideanInstance:
    if d not in (1, 2):
        raise ValueError("d must be 1 or 2")
    rng = _rng(seed)
    voters = _uniform_points(rng, n, d, shape)
    candidates = _uniform_points(rng, m, d, shape)
    return euclidean_instance(voters, candidates, shape, names)


def resample(profile: Profile, n: int, seed=None) -> Profile:
    """``n`` ballots drawn with replacement, probability proportional to weight."""
    votes = [(w, o) for w, o in profile.votes if w]
    if not votes:
        raise ProfileError("cannot resample an empty profile")
    total = sum(w for w, _ in votes)
    p = np.array([float(w / total) for w, _ in votes])
    picks = _rng(seed).choice(len(votes), size=n, p=p / p.sum())
    return profile.with_votes((Fraction(1), votes[i][1]) for i in picks)


# ---------------------------------------------------------------------------
# weakeners


def coin_flip_order(ranking: Sequence[int], heads: Sequence[bool]) -> WeakOrder:
    """Merge positions ``j`` and ``j+1`` of a ranking whenever coin ``j`` is heads."""
    classes, cur = [], [ranking[0]]
    for c, h in zip(ranking[1:], heads):
        if h:
            cur.append(c)
        else:
            classes.append(frozenset(cur))
            cur = [c]
    classes.append(frozenset(cur))
    return WeakOrder(tuple(classes))


def coin_flip_weaken(profile: Profile, p: float, seed=None) -> Profile:
    """Tie each adjacent pair of every ranking independently with probability ``p``."""
    if not 0 <= p < 1:
        raise ValueError("p must lie in [0, 1)")
    if not profile.is_linear:
        raise ProfileError("coin-flip weakening needs linear orders")
    rng = _rng(seed)
    votes = []
    for w, o in profile.votes:
        ranking = o.flatten()
        heads = rng.random(len(ranking) - 1) < p
        votes.append((w, coin_flip_order(ranking, heads)))
    return profile.with_votes(votes)


def radius_bucket(dist: float, r: float) -> int:
    """Index ``k`` with ``k*r <= dist < (k+1)*r`` (half-open), robust to float rounding."""
    k = int(dist // r)
    while k > 0 and k * r > dist:
        k -= 1
    while (k + 1) * r <= dist:
        k += 1
    return k


def radius_order(dists: Sequence[float], r: float) -> WeakOrder:
    buckets: dict[int, set[int]] = {}
    for c, dist in enumerate(dists):
        buckets.setdefault(radius_bucket(float(dist), r), set()).add(c)
    return WeakOrder(tuple(frozenset(buckets[k]) for k in sorted(buckets)))


def radius_weaken(instance: EuclideanInstance, r: float) -> Profile:
    """Each voter is indifferent among candidates in the same distance annulus of width ``r``."""
    if r <= 0:
        raise ValueError("radius must be positive; use the linear profile for r = 0")
    votes = [(Fraction(1), radius_order(row, r)) for row in instance.distances()]
    return instance.profile.with_votes(votes)


# ---------------------------------------------------------------------------
# metrics


def _require_linear(profile: Profile) -> None:
    if not profile.is_linear:
        raise ProfileError("metric needs a profile of linear orders")


def borda_scores(profile: Profile) -> dict[int, Fraction]:
    _require_linear(profile)
    out = dict.fromkeys(range(profile.m), Fraction(0))
    for w, o in profile.votes:
        for pos, cls in enumerate(o.classes):
            (c,) = cls
            out[c] += w * (profile.m - 1 - pos)
    return out


def borda_score(profile: Profile, candidate: int) -> Fraction:
    return borda_scores(profile)[candidate]


def normalized_borda(profile: Profile, candidate: int) -> Fraction:
    """Borda score divided by its maximum ``n (m - 1)``; 1 for a unanimous top."""
    if profile.m == 1:
        return Fraction(1)
    return borda_score(profile, candidate) / (profile.n * (profile.m - 1))


def pairwise_margins(profile: Profile) -> list[list[Fraction]]:
    """``M[a][b]`` = weight preferring a to b minus weight preferring b to a."""
    m = profile.m
    den = math.lcm(1, *(w.denominator for w, _ in profile.votes))
    M = [[0] * m for _ in range(m)]
    for w, o in profile.votes:
        w = int(w * den)
        above: list[int] = []
        for cls in o.classes:
            for b in cls:
                for a in above:
                    M[a][b] += w
                    M[b][a] -= w
            above.extend(cls)
    return [[Fraction(x, den) for x in row] for row in M]


def condorcet_winner(profile: Profile) -> int | None:
    _require_linear(profile)
    M = pairwise_margins(profile)
    for a in range(profile.m):
        if all(M[a][b] > 0 for b in range(profile.m) if b != a):
            return a
    return None


def costs(instance: EuclideanInstance) -> np.ndarray:
    return instance.distances().sum(axis=0)


def distortion(instance: EuclideanInstance, winner: int) -> float:
    """Total voter distance to ``winner`` over the minimum total distance (>= 1)."""
    cost = costs(instance)
    best = cost.min()
    if best == 0:
        return 1.0 if cost[winner] == 0 else math.inf
    return float(cost[winner] / best)


# ---------------------------------------------------------------------------
# experiments

DATASETS = ("impartial", "mallows", "euclidean")
WEAKENERS = ("coin", "radius")
SINGLE_RULES = ("approval-irv", "split-irv", "irv")
MULTI_RULES = ("approval-stv", "split-stv")


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "euclidean"
    n: int = 100
    m: int = 10
    k: int | None = None  # committee size; None runs the single-winner rules
    weakener: str = "coin"
    params: tuple[float, ...] = (0.5,)
    samples: int = 100
    seed: int = 0
    d: int = 2
    shape: str = "square"
    centers: int = 4
    phi: float = 0.5
    quota: str = "droop"
    rules: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if not self.rules:
            object.__setattr__(self, "rules", MULTI_RULES if self.k else SINGLE_RULES)
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.dataset not in DATASETS:
            raise ValueError(f"dataset must be one of {DATASETS}")
        if self.weakener not in WEAKENERS:
            raise ValueError(f"weakener must be one of {WEAKENERS}")
        if self.n < 1 or self.m < 1 or self.samples < 1:
            raise ValueError("n, m and samples must be positive")
        if self.k is not None and not 1 <= self.k <= self.m:
            raise ValueError("k must lie in 1..m")
        if self.weakener == "coin" and not all(0 <= p < 1 for p in self.params):
            raise ValueError("coin-flip probabilities must lie in [0, 1)")
        if self.weakener == "radius":
            if self.dataset != "euclidean":
                raise ValueError("the radius weakener needs the euclidean dataset")
            if not all(p >= 0 for p in self.params):
                raise ValueError("radii must be nonnegative")
        allowed = MULTI_RULES if self.k else SINGLE_RULES
        bad = [r for r in self.rules if r not in allowed]
        if bad:
            raise ValueError(f"unknown rules {bad}; choose from {allowed}")
        if self.d not in (1, 2) or self.shape not in ("square", "disc"):
            raise ValueError("d must be 1 or 2 and shape square or disc")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def sample_seeds(seed: int, sample: int) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    """(base-profile seed, weakening seed-sequence root) for one sample."""
    root = np.random.SeedSequence([seed, sample])
    base, weak = root.spawn(2)
    return base, weak


def _base(config: ExperimentConfig, seed) -> tuple[Profile, EuclideanInstance | None]:
    if config.dataset == "impartial":
        return sample_impartial_culture(config.n, config.m, seed), None
    if config.dataset == "mallows":
        return sample_mallows_mixture(config.n, config.m, config.centers, config.phi, seed), None
    inst = sample_euclidean(config.n, config.m, config.d, config.shape, seed)
    return inst.profile, inst


def _weaken(config, linear, inst, param, seed) -> Profile:
    if config.weakener == "coin":
        return coin_flip_weaken(linear, param, seed)
    return linear if param == 0 else radius_weaken(inst, param)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return repr(float(x))
    return repr(x)


def _borda_fractions(linear: Profile) -> dict[int, float]:
    top = linear.n * max(linear.m - 1, 1)
    return {c: float(s / top) for c, s in borda_scores(linear).items()}


def _winner_metrics(borda, inst, winners, irv_set, cw) -> dict:
    ws = sorted(winners)
    row = {
        "borda": fmean(borda[w] for w in ws),
        "agree_irv": int(bool(set(ws) & irv_set)),
        "condorcet_exists": int(cw is not None),
        "condorcet_elected": "" if cw is None else int(cw in winners),
        "distortion": "" if inst is None else fmean(distortion(inst, w) for w in ws),
    }
    return row


def run_sample(config: ExperimentConfig, sample: int) -> list[dict]:
    base_seed, weak_root = sample_seeds(config.seed, sample)
    linear, inst = _base(config, base_seed)
    weak_seeds = weak_root.spawn(len(config.params))
    names = linear.candidates
    rows = []
    borda = _borda_fractions(linear)
    if config.k is None:
        irv_set = set(irv(linear))
        cw = condorcet_winner(linear)
    for pi, param in enumerate(config.params):
        prof = _weaken(config, linear, inst, param, weak_seeds[pi])
        for rule in config.rules:
            row = {"sample": sample, "param": param, "rule": rule}
            if config.k is None:
                if rule == "irv":
                    winners = irv_set
                else:
                    winners = put_winners(prof, APPROVAL if rule == "approval-irv" else SPLIT)
                row["winners"] = ";".join(names[c] for c in sorted(winners))
                row.update(_winner_metrics(borda, inst, winners, irv_set, cw))
            else:
                run = approval_stv if rule == "approval-stv" else split_stv
                committee, trace = run(prof, config.k, StvConfig(quota=config.quota))
                row["winners"] = ";".join(names[c] for c in trace.committee)
                row["borda"] = fmean(borda[c] for c in committee)
                if inst is not None:
                    row["positions"] = ";".join(
                        ":".join(repr(float(x)) for x in inst.candidates[c]) for c in trace.committee
                    )
            rows.append(row)
    return rows


def _run_chunk(args):
    config, indices = args
    return [row for i in indices for row in run_sample(config, i)]


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[dict]:
    """Rows ordered by (sample, param, rule) whatever the worker count."""
    indices = list(range(config.samples))
    if workers <= 1:
        rows = _run_chunk((config, indices))
    else:
        chunks = [indices[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            rows = [r for part in pool.map(_run_chunk, [(config, c) for c in chunks]) for r in part]
    order = {p: i for i, p in enumerate(config.params)}
    rule_order = {r: i for i, r in enumerate(config.rules)}
    rows.sort(key=lambda r: (r["sample"], order[r["param"]], rule_order[r["rule"]]))
    return rows


SINGLE_COLUMNS = ("sample", "param", "rule", "winners", "borda", "agree_irv",
                  "condorcet_exists", "condorcet_elected", "distortion")
MULTI_COLUMNS = ("sample", "param", "rule", "winners", "borda", "positions")


def rows_to_csv(config: ExperimentConfig, rows: list[dict]) -> str:
    """CSV text: a ``# config`` metadata line echoing every setting and seed, then the table."""
    columns = MULTI_COLUMNS if config.k else SINGLE_COLUMNS
    buf = io.StringIO()
    buf.write(f"# config: {config.to_json()}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row.get(c, "") if isinstance(row.get(c), str) else _fmt(row.get(c))
                         for c in columns])
    return buf.getvalue()


@dataclass
class Summary:
    count: int = 0
    borda: list = field(default_factory=list)
    agree: list = field(default_factory=list)


def summarize(rows: list[dict]) -> dict[tuple[float, str], dict[str, float]]:
    """Mean normalized Borda and agreement rate per (param, rule)."""
    acc: dict[tuple[float, str], Summary] = {}
    for row in rows:
        s = acc.setdefault((row["param"], row["rule"]), Summary())
        s.count += 1
        s.borda.append(row["borda"])
        if "agree_irv" in row:
            s.agree.append(row["agree_irv"])
    return {
        key: {"samples": s.count, "borda": fmean(s.borda),
              "agreement": fmean(s.agree) if s.agree else math.nan}
        for key, s in acc.items()
    }
