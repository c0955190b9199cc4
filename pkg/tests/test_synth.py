import itertools
from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weakvote.core import Profile, ProfileError, WeakOrder
from weakvote.fixtures import CYCLE, FIG9, RADIUS_CANDIDATES, RADIUS_VOTER
from weakvote.synth import (
    ExperimentConfig, borda_score, coin_flip_order, coin_flip_weaken, condorcet_winner,
    costs, distortion, euclidean_instance, mallows_insertion, normalized_borda,
    pairwise_margins, radius_bucket, radius_weaken, resample, rows_to_csv, run_experiment,
    sample_euclidean, sample_impartial_culture, sample_mallows_mixture, summarize,
)

from conftest import profiles


def test_impartial_culture():
    assert sample_impartial_culture(5, 1, seed=0).votes[0][1] == WeakOrder.linear([0])
    assert sample_impartial_culture(30, 4, seed=7) == sample_impartial_culture(30, 4, seed=7)
    n = 6000
    counts = Counter(o for _, o in sample_impartial_culture(n, 3, seed=1).votes)
    sigma = (n * (1 / 6) * (5 / 6)) ** 0.5
    assert len(counts) == 6 and all(abs(c - n / 6) < 3 * sigma for c in counts.values())


def test_mallows():
    rng = np.random.default_rng(0)
    assert all(mallows_insertion(rng, [2, 0, 1], 1e-12) == [2, 0, 1] for _ in range(20))
    n = 6000
    draws = [tuple(mallows_insertion(rng, [0, 1, 2], 0.5)) for _ in range(n)]
    p_center = 1 / 2.625
    share = draws.count((0, 1, 2)) / n
    assert abs(share - p_center) < 4 * (p_center * (1 - p_center) / n) ** 0.5
    # phi = 1 is uniform over rankings
    uniform = Counter(tuple(mallows_insertion(rng, [0, 1, 2], 1.0)) for _ in range(n))
    assert all(abs(c - n / 6) < 4 * (n / 6 * 5 / 6) ** 0.5 for c in uniform.values())
    p = sample_mallows_mixture(50, 5, centers=4, phi=0.5, seed=3)
    assert p == sample_mallows_mixture(50, 5, centers=4, phi=0.5, seed=3) and p.is_linear


def test_euclidean_geometry():
    names = tuple(RADIUS_CANDIDATES)
    inst = euclidean_instance([RADIUS_VOTER], list(RADIUS_CANDIDATES.values()), names=names)
    order = inst.profile.votes[0][1]
    assert [names[c] for c in order.flatten()] == list("abdce")
    assert radius_weaken(inst, 1.0).format_order(radius_weaken(inst, 1.0).votes[0][1]) == \
        "{a,b} > {c,d} > e"
    assert radius_weaken(inst, 100).votes[0][1].order_type == (5,)
    assert radius_weaken(inst, 0.01).votes[0][1] == order
    with pytest.raises(ValueError):
        radius_weaken(inst, 0)


def test_euclidean_ties_recorded():
    inst = euclidean_instance([[0.0, 0.0]], [[1.0, 0.0], [0.0, 1.0], [2.0, 0.0]])
    assert inst.ties == ((0, (0, 1)),)
    assert inst.profile.votes[0][1].flatten() == (0, 1, 2)


def test_sample_euclidean_shapes():
    inst = sample_euclidean(1, 1, seed=0)
    assert inst.profile.m == 1
    disc = sample_euclidean(500, 10, 2, "disc", seed=2)
    assert np.all(np.linalg.norm(disc.voters, axis=1) <= 1)
    sq = sample_euclidean(200, 5, 1, "square", seed=2)
    assert sq.voters.shape == (200, 1) and np.all((sq.voters >= 0) & (sq.voters < 1))


def test_radius_bucket_half_open():
    assert radius_bucket(1.0, 0.5) == 2
    # boundaries are the float products k * r
    assert radius_bucket(3 * 0.1, 0.1) == 3
    assert radius_bucket(0.3, 0.1) == 2  # 0.3 < 3 * 0.1 in binary floating point
    assert radius_bucket(0.0, 0.25) == 0
    assert radius_bucket(0.7499999, 0.25) == 2


def test_coin_flip_examples():
    assert coin_flip_order([0, 1, 2, 3], [False, True, False]) == \
        WeakOrder((frozenset({0}), frozenset({1, 2}), frozenset({3})))
    lin = sample_impartial_culture(40, 6, seed=4)
    assert coin_flip_weaken(lin, 0.0, seed=1) == lin
    with pytest.raises(ValueError):
        coin_flip_weaken(lin, 1.0)
    with pytest.raises(ProfileError):
        coin_flip_weaken(CYCLE, 0.5)
    weak = coin_flip_weaken(sample_impartial_culture(4000, 10, seed=5), 0.9, seed=6)
    mean_classes = np.mean([len(o.classes) for _, o in weak.votes])
    assert abs(mean_classes - 1.9) < 0.05


def test_margins_and_condorcet():
    M = pairwise_margins(CYCLE)
    a, b, c = range(3)
    assert (M[a][c], M[c][b], M[b][a]) == (1, 1, 1)
    # with a top for a majority, yet no Condorcet winner
    assert FIG9 and pairwise_margins(FIG9)[1][0] == 45
    assert all(pairwise_margins(FIG9)[1][x] > 0 for x in (0, 2, 3))
    unanimous = Profile.build("abc", [(3, ["b", "c", "a"])])
    assert borda_score(unanimous, 1) == 3 * 2 and condorcet_winner(unanimous) == 1
    assert normalized_borda(unanimous, 1) == 1
    with pytest.raises(ProfileError):
        borda_score(FIG9, 0)


def test_distortion():
    inst = euclidean_instance([[0.0], [1.0], [1.0]], [[0.0], [1.0], [3.0]])
    assert costs(inst).tolist() == [2.0, 1.0, 7.0]
    assert distortion(inst, 1) == 1.0
    assert distortion(inst, 0) == 2.0
    two = euclidean_instance([[0.0], [0.0], [0.0]], [[1.0], [4 / 3]])
    assert distortion(two, 1) == pytest.approx(4 / 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 30), st.integers(2, 8))
def test_distortion_at_least_one(seed, n, m):
    inst = sample_euclidean(n, m, seed=seed)
    d = [distortion(inst, c) for c in range(m)]
    assert min(d) == 1.0 and all(x >= 1 for x in d)
    assert all((x == 1) == (c == int(np.argmin(costs(inst))) or costs(inst)[c] == costs(inst).min())
               for c, x in enumerate(d))


@settings(max_examples=50, deadline=None)
@given(profiles(min_m=2, max_m=7, max_ballots=6, linear=True),
       st.floats(0, 0.95), st.integers(0, 1000))
def test_coin_flip_preserves_strict_order(profile, p, seed):
    weak = coin_flip_weaken(profile, p, seed)
    for (_, lin), (_, w) in zip(profile.votes, weak.votes):
        rank = {c: i for i, c in enumerate(lin.flatten())}
        unmerged = tuple(c for cls in w.classes for c in sorted(cls, key=rank.__getitem__))
        assert unmerged == lin.flatten()
        assert w.top <= set(lin.flatten()[:len(w.top)])
        keep = set(lin.flatten()[1:]) or {lin.flatten()[0]}
        assert w.restrict(keep).order_type == tuple(
            len(cls & keep) for cls in w.classes if cls & keep)


def test_resample():
    p = Profile.build("ab", [(3, ["a", "b"]), (1, ["b", "a"])])
    r = resample(p, 4000, seed=0)
    share = sum(1 for _, o in r.votes if o.top == {0}) / 4000
    assert abs(share - 0.75) < 0.03
    assert r == resample(p, 4000, seed=0)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(params=(1.0,))
    with pytest.raises(ValueError):
        ExperimentConfig(weakener="radius", dataset="impartial")
    with pytest.raises(ValueError):
        ExperimentConfig(k=11)


def test_experiment_p0_agreement_and_csv():
    config = ExperimentConfig(n=30, m=5, params=(0.0, 0.5), samples=8, seed=3)
    rows = run_experiment(config)
    assert all(r["agree_irv"] == 1 for r in rows if r["param"] == 0.0)
    same = [r for r in rows if r["param"] == 0.0]
    for s in range(8):
        winners = {r["winners"] for r in same if r["sample"] == s}
        assert len(winners) == 1
    assert rows == run_experiment(config, workers=2)
    text = rows_to_csv(config, rows)
    assert text.startswith("# config: ") and '"seed": 3' in text.splitlines()[0]
    assert text.splitlines()[1].startswith("sample,param,rule,winners,borda,agree_irv")
    summary = summarize(rows)
    assert summary[(0.0, "approval-irv")]["agreement"] == 1.0


def test_multiwinner_positions():
    config = ExperimentConfig(n=40, m=12, k=10, params=(0.3,), samples=2, seed=1)
    rows = run_experiment(config)
    assert len(rows) == 4
    assert all(len(r["positions"].split(";")) == 10 for r in rows)


def test_radius_experiment():
    config = ExperimentConfig(n=30, m=6, weakener="radius", params=(0.0, 0.25), samples=3)
    rows = run_experiment(config)
    assert all(r["distortion"] >= 1 for r in rows)
