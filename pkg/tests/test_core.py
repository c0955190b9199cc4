from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from weakvote.core import (
    APPROVAL, BORDA, SPLIT, Profile, ProfileError, ScoringSystem, WeakOrder, compositions,
    order_type, positional_scores, restrict, score_vector, top_set,
)
from weakvote.fixtures import FIG1, half_point_system

from conftest import profiles, weak_orders

A, B, C, D = range(4)


def W(*classes):
    return WeakOrder(tuple(frozenset(c) for c in classes))


def test_order_type_examples():
    assert order_type(W({A}, {B, C}, {D})) == (1, 2, 1)
    assert order_type(W({A}, {B}, {C}, {D})) == (1, 1, 1, 1)
    assert order_type(W({A, B, C, D})) == (4,)


def test_restrict_examples():
    assert restrict(W({A, B}, {C}, {D}), {A, B, D}) == W({A, B}, {D})
    assert restrict(W({A}, {B}), {A, B}) == W({A}, {B})
    assert restrict(W({C}, {A}, {B, D}), {A, B, D}) == W({A}, {B, D})
    with pytest.raises(ProfileError):
        restrict(W({A}, {B}), set())


def test_top_set_examples():
    assert top_set(W({A, B, D}, {C})) == {A, B, D}
    assert top_set(W({A}, {B})) == {A}
    assert top_set(W({A, B, C, D})) == {A, B, C, D}


def test_weak_order_invariants():
    with pytest.raises(ProfileError):
        WeakOrder(())
    with pytest.raises(ProfileError):
        W({A}, set())
    with pytest.raises(ProfileError):
        W({A, B}, {B})


def test_score_vector_examples():
    assert score_vector(SPLIT, (3, 1)) == (F(1, 3), 0)
    assert score_vector(APPROVAL, (2, 1, 1)) == (1, 0, 0)
    # the raw vector (3, 2, 0) ends in tau_k - 1 = 0 here, so no shift applies
    assert score_vector(BORDA, (1, 2, 1)) == (3, 2, 0)
    assert score_vector(BORDA, (1, 1, 2)) == (2, 1, 0)
    assert score_vector(SPLIT, (4,)) == (0,)


def test_table_system():
    hp = half_point_system(4)
    assert hp.vector((2, 2)) == (F(1, 2), 0)
    assert hp.vector((1, 1, 2)) == (1, 0, 0)
    assert hp.vector((1, 3)) == (F(1, 2), 0)
    with pytest.raises(KeyError):
        hp.vector((1, 1, 1, 1, 1))
    with pytest.raises(ProfileError):
        ScoringSystem("table", {(1, 1): (0, 1)})
    fb = ScoringSystem("table", {}, fallback="approval")
    assert fb.vector((2, 1)) == (1, 0)


def test_positional_scores_examples():
    assert positional_scores(FIG1, APPROVAL) == {A: 2, B: 3, C: 1, D: 2}
    assert positional_scores(FIG1, SPLIT) == {A: F(5, 6), B: F(11, 6), C: 1, D: F(4, 3)}
    p = Profile.build("abc", [(2, [["a", "b"], "c"])])
    assert positional_scores(p, APPROVAL) == {A: 2, B: 2, C: 0}


def test_profile_invariants():
    with pytest.raises(ProfileError):
        Profile(("a", "b"), ((F(1), W({A})),))
    with pytest.raises(ProfileError):
        Profile(("a", "b"), ((F(-1), W({A}, {B})),))
    with pytest.raises(ProfileError):
        Profile(("a", "a"), ())


taus = st.integers(1, 7).flatmap(lambda m: st.sampled_from(list(compositions(m))))


@given(taus, st.sampled_from([APPROVAL, SPLIT, BORDA, half_point_system(7)]))
def test_vector_invariants(tau, system):
    vec = system.vector(tau)
    assert len(vec) == len(tau)
    assert vec[-1] == 0
    assert all(x >= y for x, y in zip(vec, vec[1:]))
    assert all(x >= 0 for x in vec)


@given(profiles(), st.sampled_from([APPROVAL, SPLIT, BORDA]))
def test_scores_linear_in_weights(profile, system):
    base = positional_scores(profile, system)
    doubled = positional_scores(profile.scaled(2), system)
    assert doubled == {c: 2 * s for c, s in base.items()}


@given(st.integers(2, 6).flatmap(lambda m: st.tuples(weak_orders(m), st.sets(
    st.integers(0, m - 1), min_size=1))))
def test_restrict_then_order_type(case):
    order, keep = case
    r = restrict(order, keep)
    fresh = tuple(len(cls & keep) for cls in order.classes if cls & keep)
    assert order_type(r) == fresh
    assert r.domain == keep


@given(profiles(linear=True))
def test_linear_profiles_approval_equals_split(profile):
    assert positional_scores(profile, APPROVAL) == positional_scores(profile, SPLIT)
