"""Shared hypothesis strategies for weak orders and weighted profiles."""

from fractions import Fraction

from hypothesis import strategies as st

from weakvote.core import Profile, WeakOrder


@st.composite
def weak_orders(draw, m):
    perm = draw(st.permutations(range(m)))
    cuts = draw(st.lists(st.booleans(), min_size=m - 1, max_size=m - 1))
    classes, cur = [], [perm[0]]
    for c, cut in zip(perm[1:], cuts):
        if cut:
            classes.append(frozenset(cur))
            cur = [c]
        else:
            cur.append(c)
    classes.append(frozenset(cur))
    return WeakOrder(tuple(classes))


@st.composite
def linear_orders(draw, m):
    return WeakOrder.linear(draw(st.permutations(range(m))))


@st.composite
def profiles(draw, min_m=1, max_m=5, max_ballots=6, max_weight=5, linear=False,
             fractional=False):
    m = draw(st.integers(min_m, max_m))
    orders = linear_orders(m) if linear else weak_orders(m)
    weight = st.integers(1, max_weight)
    if fractional:
        weight = st.fractions(min_value=Fraction(1, 7), max_value=max_weight,
                              max_denominator=7)
    votes = draw(st.lists(st.tuples(weight, orders), min_size=1, max_size=max_ballots))
    names = tuple(chr(ord("a") + i) for i in range(m))
    return Profile(names, tuple((Fraction(w), o) for w, o in votes))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for key in sorted(results):
            terminalreporter.write_line(results[key])
