"""Named example profiles and systems used by the tests, docs and CLI demos.

Each profile is written in the native ballot format so the fixtures double
as parser examples.  ``FIG10`` note: the Approval-IRV PUT winner set of this
profile is ``{b, c}`` (``d`` has the lowest approval score 18 and goes first,
then ``a`` with 29 against 32 for both ``b`` and ``c``).  Prose descriptions
of the example sometimes name ``a``; what the cohesive-majority axiom
guarantees is only that the winners lie inside ``{a, b, c}``.
"""

from __future__ import annotations

from fractions import Fraction

from .ballotio import parse_profile
from .core import ScoringSystem

FIG1_TEXT = """\
candidates: a,b,c,d
1: {a,b} > c > d
1: {a,b,d} > c
1: b > {a,c} > d
1: c > a > {b,d}
1: d > a > c > b
"""

FIG8_TEXT = """\
candidates: a,b,c,c'
9: {a,c,c'} > b
4: b > a > {c,c'}
2: {c,c'} > a > b
"""

FIG9_TEXT = """\
candidates: a,b,c,d
47: {a,b} > c > d
4: a > b > c > d
25: c > b > d > a
24: d > b > c > a
"""

FIG10_TEXT = """\
candidates: a,b,c,d
9: {a,b,c} > d
5: {a,b} > d > c
5: {a,c} > d > b
8: {b,c,d} > a
10: d > {a,b,c}
"""

# five-ballot profile whose weighted majority graph is the cycle a>c>b>a
# with every margin equal to 1, while a is top for a majority
CYCLE_TEXT = """\
candidates: a,b,c
1: a > c > b
2: {a,b} > c
2: c > b > a
"""

# T = {t1,t2,t3}: the first five ballots are T-supporting, the last two are not
PSC_TEXT = """\
candidates: t1,t2,t3,a,b,c,d
1: t1 > t2 > t3 > {a,b,c,d}
1: {t1,t2} > t3 > {a,b,d} > c
1: t2 > {t1,t3,a} > {c,d} > b
1: t3 > t2 > {t1,a} > {b,c,d}
1: t2 > {t1,t3,a,b} > d > c
1: t1 > {t2,a} > t3 > {b,c,d}
1: a > {t1,t2} > t3 > {b,c,d}
"""

# three-seat example counted by hand: a elected, c eliminated, b elected
STV_TEXT = """\
candidates: a,b,c
3: a > b > c
2: b > c > a
1: c > b > a
"""

SPLIT_STV_TEXT = """\
candidates: a,b,c
2: {a,b} > c
1: c > a > b
"""

# voter at the origin, candidates in units of the radius r = 1;
# strict distance order a, b, d, c, e and radius buckets {a,b} > {c,d} > {e}
RADIUS_VOTER = (0.0, 0.0)
RADIUS_CANDIDATES = {
    "a": (-0.2, 0.6),
    "b": (0.5, -0.45),
    "c": (1.3, 1.2),
    "d": (-1.5, -0.5),
    "e": (2.3, -1.0),
}

FIG1 = parse_profile(FIG1_TEXT)
FIG8 = parse_profile(FIG8_TEXT)
FIG9 = parse_profile(FIG9_TEXT)
FIG10 = parse_profile(FIG10_TEXT)
CYCLE = parse_profile(CYCLE_TEXT)
PSC = parse_profile(PSC_TEXT)
STV_EXAMPLE = parse_profile(STV_TEXT)
SPLIT_STV_EXAMPLE = parse_profile(SPLIT_STV_TEXT)

FIXTURE_TEXTS = {
    "fig1": FIG1_TEXT,
    "fig8": FIG8_TEXT,
    "fig9": FIG9_TEXT,
    "fig10": FIG10_TEXT,
    "cycle": CYCLE_TEXT,
    "psc": PSC_TEXT,
    "stv": STV_TEXT,
    "split-stv": SPLIT_STV_TEXT,
}


def _half_point(tau):
    """Half a point to each top candidate if tied at the top or only two classes, else one."""
    if len(tau) == 1:
        return (0,)
    top = Fraction(1, 2) if tau[0] >= 2 or len(tau) == 2 else Fraction(1)
    return (top,) + (0,) * (len(tau) - 1)


def half_point_system(max_m: int = 8) -> ScoringSystem:
    """Clone-independent table system that fails to respect majorities."""
    return ScoringSystem.from_function(_half_point, max_m, name="half-point")
