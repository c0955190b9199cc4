"""Voting rules, axiom checkers and experiments for weak-order (tied) ballots."""

from .core import (
    APPROVAL,
    BORDA,
    SPLIT,
    Profile,
    ProfileError,
    ScoringSystem,
    WeakOrder,
    order_type,
    positional_scores,
    restrict,
    score_vector,
    top_set,
)
from .rules import (
    approval_irv,
    baldwin_weak,
    elimination_trace,
    irv,
    put_winners,
    put_winners_naive,
    split_irv,
)
from .stv import StvConfig, approval_stv, quota, split_stv

__all__ = [
    "APPROVAL", "BORDA", "SPLIT", "Profile", "ProfileError", "ScoringSystem", "WeakOrder",
    "order_type", "positional_scores", "restrict", "score_vector", "top_set",
    "approval_irv", "baldwin_weak", "elimination_trace", "irv", "put_winners",
    "put_winners_naive", "split_irv", "StvConfig", "approval_stv", "quota", "split_stv",
]
