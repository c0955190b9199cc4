"""Ballot formats, mark-grid interpretation and audit output.

Native format (UTF-8, one ballot per line)::

    # comment
    candidates: a,b,c,d
    1: {a,b} > c > d
    1/2: d > a

Weights are positive integers or ``p/q`` rationals; singleton classes may
omit braces.  Candidates a ballot leaves out form one bottom class
(``truncated="complete"``), the input is rejected (``truncated="reject"``),
or the ballot is skipped (``truncated="drop"``, keeping full rankings only).

PrefLib-style orders with ties use 1-based candidate numbers, e.g.
``3: 1,{2,3},4``.  Both the ``# ALTERNATIVE NAME i: x`` header style and
the older numeric-header layout are read; repeated identical ballots are
merged on input.

Mark grids are the normalized form of cast vote records: a set of
``(candidate, rank)`` marks per ballot, stored as CSV
``ballot_id,candidate,rank``.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import Profile, ProfileError, WeakOrder

NAME_RE = re.compile(r"^[^\s,{}>:#]+$")


TRUNCATION = ("complete", "reject", "drop")


class ParseError(ProfileError):
    def __init__(self, message: str, kind: str = "syntax", line: int | None = None):
        self.kind = kind
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


def _weight(text: str, line: int) -> Fraction:
    try:
        w = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad weight {text.strip()!r}", "bad-weight", line) from None
    if w <= 0:
        raise ParseError(f"weight must be positive, got {w}", "bad-weight", line)
    return w


def format_weight(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def _parse_native_body(body: str, line: int) -> list[list[str]]:
    groups = []
    for part in body.split(">"):
        part = part.strip()
        if part.startswith("{"):
            if not part.endswith("}"):
                raise ParseError(f"unbalanced braces in {part!r}", "syntax", line)
            names = [x.strip() for x in part[1:-1].split(",")]
        else:
            names = [part]
        for x in names:
            if not NAME_RE.match(x):
                raise ParseError(f"bad candidate token {x!r}", "syntax", line)
        groups.append(names)
    return groups


def _parse_preflib_body(body: str, line: int) -> list[list[str]]:
    groups, i = [], 0
    body = body.replace(" ", "")
    while i < len(body):
        if body[i] == "{":
            j = body.find("}", i)
            if j < 0:
                raise ParseError("unbalanced braces", "syntax", line)
            inner = body[i + 1:j]
            groups.append(inner.split(",") if inner else [])
            i = j + 1
        else:
            j = body.find(",", i)
            j = len(body) if j < 0 else j
            groups.append([body[i:j]])
            i = j
        if i < len(body):
            if body[i] != ",":
                raise ParseError(f"expected ',' at column {i}", "syntax", line)
            i += 1
            if i == len(body):
                raise ParseError("trailing comma", "syntax", line)
    for g in groups:
        for x in g:
            if not x.isdigit():
                raise ParseError(f"bad candidate number {x!r}", "syntax", line)
    return [g for g in groups if g]


def _to_order(groups, index: dict[str, int], m: int, truncated: str, line: int) -> WeakOrder:
    classes, seen = [], set()
    for g in groups:
        ids = set()
        for x in g:
            if x not in index:
                raise ParseError(f"unknown candidate {x!r}", "unknown-candidate", line)
            c = index[x]
            if c in seen or c in ids:
                raise ParseError(f"candidate {x!r} ranked twice", "duplicate-candidate", line)
            ids.add(c)
        seen |= ids
        classes.append(frozenset(ids))
    rest = frozenset(range(m)) - seen
    if rest:
        if truncated == "drop":
            return None
        if truncated == "reject":
            raise ParseError("ballot does not rank every candidate", "truncated", line)
        classes.append(rest)
    return WeakOrder(tuple(classes))


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        yield no, raw


def parse_native(text: str, truncated: str = "complete") -> Profile:
    roster: list[str] | None = None
    rows = []
    for no, raw in _content_lines(text):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise ParseError("expected 'WEIGHT: ranking'", "syntax", no)
        if head.strip().lower() == "candidates":
            if roster is not None or rows:
                raise ParseError("roster must come first and only once", "syntax", no)
            roster = [x.strip() for x in body.split(",")]
            for x in roster:
                if not NAME_RE.match(x):
                    raise ParseError(f"bad candidate name {x!r}", "syntax", no)
            if len(set(roster)) != len(roster):
                raise ParseError("duplicate names in roster", "duplicate-candidate", no)
            continue
        rows.append((no, _weight(head, no), _parse_native_body(body, no)))
    if roster is None:
        roster = []
        for _, _, groups in rows:
            for g in groups:
                roster.extend(x for x in g if x not in roster)
    if not roster:
        raise ParseError("no candidates", "syntax")
    index = {x: i for i, x in enumerate(roster)}
    votes = []
    for no, w, g in rows:
        order = _to_order(g, index, len(roster), truncated, no)
        if order is not None:
            votes.append((w, order))
    return Profile(tuple(roster), tuple(votes))


def parse_preflib(text: str, truncated: str = "complete") -> Profile:
    lines = [(no, raw.strip()) for no, raw in _content_lines(text) if raw.strip()]
    names: dict[int, str] = {}
    m = None
    body_lines = []
    if lines and lines[0][1].isdigit():
        # legacy layout: m, m lines "i,name", a totals line, then "count,ranking"
        m = int(lines[0][1])
        for no, row in lines[1:m + 1]:
            num, _, name = row.partition(",")
            names[int(num)] = name.strip()
        body_lines = [(no, row.partition(",")[0], row.partition(",")[2]) for no, row in lines[m + 2:]]
    else:
        for no, row in lines:
            if row.startswith("#"):
                key, _, val = row[1:].partition(":")
                key = key.strip().upper()
                if key == "NUMBER ALTERNATIVES":
                    m = int(val)
                elif key.startswith("ALTERNATIVE NAME"):
                    names[int(key.split()[-1])] = val.strip()
                continue
            head, sep, body = row.partition(":")
            if not sep:
                raise ParseError("expected 'COUNT: ranking'", "syntax", no)
            body_lines.append((no, head, body))
    if m is None:
        m = max(names) if names else 0
    if m < 1:
        raise ParseError("no alternatives declared", "syntax")
    roster = [names.get(i, str(i)) for i in range(1, m + 1)]
    index = {str(i): i - 1 for i in range(1, m + 1)}
    merged: dict[WeakOrder, Fraction] = {}
    for no, head, body in body_lines:
        w = _weight(head, no)
        order = _to_order(_parse_preflib_body(body, no), index, m, truncated, no)
        if order is None:
            continue
        merged[order] = merged.get(order, Fraction(0)) + w
    return Profile(tuple(roster), tuple((w, o) for o, w in merged.items()))


def parse_profile(text: str, format: str = "native", truncated: str = "complete") -> Profile:
    if truncated not in TRUNCATION:
        raise ValueError(f"unknown truncation policy {truncated!r}")
    if format == "native":
        return parse_native(text, truncated)
    if format in ("preflib", "toi"):
        return parse_preflib(text, truncated)
    raise ValueError(f"unknown format {format!r}")


def serialize_profile(profile: Profile, format: str = "native") -> str:
    votes = [(w, o) for w, o in profile.votes if w]
    if not votes:
        raise ProfileError("cannot serialize a profile without votes")
    if format == "native":
        lines = [f"candidates: {','.join(profile.candidates)}"]
        lines += [f"{format_weight(w)}: {profile.format_order(o)}" for w, o in votes]
        return "\n".join(lines) + "\n"
    if format in ("preflib", "toi"):
        lines = [f"# NUMBER ALTERNATIVES: {profile.m}"]
        lines += [f"# ALTERNATIVE NAME {i + 1}: {x}" for i, x in enumerate(profile.candidates)]
        for w, o in votes:
            parts = []
            for cls in o.classes:
                nums = [str(c + 1) for c in sorted(cls)]
                parts.append(nums[0] if len(nums) == 1 else "{" + ",".join(nums) + "}")
            lines.append(f"{format_weight(w)}: {','.join(parts)}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def read_profile(path: str, format: str | None = None, truncated: str = "complete") -> Profile:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if format is None:
        format = "preflib" if path.endswith((".toi", ".soi", ".toc", ".soc")) else "native"
    return parse_profile(text, format, truncated)


# ---------------------------------------------------------------------------
# mark grids


@dataclass(frozen=True)
class MarkGrid:
    candidates: tuple[str, ...]
    marks: frozenset[tuple[str, int]]
    ballot_id: str = ""


@dataclass(frozen=True)
class MarkPolicy:
    unranked: str = "bottom"  # "bottom": implicit last class; "drop": order covers ranked only
    gaps: str = "collapse"  # "collapse" skipped ranks, or "invalid"


@dataclass(frozen=True)
class BallotClassification:
    kind: str  # "linear", "weak" or "invalid"
    order: WeakOrder | None = None
    indifferences: int = 0
    reason: str | None = None
    partial: tuple[str, ...] = ()

    def describe(self, candidates) -> str:
        if self.kind == "invalid":
            return f"invalid({self.reason})"
        text = Profile.format_order(_Roster(candidates), self.order)
        if self.kind == "weak":
            return f"weak({text}; {self.indifferences} indifference{'s' * (self.indifferences != 1)})"
        return f"linear({text})"


class _Roster:
    def __init__(self, candidates):
        self.candidates = tuple(candidates)


def legacy_partial_count(grid: MarkGrid) -> tuple[str, ...]:
    """Candidates a one-choice-per-rank count would credit, in order.

    Ranks are read in increasing order; the ballot is exhausted at the first
    rank carrying more than one candidate.  Repeats of an already credited
    candidate are skipped.
    """
    by_rank: dict[int, set[str]] = {}
    for c, r in grid.marks:
        by_rank.setdefault(r, set()).add(c)
    out: list[str] = []
    for r in sorted(by_rank):
        names = by_rank[r]
        if len(names) > 1:
            break
        (c,) = names
        if c not in out:
            out.append(c)
    return tuple(out)


def interpret_mark_grid(grid: MarkGrid, policy: MarkPolicy = MarkPolicy()) -> BallotClassification:
    """Read a marked ballot as a weak order, or say why it cannot be one."""
    partial = legacy_partial_count(grid)
    index = {c: i for i, c in enumerate(grid.candidates)}
    if not grid.marks:
        return BallotClassification("invalid", reason="empty", partial=partial)
    if any(c not in index or not isinstance(r, int) or r < 1 for c, r in grid.marks):
        return BallotClassification("invalid", reason="other-structural", partial=partial)
    ranks_of: dict[str, set[int]] = {}
    for c, r in grid.marks:
        ranks_of.setdefault(c, set()).add(r)
    if any(len(rs) > 1 for rs in ranks_of.values()):
        return BallotClassification("invalid", reason="duplicate-candidate-ranks", partial=partial)
    used = sorted({r for _, r in grid.marks})
    if policy.gaps == "invalid" and used != list(range(1, len(used) + 1)):
        return BallotClassification("invalid", reason="other-structural", partial=partial)
    classes = [frozenset(index[c] for c, r in grid.marks if r == rank) for rank in used]
    ties = sum(1 for cls in classes if len(cls) > 1)
    rest = frozenset(range(len(grid.candidates))) - frozenset().union(*classes)
    if rest and policy.unranked == "bottom":
        classes.append(rest)
    order = WeakOrder(tuple(classes))
    kind = "weak" if ties else "linear"
    return BallotClassification(kind, order, ties, partial=partial)


def read_mark_grids(text: str, candidates: Iterable[str] | None = None) -> list[MarkGrid]:
    """Parse ``ballot_id,candidate,rank`` CSV; a row with empty candidate marks an empty ballot."""
    rows = list(csv.reader(io.StringIO(text)))
    if rows and [x.strip().lower() for x in rows[0]] == ["ballot_id", "candidate", "rank"]:
        rows = rows[1:]
    marks: dict[str, set] = {}
    seen: list[str] = []
    for no, row in enumerate(rows, 2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 3:
            raise ParseError("expected ballot_id,candidate,rank", "syntax", no)
        bid, cand, rank = (x.strip() for x in row)
        marks.setdefault(bid, set())
        if not cand:
            continue
        try:
            r = int(rank)
        except ValueError:
            raise ParseError(f"bad rank {rank!r}", "syntax", no) from None
        marks[bid].add((cand, r))
        if cand not in seen:
            seen.append(cand)
    roster = tuple(candidates) if candidates is not None else tuple(seen)
    return [MarkGrid(roster, frozenset(ms), bid) for bid, ms in marks.items()]


def write_mark_grids(grids: Iterable[MarkGrid]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ballot_id", "candidate", "rank"])
    for g in grids:
        if not g.marks:
            w.writerow([g.ballot_id, "", ""])
        for c, r in sorted(g.marks, key=lambda x: (x[1], x[0])):
            w.writerow([g.ballot_id, c, r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# traces and verdicts


def _names(profile: Profile, ids) -> str:
    return ",".join(profile.candidates[c] for c in sorted(ids))


def _scores(profile: Profile, scores: dict) -> str:
    return " ".join(f"{profile.candidates[c]}={s}" for c, s in sorted(scores.items()))


def elimination_audit(trace, profile: Profile) -> str:
    lines = [f"rule: {trace.system}", f"tiebreak: {trace.policy}"]
    for i, r in enumerate(trace.rounds, 1):
        tie = f" (tied: {_names(profile, r.tied)})" if len(r.tied) > 1 else ""
        lines.append(
            f"round {i}: scores {_scores(profile, r.scores)}; "
            f"eliminate {profile.candidates[r.eliminated]}{tie}"
        )
    lines.append(f"winner: {profile.candidates[trace.winner]}")
    return "\n".join(lines) + "\n"


def elimination_records(trace, profile: Profile) -> list[dict]:
    return [
        {
            "round": i,
            "remaining": sorted(profile.names(r.remaining)),
            "scores": {profile.candidates[c]: str(s) for c, s in sorted(r.scores.items())},
            "eliminated": profile.candidates[r.eliminated],
            "tied": sorted(profile.names(r.tied)),
        }
        for i, r in enumerate(trace.rounds, 1)
    ]


def stv_audit(trace, profile: Profile) -> str:
    lines = [
        f"rule: {trace.rule}",
        f"seats: {trace.k}",
        f"voters: {trace.n}",
        f"quota: {trace.q} ({trace.config.quota})",
        f"policy: {trace.policy}",
    ]
    for r in trace.rounds:
        head = f"round {r.number}: support {_scores(profile, r.support)}; "
        name = profile.candidates[r.candidate]
        if r.action == "elect":
            detail = ", ".join(f"{k}={v}" for k, v in r.payment.items() if k != "method")
            lines.append(head + f"elect {name} ({r.payment['method']} {detail})")
        else:
            lines.append(head + f"eliminate {name}")
    lines.append(stv_summary(trace, profile))
    return "\n".join(lines) + "\n"


def stv_summary(trace, profile: Profile) -> str:
    """``elected: a (round 1), b (round 3, 1 elimination)``."""
    wins = [r for r in trace.rounds if r.action == "elect"]
    elim = len(trace.eliminations)
    tail = "no eliminations" if not elim else f"{elim} elimination{'s' * (elim != 1)}"
    parts = [f"{profile.candidates[r.candidate]} (round {r.number}" for r in wins]
    return "elected: " + "), ".join(parts) + f", {tail})"


def stv_records(trace, profile: Profile) -> list[dict]:
    return [
        {
            "round": r.number,
            "action": r.action,
            "candidate": profile.candidates[r.candidate],
            "support": {profile.candidates[c]: str(s) for c, s in sorted(r.support.items())},
            "budgets": [str(b) for b in r.budgets],
            "elected": [profile.candidates[c] for c in r.elected],
            "payment": {k: str(v) for k, v in r.payment.items()},
        }
        for r in trace.rounds
    ]


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_weight(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    return value


def verdict_record(verdict) -> dict:
    return {"axiom": verdict.axiom, "status": verdict.status,
            "certificate": _jsonable(verdict.certificate)}


def format_verdict(verdict) -> str:
    lines = [f"axiom: {verdict.axiom}", f"verdict: {verdict.status}"]
    for k, v in verdict.certificate.items():
        v = _jsonable(v)
        if isinstance(v, list):
            v = ",".join(str(x) for x in v)
        lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True)
