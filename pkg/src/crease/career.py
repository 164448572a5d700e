"""Career score data: parsing, validation, and basic summaries.

A career file is plain UTF-8 text with one innings per line: a non-negative
integer, with a ``*`` suffix marking a not-out (uncompleted) innings.  Blank
lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "CareerParseError",
    "Innings",
    "Career",
    "parse_career",
    "render_career",
    "load_career",
    "split_completed",
    "summary_stats",
]

_INNINGS_RE = re.compile(r"^(\d+)(\*?)$")


class CareerParseError(ValueError):
    """A career file line that is not a valid innings."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class Innings:
    """One innings: runs scored, plus whether the batsman finished not out."""

    runs: int
    not_out: bool = False

    def __post_init__(self):
        object.__setattr__(self, "runs", int(self.runs))
        object.__setattr__(self, "not_out", bool(self.not_out))
        if self.runs < 0:
            raise ValueError(f"runs must be non-negative, got {self.runs}")


@dataclass(frozen=True)
class Career:
    """A player's ordered sequence of innings.

    Order is preserved for round-tripping but carries no meaning for
    inference: innings are treated as exchangeable.
    """

    player_id: str
    innings: tuple[Innings, ...]

    def __post_init__(self):
        object.__setattr__(self, "innings", tuple(self.innings))

    @property
    def num_innings(self) -> int:
        return len(self.innings)

    @property
    def num_not_out(self) -> int:
        return sum(1 for inn in self.innings if inn.not_out)

    @property
    def max_score(self) -> int:
        """Largest runs value in the career; 0 for an empty career."""
        return max((inn.runs for inn in self.innings), default=0)


def parse_career(source_text: str, player_id: str) -> Career:
    """Parse career text into a Career, one Innings per data line.

    Raises CareerParseError naming the offending line number for anything
    that is not a non-negative integer, optionally suffixed by ``*``.
    """
    innings = []
    for lineno, raw in enumerate(source_text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _INNINGS_RE.match(line)
        if match is None:
            if re.match(r"^-\d+\*?$", line):
                raise CareerParseError(lineno, f"negative score {line!r}")
            raise CareerParseError(lineno, f"not a valid innings: {line!r}")
        innings.append(Innings(runs=int(match.group(1)), not_out=match.group(2) == "*"))
    return Career(player_id=player_id, innings=tuple(innings))


def render_career(career: Career) -> str:
    """Inverse of parse_career: one line per innings, ``*`` for not-outs."""
    lines = [f"{inn.runs}*" if inn.not_out else str(inn.runs) for inn in career.innings]
    return "".join(line + "\n" for line in lines)


def load_career(path, player_id: str | None = None) -> Career:
    """Read a career file from disk; the player id defaults to the file stem."""
    from pathlib import Path

    p = Path(path)
    if player_id is None:
        player_id = p.stem
    return parse_career(p.read_text(encoding="utf-8"), player_id)


def split_completed(career: Career) -> tuple[list[int], list[int]]:
    """Split runs into (dismissed, not_out) lists, preserving innings order."""
    dismissed = [inn.runs for inn in career.innings if not inn.not_out]
    not_out = [inn.runs for inn in career.innings if inn.not_out]
    return dismissed, not_out


def summary_stats(career: Career) -> tuple[int, int, float | None]:
    """Return (innings, not-outs, traditional average).

    The traditional average is total runs over dismissals, the conventional
    scorecard statistic; it is None when the career has no dismissals.
    """
    total = sum(inn.runs for inn in career.innings)
    i = career.num_innings
    n = career.num_not_out
    if i == n:
        return i, n, None
    return i, n, total / (i - n)
