"""Decision outcomes shared by all certifiers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Outcome(str, enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    NO_WITNESS = "no_witness"
    NOT_APPLICABLE = "not_applicable"

    @property
    def exit_code(self) -> int:
        return {Outcome.ACCEPT: 0, Outcome.REJECT: 1}.get(self, 2)


@dataclass(frozen=True)
class Reason:
    """One checked condition.

    ``condition`` names a re-checkable test (see :mod:`secantcert.replay`),
    ``holds`` is its result and ``data`` carries what is needed to replay it.
    """

    condition: str
    holds: bool
    mode: int | None = None
    data: dict[str, Any] = field(default_factory=dict)
    note: str = ""


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    reasons: tuple[Reason, ...] = ()
    witnesses: dict[str, Any] = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.outcome is Outcome.ACCEPT

    @property
    def rejected(self) -> bool:
        return self.outcome is Outcome.REJECT

    def failing(self) -> list[Reason]:
        return [r for r in self.reasons if not r.holds]
