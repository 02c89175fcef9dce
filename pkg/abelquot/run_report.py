from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from . import __version__


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"


class ItemVerdict(NamedTuple):
    item: str
    verdict: Verdict
    detail: str = ""


@dataclass
class RunReport:
    """Outcome of one command-line run.

    Attributes
    ----------
    command : str
        The command and its arguments, echoed back.
    precision : int
        Starting precision in bits.
    items : list of ItemVerdict
        One verdict per group, constant or sweep finding.
    notes : list of str
        Extra lines printed after the items.
    wall_time : float
        Seconds taken; only printed on request so that the default output
        is identical between runs.

    """

    command: str
    precision: int
    items: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    wall_time: float = 0.0
    version: str = __version__

    def add(self, item, verdict, detail=""):
        self.items.append(ItemVerdict(item, verdict, detail))

    def count(self, verdict):
        return sum(1 for item in self.items if item.verdict is verdict)

    @property
    def counts(self):
        return {verdict.value: self.count(verdict) for verdict in Verdict}

    @property
    def exit_code(self):
        """0 when nothing failed and nothing stayed undecided, else 1."""
        if self.count(Verdict.FAIL) or self.count(Verdict.INDETERMINATE):
            return 1
        return 0

    def lines(self, timing=False):
        result = [
            f"abelquot {self.version}: {self.command}",
            f"precision: {self.precision} bits",
        ]
        for item in self.items:
            detail = f"  {item.detail}" if item.detail else ""
            result.append(f"[{item.verdict.value}] {item.item}{detail}")
        result.extend(self.notes)
        counts = self.counts
        result.append(
            f"pass: {counts['pass']}, fail: {counts['fail']}, "
            f"indeterminate: {counts['indeterminate']}"
        )
        if timing:
            result.append(f"wall time: {self.wall_time:.2f}s")
        return result

    def text(self, timing=False):
        return "\n".join(self.lines(timing)) + "\n"
