import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, List

from torclosed.errors import PropertyViolation
from torclosed.lattice import Verdict

log = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: Any = None

    def line(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        out = f'{status}  {self.name}'
        if not self.passed and self.witness is not None:
            out += f'  witness: {self.witness}'
        return out


class Certifier(ABC):

    def __init__(self):
        self.results: List[CheckResult] = []

    @abstractmethod
    def checks(self) -> List[Callable[[], CheckResult]]:
        pass

    def run(self) -> List[CheckResult]:
        self.results = []
        for check in self.checks():
            try:
                result = check()
            except PropertyViolation as e:
                result = CheckResult(check.__name__, False, e.witness)
            log.debug(result.line())
            self.results.append(result)
        return self.results

    @property
    def passed(self):
        return all(r.passed for r in self.results)


def from_verdict(name: str, verdict: Verdict) -> CheckResult:
    return CheckResult(name, bool(verdict), None if verdict else verdict.witness)
