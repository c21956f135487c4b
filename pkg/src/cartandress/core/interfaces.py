from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Dict, Protocol

if TYPE_CHECKING:
    from cartandress.core.factories import SuiteContext
    from cartandress.core.models import LagrangianResult, Report


class VerificationSuite(ABC):
    """Strategy interface for one verification suite."""

    name: str = ""
    reference: str = ""
    default_tolerance: float = 1e-8

    @abstractmethod
    def evaluate(self, context: "SuiteContext") -> Dict[str, float]:
        """Return the named residuals of the suite; the verdict uses their maximum."""
        pass


class ReportRepository(Protocol):
    """Interface for saving verification reports."""

    def write_report(self, report: "Report", path: str) -> str:
        ...

    def write_lagrangian(self, result: "LagrangianResult", path: str) -> str:
        ...
