"""
Shared enums and report types
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List


class SignClass(Enum):
    NON_NEGATIVE = "NonNegative"
    NON_POSITIVE = "NonPositive"
    MIXED = "Mixed"


class BoundaryKind(Enum):
    NO_FLUX = "no_flux"
    DIRICHLET = "dirichlet"


class FluxMode(Enum):
    SEPARATE = "separate"
    COMBINED = "combined"


class InterfaceDensity(Enum):
    UPWIND = "upwind"
    CENTERED = "centered"
    LIMITED = "limited"


class Verdict(Enum):
    PASS = "Pass"
    FAIL = "Fail"
    HYPOTHESIS_NOT_MET = "HypothesisNotMet"


@dataclass
class PrincipleReport:
    """Outcome of one numerical property check.

    ``margin`` is signed so that larger is better. Ordering checks compare it
    against ``-tolerance``; threshold checks fold the tolerance into the
    margin itself (``margin = tol - measured``) and set ``absorbed=True``.
    """
    check_name: str
    hypotheses_verified: List[str]
    measured_margin: float
    tolerance: float
    verdict: Verdict
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def evaluate(cls, check_name: str, hypotheses: List[str], margin: float,
                 tolerance: float, absorbed: bool = False,
                 details: Dict[str, Any] = None) -> 'PrincipleReport':
        bound = 0.0 if absorbed else -tolerance
        verdict = Verdict.PASS if margin >= bound else Verdict.FAIL
        return cls(check_name, list(hypotheses), float(margin), float(tolerance),
                   verdict, dict(details or {}))

    @classmethod
    def hypothesis_not_met(cls, check_name: str, hypotheses: List[str], tolerance: float,
                           reason: str, details: Dict[str, Any] = None) -> 'PrincipleReport':
        info = dict(details or {})
        info["reason"] = reason
        return cls(check_name, list(hypotheses), float("nan"), float(tolerance),
                   Verdict.HYPOTHESIS_NOT_MET, info)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def to_dict(self) -> Dict[str, Any]:
        """Serializable form used in report.json"""
        return {
            "check": self.check_name,
            "hypotheses": self.hypotheses_verified,
            "margin": None if self.measured_margin != self.measured_margin else self.measured_margin,
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
            "details": self.details,
        }
