"""
Verification engine
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from fluxlim.core.interfaces import PrincipleReport
from .checks import CheckContext, PrincipleCheck

logger = logging.getLogger(__name__)


class VerificationEngine:
    """Runs registered checks against one CheckContext"""

    def __init__(self, max_workers: int = 4):
        self.max_workers = max_workers
        self.checks: List[PrincipleCheck] = []

    def register_check(self, check: PrincipleCheck):
        if not isinstance(check, PrincipleCheck):
            raise TypeError(f"not a check: {type(check)}")
        self.checks.append(check)
        logger.info(f"Registered check: {check.get_name()}")

    def run(self, context: CheckContext, max_workers: Optional[int] = None) -> List[PrincipleReport]:
        """Run all checks concurrently; reports come back in registration order"""
        if not self.checks:
            return []
        workers = max(1, min(max_workers or self.max_workers, len(self.checks)))
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [(check, executor.submit(check.check, context)) for check in self.checks]
            reports = []
            for check, future in futures:
                try:
                    report = future.result()
                except Exception as e:
                    logger.error(f"Error in check {check.get_name()}: {e}")
                    raise
                logger.info(f"Check {check.get_name()}: {report.verdict.value} "
                            f"(margin {report.measured_margin:.3e})")
                reports.append(report)
        return reports
