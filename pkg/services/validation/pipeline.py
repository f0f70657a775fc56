"""Audit pipeline for chaining a posteriori checks on accepted solves.

Auditors run in the order they were added. A failed audit never aborts the
pipeline: every finding is collected and failures are logged.
"""

import logging
from typing import Any, List

from services.core.interfaces import AuditContext, AuditFinding, IAuditor, IAuditPipeline

logger = logging.getLogger(__name__)


class AuditPipeline(IAuditPipeline):
    """Runs every auditor and keeps the findings of the last run."""

    def __init__(self):
        self.auditors: List[IAuditor] = []
        self.last_findings: List[AuditFinding] = []

    def add_auditor(self, auditor: IAuditor) -> None:
        self.auditors.append(auditor)

    def run(self, subject: Any, context: AuditContext) -> List[AuditFinding]:
        """Audit ``subject``.

        Args:
            subject: Usually an ``EigenSolveResult``
            context: Field strength, acceptance threshold and tolerances

        Returns:
            One finding per auditor, in pipeline order
        """
        findings = []
        for auditor in self.auditors:
            finding = auditor.audit(subject, context)
            if not finding.passed:
                logger.warning(
                    "Audit %s failed: value=%.6g bound=%.6g %s",
                    finding.name, finding.value, finding.bound, finding.message,
                )
            findings.append(finding)
        self.last_findings = findings
        return findings

    @property
    def failures(self) -> List[AuditFinding]:
        return [finding for finding in self.last_findings if not finding.passed]

    def clear(self) -> None:
        self.auditors.clear()
        self.last_findings = []


class AuditPipelineBuilder:
    """Builder for audit pipelines with a fluent interface."""

    def __init__(self):
        self.pipeline = AuditPipeline()

    def add_auditor(self, auditor: IAuditor) -> "AuditPipelineBuilder":
        self.pipeline.add_auditor(auditor)
        return self

    def build(self) -> AuditPipeline:
        return self.pipeline
