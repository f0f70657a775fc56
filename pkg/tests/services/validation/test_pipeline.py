"""Tests for the audit pipeline."""

import logging
from types import SimpleNamespace

from services.core.interfaces import AuditContext, AuditFinding, IAuditor
from services.validation.pipeline import AuditPipeline, AuditPipelineBuilder


class FixedAuditor(IAuditor):
    """Auditor returning a fixed verdict and recording its calls."""

    def __init__(self, name: str, passed: bool):
        self.name = name
        self.passed = passed
        self.calls = []

    def audit(self, subject, context: AuditContext) -> AuditFinding:
        self.calls.append((subject, context))
        return AuditFinding(
            name=self.name, passed=self.passed, value=1.0, bound=0.5, message="fixed"
        )


def make_context() -> AuditContext:
    return AuditContext(b_field=10.0, sigma_accept=1e-3)


class TestAuditPipeline:
    """Test cases for AuditPipeline."""

    def test_runs_auditors_in_order(self):
        """Findings come back in the order the auditors were added."""
        pipeline = AuditPipeline()
        pipeline.add_auditor(FixedAuditor("first", True))
        pipeline.add_auditor(FixedAuditor("second", True))

        findings = pipeline.run(SimpleNamespace(), make_context())

        assert [f.name for f in findings] == ["first", "second"]

    def test_failure_does_not_stop_pipeline(self):
        """Every auditor runs even after a failure."""
        failing = FixedAuditor("failing", False)
        passing = FixedAuditor("passing", True)
        pipeline = AuditPipeline()
        pipeline.add_auditor(failing)
        pipeline.add_auditor(passing)

        pipeline.run("subject", make_context())

        assert len(failing.calls) == 1
        assert len(passing.calls) == 1
        assert passing.calls[0][0] == "subject"

    def test_failures_property(self):
        """Only failed findings of the last run are reported."""
        pipeline = AuditPipeline()
        pipeline.add_auditor(FixedAuditor("ok", True))
        pipeline.add_auditor(FixedAuditor("bad", False))

        pipeline.run(None, make_context())

        assert [f.name for f in pipeline.failures] == ["bad"]

    def test_failure_is_logged(self, caplog):
        """A failed audit is logged at warning level."""
        pipeline = AuditPipeline()
        pipeline.add_auditor(FixedAuditor("bad", False))

        with caplog.at_level(logging.WARNING, logger="services.validation.pipeline"):
            pipeline.run(None, make_context())

        assert "Audit bad failed" in caplog.text

    def test_empty_pipeline(self):
        """An empty pipeline produces no findings."""
        pipeline = AuditPipeline()
        assert pipeline.run(None, make_context()) == []
        assert pipeline.failures == []

    def test_clear(self):
        """clear removes auditors and previous findings."""
        pipeline = AuditPipeline()
        pipeline.add_auditor(FixedAuditor("bad", False))
        pipeline.run(None, make_context())

        pipeline.clear()

        assert pipeline.auditors == []
        assert pipeline.failures == []


class TestAuditPipelineBuilder:
    """Test cases for AuditPipelineBuilder."""

    def test_fluent_interface(self):
        """add_auditor returns the builder and build returns the pipeline."""
        first = FixedAuditor("first", True)
        second = FixedAuditor("second", True)

        builder = AuditPipelineBuilder()
        assert builder.add_auditor(first) is builder
        pipeline = builder.add_auditor(second).build()

        assert isinstance(pipeline, AuditPipeline)
        assert pipeline.auditors == [first, second]
