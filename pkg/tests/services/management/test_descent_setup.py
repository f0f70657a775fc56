"""Tests for mapping descent configurations onto optimizer options."""

from services.core.constants import DEFAULT_L_MAX, DEFAULT_L_MAX_AXISYM, SolverMode
from services.management.descent_setup import (
    descent_options,
    l_max_for,
    resolve_mode,
    sweep_options,
)
from services.management.run_config import OptimizeConfig, SweepConfig


class TestResolveMode:
    """Test cases for resolve_mode."""

    def test_auto_switches_at_axisym_from(self):
        config = OptimizeConfig(axisym_from=44.0)
        assert resolve_mode(config, 43.9) == SolverMode.GENERAL
        assert resolve_mode(config, 44.0) == SolverMode.AXISYM

    def test_explicit_mode(self):
        config = OptimizeConfig(mode="axisym")
        assert resolve_mode(config, 0.0) == SolverMode.AXISYM


class TestDescentOptions:
    """Test cases for descent_options and l_max_for."""

    def test_basis_follows_mode(self):
        config = OptimizeConfig(i_max=7, eps=1e-5, beta_max=0.5, n_target=200, seed=3)
        axisym = descent_options(config, SolverMode.AXISYM)
        general = descent_options(config, SolverMode.GENERAL)

        assert axisym.objective.basis.axisymmetric
        assert not general.objective.basis.axisymmetric
        assert axisym.i_max == 7
        assert axisym.eps == 1e-5
        assert axisym.beta_max == 0.5
        assert axisym.objective.solver.n_target == 200
        assert axisym.objective.solver.seed == 3

    def test_no_mode_leaves_basis_open(self):
        assert descent_options(OptimizeConfig(), None).objective.basis is None

    def test_l_max_defaults(self):
        config = OptimizeConfig()
        assert l_max_for(config, SolverMode.GENERAL) == DEFAULT_L_MAX
        assert l_max_for(config, SolverMode.AXISYM) == DEFAULT_L_MAX_AXISYM
        assert l_max_for(OptimizeConfig(l_max=4), SolverMode.AXISYM) == 4


class TestSweepOptions:
    """Test cases for sweep_options."""

    def test_defaults(self):
        options = sweep_options(SweepConfig(initial=["ball", "prolate"], seed=5))
        assert options.b_axi == 44.0
        assert options.overlap == 6.0
        assert options.l_max == DEFAULT_L_MAX
        assert options.l_max_axisym == DEFAULT_L_MAX_AXISYM
        assert options.initial == ["ball", "prolate"]
        assert options.seed == 5
        assert options.mode == SolverMode.AUTO

    def test_l_max_applies_to_active_stage(self):
        general = sweep_options(SweepConfig(l_max=6))
        axisym = sweep_options(SweepConfig(l_max=30, mode="axisym"))
        assert general.l_max == 6
        assert general.l_max_axisym == DEFAULT_L_MAX_AXISYM
        assert axisym.l_max_axisym == 30
        assert axisym.l_max == DEFAULT_L_MAX
