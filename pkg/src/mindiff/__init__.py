"""Iterated local search for the minimum differential dispersion problem."""
from .model import (
    ConfigurationError,
    ContractError,
    Instance,
    MinDiffError,
    Move,
    Solution,
    apply_swap,
    evaluate_full,
    gain_of_swap,
    neighborhood_gains,
)
from .search import (
    RunResult,
    SearchParams,
    default_params_for,
    descent,
    escape,
    explore_local_optima,
    ils_mindiff,
    initialize,
    weak_perturb,
)
from .oracle import OracleResult, solve_exact
from .instances import InstanceSpec, ParseError, generate, read_instance, write_instance
from .bench import InstanceStats, SignTestReport, emit_report, parameter_sweep, run_experiment, sign_test

__version__ = "0.1.0"
