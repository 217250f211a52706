"""Solving strategies for linear difference equations."""
from .ansatz import AnsatzConfig, ansatz_general, laurent_to_hexpr, solve_ansatz, verify_eps_solution
from .dalembert import Layer, NestedSumExpr, solve_dalembertian, to_hexpr
from .hyper import hyper_ratios, solve_hypergeometric
from .ics import LinearCombination, match_initial_conditions
from .rational import (
    creative_telescope,
    parameterized_telescope,
    rational_solutions,
    solve_rational,
    telescope_rational,
)
from .telescope import delta_check, telescope, telescope_config
from .types import (
    HypergeomCertificate,
    InconsistentConditions,
    NoSolution,
    ParamSolution,
    SolutionSet,
    Underdetermined,
)

__all__ = [
    "AnsatzConfig",
    "HypergeomCertificate",
    "InconsistentConditions",
    "Layer",
    "LinearCombination",
    "NestedSumExpr",
    "NoSolution",
    "ParamSolution",
    "SolutionSet",
    "Underdetermined",
    "ansatz_general",
    "creative_telescope",
    "delta_check",
    "hyper_ratios",
    "laurent_to_hexpr",
    "match_initial_conditions",
    "parameterized_telescope",
    "rational_solutions",
    "solve_ansatz",
    "solve_dalembertian",
    "solve_hypergeometric",
    "solve_rational",
    "telescope",
    "telescope_config",
    "telescope_rational",
    "to_hexpr",
    "verify_eps_solution",
]
