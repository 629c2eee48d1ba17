"""Rule-interpretable non-negative matrix factorization."""
from .errors import ConfigError, DataError, DivergenceError, DomainError, RinmfError, ShapeError
from .grouping import (
    RuleGrouping,
    build_A,
    build_ideal,
    cluster_assignment,
    kmeans_rules,
    kmeans_rules_supervised,
    rfa_assign,
)
from .metrics import EvalReport, evaluate
from .rules import Rule, RuleSet, build_P, coverage
from .solvers import Constraints, FactorModel, SolverConfig, solve

__version__ = "0.1.0"
