from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..densemat import as_matrix
from ..errors import ConfigError, ShapeError

# variant -> (update family, constraint mode)
VARIANTS = {
    "MU": ("mu", "none"),
    "D": ("mu", "cost"),
    "DE": ("mu", "ideal"),
    "DF": ("mu", "cost"),
    "DFE": ("mu", "ideal"),
    "GD": ("gd", "cost"),
    "GDE": ("gd", "ideal"),
    "GDBD": ("gdbd", "cost"),
    "GDBDE": ("gdbd", "ideal"),
    "OBD": ("obd", "cost"),
    "OBDE": ("obd", "ideal"),
    "HD": ("hals", "cost"),
    "HDE": ("hals", "ideal"),
    "SP": ("sparse", "none"),
}

MU_FAMILY = frozenset(v for v, (fam, _) in VARIANTS.items() if fam == "mu")
PROJECTED_FAMILY = frozenset(v for v, (fam, _) in VARIANTS.items() if fam in ("gd", "gdbd", "obd", "hals"))
# DF/DFE take their grouping from rfa_assign instead of k-means
RFA_VARIANTS = frozenset({"DF", "DFE"})


def variant_mode(variant):
    try:
        return VARIANTS[variant][1]
    except KeyError:
        raise ConfigError(f"unknown variant {variant!r}; choose from {sorted(VARIANTS)}") from None


@dataclass(frozen=True)
class SolverConfig:
    variant: str = "D"
    k: int = 2
    lambda_c: float = 1.0
    max_iters: int = 50000
    tolerance: float = 1e-8
    epsilon: float = 1e-9
    normalize_f: bool = False
    seed: int = 0
    step_size: Optional[float] = None
    bold_grow: float = 1.05
    bold_shrink: float = 0.5
    target_sparseness: Optional[float] = None
    hals_literal: bool = False
    gd_literal: bool = False

    def __post_init__(self):
        variant_mode(self.variant)
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.tolerance < 0:
            raise ConfigError("tolerance must be non-negative")
        if self.lambda_c < 0:
            raise ConfigError("lambda_c must be non-negative")
        if self.max_iters < 0:
            raise ConfigError("max_iters must be non-negative")
        if not self.bold_grow > 1 > self.bold_shrink > 0:
            raise ConfigError("bold driver needs bold_grow > 1 > bold_shrink > 0")
        if self.step_size is not None and not self.step_size > 0:
            raise ConfigError("step_size must be positive")
        if self.target_sparseness is not None and not 0 <= self.target_sparseness <= 1:
            raise ConfigError("target_sparseness must lie in [0, 1]")

    @property
    def family(self):
        return VARIANTS[self.variant][0]

    @property
    def mode(self):
        return VARIANTS[self.variant][1]


@dataclass(frozen=True)
class Constraints:
    """Penalty data for the regularized objectives.

    ``none``: plain NMF. ``ideal``: penalize ``||F - ideal||``. ``cost``:
    penalize ``||A - F^T P||`` with rule matrix ``P`` and cost matrix ``A``.
    """

    mode: str = "none"
    ideal: Optional[np.ndarray] = None
    P: Optional[np.ndarray] = None
    A: Optional[np.ndarray] = None
    PAt: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def none(cls):
        return cls("none")

    @classmethod
    def from_ideal(cls, ideal):
        return cls("ideal", ideal=as_matrix(ideal, "ideal matrix"))

    @classmethod
    def from_cost(cls, P, A):
        P = as_matrix(P, "P")
        A = as_matrix(A, "A")
        if P.shape[1] != A.shape[1]:
            raise ShapeError(f"P {P.shape} and A {A.shape} disagree on the number of rules")
        return cls("cost", P=P, A=A, PAt=P @ A.T)

    def check(self, m, k):
        if self.mode == "ideal" and self.ideal.shape != (m, k):
            raise ShapeError(f"ideal matrix has shape {self.ideal.shape}, expected {(m, k)}")
        if self.mode == "cost":
            if self.P.shape[0] != m:
                raise ShapeError(f"P has {self.P.shape[0]} rows, expected {m}")
            if self.A.shape[0] != k:
                raise ShapeError(f"A has {self.A.shape[0]} rows, expected k={k}")


@dataclass
class FactorModel:
    F: np.ndarray
    G: np.ndarray
    iterations_run: int = 0
    objective_trace: list = field(default_factory=list)
    converged: bool = False
    variant: str = "MU"
    lam: float = 0.0

    def reconstruction(self):
        return self.F @ self.G.T
