import numpy as np

from ..densemat import frobenius_norm
from ..errors import DomainError, ShapeError
from .config import variant_mode


def _check_shapes(x, F, G):
    m, n = x.shape
    if F.shape[0] != m or G.shape[0] != n or F.shape[1] != G.shape[1]:
        raise ShapeError(f"X {x.shape}, F {F.shape} and G {G.shape} do not conform")


def reconstruction_term(x, F, G):
    r = x - F @ G.T
    return float(np.sum(r * r))


def penalty_term(F, c):
    if c.mode == "none":
        return 0.0
    if c.mode == "ideal":
        d = F - c.ideal
    else:
        d = c.A - F.T @ c.P
    return float(np.sum(d * d))


def objective(x, F, G, c, lam):
    """J = ||X - F G^T||^2 + lam * penalty, penalty chosen by the constraint mode."""
    _check_shapes(x, F, G)
    c.check(*F.shape)
    return reconstruction_term(x, F, G) + lam * penalty_term(F, c)


def penalty_grad_half(F, c):
    """Half the gradient of the penalty term w.r.t. F."""
    if c.mode == "ideal":
        return F - c.ideal
    if c.mode == "cost":
        return c.P @ (c.P.T @ F) - c.PAt
    return np.zeros_like(F)


def grad_F(x, F, G, c, lam):
    """dJ/dF = 2 F G^T G - 2 X G + 2 lam * (P P^T F - P A^T)  (ideal mode: F - ideal)."""
    _check_shapes(x, F, G)
    g = F @ (G.T @ G) - x @ G
    if c.mode != "none":
        g = g + lam * penalty_grad_half(F, c)
    return 2.0 * g


def lambda_value(cfg, x, c):
    """Resolve the regularization weight from the user-facing constant ``c``.

    Cost-mode variants use ``c * ||X|| / ||A||``, ideal-mode variants
    ``c * ||X||``; unconstrained baselines always get 0.
    """
    mode = variant_mode(cfg.variant)
    if mode == "none" or cfg.lambda_c == 0:
        return 0.0
    xn = frobenius_norm(x)
    if mode == "ideal":
        return cfg.lambda_c * xn
    if c.A is None:
        raise DomainError("cost-mode variant needs a cost matrix")
    an = frobenius_norm(c.A)
    if an == 0:
        raise DomainError("cost matrix A is all zero; the penalty is degenerate")
    return cfg.lambda_c * xn / an
