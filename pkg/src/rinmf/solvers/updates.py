"""Single-step update rules for every optimizer family."""
from dataclasses import dataclass

import numpy as np

from ..densemat import frobenius_norm
from ..errors import DivergenceError
from .objective import objective, penalty_grad_half


def init_factors(m, n, k, seed):
    """Uniform [0, 1) factors with exact zeros replaced by 0.1."""
    rng = np.random.default_rng(seed)
    F = rng.uniform(0.0, 1.0, size=(m, k))
    G = rng.uniform(0.0, 1.0, size=(n, k))
    F[F == 0] = 0.1
    G[G == 0] = 0.1
    return F, G


# -- multiplicative updates -------------------------------------------------

def mu_step_G(x, F, G, eps):
    return np.maximum(eps, G * (x.T @ F) / (G @ (F.T @ F)))


def mu_step_F(x, F, G, c, lam, eps):
    """Rectified multiplicative update of F; the penalty adds to both sides of the ratio."""
    num = x @ G
    den = F @ (G.T @ G)
    if c.mode == "cost":
        num = num + lam * c.PAt
        den = den + lam * (c.P @ (c.P.T @ F))
    elif c.mode == "ideal":
        num = num + lam * c.ideal
        den = den + lam * F
    return np.maximum(eps, F * num / den)


# -- projected gradient -------------------------------------------------------

def penalty_lipschitz(c):
    if c.mode == "cost":
        # ||P P^T||_F == ||P^T P||_F, the smaller product
        PtP = c.P.T @ c.P if c.P.shape[1] <= c.P.shape[0] else c.P @ c.P.T
        return frobenius_norm(PtP)
    if c.mode == "ideal":
        return 1.0
    return 0.0


def default_step(G, c, lam):
    """1 / (||G^T G||_F + lam * L_penalty): a Lipschitz bound on the half gradient."""
    return 1.0 / (frobenius_norm(G.T @ G) + lam * penalty_lipschitz(c))


def gd_step(x, F, G, c, lam, gamma, literal=False):
    """Projected step F <- [F - gamma * (F G^T G - X G + lam * dPenalty)]_+.

    ``literal`` drops the ``- X G`` term (penalty-driven step only).
    """
    d = F @ (G.T @ G)
    if not literal:
        d = d - x @ G
    if c.mode != "none":
        d = d + lam * penalty_grad_half(F, c)
    return np.maximum(F - gamma * d, 0.0)


def pg_step_G(x, F, G, eta=None):
    FtF = F.T @ F
    if eta is None:
        eta = 1.0 / max(frobenius_norm(FtF), np.finfo(float).tiny)
    return np.maximum(G - eta * (G @ FtF - x.T @ F), 0.0)


@dataclass
class BoldDriver:
    gamma: float
    grow: float = 1.05
    shrink: float = 0.5
    accepted: int = 0
    rejected: int = 0


def gd_bold_driver_step(state, x, F, G, c, lam, J_current, literal=False):
    """One bold-driver step: grow gamma and accept on decrease, else revert F and shrink.

    Returns ``(F_next, J_next)``; ``state.gamma`` is updated in place.
    """
    candidate = gd_step(x, F, G, c, lam, state.gamma, literal=literal)
    J_new = objective(x, candidate, G, c, lam)
    if np.isfinite(J_new) and J_new <= J_current:
        state.gamma *= state.grow
        state.accepted += 1
        return candidate, J_new
    state.gamma *= state.shrink
    state.rejected += 1
    if state.gamma < 1e-300:
        raise DivergenceError("bold driver step size underflowed")
    return F, J_current


def oblique_step(x, F, G, c, lam, eta):
    """Projected gradient step written on F^T.

    F^T <- [F^T - eta * (G^T G F^T - G^T X^T + lam * (F^T P P^T - A P^T))]_+
    """
    Ft = F.T
    d = (G.T @ G) @ Ft - G.T @ x.T
    if c.mode == "cost":
        d = d + lam * ((Ft @ c.P) @ c.P.T - c.PAt.T)
    elif c.mode == "ideal":
        d = d + lam * (Ft - c.ideal.T)
    return np.ascontiguousarray(np.maximum(Ft - eta * d, 0.0).T)


# -- HALS ---------------------------------------------------------------------

def hals_step(x, F, G, c, lam, eps, literal=False):
    """Column-wise update of F against the rank-one residual X^(j) = X - sum_{l != j} f_l g_l^T.

    Each proposal is divided by ``g_j^T g_j`` unless ``literal``; an all-zero
    column is reset to ``eps``.
    """
    F = F.copy()
    R = x - F @ G.T
    for j in range(F.shape[1]):
        g = G[:, j]
        f = F[:, j]
        Xj = R + np.outer(f, g)
        prop = Xj @ g
        if c.mode == "cost":
            prop = prop + lam * (c.PAt[:, j] - c.P @ (c.P.T @ f))
        elif c.mode == "ideal":
            prop = prop + lam * (c.ideal[:, j] - f)
        prop = np.maximum(prop, 0.0)
        if not literal:
            prop = prop / max(g @ g, eps)
        if not prop.any():
            prop = np.full_like(prop, eps)
        F[:, j] = prop
        R = Xj - np.outer(prop, g)
    return F


def hals_step_G(x, F, G, eps):
    G = G.copy()
    R = x - F @ G.T
    for j in range(G.shape[1]):
        f = F[:, j]
        g = G[:, j]
        Xj = R + np.outer(f, g)
        prop = np.maximum(Xj.T @ f, 0.0) / max(f @ f, eps)
        if not prop.any():
            prop = np.full_like(prop, eps)
        G[:, j] = prop
        R = Xj - np.outer(f, prop)
    return G
