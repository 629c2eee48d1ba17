import logging
import math

import numpy as np

from ..densemat import as_matrix, normalize_columns_by_max
from ..errors import ConfigError, DataError, DivergenceError
from .config import Constraints, FactorModel
from .objective import lambda_value, objective
from .sparse import _project_rows, sparse_nmf_step
from . import updates as U

log = logging.getLogger(__name__)


def _check_inputs(x, cfg, c):
    if np.any(x < 0):
        raise DataError("X has negative entries")
    if not np.any(x):
        raise DataError("X is all zero")
    if cfg.mode != c.mode:
        raise ConfigError(
            f"variant {cfg.variant} needs {cfg.mode!r} constraints, got {c.mode!r}"
        )
    m, n = x.shape
    if cfg.k > min(m, n):
        log.warning("k=%d exceeds min(m, n)=%d", cfg.k, min(m, n))
    if cfg.family == "sparse" and cfg.k < 2:
        raise ConfigError("the sparse baseline needs k >= 2")
    c.check(m, cfg.k)


def solve(x, cfg, c=None, F0=None, G0=None, callback=None):
    """Factorize ``x`` with the update family and penalty selected by ``cfg.variant``.

    Each iteration updates G, then F (then normalizes F's columns when
    ``cfg.normalize_f``). Stops after ``cfg.max_iters`` iterations or when the
    relative objective change drops below ``cfg.tolerance``. ``callback(it, F,
    G)`` is invoked after every iteration.
    """
    x = as_matrix(x, "X")
    c = Constraints.none() if c is None else c
    _check_inputs(x, cfg, c)
    m, n = x.shape
    if F0 is None or G0 is None:
        F0, G0 = U.init_factors(m, n, cfg.k, cfg.seed)
    F = np.array(F0, dtype=float)
    G = np.array(G0, dtype=float)
    lam = lambda_value(cfg, x, c)
    eps = cfg.epsilon
    fam = cfg.family

    if fam == "sparse":
        target = 0.5 if cfg.target_sparseness is None else cfg.target_sparseness
        F = _project_rows(F, target, np.sqrt((F * F).sum(axis=1)))
        sp_step = 1.0
    if fam == "gdbd":
        gamma0 = cfg.step_size or 1.0 / U.frobenius_norm(G.T @ G)
        driver = U.BoldDriver(gamma0, cfg.bold_grow, cfg.bold_shrink)

    J_prev = objective(x, F, G, c, lam)
    trace = [J_prev]
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        if fam == "mu":
            G = U.mu_step_G(x, F, G, eps)
            F = U.mu_step_F(x, F, G, c, lam, eps)
        elif fam in ("gd", "obd"):
            G = U.pg_step_G(x, F, G)
            eta = cfg.step_size or U.default_step(G, c, lam)
            if fam == "gd":
                F = U.gd_step(x, F, G, c, lam, eta, literal=cfg.gd_literal)
            else:
                F = U.oblique_step(x, F, G, c, lam, eta)
        elif fam == "gdbd":
            G = U.pg_step_G(x, F, G)
            J_mid = objective(x, F, G, c, lam)
            F, _ = U.gd_bold_driver_step(driver, x, F, G, c, lam, J_mid, literal=cfg.gd_literal)
        elif fam == "hals":
            G = U.hals_step_G(x, F, G, eps)
            F = U.hals_step(x, F, G, c, lam, eps, literal=cfg.hals_literal)
        elif fam == "sparse":
            F, G, sp_step = sparse_nmf_step(x, F, G, target, sp_step, eps)

        if cfg.normalize_f:
            F, G = normalize_columns_by_max(F, G, eps)
            if fam == "mu":
                F = np.maximum(F, eps)

        J = objective(x, F, G, c, lam)
        if not math.isfinite(J):
            raise DivergenceError(f"{cfg.variant}: objective became non-finite at iteration {it}", it)
        trace.append(J)
        if callback is not None:
            callback(it, F, G)
        if abs(J - J_prev) / max(J_prev, 1e-30) < cfg.tolerance:
            converged = True
            break
        J_prev = J

    return FactorModel(F, G, it, trace, converged, cfg.variant, lam)
