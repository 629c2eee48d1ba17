from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Compensation:
    entity: int
    factor: int
    rule: int
    deficit: float
    donors: frozenset


def detect_compensations(F, ideal, rs, include_outside=False):
    """Report entities whose loading deficit is offset by surplus loadings inside a shared rule.

    For every factor ``i`` and rule ``j``, an entity ``r`` in both the ideal
    cluster ``C_i`` and ``supp(r_j)`` with ``F[r, i] < 1`` is reported when
    some other entity ``z`` of ``supp(r_j)`` carries more than its ideal
    value. Donors are taken from ``C_i`` only (ideal value 1) unless
    ``include_outside`` is set, in which case any ``F[z, i] > ideal[z, i]``
    counts.
    """
    F = np.asarray(F, dtype=float)
    ideal = np.asarray(ideal, dtype=float)
    out = []
    for i in range(ideal.shape[1]):
        in_cluster = ideal[:, i] == 1
        surplus = F[:, i] > ideal[:, i]
        if not include_outside:
            surplus &= in_cluster
        for j, rule in enumerate(rs.rules):
            supp = sorted(rule.support)
            donors_all = {z for z in supp if surplus[z]}
            if not donors_all:
                continue
            for r in supp:
                if in_cluster[r] and F[r, i] < 1:
                    donors = frozenset(donors_all - {r})
                    if donors:
                        out.append(Compensation(r, i, j, float(1 - F[r, i]), donors))
    return out
