import numpy as np

from ..errors import DomainError
from ..grouping import RuleGrouping
from ..rules import Rule, RuleSet


def generate_synthetic(m, n, k, noise=0.0, overlap=0.0, rules_per_factor=3, seed=0):
    """Block-structured data with planted rules.

    Entities and attributes are split into ``k`` contiguous blocks; block
    ``z`` of X is a rank-one product of loadings drawn from U(0.5, 1.5), plus
    U(0, noise) everywhere. Each entity block is cut into ``rules_per_factor``
    segments and rule ``t`` covers segments ``t`` and ``t + 1`` (cyclically),
    so every entity is described by two rules of its block. With
    ``overlap > 0`` each rule also borrows that fraction of a segment's size from the
    next block, each borrowed entity shared by two consecutive rules.

    Returns ``(X, rules, grouping)`` where ``grouping`` assigns each rule to
    its block.
    """
    if rules_per_factor < 2:
        raise DomainError("rules_per_factor must be at least 2")
    if not 0 <= overlap < 1:
        raise DomainError("overlap must lie in [0, 1)")
    if noise < 0:
        raise DomainError("noise must be non-negative")
    if k < 1 or n < k or m < k * rules_per_factor:
        raise DomainError(
            f"cannot tile m={m}, n={n} into k={k} blocks of {rules_per_factor} rules"
        )
    rng = np.random.default_rng(seed)
    ent_blocks = np.array_split(np.arange(m), k)
    att_blocks = np.array_split(np.arange(n), k)
    F = np.zeros((m, k))
    G = np.zeros((n, k))
    for z in range(k):
        F[ent_blocks[z], z] = rng.uniform(0.5, 1.5, len(ent_blocks[z]))
        G[att_blocks[z], z] = rng.uniform(0.5, 1.5, len(att_blocks[z]))
    X = F @ G.T
    if noise > 0:
        X = X + noise * rng.uniform(0.0, 1.0, size=(m, n))

    rules, assignment = [], []
    for z, block in enumerate(ent_blocks):
        segs = np.array_split(block, rules_per_factor)
        nxt = ent_blocks[(z + 1) % k]
        # borrowed entities are shared by consecutive rules so each stays doubly covered
        extras = []
        for t in range(rules_per_factor):
            size = int(round(overlap * len(segs[t])))
            picked = rng.choice(nxt, size=min(size, len(nxt)), replace=False) if size and k > 1 else []
            extras.append(set(np.asarray(picked, dtype=int).tolist()))
        for t in range(rules_per_factor):
            u = (t + 1) % rules_per_factor
            supp = set(segs[t].tolist()) | set(segs[u].tolist()) | extras[t] | extras[t - 1]
            rules.append(
                Rule(f"b{z}r{t}", frozenset(supp), label=f"class{z}", description=f"block {z} segments {t},{u}")
            )
            assignment.append(z)
    rs = RuleSet(m, rules)
    return X, rs, RuleGrouping.from_assignment(rs, assignment, k)
