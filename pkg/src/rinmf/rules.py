"""Rules reduced to their support sets over the entities (rows) of X."""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Rule:
    id: str
    support: frozenset
    label: Optional[str] = None
    description: str = ""
    quality: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(int(i) for i in self.support))
        if not self.support:
            raise DomainError(f"rule {self.id!r} has an empty support")
        if min(self.support) < 0:
            raise DomainError(f"rule {self.id!r} has a negative entity index")


@dataclass(frozen=True)
class RuleSet:
    m: int
    rules: tuple = field(default_factory=tuple)
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        seen = set()
        for r in self.rules:
            if r.id in seen:
                raise DomainError(f"duplicate rule id {r.id!r}")
            seen.add(r.id)
            if max(r.support) >= self.m:
                raise DomainError(
                    f"rule {r.id!r} references entity {max(r.support)} but m={self.m}"
                )

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __getitem__(self, i):
        return self.rules[i]

    @property
    def labels(self):
        """Distinct labels in order of first appearance."""
        out = []
        for r in self.rules:
            if r.label is not None and r.label not in out:
                out.append(r.label)
        return out


def coverage(rs):
    if rs.m <= 0:
        raise DomainError("coverage is undefined for m = 0")
    covered = set()
    for r in rs.rules:
        covered |= r.support
    return len(covered) / rs.m


def build_P(rs):
    """Binary entity x rule membership matrix, columns in rule order."""
    P = np.zeros((rs.m, len(rs.rules)))
    for j, r in enumerate(rs.rules):
        P[sorted(r.support), j] = 1.0
    return P


def single_rule_exposure(rs, clusters, assignment=None):
    """Entities of a factor's cluster described by exactly one of that factor's rules.

    ``assignment[j]`` is the factor of rule ``j``. Without an assignment a rule
    counts as associated to every cluster containing its whole support.
    Returns a set of ``(entity, factor)`` pairs.
    """
    exposed = set()
    for z, cluster in enumerate(clusters):
        cluster = set(cluster)
        if assignment is None:
            associated = [r for r in rs.rules if r.support <= cluster]
        else:
            associated = [r for j, r in enumerate(rs.rules) if assignment[j] == z]
        for e in cluster:
            if sum(1 for r in associated if e in r.support) == 1:
                exposed.add((e, z))
    return exposed
