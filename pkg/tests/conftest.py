import hypothesis
import numpy as np
import pytest

from rinmf.rules import Rule, RuleSet

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_rules(m, supports, labels=None, qualities=None):
    rules = []
    for j, s in enumerate(supports):
        rules.append(
            Rule(
                f"r{j}",
                frozenset(s),
                label=None if labels is None else labels[j],
                quality=None if qualities is None else qualities[j],
            )
        )
    return RuleSet(m, rules)


def random_instance(rng, m=None, n=None, k=None, n_rules=None):
    """Random positive data with a covering rule set and a k-means grouping."""
    from rinmf.grouping import kmeans_rules

    m = m or int(rng.integers(4, 21))
    n = n or int(rng.integers(3, 21))
    k = k or int(rng.integers(1, 6))
    n_rules = n_rules or int(rng.integers(k, k + 6))
    supports = []
    for _ in range(n_rules):
        s = set(np.flatnonzero(rng.random(m) < 0.4).tolist()) or {int(rng.integers(m))}
        supports.append(s)
    rs = make_rules(m, supports)
    X = rng.uniform(0, 1, size=(m, n))
    g = kmeans_rules(rs, k, seed=int(rng.integers(1 << 30)), n_init=2)
    return X, rs, g


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
