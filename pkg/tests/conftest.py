import random
from collections import defaultdict
from fractions import Fraction

import pytest

from geronimus.moments import custom_moments
from geronimus.opcore import build_gram, regularity_check

_criteria: dict = defaultdict(list)

CRITERIA = {
    1: "Laguerre single step: A_n = n, P*_n = monic Laguerre(alpha-1), < 10 s",
    2: "double step: B_n = 2n, C_n = n(n-1), equals composition of two single steps",
    3: "Darboux J_mon = U L, J*_mon = L U on leading N-1 blocks, N = 12",
    4: "pentadiagonal J_mon^2 = U L, J**_mon = L U on leading N-2 blocks, N = 12",
    5: "Cholesky residual <= 2^-128 at p = 256, N = 10; squared identities exact",
    6: "mass / Sobolev forms equal Gram entries, head-invariant, diagonal M",
    7: "route agreement: system vs determinant, quotient vs one-unknown solve",
    8: "Heine = monic_ops for n <= 8; orthogonality of P, P*, P**",
    9: "negative paths: DegenerateDenominator(1), DegenerateDeterminant, fault location",
    10: "CLI output byte-identical across runs",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[marker.args[0]].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        runs = _criteria.get(n)
        if not runs:
            status = "NOT RUN"
        else:
            status = "PASS" if all(runs) else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {n:>2}: {text} ({len(runs or [])} cases)")


# -- random regular measures ----------------------------------------------------


def discrete_measure(rng: random.Random, points: int = 16):
    """Positive discrete measure on distinct positive rationals; returns (nodes, weights)."""
    nodes = sorted(rng.sample(range(1, 60), points))
    nodes = [Fraction(x, rng.choice((1, 2, 3))) for x in nodes]
    nodes = sorted(set(nodes))
    weights = [Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in nodes]
    return nodes, weights


def measure_moments(nodes, weights, count: int, power: int = 0):
    return [sum((w * x ** (k - power) for x, w in zip(nodes, weights)), Fraction(0)) for k in range(count)]


def random_rational(rng: random.Random, lo: int = -5, hi: int = 5) -> Fraction:
    return Fraction(rng.randint(lo * 6, hi * 6), rng.choice((1, 2, 3, 6)))


def random_custom_sets(seed: int, count: int, moments_needed: int):
    """``count`` regular random moment functionals with their nodes and weights."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        nodes, weights = discrete_measure(rng)
        values = measure_moments(nodes, weights, moments_needed)
        base = custom_moments(values, label=f"discrete{len(out)}")
        if regularity_check(build_gram(base, (moments_needed - 1) // 2)).regular:
            out.append((base, nodes, weights))
    return out
