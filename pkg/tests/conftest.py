import random

import pytest
from hypothesis import HealthCheck, settings

from xadic.algebra import Poly
from xadic.laurent import from_rational, paperfolding_theta

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


def random_poly(rng: random.Random, p: int, deg: int, monic: bool = False) -> Poly:
    coeffs = [rng.randrange(p) for _ in range(deg)]
    coeffs.append(1 if monic else rng.randrange(1, p))
    return Poly(p, coeffs)


def random_rational(rng: random.Random, p: int, max_deg: int, horizon: int = 256):
    """A reduced-or-not fraction P/Q with deg P < deg Q <= max_deg, as a series."""
    dq = rng.randint(1, max_deg)
    Q = random_poly(rng, p, dq)
    P = Poly(p, [rng.randrange(p) for _ in range(dq)])
    if P.is_zero():
        P = Poly.one(p)
    return P, Q, from_rational(P, Q, horizon)


@pytest.fixture(scope="session")
def paperfolding():
    return paperfolding_theta(4096)


def brute_interval_count(spec, I, digits=None) -> int:
    """Count x_n in an elementary interval by generating every point of the net."""
    import numpy as np

    from xadic.digital import digit_array

    if digits is None:
        digits = digit_array(spec, np.arange(spec.size))
    mask = np.ones(digits.shape[0], dtype=bool)
    for i, pref in enumerate(I.prefixes):
        if pref:
            mask &= np.all(digits[:, i, :len(pref)] == np.array(pref), axis=1)
    return int(mask.sum())


def random_interval(rng: random.Random, p: int, m: int, max_order: int):
    from xadic.boxcount import ElementaryInterval

    js = [0, 0, 0]
    for _ in range(rng.randint(0, max_order)):
        js[rng.randrange(3)] += 1
    prefixes = [tuple(rng.randrange(p) for _ in range(j)) for j in js]
    return ElementaryInterval.from_prefixes(p, prefixes)
