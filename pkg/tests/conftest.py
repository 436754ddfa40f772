import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from conic_descent.pencil.model import Pencil  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EXAMPLE_FORMS = ((1, 4), (2, 5), (3, 2), (5, 1))


@pytest.fixture(scope="session")
def example_pencil() -> Pencil:
    """(t+4s)(2t+5s) x^2 + (3t+2s)(5t+s) y^2 = 1 over S0 = {inf, 2}."""
    return Pencil(EXAMPLE_FORMS, {0, 1}, 1, 1, ["inf", 2])


EXAMPLE_YAML = """\
s0: [inf, 2]
a: 1
b: 1
forms:
  - [1, 4]
  - [2, 5]
  - [3, 2]
  - [5, 1]
partition_A: [1, 2]
search:
  height: 128
variant: main_intro
"""


@pytest.fixture()
def example_spec(tmp_path):
    path = tmp_path / "surface.yaml"
    path.write_text(EXAMPLE_YAML)
    return path


def random_pencil(rng, size: int = 4, coeff: int = 6, ab: int = 3, s0=("inf", 2)):
    """A random valid pencil with small coefficients, or None when the draw is degenerate."""
    import math
    forms = []
    while len(forms) < size:
        c, d = rng.randint(-coeff, coeff), rng.randint(-coeff, coeff)
        if (c, d) == (0, 0) or math.gcd(c, d) != 1:
            continue
        if any(c * d2 - c2 * d == 0 for c2, d2 in forms):
            continue
        forms.append((c, d))
    k = rng.choice([k for k in range(0, size + 1, 2)])
    part_a = set(rng.sample(range(size), k))
    a = rng.choice([x for x in range(-ab, ab + 1) if x])
    b = rng.choice([x for x in range(-ab, ab + 1) if x])
    return Pencil(tuple(forms), part_a, a, b, list(s0))


# acceptance criteria record (number, title, passed, seconds) here
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, secs in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  "
                                    f"{title} ({secs:.2f} s)")
