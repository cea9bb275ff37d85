import math
import random

import pytest

from specular import theta_max, validate_scene

PINNED = (1.0, 2.0, 3.0, math.pi / 12)


def random_scenes(n, seed=20240611, frac=0.95):
    """Scenes with r=1, r_a in [1.1, 10], r_b in [r_a, 10], 2theta in (0, frac*max]."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        r_a = rng.uniform(1.1, 10.0)
        r_b = rng.uniform(r_a, 10.0)
        full = rng.uniform(0.0, frac) * theta_max(1.0, r_a, r_b)
        if full <= 0.0:
            continue
        out.append(validate_scene(1.0, r_a, r_b, 0.5 * full))
    return out


@pytest.fixture
def pinned():
    return validate_scene(*PINNED)


@pytest.fixture(scope="session")
def scenes200():
    return random_scenes(200)
