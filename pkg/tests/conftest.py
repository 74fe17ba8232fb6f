import os
import random
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from projblend import (  # noqa: E402
    FiniteFar,
    IdentityMapping,
    ProjectionParams,
)


def sample_params(
    rng: random.Random,
    shear: bool = True,
    p: float = 0.0,
    mapping=IdentityMapping(),
) -> ProjectionParams:
    """Random valid finite-far parameter set at desk scale."""
    import math

    theta = rng.uniform(0.05, math.pi - 0.05)
    alpha = rng.uniform(0.2, 5.0)
    near = rng.uniform(0.01, 10.0)
    far = near * rng.uniform(1.05, 1000.0)
    d = rng.uniform(0.5 * near, 2.0 * far)
    sh = rng.uniform(-2.0, 2.0) if shear else 0.0
    sv = rng.uniform(-2.0, 2.0) if shear else 0.0
    return ProjectionParams(
        theta=theta,
        alpha=alpha,
        near=near,
        far=FiniteFar(far),
        d=d,
        p=p,
        shear_h=sh,
        shear_v=sv,
        mapping=mapping,
    )


@pytest.fixture
def cli_env():
    env = os.environ.copy()
    env["PYTHONPATH"] = str(SRC) + os.pathsep + env.get("PYTHONPATH", "")
    return env


@pytest.fixture
def cli_cmd():
    return [sys.executable, "-m", "projblend"]
