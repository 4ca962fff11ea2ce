import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypersplit.fault_model import Fault, FaultModel  # noqa: E402
from hypersplit.generators import (  # noqa: E402
    gen_expander_petersen,
    gen_honeycomb,
    gen_repetition,
    gen_surface_perfect,
    gen_surface_phenom,
    gen_three_check,
)


def uncovered_fixture() -> FaultModel:
    """Primitives {a}, {b}; a 3-fault {a, b, c} whose check c nothing else touches."""
    a, b, c = 0, 1, 2
    return FaultModel(3, 1, (
        Fault(0.01, {a}, set(), "A"),
        Fault(0.02, {b}, {0}, "B"),
        Fault(0.03, {a, b, c}, {0}, "ABC"),
    ))


def two_path_fixture() -> FaultModel:
    """Primitive paths a-x-b and c-y-d; a 4-fault {a, b, c, d}."""
    a, x, b, c, y, d = range(6)
    return FaultModel(6, 1, (
        Fault(0.01, {a, x}, {0}, "ax"),
        Fault(0.01, {x, b}, set(), "xb"),
        Fault(0.01, {c, y}, set(), "cy"),
        Fault(0.01, {y, d}, set(), "yd"),
        Fault(0.02, {a, b, c, d}, {0}, "abcd"),
    ))


def random_graph_like(seed: int, checks: int, faults: int, observables: int = 2) -> FaultModel:
    rng = random.Random(seed)
    out = []
    for _ in range(faults):
        k = rng.choice((1, 2, 2))
        cs = set(rng.sample(range(checks), k))
        obs = {o for o in range(observables) if rng.random() < 0.3}
        out.append(Fault(rng.choice((0.01, 0.05, 0.1, 0.2, 0.3)), cs, obs))
    return FaultModel(checks, observables, tuple(out))


def suite_models() -> dict[str, FaultModel]:
    """Every named model the conservation and determinism checks run over."""
    return {
        "repetition5": gen_repetition(5, 0.05),
        "repetition6": gen_repetition(6, 0.1),
        "surface3": gen_surface_perfect(3, 0.01, 0.005, 0.01),
        "surface5": gen_surface_perfect(5, 0.01, 0.005, 0.01),
        "phenom3": gen_surface_phenom(3, 3, 0.01, 0.02),
        "honeycomb33": gen_honeycomb(3, 3, 6, 0.01, 0.01, 0.01, 0.01),
        "honeycomb33_composite": gen_honeycomb(3, 3, 6, 0.01, 0.01, 0.01, 0.01,
                                               include_composite_paulis=True),
        "three_check": gen_three_check(6),
        "petersen": gen_expander_petersen(0.05),
        "uncovered": uncovered_fixture(),
        "two_path": two_path_fixture(),
    }


@pytest.fixture
def rep4():
    return gen_repetition(4, 0.1)


@pytest.fixture
def rep5():
    return gen_repetition(5, 0.05)


@pytest.fixture
def surface3():
    return gen_surface_perfect(3, 0.01, 0.01, 0.01)
