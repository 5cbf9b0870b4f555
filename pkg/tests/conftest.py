"""Shared fixtures and deterministic corpus builders for the test suite."""

from __future__ import annotations

import random

import pytest

from boolsys.core import Bits, TruthTable, union_states
from boolsys.runs import LassoMaskSequence, ProgressiveFunction


def b(text: str) -> Bits:
    return Bits.from_string(text)


# The two-variable demo system used throughout the docs: 00 and 11 rest, 01
# and 10 excited.  Outputs by input encoding: 00->00, 10->11, 01->10, 11->11.
DEMO2 = TruthTable.from_ints(2, [0, 3, 1, 3])

NOT1 = TruthTable.complement(1)

# The conjugate pair from the worked equivalence example, plus its witness:
# phi(m1, m2) = (m1 xor m2, not m2), psi(m1, m2) = (not m1, m1 == m2),
# h(m1, m2) = (not m2, not m1), h' = coordinate swap.
CONJ_PHI = TruthTable.from_ints(2, [2, 3, 1, 0])
CONJ_PSI = TruthTable.from_ints(2, [3, 0, 1, 2])
H_FORWARD = (3, 1, 2, 0)
H_PRIME_FORWARD = (0, 2, 1, 3)

# Gray-code four-cycle: every state has exactly one excited coordinate.
GRAY4 = TruthTable.from_ints(2, [2, 0, 3, 1])


def random_lasso(rng: random.Random, width: int,
                 max_prefix: int = 3, max_cycle: int = 4) -> LassoMaskSequence:
    """A random lasso whose cycle is patched to be progressive."""
    size = 1 << width
    prefix = [Bits(width, rng.randrange(size)) for _ in range(rng.randint(0, max_prefix))]
    cycle = [Bits(width, rng.randrange(size)) for _ in range(rng.randint(1, max_cycle))]
    missing = Bits.full(width).value & ~union_states(cycle).value
    if missing:
        j = rng.randrange(len(cycle))
        cycle[j] = Bits(width, cycle[j].value | missing)
    return LassoMaskSequence(tuple(prefix), tuple(cycle))


def random_rho(rng: random.Random, width: int, **kw) -> ProgressiveFunction:
    """A random schedule; times are small integers or half-integers."""
    masks = random_lasso(rng, width, **kw)
    step = rng.choice(["1", "1/2", "2", "3/2"])
    start = rng.choice(["-1", "0", "1", "1/3"])
    return ProgressiveFunction.uniform(masks, start=start, step=step)


def rho_corpus(width: int, count: int, seed: int = 20240811) -> list[ProgressiveFunction]:
    rng = random.Random(seed + width)
    return [random_rho(rng, width) for _ in range(count)]


@pytest.fixture(scope="session")
def demo2() -> TruthTable:
    return DEMO2


@pytest.fixture(scope="session")
def not1() -> TruthTable:
    return NOT1
