import numpy as np
import pytest

from bggtate.exactlin import make_field
from bggtate.homalg import ModulePresentation
from bggtate.rings import EXTERIOR, RingSpec


def sym_ring(n, p=32003):
    return RingSpec(n, make_field(p))


def ext_ring(n, p=32003):
    return RingSpec(n, make_field(p), EXTERIOR)


def var(n, i):
    e = [0] * (n + 1)
    e[i] = 1
    return tuple(e)


def structure_sheaf(S):
    return ModulePresentation.free(S, [0])


def residue_field(S):
    """k = S / (X_0, ..., X_n)."""
    n = S.n
    return ModulePresentation.from_generators(S, [0], [{0: {var(n, i): 1}} for i in range(n + 1)])


def euler_module(S):
    """coker(S -> S(1)^{n+1}), the sheaf of tangent vector fields."""
    n = S.n
    return ModulePresentation.from_generators(S, [-1] * (n + 1), [{j: {var(n, j): 1} for j in range(n + 1)}])


def coordinate_quotient(S, idx):
    """S / (X_i : i in idx)."""
    return ModulePresentation.from_generators(S, [0], [{0: {var(S.n, i): 1}} for i in idx])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
