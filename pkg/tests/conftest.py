import pathlib
import time

import numpy as np
import pytest

from bclfactor import construct_bcl, random_commuting_pair

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "golden"

CORPUS_SEEDS = range(50)

FIX1 = (np.array([[0.5]]), np.array([[0.5]]))

_acceptance_lines = []


def corpus_dim(seed):
    return 2 + seed % 7


def corpus_pairs():
    return [random_commuting_pair(corpus_dim(s), seed=s, spectral_cap=0.9) for s in CORPUS_SEEDS]


class Corpus(list):
    """``(T1, T2, bundle)`` triples plus the wall time spent building them."""

    seconds = 0.0


@pytest.fixture(scope="session")
def corpus():
    """The 50 seeded pairs (dims 2..8) with their dilation bundles."""
    start = time.perf_counter()
    out = Corpus((t1, t2, construct_bcl(t1, t2, trunc_tol=1e-10)) for t1, t2 in corpus_pairs())
    out.seconds = time.perf_counter() - start
    return out


@pytest.fixture(scope="session")
def fix1_bundle():
    return construct_bcl(*FIX1, degree=40)


@pytest.fixture
def record_criterion():
    """Record one pass/fail line; shown in the terminal summary."""

    def record(number, title, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        _acceptance_lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
