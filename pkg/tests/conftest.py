import numpy as np
import pytest

from supergc import GrassmannAlgebra, GrassmannElement, SuperContext, Superfield
from supergc.jets import layout


def random_scalar_element(alg, rng, density=0.5, parity=None, scale=1.0):
    terms = {}
    for m in range(1 << alg.n_gen):
        if parity is not None and (bin(m).count("1") % 2) != (parity == "odd"):
            continue
        if rng.random() < density:
            terms[m] = scale * complex(rng.normal(), rng.normal())
    return GrassmannElement.build(alg, terms)


def random_superfield(ctx: SuperContext, rng, parity="even", density=0.3):
    size = layout(ctx.order).size
    terms = {}
    for m in range(1 << ctx.alg.n_gen):
        if (bin(m).count("1") % 2) != (parity == "odd"):
            continue
        if rng.random() < density:
            terms[m] = rng.normal(size=size) + 1j * rng.normal(size=size)
    return Superfield(GrassmannElement.build(ctx.alg, terms), parity)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def alg4():
    return GrassmannAlgebra(4)


ACCEPTANCE_LINES: list = []


@pytest.fixture
def accept():
    """Record one ``[PASS]/[FAIL] criterion: detail`` line for the summary."""

    def record(tag: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
