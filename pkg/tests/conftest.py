"""Shared fixtures and the acceptance report hook.

Acceptance tests record one line per criterion through the `acceptance`
fixture; the lines are replayed in the terminal summary so a plain
`pytest -v` run ends with a visible pass/fail ledger.
"""

import numpy as np
import pytest

from musical.psf import PsfModel
from musical.simulate import DetectorSpec, Photokinetics, simulate_stack

_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def acceptance():
    def record(number: int, name: str, passed: bool, detail: str) -> None:
        verdict = "PASS" if passed else "FAIL"
        _ACCEPTANCE[number] = f"criterion {number:2d} {name}: {verdict} [{detail}]"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])


@pytest.fixture(scope="session")
def small_stack():
    """Small crossing-lines stack for engine unit tests (16x16x40)."""
    detector = DetectorSpec(width=16, height=16, frames=40)
    kinetics = Photokinetics.from_duty(0.05)
    stack, _, _ = simulate_stack(
        "lines",
        detector,
        kinetics,
        PsfModel(),
        seed=11,
        scene_params={"length_nm": 1000.0, "density_per_um": 300.0},
    )
    return stack


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260822)
