from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

from fspt.group import cyclic_group, direct_product, symmetric_group

TESTS = Path(__file__).resolve().parent
GOLDEN = TESTS / "golden"
SCHEMAS = TESTS.parent / "src" / "fspt" / "schemas"

sys.path.insert(0, str(TESTS))

Z1 = cyclic_group(1)
Z2 = cyclic_group(2)
Z3 = cyclic_group(3)
Z4 = cyclic_group(4)
Z2Z2 = direct_product(Z2, Z2)
S3 = symmetric_group(3)

SWEEP_GROUPS = {"Z3": Z3, "Z4": Z4, "Z2xZ2": Z2Z2, "S3": S3}


@pytest.fixture
def write_json(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return path
    return write


def random_step(p, rng):
    """A random witness ``(m, sigma)`` and new ``b``, applied to the pentad ``p``."""
    from fspt.cochain import Z2 as RZ2
    from fspt.cochain import TwistedCochain, mu
    from fspt.pentad import EquivalenceWitness, apply_equivalence

    m = TwistedCochain.random(p.group, 1, RZ2, rng)
    sigma = TwistedCochain.random(p.group, 2, mu(p.n), rng)
    b2 = TwistedCochain.random(p.group, 1, RZ2, rng)
    return apply_equivalence(p, m, sigma, b2), EquivalenceWitness(m, sigma)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
