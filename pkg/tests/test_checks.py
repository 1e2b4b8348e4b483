"""
Tests for the reference check suite.
"""

import math

import numpy as np

from qmc.checks import (
    P0_BLOCK_REFERENCE,
    P1_BLOCK,
    R_EXACT,
    Check,
    min_block_eigenvalue,
    qutrit_blocks,
    reference_suite,
)


def test_reference_suite_passes():
    suite = reference_suite()
    failed = [c for c in suite.checks if not c.passed]
    assert suite.verify(), failed
    names = [c.name for c in suite.checks]
    assert "n0" in names and "r" in names
    assert len(names) == len(set(names)), "check names are unique"


def test_closed_form_constants():
    assert math.isclose(R_EXACT, 0.01444, abs_tol=1e-5)
    assert math.isclose(np.linalg.eigvalsh(P1_BLOCK)[0], R_EXACT, rel_tol=1e-12)


def test_qutrit_zero_block_sign(qutrit_certificate):
    """The computed (2,3) entry of the H₀ block is 56 + 147√2 over 1008"""
    p0 = qutrit_blocks(qutrit_certificate)[0]
    assert math.isclose(p0[1, 2].real * 1008, 56 + 147 * math.sqrt(2), abs_tol=1e-7)
    assert math.isclose(P0_BLOCK_REFERENCE[1, 2] * 1008, 56 - 147 * math.sqrt(2))
    assert np.allclose(p0, p0.conj().T, atol=1e-12)


def test_block_minimum_is_certificate_constant(qutrit_certificate):
    blocks = qutrit_blocks(qutrit_certificate)
    assert set(blocks) == {0, 1, -1, 2, -2}
    assert math.isclose(min_block_eigenvalue(blocks), qutrit_certificate.r, abs_tol=1e-12)


def test_check_constructors():
    assert Check.close("x", 1.0, 1.0 + 1e-13, 1e-12).passed
    assert not Check.at_most("y", 1e-9, 1e-8).passed
    assert Check.equal("z", 16, 16).computed == "16"
    assert Check.holds("w", "claim", False).computed == "violated"
