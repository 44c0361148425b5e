"""Acceptance gate: one test per criterion, at the pinned tolerances.

Each test prints its own pass/fail line (run with -s or see captured
output); the same computations back `covprop validate`.
"""

import pytest

from covprop.checks import (
    check_characteristic_oracle,
    check_cn_unitary,
    check_conservation,
    check_eigensolver_oracle,
    check_exact_identities,
    check_kernels,
    check_loss_gain_localization,
    check_monotone_loss,
    check_polar_identity_diagonal,
    check_scheme_order,
    check_short_correlation_limit,
)

_CRITERIA = (
    ("01_cn_unitary", check_cn_unitary),
    ("02_polar_identity_diagonal", check_polar_identity_diagonal),
    ("03_exact_identities", check_exact_identities),
    ("04_characteristic_oracle", check_characteristic_oracle),
    ("05_conservation", check_conservation),
    ("06_scheme_order", check_scheme_order),
    ("07_short_correlation_limit", check_short_correlation_limit),
    ("08_monotone_loss", check_monotone_loss),
    ("09_kernels", check_kernels),
    ("10_eigensolver_oracle", check_eigensolver_oracle),
    ("11_loss_gain_localization", check_loss_gain_localization),
)


@pytest.mark.parametrize("label,check", _CRITERIA, ids=[c[0] for c in _CRITERIA])
def test_acceptance_criterion(label, check):
    result = check()
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] {result.name}: {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"
