"""Acceptance suite: every criterion at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one pass/fail
line per criterion; the same checks back ``meridian4 selfcheck``.
"""
from meridian4 import acceptance


def _run(criterion):
    result = criterion()
    print(result.line())
    detail = "; ".join(
        f"{c.name}={c.measured:.3e} ({c.kind} {c.bound:g})"
        for c in result.checks if not c.passed)
    assert result.passed, f"criterion {result.index} failed: {detail}"
    return result


def test_criterion_01_flat_normal_connection():
    _run(acceptance.criterion_1)


def test_criterion_02_gauss_two_routes():
    _run(acceptance.criterion_2)


def test_criterion_03_minimal_family():
    _run(acceptance.criterion_3)


def test_criterion_04_cmc_and_ode_order():
    _run(acceptance.criterion_4)


def test_criterion_05_parallel_mean_curvature():
    _run(acceptance.criterion_5)


def test_criterion_06_parallel_normalized_direction():
    _run(acceptance.criterion_6)


def test_criterion_07_geometric_functions():
    _run(acceptance.criterion_7)


def test_criterion_08_natural_pde_examples():
    _run(acceptance.criterion_8)


def test_criterion_09_frame_gram():
    _run(acceptance.criterion_9)


def test_criterion_10_profile_constraint():
    _run(acceptance.criterion_10)


def test_all_criteria_summary():
    results = acceptance.run_all()
    print()
    print(acceptance.format_table(results))
    assert all(r.passed for r in results)
