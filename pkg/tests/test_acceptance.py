"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line in the summary."""

from __future__ import annotations

import pytest

from minmax_consensus import suites
from minmax_consensus.suites import MASTER_SEED


@pytest.fixture(scope="module")
def delay_cases():
    return suites.bounded_delay_cases(seed=MASTER_SEED + 4)


def check(result, record_acceptance):
    record_acceptance(result.line())
    print(result.line())
    assert result.passed, result.detail


def test_criterion_01_graph_calculus(record_acceptance):
    r = suites.graph_calculus(seed=MASTER_SEED)
    check(r, record_acceptance)
    assert r.seconds < 5.0


def test_criterion_02_implementation_equivalence(record_acceptance):
    check(suites.implementation_equivalence(seed=MASTER_SEED + 2), record_acceptance)


def test_criterion_03_age_semantics(record_acceptance):
    check(suites.age_semantics(seed=MASTER_SEED + 3), record_acceptance)


def test_criterion_04_stabilization(delay_cases, record_acceptance):
    check(suites.stabilization_to_m_star(delay_cases), record_acceptance)


def test_criterion_05_convergence_bound(record_acceptance):
    check(suites.convergence_bound(seed=MASTER_SEED + 5), record_acceptance)


def test_criterion_06_adversarial_oscillation(record_acceptance):
    check(suites.adversarial_oscillation(), record_acceptance)


def test_criterion_07_empty_kernel(record_acceptance):
    check(suites.empty_kernel_demo(), record_acceptance)


def test_criterion_08_kernel_holds_m_star(record_acceptance):
    check(suites.kernel_holds_m_star(seed=MASTER_SEED + 8), record_acceptance)


def test_criterion_09_bounded_reach(delay_cases, record_acceptance):
    check(suites.bounded_reach(delay_cases), record_acceptance)


def test_criterion_10_determinism(record_acceptance):
    check(suites.determinism(seed=MASTER_SEED + 10), record_acceptance)
