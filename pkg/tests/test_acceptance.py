"""Acceptance gate: every numbered criterion at its stated tolerance.

Each test runs one criterion with its production instance counts and
prints the one-line verdict; run with -s to see the lines as they pass.
"""
from cpnkit.acceptance import (criterion_1_dilation, criterion_2_gram,
                               criterion_3_round_trip, criterion_4_order,
                               criterion_5_contraction, criterion_6_purity,
                               criterion_7_disjointness,
                               criterion_8_extremality,
                               criterion_9_direct_sum, criterion_10_tower)

SEED = 0
TOL = 1e-9


def finish(result):
    print(result.line())
    assert result.passed, result.details


def test_criterion_1_dilation_factorization():
    finish(criterion_1_dilation(SEED, 200, TOL))


def test_criterion_2_gram_oracle():
    finish(criterion_2_gram(SEED, 50, TOL))


def test_criterion_3_radon_nikodym_round_trip():
    finish(criterion_3_round_trip(SEED, 200, TOL))


def test_criterion_4_order_isomorphism():
    finish(criterion_4_order(SEED, 1000, TOL))


def test_criterion_5_contraction_certificates():
    finish(criterion_5_contraction(SEED, 50, TOL))


def test_criterion_6_purity_and_commutants():
    finish(criterion_6_purity(SEED, 30, TOL))


def test_criterion_7_disjointness_witnesses():
    finish(criterion_7_disjointness(SEED, 10, TOL))


def test_criterion_8_extremality():
    finish(criterion_8_extremality(SEED, TOL))


def test_criterion_9_diagonal_direct_sum():
    finish(criterion_9_direct_sum(SEED, TOL))


def test_criterion_10_tower_model():
    finish(criterion_10_tower(SEED, 100, TOL))
