import math
from fractions import Fraction

import pytest

from src.errors import DomainError
from src.services.analysis import (
    bound_report,
    case1_decomposition_check,
    case2_decomposition_check,
    case_bounds,
    column_report,
    existence_thresholds,
    lambda_B,
    lambda_min_threshold,
    necessary_lambda_A,
    recursive_column_acf,
    recursive_column_report,
    sufficient_lambda_A,
    sufficient_S_A,
    theorem_sufficient_pair,
    welch_bounds,
)
from src.services.construct import BuildRecipe, ExtensionMode, build, golay_seed
from src.services.reference_data import get_reference_data
from src.services.search import case1_lift, case2_lift
from src.utils.seqcore import Alphabet, aperiodic_acf, merits, periodic_acf
from src.utils.seqio import parse_seq

from .conftest import random_seq

SMALL_RECIPES = [
    BuildRecipe.uniform(0, 0),
    BuildRecipe.uniform(1, 1),
    BuildRecipe.uniform(0, 2),
    BuildRecipe.uniform(1, 2, ExtensionMode.INTERLEAVE, ExtensionMode.INTERLEAVE),
    BuildRecipe((ExtensionMode.INTERLEAVE,), (ExtensionMode.CONCAT, ExtensionMode.INTERLEAVE)),
]


def _seed_pairs(quad_pair, ternary_pair):
    h00, _, h10, _ = golay_seed(1)
    return [quad_pair, ternary_pair, (h00, h10), (parse_seq("-+----++"), parse_seq("+++--+-+"))]


def test_existence_thresholds_match_reference_table() -> None:
    for row in get_reference_data().thresholds():
        assert existence_thresholds(row.m).lambda_W_A == row.lambda_W
        assert row.lambda_B <= row.prior_lambda_B


def test_existence_thresholds_small_m() -> None:
    t = existence_thresholds(4)
    assert t.lambda_A_lower == pytest.approx(4 / math.sqrt(5))
    assert (t.lambda_W_A, t.lambda_W_P) == (2, 3)
    assert existence_thresholds(62).lambda_W_A == 6
    with pytest.raises(DomainError):
        existence_thresholds(5)
    with pytest.raises(DomainError):
        existence_thresholds(2)


def test_closed_form_bounds() -> None:
    assert sufficient_S_A(1, 2, 4) == 12
    assert sufficient_S_A(0, 3, 8) == 3
    assert sufficient_lambda_A(1, 1, 4) == 4
    assert sufficient_lambda_A(2, 2, 4) == 14
    assert necessary_lambda_A(2, 4) == 12
    assert lambda_min_threshold(1, 4) == Fraction(4, 3)
    assert sufficient_S_A(1, Fraction(1, 2), 4) == 6
    with pytest.raises(DomainError):
        necessary_lambda_A(-1, 4)


def test_welch_bounds() -> None:
    a, p = welch_bounds(2, 2)
    assert a == pytest.approx(2 / math.sqrt(5))
    assert p == pytest.approx(2 / math.sqrt(3))
    with pytest.raises(DomainError):
        welch_bounds(4, 1)


def test_bound_report() -> None:
    report = bound_report(4, t=1, lambda0=1, S0=2)
    assert report.E == 4
    assert report.sufficient_S_A == 12
    assert report.sufficient_lambda_A == 4
    assert report.necessary_lambda_A == 4
    assert report.lambda_min_t == 4
    assert report.lambda_W_A == 2
    assert report.welch_A == pytest.approx(4 / math.sqrt(5))
    as_dict = report.to_dict()
    assert as_dict["threshold_lambda0"] == pytest.approx(4 / 3)
    assert as_dict["lambda_B_A"] is None

    assert bound_report(4, t=1, lambda0=2).lambda_min_t is None
    assert bound_report(2).lambda_W_A is None
    with pytest.raises(DomainError):
        bound_report(3)


def test_bound_report_with_half_pair() -> None:
    s0, s1 = parse_seq("++-"), parse_seq("+-+")
    report = bound_report(6, s0=s0, s1=s1)
    assert report.lambda_B_A == lambda_B(s0, s1)


def test_column_report_of_size_extended_quad_build(quad_pair) -> None:
    report = column_report(build(*quad_pair, BuildRecipe.uniform(1, 1)))
    assert report.lambda_A_u == 4
    assert report.S_A_u == 12
    assert len(report.merits) == BuildRecipe.uniform(1, 1).dims(4)["columns"]


def test_ternary_build_zero_counts(ternary_pair) -> None:
    report = column_report(build(*ternary_pair, BuildRecipe.uniform(2, 0)))
    assert set(report.zero_counts) == {1}
    assert report.S_A_u <= 5


@pytest.mark.parametrize("recipe", SMALL_RECIPES, ids=lambda r: "-".join(m.value for m in r.length_modes + r.size_modes) or "base")
def test_recursion_matches_direct_acf(quad_pair, ternary_pair, recipe) -> None:
    for c0, c1 in _seed_pairs(quad_pair, ternary_pair):
        columns = build(c0, c1, recipe).columns()
        aperiodic = recursive_column_acf(c0, c1, recipe)
        periodic = recursive_column_acf(c0, c1, recipe, periodic=True)
        assert len(aperiodic) == len(columns)
        for col, a, p in zip(columns, aperiodic, periodic):
            assert a.values == aperiodic_acf(col).values
            assert p.values == periodic_acf(col).values


@pytest.mark.parametrize("recipe", SMALL_RECIPES[1:3])
def test_recursive_report_matches_column_report(quad_pair, ternary_pair, recipe) -> None:
    for c0, c1 in _seed_pairs(quad_pair, ternary_pair):
        direct = column_report(build(c0, c1, recipe))
        recursive = recursive_column_report(c0, c1, recipe)
        assert recursive.merits == direct.merits
        assert recursive.zero_counts == direct.zero_counts


def test_recursion_matches_direct_acf_on_random_companions(companion_corpus) -> None:
    for c0, c1, recipe in companion_corpus:
        columns = build(c0, c1, recipe).columns()
        direct = {}
        for col in columns:
            if col.elems not in direct:
                direct[col.elems] = (aperiodic_acf(col).values, periodic_acf(col).values)
        aperiodic = recursive_column_acf(c0, c1, recipe)
        periodic = recursive_column_acf(c0, c1, recipe, periodic=True)
        assert len(aperiodic) == len(columns)
        for col, a, p in zip(columns, aperiodic, periodic):
            assert (a.values, p.values) == direct[col.elems]


def test_recursive_zero_counts_on_random_companions(companion_corpus) -> None:
    for c0, c1, recipe in companion_corpus:
        zeros = recursive_column_report(c0, c1, recipe).zero_counts
        assert zeros == column_report(build(c0, c1, recipe)).zero_counts
        assert set(zeros) == {2 ** recipe.t * c0.zeros()}


@pytest.mark.parametrize("recipe", [
    BuildRecipe.uniform(0, 1),
    BuildRecipe.uniform(0, 2, size_mode=ExtensionMode.INTERLEAVE),
])
def test_recursive_zero_counts_follow_each_column(recipe) -> None:
    # c0 and c1 carry different zeros, so the columns do too
    c0, c1 = parse_seq("0 0 + +"), parse_seq("+ + + -")
    report = recursive_column_report(c0, c1, recipe)
    assert report.zero_counts == column_report(build(c0, c1, recipe)).zero_counts
    assert set(report.zero_counts) == {0, 2 ** recipe.t * 2}


def test_column_bounds_on_random_companions(companion_corpus) -> None:
    for c0, c1, recipe in companion_corpus:
        t, E = recipe.t, c0.energy()
        base0, base1 = merits(c0), merits(c1)
        lambda0_sq = max(base0.lambda_A_sq, base1.lambda_A_sq)
        S0 = max(base0.S_A, base1.S_A)
        report = recursive_column_report(c0, c1, recipe)
        top_sq = max(r.lambda_A_sq for r in report.merits)
        floor = (2 ** t - 1) * E
        assert floor ** 2 <= top_sq <= max(floor ** 2, (2 ** (t + 1) - 1) ** 2 * lambda0_sq)
        assert report.lambda_A_u <= sufficient_lambda_A(t, max(base0.lambda_A, base1.lambda_A), E) + 1e-9
        assert report.lambda_A_u >= necessary_lambda_A(t, E) - 1e-9
        assert report.S_A_u <= sufficient_S_A(t, S0, E) + 1e-9
        if t == 0:
            assert top_sq == lambda0_sq
        elif (2 ** (t + 1) - 1) ** 2 * lambda0_sq <= floor ** 2:
            assert top_sq == floor ** 2


@pytest.mark.parametrize("recipe", [
    BuildRecipe.uniform(0, 1),
    BuildRecipe.uniform(1, 1),
    BuildRecipe.uniform(0, 2, size_mode=ExtensionMode.INTERLEAVE),
])
def test_ternary_zero_counts_double_per_size_step(ternary_pair, recipe) -> None:
    report = column_report(build(*ternary_pair, recipe))
    assert set(report.zero_counts) == {2 ** recipe.t}


def test_recursion_rejects_non_companion() -> None:
    with pytest.raises(DomainError):
        recursive_column_acf(parse_seq("++"), parse_seq("++"), BuildRecipe())


def test_decomposition_checks_hold(rng) -> None:
    for alphabet in (Alphabet.BINARY, Alphabet.QUAD):
        for n in (1, 4, 5):
            s0, s1 = random_seq(rng, alphabet, n), random_seq(rng, alphabet, n)
            first = case1_decomposition_check(s0, s1)
            assert first.holds and first.failure is None
            assert first.checked == 8 * n
            second = case2_decomposition_check(s0, s1)
            assert second and second.checked == 4 * n


def test_case_bounds_cover_lifted_pairs(rng) -> None:
    for k in range(500):
        alphabet = (Alphabet.BINARY, Alphabet.QUAD)[k % 2]
        n = int(rng.integers(1, 9))
        s0, s1 = random_seq(rng, alphabet, n), random_seq(rng, alphabet, n)
        bounds = case_bounds(s0, s1)
        for c in (case1_lift(s0, s1).c0, case1_lift(s0, s1).c1):
            report = merits(c)
            assert report.lambda_A <= bounds.case1_lambda_A + 1e-9
            assert report.lambda_P <= bounds.case1_lambda_P + 1e-9
            assert report.S_A <= bounds.case1_S_A + 1e-9
            assert report.S_P <= bounds.case1_S_P + 1e-9
        for c in (case2_lift(s0, s1).c0, case2_lift(s0, s1).c1):
            assert merits(c).lambda_A <= bounds.case2_lambda_A + 1e-9
        assert bounds.case1_lambda_A == lambda_B(s0, s1)


def test_sufficient_pair_condition() -> None:
    s0, s1 = parse_seq("++"), parse_seq("+-")
    # auto merits 1, cross merit 1
    assert theorem_sufficient_pair(s0, s1, 2)
    assert not theorem_sufficient_pair(s0, s1, 1)


def test_reference_annealed_pairs_meet_their_bounds() -> None:
    for row in get_reference_data().annealed_pairs():
        assert lambda_B(row.s0, row.s1) == row.lambda_B
        lifted = case1_lift(row.s0, row.s1)
        assert max(merits(lifted.c0).lambda_A, merits(lifted.c1).lambda_A) == row.lambda_u
