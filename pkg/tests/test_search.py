from itertools import product

import pytest
from pydantic import ValidationError

from src.config import Settings
from src.errors import CapabilityError, DomainError
from src.services.analysis import lambda_B
from src.services.complementary import is_companion_pair
from src.services.reference_data import get_reference_data
from src.services.search import (
    SearchConfig,
    SearchMode,
    SearchService,
    case1_lift,
    case2_lift,
    verify_pair,
)
from src.utils.seqcore import Alphabet, MeritKind, merits
from src.utils.seqio import parse_seq


@pytest.fixture
def service():
    return SearchService(exhaustive_cap=2 ** 20, max_reported_pairs=50)


def _minimum_rows(low: int, high: int):
    return [row for row in get_reference_data().minimum_pairs() if low <= row.m <= high]


@pytest.mark.parametrize("row", _minimum_rows(2, 12), ids=lambda r: f"m{r.m}")
def test_minimum_constraints_small(service, row) -> None:
    for kind, expected in ((MeritKind.LAMBDA_A, row.lambda_A_min), (MeritKind.S_A, row.S_A_min)):
        if expected is None:
            continue
        found = service.min_constraint_search(Alphabet.BINARY, row.m, kind)
        assert found.minimum == expected
        assert found.examined == 2 ** row.m
        for pair in found.witnesses:
            assert max(pair.merits0.value(kind), pair.merits1.value(kind)) == expected
            assert is_companion_pair(pair.c0, pair.c1) is not None


@pytest.mark.slow
@pytest.mark.parametrize("row", _minimum_rows(14, 18), ids=lambda r: f"m{r.m}")
def test_minimum_constraints_large(service, row) -> None:
    for kind, expected in ((MeritKind.LAMBDA_A, row.lambda_A_min), (MeritKind.S_A, row.S_A_min)):
        if expected is not None:
            assert service.min_constraint_search(Alphabet.BINARY, row.m, kind, jobs=2).minimum == expected


def test_minimum_is_unchanged_by_worker_count(service) -> None:
    one = service.min_constraint_search(Alphabet.BINARY, 8, MeritKind.S_A, jobs=1)
    two = service.min_constraint_search(Alphabet.BINARY, 8, MeritKind.S_A, jobs=2)
    assert one.minimum == two.minimum
    assert one.count == two.count
    assert [(p.c0, p.c1) for p in one.witnesses] == [(p.c0, p.c1) for p in two.witnesses]


def test_quad_minimum(service) -> None:
    found = service.min_constraint_search(Alphabet.QUAD, 4, MeritKind.LAMBDA_A)
    assert found.minimum == 1
    assert found.witnesses[0].c0.alphabet is Alphabet.QUAD


def test_exhaustive_search_respects_bound(service) -> None:
    # lag m of u || u is the energy, so t = 1 needs a bound of at least m
    cfg = SearchConfig(m=6, t=1, merit=MeritKind.LAMBDA_A, bound=6)
    result = service.exhaustive_search(cfg)
    assert result.examined == 64
    assert result.count == 148
    assert result.truncated
    assert len(result.pairs) == min(result.count, 50)
    for pair in result.pairs:
        assert verify_pair(pair.c0, pair.c1, 1, MeritKind.LAMBDA_A, 6)


def test_exhaustive_search_empty_under_tight_bound(service) -> None:
    # every binary companion of length 6 has a column with lambda_A >= 2
    result = service.exhaustive_search(SearchConfig(m=6, bound=1))
    assert result.count == 0
    assert result.pairs == ()


def test_exhaustive_search_minimize_dispatch(service) -> None:
    result = service.run(SearchConfig(m=4, merit=MeritKind.S_A))
    assert result.minimum == 2
    assert result.pairs


def test_truncated_reporting() -> None:
    small = SearchService(exhaustive_cap=2 ** 20, max_reported_pairs=1)
    result = small.exhaustive_search(SearchConfig(m=4, bound=3))
    assert result.count > 1
    assert len(result.pairs) == 1
    assert result.truncated


def test_capability_limits() -> None:
    capped = SearchService(exhaustive_cap=100)
    with pytest.raises(CapabilityError) as info:
        capped.min_constraint_search(Alphabet.BINARY, 8)
    assert info.value.cap == 100
    with pytest.raises(CapabilityError):
        SearchService().min_constraint_search(Alphabet.BINARY, 8, budget=10)
    with pytest.raises(DomainError):
        SearchService().min_constraint_search(Alphabet.BINARY, 5)


def test_search_config_validation() -> None:
    with pytest.raises(ValidationError):
        SearchConfig(m=5)
    with pytest.raises(ValidationError):
        SearchConfig(m=4, t=-1)
    with pytest.raises(ValidationError):
        SearchConfig(m=4, chains=0)
    with pytest.raises(ValidationError):
        SearchConfig(m=4, mode=SearchMode.ANNEAL, alphabet=Alphabet.QUAD)
    with pytest.raises(ValidationError):
        SearchConfig(m=4, alphabet=Alphabet.GAUSS)
    assert SearchConfig(m=4).minimize
    assert not SearchConfig(m=4, bound=2).minimize


def test_anneal_is_deterministic(service) -> None:
    first = service.anneal_pair(6, budget=3000, rng_seed=11)
    second = service.anneal_pair(6, budget=3000, rng_seed=11)
    assert (first.s0, first.s1, first.lambda_B) == (second.s0, second.s1, second.lambda_B)
    assert first.evaluations == 3000
    assert first.lambda_B == lambda_B(first.s0, first.s1)
    assert first.history[0][0] == 0


def test_anneal_chains_pick_lowest_cost(service) -> None:
    best = service.anneal_pair(5, budget=500, rng_seed=4, chains=3)
    assert best.chain in (0, 1, 2)
    assert best.lambda_B == lambda_B(best.s0, best.s1)
    assert len(best.s0) == len(best.s1) == 5


def test_anneal_reaches_exhaustive_minimum_at_half_len_two(service) -> None:
    pairs = [(parse_seq("".join(a)), parse_seq("".join(b)))
             for a in product("+-", repeat=2) for b in product("+-", repeat=2)]
    minimum = min(lambda_B(s0, s1) for s0, s1 in pairs)
    assert service.anneal_pair(2, budget=2000, rng_seed=5).lambda_B == minimum


def test_anneal_stagnation_per_evaluation(service) -> None:
    result = service.anneal_pair(6, budget=3000, rng_seed=11, stagnation_unit="evaluation")
    assert result.evaluations == 3000
    assert result.restarts >= 1
    assert result.lambda_B == lambda_B(result.s0, result.s1)
    with pytest.raises(DomainError):
        service.anneal_pair(6, budget=100, stagnation_unit="lap")


def test_settings_reject_unknown_stagnation_unit() -> None:
    with pytest.raises(ValidationError):
        Settings(anneal_stagnation_unit="lap")
    assert Settings(anneal_stagnation_unit=" evaluation ").anneal_stagnation_unit == "evaluation"


@pytest.mark.slow
def test_anneal_half_len_63_reaches_22(service) -> None:
    reached = [service.anneal_pair(63, rng_seed=seed).lambda_B <= 22 for seed in range(10)]
    assert sum(reached) >= 8


def test_anneal_rejects_bad_arguments(service) -> None:
    with pytest.raises(DomainError):
        service.anneal_pair(1)
    with pytest.raises(DomainError):
        service.anneal_pair(4, alphabet=Alphabet.QUAD)


def test_anneal_run_lifts_result(service) -> None:
    cfg = SearchConfig(m=12, mode=SearchMode.ANNEAL, max_evaluations=1000, rng_seed=7)
    result = service.run(cfg)
    (pair,) = result.pairs
    assert len(pair.c0) == 12
    assert result.anneal is not None
    assert result.examined == 1000
    assert is_companion_pair(pair.c0, pair.c1) is not None
    assert max(pair.merits0.lambda_A, pair.merits1.lambda_A) <= result.anneal.lambda_B


def test_lifts_are_companions() -> None:
    s0, s1 = parse_seq("++-"), parse_seq("+ j -j")
    for lift in (case1_lift, case2_lift):
        pair = lift(s0, s1)
        assert pair.m == 6
        assert is_companion_pair(pair.c0, pair.c1) is not None
    assert case1_lift(s0, s1).c0.elems == parse_seq("+ + + j - -j").elems
    assert case2_lift(s0, s1).c1.elems == parse_seq("+ -j j - - +").elems
    with pytest.raises(DomainError):
        case1_lift(parse_seq("++"), parse_seq("+"))


def test_verify_pair() -> None:
    c0, c1 = parse_seq("---+"), parse_seq("-+++")
    assert verify_pair(c0, c1, 0, MeritKind.LAMBDA_A, 1)
    assert not verify_pair(c0, c1, 1, MeritKind.LAMBDA_A, 1)
    assert verify_pair(c0, c1, 0, MeritKind.LAMBDA_A, None)
    assert not verify_pair(c0, c0, 0, MeritKind.LAMBDA_A, None)
    assert merits(c0).lambda_A == 1
