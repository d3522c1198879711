import math

import pytest

from src.errors import DomainError
from src.utils.seqcore import (
    ONE,
    ZERO,
    Alphabet,
    CorrelationKind,
    Element,
    MeritKind,
    Seq,
    aperiodic_acf,
    aperiodic_ccf,
    concat,
    conjugate,
    cross_merits,
    f_c,
    f_i,
    hermitian_inner_product,
    infer_alphabet,
    inner_product,
    interleave,
    merits,
    negate,
    periodic_acf,
    periodic_ccf,
    periodic_from_aperiodic,
    repeat_signed,
    reverse,
)
from src.utils.seqio import parse_seq

from .conftest import random_seq

BARKER_13 = "+++++--++-+-+"


def test_element_arithmetic_is_exact() -> None:
    a, b = Element(1, 2), Element(3, -1)
    assert a * b == Element(5, 5)
    assert a.conj() == Element(1, -2)
    assert a.norm() == 5
    assert -a + a == ZERO


def test_element_coerce_rejects_non_integers() -> None:
    assert Element.coerce(1j) == Element(0, 1)
    assert Element.coerce((2, -3)) == Element(2, -3)
    with pytest.raises(DomainError):
        Element.coerce(0.5)
    with pytest.raises(DomainError):
        Element.coerce(True)


def test_seq_rejects_empty_and_out_of_alphabet() -> None:
    with pytest.raises(DomainError):
        Seq((), Alphabet.BINARY)
    with pytest.raises(DomainError) as info:
        Seq.of([1, 0, 1], Alphabet.BINARY)
    assert info.value.index == 1


def test_alphabet_inference_and_join() -> None:
    assert infer_alphabet(parse_seq("+-+").elems) is Alphabet.BINARY
    assert infer_alphabet(parse_seq("+0-").elems) is Alphabet.TERNARY
    assert infer_alphabet(parse_seq("+ j -j").elems) is Alphabet.QUAD
    assert infer_alphabet(parse_seq("2 +").elems) is Alphabet.GAUSS
    assert Alphabet.BINARY.join(Alphabet.TERNARY) is Alphabet.TERNARY
    assert Alphabet.TERNARY.join(Alphabet.QUAD) is Alphabet.GAUSS


def test_barker_13_merits() -> None:
    report = merits(parse_seq(BARKER_13))
    assert report.lambda_A == 1
    assert report.S_A == 6
    assert report.value(MeritKind.LAMBDA_A) == 1


def test_aperiodic_acf_of_complex_sequence() -> None:
    a = Seq.of([1, 1, 1j])
    acf = aperiodic_acf(a)
    assert acf.kind is CorrelationKind.APERIODIC_AUTO
    assert acf.at(0) == Element(3, 0)
    assert acf.at(1) == Element(1, -1)
    assert acf.at(2) == Element(0, -1)
    assert acf.at(5) == ZERO


def test_merits_keep_irrational_maxima_exact_squared() -> None:
    report = merits(Seq.of([1, 1, 1j]))
    assert report.lambda_A_sq == 2
    assert report.lambda_A == pytest.approx(math.sqrt(2))
    assert report.S_A == pytest.approx(1 + math.sqrt(2))


def test_integer_merits_stay_integers() -> None:
    report = merits(parse_seq("+++-"))
    assert isinstance(report.lambda_A, int)
    assert isinstance(report.S_A, int)


def test_periodic_acf_matches_aperiodic_fold(rng) -> None:
    for alphabet in (Alphabet.BINARY, Alphabet.TERNARY, Alphabet.QUAD):
        for n in (1, 2, 5, 8):
            a = random_seq(rng, alphabet, n)
            assert periodic_from_aperiodic(aperiodic_acf(a)).values == periodic_acf(a).values


def test_periodic_profile_wraps() -> None:
    p = periodic_acf(parse_seq("++-"))
    assert p.at(4) == p.at(1)
    assert p.at(-1) == p.at(2)


def test_aperiodic_ccf_lag_range_and_symmetry(rng) -> None:
    a, b = random_seq(rng, Alphabet.QUAD, 6), random_seq(rng, Alphabet.QUAD, 6)
    ab, ba = aperiodic_ccf(a, b), aperiodic_ccf(b, a)
    assert ab.lag_range == (-5, 5)
    for l in ab.lags():
        assert ab.at(l) == ba.at(-l).conj()
    assert aperiodic_ccf(a, a).values[5:] == aperiodic_acf(a).values


def test_periodic_ccf_is_circular(rng) -> None:
    a, b = random_seq(rng, Alphabet.BINARY, 7), random_seq(rng, Alphabet.BINARY, 7)
    p = periodic_ccf(a, b)
    for l in range(7):
        expected = sum(a[i].re * b[(i + l) % 7].re for i in range(7))
        assert p.at(l) == Element(expected, 0)


def test_ccf_length_mismatch() -> None:
    with pytest.raises(DomainError):
        aperiodic_ccf(parse_seq("++"), parse_seq("+++"))


def test_cross_merits_include_lag_zero() -> None:
    a, b = parse_seq("++"), parse_seq("++")
    report = cross_merits(a, b)
    assert report.cross
    assert report.lambda_A == 2


def test_sequence_operations() -> None:
    a = parse_seq("+ j - 0")
    assert reverse(a).elems == parse_seq("0 - j +").elems
    assert negate(a).elems == parse_seq("- -j + 0").elems
    assert conjugate(a).elems == parse_seq("+ -j - 0").elems
    assert concat(a, a).elems == a.elems * 2
    assert interleave(parse_seq("++"), parse_seq("--")).elems == parse_seq("+-+-").elems
    assert repeat_signed(parse_seq("+-"), -1).elems == parse_seq("+--+").elems


def test_f_i_and_f_c() -> None:
    a = parse_seq("+--+++0+")
    assert f_i(a).elems == parse_seq("--+++-+0").elems
    assert f_c(parse_seq("++-+")).elems == parse_seq("-+--").elems
    with pytest.raises(DomainError):
        f_i(parse_seq("+-+"))


def test_acf_under_negate_conjugate_reverse(rng) -> None:
    for n in range(1, 10):
        for alphabet in (Alphabet.TERNARY, Alphabet.QUAD):
            a = random_seq(rng, alphabet, n)
            values = aperiodic_acf(a).values
            conjugated = tuple(v.conj() for v in values)
            assert aperiodic_acf(negate(a)).values == values
            assert aperiodic_acf(conjugate(a)).values == conjugated
            assert aperiodic_acf(reverse(a)).values == conjugated
            assert aperiodic_acf(conjugate(reverse(a))).values == values


def test_involutions(rng) -> None:
    for n in (2, 4, 6, 8):
        a = random_seq(rng, Alphabet.QUAD, n)
        assert f_c(f_c(a)).elems == negate(a).elems
        assert reverse(reverse(a)).elems == a.elems
        assert negate(negate(a)).elems == a.elems


def test_inner_products() -> None:
    a, b = parse_seq("+ j"), parse_seq("j +")
    assert inner_product(a, b) == Element(0, 2)
    assert hermitian_inner_product(a, b) == ZERO
    assert hermitian_inner_product(a, a) == Element(2, 0)
    assert inner_product(parse_seq("+"), parse_seq("+")) == ONE
