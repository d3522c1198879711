"""
Column-sequence analytics: merit aggregation, the column ACF recursion,
closed-form bounds and Welch existence thresholds.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..errors import DomainError
from ..utils.seqcore import (
    ZERO,
    CorrelationProfile,
    CorrelationKind,
    Element,
    MeritReport,
    Number,
    Seq,
    aperiodic_acf,
    aperiodic_ccf,
    conjugate,
    cross_merits,
    merits,
    merits_from_profiles,
    periodic_acf,
    periodic_ccf,
    periodic_from_aperiodic,
)
from .complementary import SeqMatrix, is_companion_pair
from .construct import BuildRecipe, ExtensionMode, MOMatrix, length_extend, mate_of

logger = logging.getLogger(__name__)

Exact = Union[int, Fraction, float]


def _exact(x) -> Exact:
    """Fractions with denominator 1 collapse to int; floats pass through."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _rational(x) -> Union[Fraction, float]:
    if isinstance(x, float):
        return x
    return Fraction(x)


def to_json_number(x: Optional[Exact]):
    if x is None:
        return None
    x = _exact(x)
    return float(x) if isinstance(x, Fraction) else x


# ---------------------------------------------------------------------------
# Column reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColumnReport:
    """Per-column merits and their maxima over the columns."""

    merits: Tuple[MeritReport, ...]
    zero_counts: Tuple[int, ...]

    @property
    def lambda_A_u(self) -> Number:
        return max(r.lambda_A for r in self.merits)

    @property
    def lambda_P_u(self) -> Number:
        return max(r.lambda_P for r in self.merits)

    @property
    def S_A_u(self) -> Number:
        return max(r.S_A for r in self.merits)

    @property
    def S_P_u(self) -> Number:
        return max(r.S_P for r in self.merits)

    def to_dict(self) -> dict:
        return {
            "columns": len(self.merits),
            "lambda_A_u": self.lambda_A_u,
            "lambda_P_u": self.lambda_P_u,
            "S_A_u": self.S_A_u,
            "S_P_u": self.S_P_u,
            "zero_counts": list(self.zero_counts),
            "per_column": [r.to_dict() for r in self.merits],
        }


def column_report(M: Union[SeqMatrix, MOMatrix]) -> ColumnReport:
    matrix = M.matrix if isinstance(M, MOMatrix) else M
    columns = matrix.columns()
    return ColumnReport(
        merits=tuple(merits(c) for c in columns),
        zero_counts=tuple(c.zeros() for c in columns),
    )


# ---------------------------------------------------------------------------
# Column ACF recursion
# ---------------------------------------------------------------------------

def _extend_acf(values: Tuple[Element, ...], sign: int) -> Tuple[Element, ...]:
    """ACF of u || sign*u from the ACF of u."""
    s = len(values)
    out = []
    for l in range(s):
        mirrored = values[s - l].conj() if l else ZERO
        term = values[l].scale(2)
        out.append(term + mirrored if sign > 0 else term - mirrored)
    for l in range(s):
        out.append(values[l] if sign > 0 else -values[l])
    return tuple(out)


def _size_step_sources(r: int, mode: ExtensionMode) -> List[Tuple[int, int]]:
    """(source column, sign) for each of the 4r columns after one size extension."""
    if mode is ExtensionMode.CONCAT:
        return [(j % r, -1 if (j // r) % 2 == 0 else 1) for j in range(4 * r)]
    return [((j % (2 * r)) // 2, -1 if j % 2 == 0 else 1) for j in range(4 * r)]


def _base_matrix(c0: Seq, c1: Seq, recipe: BuildRecipe) -> SeqMatrix:
    """The m x 2^(p+2) matrix [C D] before any size extension."""
    companion = is_companion_pair(c0, c1)
    if companion is None:
        raise DomainError("column recursion needs a companion pair")
    C = companion.matrix()
    for mode in recipe.length_modes:
        C = length_extend(C, mode, companion.pairing)
    return C.hstack(mate_of(C, companion.pairing))


def recursive_column_acf(
    c0: Seq,
    c1: Seq,
    recipe: BuildRecipe,
    periodic: bool = False,
) -> List[CorrelationProfile]:
    """
    Column ACFs of build(c0, c1, recipe) without materializing the size extensions.

    Each size extension turns column u into u || sign*u (up to an overall
    negation), whose ACF is 2A(l) + sign*conj(A(s-l)) for l < s and
    sign*A(l-s) above; A(s) counts as 0. Only the m x 2^(p+2) base matrix is
    built; distinct profiles are computed once.

    Args:
        c0, c1: Companion pair
        recipe: Length and size modes
        periodic: Return periodic ACFs derived from the aperiodic ones

    Returns:
        One profile per column, in wide-layout order
    """
    base = _base_matrix(c0, c1, recipe)

    cache: Dict[Tuple[Element, ...], int] = {}
    profiles: List[Tuple[Element, ...]] = []

    def intern(values: Tuple[Element, ...]) -> int:
        if values not in cache:
            cache[values] = len(profiles)
            profiles.append(values)
        return cache[values]

    column_ids = [intern(aperiodic_acf(col).values) for col in base.columns()]
    for mode in recipe.size_modes:
        derived: Dict[Tuple[int, int], int] = {}
        new_ids = []
        for src, sign in _size_step_sources(len(column_ids), ExtensionMode(mode)):
            key = (column_ids[src], sign)
            if key not in derived:
                derived[key] = intern(_extend_acf(profiles[column_ids[src]], sign))
            new_ids.append(derived[key])
        column_ids = new_ids
    logger.debug(f"Column recursion: {len(column_ids)} columns, {len(profiles)} distinct profiles")

    n = len(profiles[column_ids[0]])
    views = {}
    for pid in set(column_ids):
        acf = CorrelationProfile(profiles[pid], CorrelationKind.APERIODIC_AUTO, (0, n - 1))
        views[pid] = periodic_from_aperiodic(acf) if periodic else acf
    return [views[pid] for pid in column_ids]


def recursive_column_report(c0: Seq, c1: Seq, recipe: BuildRecipe) -> ColumnReport:
    """ColumnReport of build(c0, c1, recipe) computed through the recursion."""
    profiles = recursive_column_acf(c0, c1, recipe)
    reports: Dict[int, MeritReport] = {}
    for acf in profiles:
        if id(acf) not in reports:
            reports[id(acf)] = merits_from_profiles(acf)
    zeros = [col.zeros() for col in _base_matrix(c0, c1, recipe).columns()]
    for mode in recipe.size_modes:
        # u || sign*u doubles the zeros of its source column
        zeros = [2 * zeros[src] for src, _ in _size_step_sources(len(zeros), ExtensionMode(mode))]
    return ColumnReport(
        merits=tuple(reports[id(acf)] for acf in profiles),
        zero_counts=tuple(zeros),
    )


# ---------------------------------------------------------------------------
# Closed-form bounds
# ---------------------------------------------------------------------------

def _check_t(t: int) -> None:
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")


def sufficient_S_A(t: int, S0, E) -> Exact:
    """4^t * S0 + 2^(t-1) * (2^t - 1) * E."""
    _check_t(t)
    return _exact(4 ** t * _rational(S0) + Fraction(2 ** t, 2) * (2 ** t - 1) * _rational(E))


def sufficient_lambda_A(t: int, lambda0, E) -> Exact:
    """max{(2^t - 1) E, (2^(t+1) - 1) lambda0}."""
    _check_t(t)
    return _exact(max((2 ** t - 1) * _rational(E), (2 ** (t + 1) - 1) * _rational(lambda0)))


def necessary_lambda_A(t: int, E) -> Exact:
    _check_t(t)
    return _exact((2 ** t - 1) * _rational(E))


def lambda_min_threshold(t: int, E) -> Exact:
    """Largest lambda0 for which the column constraint (2^t - 1) E is attained."""
    _check_t(t)
    return _exact(Fraction(2 ** t - 1, 2 ** (t + 1) - 1) * _rational(E))


def welch_bounds(N: int, K: int) -> Tuple[float, float]:
    """(A_max, P_max) lower bounds for K sequences of length N and energy N."""
    if N < 1 or K < 2:
        raise DomainError(f"Welch bounds need N >= 1 and K >= 2, got N={N}, K={K}")
    a = N * math.sqrt((K - 1) / (2 * N * K - K - 1))
    p = N * math.sqrt((K - 1) / (N * K - 1))
    return a, p


def _ceil_ratio_sqrt(num: int, den: int) -> int:
    """Smallest integer x >= num / sqrt(den), i.e. x^2 * den >= num^2."""
    target = num * num
    x = math.isqrt(target // den)
    while x * x * den < target:
        x += 1
    while x > 0 and (x - 1) * (x - 1) * den >= target:
        x -= 1
    return x


@dataclass(frozen=True)
class ExistenceThresholds:
    m: int
    lambda_A_lower: float
    lambda_P_lower: float
    lambda_W_A: int
    lambda_W_P: int

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "lambda_A_lower": self.lambda_A_lower,
            "lambda_P_lower": self.lambda_P_lower,
            "lambda_W_A": self.lambda_W_A,
            "lambda_W_P": self.lambda_W_P,
        }


def existence_thresholds(m: int) -> ExistenceThresholds:
    """
    Column-constraint lower bounds m/sqrt(2m-3) and m/sqrt(m-1) for length-m companions.

    The ceilings are found with integer comparisons, never floating rounding.
    """
    if m < 4 or m % 2:
        raise DomainError(f"existence thresholds need an even m >= 4, got {m}")
    return ExistenceThresholds(
        m=m,
        lambda_A_lower=m / math.sqrt(2 * m - 3),
        lambda_P_lower=m / math.sqrt(m - 1),
        lambda_W_A=_ceil_ratio_sqrt(m, 2 * m - 3),
        lambda_W_P=_ceil_ratio_sqrt(m, m - 1),
    )


@dataclass(frozen=True)
class BoundReport:
    m: int
    t: int
    E: Exact
    necessary_lambda_A: Exact
    threshold_lambda0: Exact
    welch_A: float
    welch_P: float
    lambda_W_A: Optional[int]
    sufficient_S_A: Optional[Exact] = None
    sufficient_lambda_A: Optional[Exact] = None
    lambda_min_t: Optional[Exact] = None
    lambda_B_A: Optional[Number] = None

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "t": self.t,
            "E": to_json_number(self.E),
            "sufficient_S_A": to_json_number(self.sufficient_S_A),
            "sufficient_lambda_A": to_json_number(self.sufficient_lambda_A),
            "necessary_lambda_A": to_json_number(self.necessary_lambda_A),
            "lambda_min_t": to_json_number(self.lambda_min_t),
            "threshold_lambda0": to_json_number(self.threshold_lambda0),
            "welch_A": self.welch_A,
            "welch_P": self.welch_P,
            "lambda_W_A": self.lambda_W_A,
            "lambda_B_A": self.lambda_B_A,
        }


def bound_report(
    m: int,
    t: int = 0,
    E=None,
    lambda0=None,
    S0=None,
    s0: Optional[Seq] = None,
    s1: Optional[Seq] = None,
) -> BoundReport:
    """
    All closed-form bounds for one (m, t, E) setting.

    E defaults to m (unimodular columns). The Welch values use K = 2 sequences
    of length m/2, scaled to the column constraint.
    """
    if m < 2 or m % 2:
        raise DomainError(f"m must be even and at least 2, got {m}")
    E = m if E is None else E
    welch_A, welch_P = welch_bounds(m // 2, 2)
    lambda_min_t = None
    if lambda0 is not None and t >= 1 and _rational(lambda0) <= lambda_min_threshold(t, E):
        lambda_min_t = necessary_lambda_A(t, E)
    return BoundReport(
        m=m,
        t=t,
        E=_exact(_rational(E)),
        necessary_lambda_A=necessary_lambda_A(t, E),
        threshold_lambda0=lambda_min_threshold(t, E),
        welch_A=2 * welch_A,
        welch_P=2 * welch_P,
        lambda_W_A=existence_thresholds(m).lambda_W_A if m >= 4 else None,
        sufficient_S_A=sufficient_S_A(t, S0, E) if S0 is not None else None,
        sufficient_lambda_A=sufficient_lambda_A(t, lambda0, E) if lambda0 is not None else None,
        lambda_min_t=lambda_min_t,
        lambda_B_A=lambda_B(s0, s1) if s0 is not None and s1 is not None else None,
    )


# ---------------------------------------------------------------------------
# Half-length pairs
# ---------------------------------------------------------------------------

def lambda_B_from_merits(lambda_s0: Number, lambda_s1: Number, lambda_cross: Number) -> Number:
    """max{lambda_s0 + lambda_s1, 2 * lambda_cross}."""
    return max(lambda_s0 + lambda_s1, 2 * lambda_cross)


def _half_pair_merits(s0: Seq, s1: Seq) -> Tuple[MeritReport, MeritReport, MeritReport]:
    if len(s0) != len(s1):
        raise DomainError(f"half-length sequences differ: {len(s0)} != {len(s1)}")
    return merits(s0), merits(s1), cross_merits(s0, s1)


def lambda_B(s0: Seq, s1: Seq) -> Number:
    m0, m1, mx = _half_pair_merits(s0, s1)
    return lambda_B_from_merits(m0.lambda_A, m1.lambda_A, mx.lambda_A)


@dataclass(frozen=True)
class CaseBounds:
    """Upper bounds on the lifted pair's merits."""

    case1_lambda_A: Number
    case1_lambda_P: Number
    case1_S_A: Number
    case1_S_P: Number
    case2_lambda_A: Number

    def to_dict(self) -> dict:
        return {
            "case1": {
                "lambda_A": self.case1_lambda_A,
                "lambda_P": self.case1_lambda_P,
                "S_A": self.case1_S_A,
                "S_P": self.case1_S_P,
            },
            "case2": {"lambda_A": self.case2_lambda_A},
        }


def case_bounds(s0: Seq, s1: Seq) -> CaseBounds:
    m0, m1, mx = _half_pair_merits(s0, s1)
    return CaseBounds(
        case1_lambda_A=lambda_B_from_merits(m0.lambda_A, m1.lambda_A, mx.lambda_A),
        case1_lambda_P=lambda_B_from_merits(m0.lambda_P, m1.lambda_P, mx.lambda_P),
        case1_S_A=m0.S_A + m1.S_A + mx.S_A,
        case1_S_P=m0.S_P + m1.S_P + 2 * mx.S_P,
        case2_lambda_A=m0.lambda_A + m1.lambda_A + mx.lambda_A,
    )


def theorem_sufficient_pair(s0: Seq, s1: Seq, lambda_A) -> bool:
    """Every auto and cross lambda^A of (s0, s1) is at most lambda_A / 2."""
    m0, m1, mx = _half_pair_merits(s0, s1)
    limit = _rational(lambda_A) ** 2
    return all(4 * sq <= limit for sq in (m0.lambda_A_sq, m1.lambda_A_sq, mx.lambda_A_sq))


# ---------------------------------------------------------------------------
# Decomposition checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionCheck:
    holds: bool
    failure: Optional[Tuple[str, int]] = None  # (identity, lag)
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def _compare(
    name: str,
    direct: Sequence[Element],
    predicted,
    failures: List[Tuple[str, int]],
) -> int:
    for l, value in enumerate(direct):
        if predicted(l) != value:
            failures.append((name, l))
            return l + 1
    return len(direct)


def case1_decomposition_check(s0: Seq, s1: Seq, periodic: bool = True) -> DecompositionCheck:
    """
    Verify the interleaved lift's ACFs against its half-length correlations.

    c0 = s0 ⊗ s1 and c1* = s1 ⊗ (-s0). Odd lags combine two crosscorrelation
    terms (the second conjugated, which is invisible for real inputs); even
    lags add the two half ACFs. Periodic crosscorrelation lags are taken
    modulo m/2.
    """
    from .search import case1_lift

    if len(s0) != len(s1):
        raise DomainError(f"half-length sequences differ: {len(s0)} != {len(s1)}")
    pair = case1_lift(s0, s1)
    c0, c1_conj = pair.c0, conjugate(pair.c1)
    a0, a1, ax = aperiodic_acf(s0), aperiodic_acf(s1), aperiodic_ccf(s0, s1)

    def even(l: int) -> Element:
        return a0.at(l // 2) + a1.at(l // 2)

    def c0_aperiodic(l: int) -> Element:
        if l % 2 == 0:
            return even(l)
        return ax.at((l - 1) // 2) + ax.at(-(l + 1) // 2).conj()

    def c1_aperiodic(l: int) -> Element:
        if l % 2 == 0:
            return even(l)
        return -ax.at((l + 1) // 2) - ax.at((1 - l) // 2).conj()

    failures: List[Tuple[str, int]] = []
    checked = _compare("A_c0", aperiodic_acf(c0).values, c0_aperiodic, failures)
    if not failures:
        checked += _compare("A_c1*", aperiodic_acf(c1_conj).values, c1_aperiodic, failures)

    if periodic and not failures:
        m = len(c0)
        p0, p1, px = periodic_acf(s0), periodic_acf(s1), periodic_ccf(s0, s1)

        def p_even(l: int) -> Element:
            return p0.at(l // 2) + p1.at(l // 2)

        def c0_periodic(l: int) -> Element:
            if l % 2 == 0:
                return p_even(l)
            return px.at((l - 1) // 2) + px.at((m - l - 1) // 2).conj()

        def c1_periodic(l: int) -> Element:
            if l % 2 == 0:
                return p_even(l)
            return -px.at((l + 1) // 2) - px.at((m - l + 1) // 2).conj()

        checked += _compare("P_c0", periodic_acf(c0).values, c0_periodic, failures)
        if not failures:
            checked += _compare("P_c1*", periodic_acf(c1_conj).values, c1_periodic, failures)

    if failures:
        logger.info(f"Case 1 decomposition fails at {failures[0][0]}, lag {failures[0][1]}")
    return DecompositionCheck(not failures, failures[0] if failures else None, checked)


def case2_decomposition_check(s0: Seq, s1: Seq) -> DecompositionCheck:
    """
    Verify the concatenated lift's ACFs: c0 = s0 s1, c1 = s1* (-s0*).

    Below m/2 the two half ACFs (conjugated for c1) add to one boundary
    crosscorrelation term; from m/2 up only that term remains.
    """
    from .search import case2_lift

    if len(s0) != len(s1):
        raise DomainError(f"half-length sequences differ: {len(s0)} != {len(s1)}")
    h = len(s0)
    pair = case2_lift(s0, s1)
    a0, a1, ax = aperiodic_acf(s0), aperiodic_acf(s1), aperiodic_ccf(s0, s1)

    def c0_predicted(l: int) -> Element:
        cross = ax.at(l - h)
        return a0.at(l) + a1.at(l) + cross if l < h else cross

    def c1_predicted(l: int) -> Element:
        cross = -ax.at(h - l)
        return a0.at(l).conj() + a1.at(l).conj() + cross if l < h else cross

    failures: List[Tuple[str, int]] = []
    checked = _compare("A_c0", aperiodic_acf(pair.c0).values, c0_predicted, failures)
    if not failures:
        checked += _compare("A_c1", aperiodic_acf(pair.c1).values, c1_predicted, failures)
    if failures:
        logger.info(f"Case 2 decomposition fails at {failures[0][0]}, lag {failures[0][1]}")
    return DecompositionCheck(not failures, failures[0] if failures else None, checked)
