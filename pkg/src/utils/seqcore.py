"""
Exact sequence representation and correlation arithmetic.

Sequences hold Gaussian integers (re + im*j) so every correlation value is
exact. Correlation merits keep the squared magnitudes as integers and expose a
real view only for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ..errors import DomainError

Number = Union[int, float]


class Alphabet(str, Enum):
    """Element alphabets, ordered by inclusion where one exists."""

    BINARY = "binary"    # {1, -1}
    TERNARY = "ternary"  # {1, 0, -1}
    QUAD = "quad"        # {1, -1, j, -j}
    GAUSS = "gauss"      # any Gaussian integer

    def contains(self, e: "Element") -> bool:
        if self is Alphabet.GAUSS:
            return True
        if self is Alphabet.BINARY:
            return e.im == 0 and e.re in (1, -1)
        if self is Alphabet.TERNARY:
            return e.im == 0 and e.re in (1, 0, -1)
        return (e.im == 0 and e.re in (1, -1)) or (e.re == 0 and e.im in (1, -1))

    def symbols(self) -> Tuple["Element", ...]:
        """Enumeration order of the alphabet (used by exhaustive searches)."""
        if self is Alphabet.BINARY:
            return (ONE, MINUS_ONE)
        if self is Alphabet.TERNARY:
            return (ONE, MINUS_ONE, ZERO)
        if self is Alphabet.QUAD:
            return (ONE, MINUS_ONE, J, MINUS_J)
        raise DomainError("the Gaussian alphabet cannot be enumerated")

    def join(self, other: "Alphabet") -> "Alphabet":
        """Smallest alphabet containing both."""
        if self is other:
            return self
        if Alphabet.BINARY in (self, other):
            return other if self is Alphabet.BINARY else self
        return Alphabet.GAUSS


@dataclass(frozen=True, slots=True)
class Element:
    """Gaussian integer re + im*j."""

    re: int
    im: int = 0

    def __add__(self, other: "Element") -> "Element":
        return Element(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Element") -> "Element":
        return Element(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "Element") -> "Element":
        return Element(self.re * other.re - self.im * other.im,
                       self.re * other.im + self.im * other.re)

    def __neg__(self) -> "Element":
        return Element(-self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def conj(self) -> "Element":
        return Element(self.re, -self.im)

    def norm(self) -> int:
        """Squared magnitude |x|^2."""
        return self.re * self.re + self.im * self.im

    def scale(self, k: int) -> "Element":
        return Element(k * self.re, k * self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def coerce(cls, value: Union["Element", int, complex, Tuple[int, int]]) -> "Element":
        if isinstance(value, Element):
            return value
        if isinstance(value, bool):
            raise DomainError(f"not a Gaussian integer: {value!r}")
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, tuple) and len(value) == 2:
            return cls(int(value[0]), int(value[1]))
        if isinstance(value, complex):
            re, im = value.real, value.imag
            if re != int(re) or im != int(im):
                raise DomainError(f"not a Gaussian integer: {value!r}")
            return cls(int(re), int(im))
        # numpy integer scalars
        try:
            as_int = int(value)
        except (TypeError, ValueError):
            raise DomainError(f"not a Gaussian integer: {value!r}")
        if as_int != value:
            raise DomainError(f"not a Gaussian integer: {value!r}")
        return cls(as_int, 0)


ZERO = Element(0, 0)
ONE = Element(1, 0)
MINUS_ONE = Element(-1, 0)
J = Element(0, 1)
MINUS_J = Element(0, -1)


def magnitude(norm: int) -> Number:
    """|x| from |x|^2: an int when exact, otherwise a float."""
    root = math.isqrt(norm)
    return root if root * root == norm else math.sqrt(norm)


def infer_alphabet(elems: Iterable[Element]) -> Alphabet:
    """Smallest alphabet holding every element."""
    elems = list(elems)
    for alphabet in (Alphabet.BINARY, Alphabet.TERNARY, Alphabet.QUAD):
        if all(alphabet.contains(e) for e in elems):
            return alphabet
    return Alphabet.GAUSS


@dataclass(frozen=True)
class Seq:
    """Finite sequence of Gaussian integers with an alphabet tag."""

    elems: Tuple[Element, ...]
    alphabet: Alphabet = Alphabet.GAUSS

    def __post_init__(self):
        if len(self.elems) == 0:
            raise DomainError("empty sequence")
        for i, e in enumerate(self.elems):
            if not self.alphabet.contains(e):
                raise DomainError(f"element {i} outside the {self.alphabet.value} alphabet", index=i)

    @classmethod
    def of(cls, values: Iterable, alphabet: Optional[Alphabet] = None) -> "Seq":
        """Build from ints, complex numbers, (re, im) tuples or Elements; alphabet inferred when omitted."""
        elems = tuple(Element.coerce(v) for v in values)
        if alphabet is None:
            alphabet = infer_alphabet(elems) if elems else Alphabet.GAUSS
        return cls(elems, Alphabet(alphabet))

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elems)

    def __getitem__(self, i: int) -> Element:
        return self.elems[i]

    def __neg__(self) -> "Seq":
        return negate(self)

    def energy(self) -> int:
        return sum(e.norm() for e in self.elems)

    def zeros(self) -> int:
        return sum(1 for e in self.elems if not e)

    def is_real(self) -> bool:
        return all(e.im == 0 for e in self.elems)

    def pairs(self) -> List[Tuple[int, int]]:
        return [(e.re, e.im) for e in self.elems]

    def retag(self, alphabet: Alphabet) -> "Seq":
        return Seq(self.elems, alphabet)

    def __str__(self) -> str:
        from .seqio import format_seq
        return format_seq(self)


# ---------------------------------------------------------------------------
# Correlation functions
# ---------------------------------------------------------------------------

class CorrelationKind(str, Enum):
    APERIODIC_AUTO = "aperiodic_auto"
    PERIODIC_AUTO = "periodic_auto"
    APERIODIC_CROSS = "aperiodic_cross"
    PERIODIC_CROSS = "periodic_cross"

    @property
    def periodic(self) -> bool:
        return self in (CorrelationKind.PERIODIC_AUTO, CorrelationKind.PERIODIC_CROSS)


@dataclass(frozen=True)
class CorrelationProfile:
    """Correlation values indexed by lag over lag_range (inclusive)."""

    values: Tuple[Element, ...]
    kind: CorrelationKind
    lag_range: Tuple[int, int]

    def at(self, lag: int) -> Element:
        """Value at a lag; aperiodic profiles are zero outside their range, periodic ones wrap."""
        lo, hi = self.lag_range
        if lo <= lag <= hi:
            return self.values[lag - lo]
        if self.kind.periodic:
            return self.values[(lag - lo) % len(self.values)]
        return ZERO

    __getitem__ = at

    def lags(self) -> range:
        lo, hi = self.lag_range
        return range(lo, hi + 1)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.values)

    def as_complex(self) -> List[complex]:
        return [complex(v) for v in self.values]


def _shifted_sum(a: Sequence[Tuple[int, int]], b: Sequence[Tuple[int, int]], offset: int, length: int) -> Element:
    """sum_{i < length} a[i] * conj(b[i + offset]) on (re, im) pairs."""
    re = im = 0
    for i in range(length):
        ar, ai = a[i]
        br, bi = b[i + offset]
        re += ar * br + ai * bi
        im += ai * br - ar * bi
    return Element(re, im)


def _check_same_length(a: Seq, b: Seq) -> None:
    if len(a) != len(b):
        raise DomainError(f"length mismatch: {len(a)} != {len(b)}")


def aperiodic_acf(a: Seq) -> CorrelationProfile:
    """A(l) = sum_{i=0}^{n-1-l} a_i conj(a_{i+l}), 0 <= l <= n-1."""
    n = len(a)
    p = a.pairs()
    values = tuple(_shifted_sum(p, p, l, n - l) for l in range(n))
    return CorrelationProfile(values, CorrelationKind.APERIODIC_AUTO, (0, n - 1))


def periodic_acf(a: Seq) -> CorrelationProfile:
    """P(l) = sum_i a_i conj(a_{(i+l) mod n})."""
    n = len(a)
    p = a.pairs()
    doubled = p + p
    values = tuple(_shifted_sum(p, doubled, l, n) for l in range(n))
    return CorrelationProfile(values, CorrelationKind.PERIODIC_AUTO, (0, n - 1))


def aperiodic_ccf(a: Seq, b: Seq) -> CorrelationProfile:
    """A_{a,b}(l) over 1-n <= l <= n-1."""
    _check_same_length(a, b)
    n = len(a)
    pa, pb = a.pairs(), b.pairs()
    values = []
    for l in range(1 - n, n):
        if l >= 0:
            values.append(_shifted_sum(pa, pb, l, n - l))
        else:
            # sum_{i=0}^{n-1+l} a_{i-l} conj(b_i)
            values.append(_shifted_sum(pa[-l:], pb, 0, n + l))
    return CorrelationProfile(tuple(values), CorrelationKind.APERIODIC_CROSS, (1 - n, n - 1))


def periodic_ccf(a: Seq, b: Seq) -> CorrelationProfile:
    _check_same_length(a, b)
    n = len(a)
    pa, pb = a.pairs(), b.pairs()
    doubled = pb + pb
    values = tuple(_shifted_sum(pa, doubled, l, n) for l in range(n))
    return CorrelationProfile(values, CorrelationKind.PERIODIC_CROSS, (0, n - 1))


def periodic_from_aperiodic(acf: CorrelationProfile) -> CorrelationProfile:
    """P(l) = A(l) + conj(A(n-l)); the conjugate vanishes for real sequences."""
    if acf.kind is not CorrelationKind.APERIODIC_AUTO:
        raise DomainError("expected an aperiodic autocorrelation profile")
    n = len(acf)
    values = [acf.values[0]]
    for l in range(1, n):
        values.append(acf.values[l] + acf.values[n - l].conj())
    return CorrelationProfile(tuple(values), CorrelationKind.PERIODIC_AUTO, (0, n - 1))


# ---------------------------------------------------------------------------
# Correlation merits
# ---------------------------------------------------------------------------

def _sum_magnitudes(norms: Iterable[int]) -> Number:
    total_int = 0
    total_float = 0.0
    exact = True
    for sq in norms:
        m = magnitude(sq)
        if isinstance(m, int):
            total_int += m
        else:
            exact = False
            total_float += m
    return total_int if exact else total_int + total_float


@dataclass(frozen=True)
class MeritReport:
    """Correlation merits; maxima kept as exact squared magnitudes."""

    lambda_A_sq: int
    lambda_P_sq: int
    S_A: Number
    S_P: Number
    cross: bool = False

    @property
    def lambda_A(self) -> Number:
        return magnitude(self.lambda_A_sq)

    @property
    def lambda_P(self) -> Number:
        return magnitude(self.lambda_P_sq)

    def value(self, kind: "MeritKind") -> Number:
        return {
            MeritKind.LAMBDA_A: self.lambda_A,
            MeritKind.LAMBDA_P: self.lambda_P,
            MeritKind.S_A: self.S_A,
            MeritKind.S_P: self.S_P,
        }[kind]

    def to_dict(self) -> dict:
        return {
            "lambda_A": self.lambda_A,
            "lambda_P": self.lambda_P,
            "S_A": self.S_A,
            "S_P": self.S_P,
            "lambda_A_sq": self.lambda_A_sq,
            "lambda_P_sq": self.lambda_P_sq,
        }


class MeritKind(str, Enum):
    LAMBDA_A = "lambdaA"
    LAMBDA_P = "lambdaP"
    S_A = "SA"
    S_P = "SP"

    @property
    def is_max(self) -> bool:
        return self in (MeritKind.LAMBDA_A, MeritKind.LAMBDA_P)

    @property
    def periodic(self) -> bool:
        return self in (MeritKind.LAMBDA_P, MeritKind.S_P)


def merits_from_profiles(acf: CorrelationProfile, pacf: Optional[CorrelationProfile] = None) -> MeritReport:
    """Auto-merits from an aperiodic ACF (periodic derived when not given)."""
    if pacf is None:
        pacf = periodic_from_aperiodic(acf)
    a_norms = [v.norm() for v in acf.values[1:]]
    p_norms = [v.norm() for v in pacf.values[1:]]
    return MeritReport(
        lambda_A_sq=max(a_norms, default=0),
        lambda_P_sq=max(p_norms, default=0),
        S_A=_sum_magnitudes(a_norms),
        S_P=_sum_magnitudes(p_norms),
    )


def merits(a: Seq) -> MeritReport:
    """Table of auto-merits; lag 0 excluded."""
    return merits_from_profiles(aperiodic_acf(a), periodic_acf(a))


def cross_merits(a: Seq, b: Seq) -> MeritReport:
    """Cross-merits over |l| <= n-1 (aperiodic) and 0 <= l <= n-1 (periodic)."""
    a_norms = [v.norm() for v in aperiodic_ccf(a, b).values]
    p_norms = [v.norm() for v in periodic_ccf(a, b).values]
    return MeritReport(
        lambda_A_sq=max(a_norms),
        lambda_P_sq=max(p_norms),
        S_A=_sum_magnitudes(a_norms),
        S_P=_sum_magnitudes(p_norms),
        cross=True,
    )


# ---------------------------------------------------------------------------
# Sequence operations
# ---------------------------------------------------------------------------

def reverse(a: Seq) -> Seq:
    return Seq(a.elems[::-1], a.alphabet)


def negate(a: Seq) -> Seq:
    return Seq(tuple(-e for e in a.elems), a.alphabet)


def conjugate(a: Seq) -> Seq:
    return Seq(tuple(e.conj() for e in a.elems), a.alphabet)


def concat(a: Seq, b: Seq) -> Seq:
    return Seq(a.elems + b.elems, a.alphabet.join(b.alphabet))


def interleave(a: Seq, b: Seq) -> Seq:
    """(a0, b0, a1, b1, ...)."""
    if len(a) != len(b):
        raise DomainError(f"interleave needs equal lengths: {len(a)} != {len(b)}")
    out = []
    for x, y in zip(a.elems, b.elems):
        out.append(x)
        out.append(y)
    return Seq(tuple(out), a.alphabet.join(b.alphabet))


def inner_product(a: Seq, b: Seq) -> Element:
    """a0*b0 + a1*b1 + ... (no conjugation)."""
    if len(a) != len(b):
        raise DomainError(f"inner product needs equal lengths: {len(a)} != {len(b)}")
    total = ZERO
    for x, y in zip(a.elems, b.elems):
        total = total + x * y
    return total


def hermitian_inner_product(a: Seq, b: Seq) -> Element:
    """sum a_i * conj(b_i)."""
    if len(a) != len(b):
        raise DomainError(f"inner product needs equal lengths: {len(a)} != {len(b)}")
    total = ZERO
    for x, y in zip(a.elems, b.elems):
        total = total + x * y.conj()
    return total


def _require_even(a: Seq, op: str) -> None:
    if len(a) % 2:
        raise DomainError(f"{op} needs an even-length sequence, got {len(a)}")


def f_i(a: Seq) -> Seq:
    """(a1, -a0, a3, -a2, ..., a_{n-1}, -a_{n-2})."""
    _require_even(a, "f_i")
    out = []
    for k in range(0, len(a), 2):
        out.append(a.elems[k + 1])
        out.append(-a.elems[k])
    return Seq(tuple(out), a.alphabet)


def f_c(a: Seq) -> Seq:
    """(a_{n/2}, ..., a_{n-1}, -a_0, ..., -a_{n/2-1})."""
    _require_even(a, "f_c")
    h = len(a) // 2
    return Seq(a.elems[h:] + tuple(-e for e in a.elems[:h]), a.alphabet)


def repeat_signed(a: Seq, sign: int) -> Seq:
    """a followed by sign*a."""
    tail = a.elems if sign > 0 else tuple(-e for e in a.elems)
    return Seq(a.elems + tail, a.alphabet)
