"""
Complementary sets, mates, MO collections and companion pairs.

Row pairings are 0-based index pairs (x, y) throughout.
"""

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import settings
from ..errors import CapabilityError, DomainError
from ..utils import kernels
from ..utils.seqcore import (
    ZERO,
    Alphabet,
    Element,
    Seq,
    aperiodic_acf,
    aperiodic_ccf,
    concat,
    conjugate,
    negate,
)

logger = logging.getLogger(__name__)

Pairing = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class SeqMatrix:
    """m x n matrix held as rows; all rows share one alphabet."""

    rows: Tuple[Seq, ...]

    def __post_init__(self):
        if not self.rows:
            raise DomainError("matrix has no rows")
        n = len(self.rows[0])
        alphabet = self.rows[0].alphabet
        for i, row in enumerate(self.rows):
            if len(row) != n:
                raise DomainError(f"row {i} has length {len(row)}, expected {n}", index=i)
            alphabet = alphabet.join(row.alphabet)
        object.__setattr__(self, "rows", tuple(r.retag(alphabet) for r in self.rows))

    @classmethod
    def from_rows(cls, rows: Iterable) -> "SeqMatrix":
        return cls(tuple(r if isinstance(r, Seq) else Seq.of(r) for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Seq]) -> "SeqMatrix":
        if not columns:
            raise DomainError("matrix has no columns")
        m = len(columns[0])
        if any(len(c) != m for c in columns):
            raise DomainError("columns differ in length")
        return cls(tuple(Seq.of([c[i] for c in columns]) for i in range(m)))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def alphabet(self) -> Alphabet:
        return self.rows[0].alphabet

    def row(self, i: int) -> Seq:
        return self.rows[i]

    def column(self, j: int) -> Seq:
        return Seq(tuple(r[j] for r in self.rows), self.alphabet)

    def columns(self) -> List[Seq]:
        return [self.column(j) for j in range(self.n)]

    def select_columns(self, cols: Sequence[int]) -> "SeqMatrix":
        return SeqMatrix(tuple(Seq(tuple(r[j] for j in cols), self.alphabet) for r in self.rows))

    def hstack(self, *others: "SeqMatrix") -> "SeqMatrix":
        """Row-wise concatenation [self others...]."""
        rows = list(self.rows)
        for other in others:
            if other.m != self.m:
                raise DomainError(f"row count mismatch: {self.m} != {other.m}")
            rows = [concat(a, b) for a, b in zip(rows, other.rows)]
        return SeqMatrix(tuple(rows))

    def vstack(self, *others: "SeqMatrix") -> "SeqMatrix":
        rows = list(self.rows)
        for other in others:
            if other.n != self.n:
                raise DomainError(f"column count mismatch: {self.n} != {other.n}")
            rows.extend(other.rows)
        return SeqMatrix(tuple(rows))

    def negate(self) -> "SeqMatrix":
        return SeqMatrix(tuple(negate(r) for r in self.rows))

    def conj(self) -> "SeqMatrix":
        return SeqMatrix(tuple(conjugate(r) for r in self.rows))

    def __neg__(self) -> "SeqMatrix":
        return self.negate()

    def __str__(self) -> str:
        from ..utils.seqio import format_matrix
        return format_matrix(self.rows)


def pairing_issue(pairing: Sequence[Tuple[int, int]], m: int) -> Optional[str]:
    seen = set()
    for x, y in pairing:
        if x == y:
            return f"pair ({x}, {y}) repeats an index"
        for i in (x, y):
            if not 0 <= i < m:
                return f"index {i} out of range for length {m}"
            if i in seen:
                return f"index {i} used twice"
            seen.add(i)
    if len(seen) != m:
        return f"pairing covers {len(seen)} of {m} indices"
    return None


def adjacent_pairing(m: int) -> Pairing:
    return tuple((i, i + 1) for i in range(0, m, 2))


def half_split_pairing(m: int) -> Pairing:
    h = m // 2
    return tuple((i, i + h) for i in range(h))


@dataclass(frozen=True)
class CompanionPair:
    """Two columns whose rows split into length-2 complementary pairs along the pairing."""

    c0: Seq
    c1: Seq
    pairing: Pairing

    def __post_init__(self):
        m = len(self.c0)
        if len(self.c1) != m:
            raise DomainError(f"companion lengths differ: {m} != {len(self.c1)}")
        if m % 2:
            raise DomainError(f"companion length must be even, got {m}")
        issue = pairing_issue(self.pairing, m)
        if issue:
            raise DomainError(f"invalid pairing: {issue}")
        for k, (x, y) in enumerate(self.pairing):
            if _products(self.c0, self.c1, (x, y)) != ZERO:
                raise DomainError(f"rows {x} and {y} are not a complementary pair", index=k)

    @property
    def m(self) -> int:
        return len(self.c0)

    def matrix(self) -> SeqMatrix:
        """The m x 2 companion matrix [c0 c1]."""
        return SeqMatrix.from_columns([self.c0, self.c1])

    def swapped(self) -> "CompanionPair":
        return CompanionPair(self.c1, self.c0, self.pairing)


def _products(c0: Seq, c1: Seq, pair: Tuple[int, int]) -> Element:
    x, y = pair
    return c0[x] * c1[x].conj() + c0[y] * c1[y].conj()


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------

def acf_sum(rows: Iterable[Seq]) -> List[Element]:
    """Sum of the row ACFs, lags 0..n-1."""
    total = None
    for row in rows:
        values = aperiodic_acf(row).values
        total = list(values) if total is None else [a + b for a, b in zip(total, values)]
    return total


def is_complementary_set(M: SeqMatrix) -> bool:
    total = acf_sum(M.rows)
    return all(v == ZERO for v in total[1:])


def are_mates(Ma: SeqMatrix, Mb: SeqMatrix) -> bool:
    """Row-wise cross-ACF sum vanishes at every lag."""
    if (Ma.m, Ma.n) != (Mb.m, Mb.n):
        raise DomainError(f"mate dimensions differ: {Ma.m}x{Ma.n} vs {Mb.m}x{Mb.n}")
    total = None
    for a, b in zip(Ma.rows, Mb.rows):
        values = aperiodic_ccf(a, b).values
        total = list(values) if total is None else [u + v for u, v in zip(total, values)]
    return all(v == ZERO for v in total)


def is_mo_collection(sets: Sequence[SeqMatrix]) -> bool:
    if not sets:
        return False
    dims = (sets[0].m, sets[0].n)
    for k, s in enumerate(sets):
        if (s.m, s.n) != dims:
            raise DomainError(f"set {k} is {s.m}x{s.n}, expected {dims[0]}x{dims[1]}", index=k)
    if not all(is_complementary_set(s) for s in sets):
        return False
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if not are_mates(sets[i], sets[j]):
                logger.debug(f"Sets {i} and {j} are not mates")
                return False
    return True


def _forward(c0: Seq, c1: Seq, x: int, y: int) -> bool:
    return c1[x] == c0[y].conj() and c1[y] == -c0[x].conj()


def _has_form(c0: Seq, c1: Seq, x: int, y: int) -> bool:
    return _forward(c0, c1, x, y) or _forward(c0, c1, y, x)


def _oriented(c0: Seq, c1: Seq, pairing: Sequence[Tuple[int, int]]) -> Pairing:
    """
    Order each pair (x, y) so that c1[x] = conj(c0[y]) and c1[y] = -conj(c0[x]).

    A pair of the negated form is the same relation read as (y, x). Pairs of
    neither form keep their order.
    """
    return tuple((y, x) if _forward(c0, c1, y, x) and not _forward(c0, c1, x, y) else (x, y) for x, y in pairing)


def is_companion_pair(c0: Seq, c1: Seq) -> Optional[CompanionPair]:
    """
    Witness pairing for [c0 c1] being m/2 stacked complementary pairs, or None.

    Rows x, y form a complementary pair exactly when v_x = -v_y with
    v_i = c0[i] * conj(c1[i]), so the test pairs values with their negations.
    The adjacent pairs are used whenever they work. Partners related by
    c1[x] = ±conj(c0[y]), c1[y] = ∓conj(c0[x]) are preferred, and each witness
    pair is oriented so that mates built from it keep every column in the R-set.
    """
    m = len(c0)
    if len(c1) != m:
        raise DomainError(f"companion lengths differ: {m} != {len(c1)}")
    if m % 2:
        raise DomainError(f"companion length must be even, got {m}")

    v = [c0[i] * c1[i].conj() for i in range(m)]
    adjacent = adjacent_pairing(m)
    if all(v[x] + v[y] == ZERO and _has_form(c0, c1, x, y) for x, y in adjacent):
        return CompanionPair(c0, c1, _oriented(c0, c1, adjacent))

    buckets = defaultdict(deque)
    for i, value in enumerate(v):
        buckets[value].append(i)
    used = [False] * m
    pairing = []
    # bucket fronts are always the smallest unused index of their value
    for i in range(m):
        if used[i]:
            continue
        buckets[v[i]].popleft()
        partners = buckets[-v[i]]
        if not partners:
            return None
        j = next((p for p in partners if _has_form(c0, c1, i, p)), partners[0])
        partners.remove(j)
        used[i] = used[j] = True
        pairing.append((i, j))
    return CompanionPair(c0, c1, _oriented(c0, c1, pairing))


def make_companion(
    c0: Seq,
    pairing: Optional[Sequence[Tuple[int, int]]] = None,
    signs: Optional[Sequence[int]] = None,
) -> Seq:
    """
    Companion of c0 for a row pairing.

    For each pair (x, y): sign 0 sets c1[x] = conj(c0[y]), c1[y] = -conj(c0[x]);
    sign 1 sets the negated values.

    Args:
        c0: Even-length column
        pairing: Index pairs partitioning range(m) (adjacent when omitted)
        signs: One bit per pair (all zero when omitted)

    Returns:
        c1 with is_companion_pair(c0, c1) holding
    """
    m = len(c0)
    if m % 2:
        raise DomainError(f"companion length must be even, got {m}")
    pairing = tuple(pairing) if pairing is not None else adjacent_pairing(m)
    issue = pairing_issue(pairing, m)
    if issue:
        raise DomainError(f"invalid pairing: {issue}")
    signs = tuple(signs) if signs is not None else (0,) * len(pairing)
    if len(signs) != len(pairing):
        raise DomainError(f"{len(signs)} sign bits for {len(pairing)} pairs")

    out: List[Element] = [ZERO] * m
    for (x, y), bit in zip(pairing, signs):
        a, b = c0[y].conj(), -c0[x].conj()
        if bit:
            a, b = -a, -b
        out[x], out[y] = a, b
    return Seq(tuple(out), c0.alphabet)


def is_golay_pair(a: Seq, b: Seq) -> bool:
    if len(a) != len(b):
        raise DomainError(f"Golay pair lengths differ: {len(a)} != {len(b)}")
    return is_complementary_set(SeqMatrix((a, b)))


def find_golay_mate(a: Seq) -> Optional[Seq]:
    """
    Exhaustive search for b over a's alphabet with {a, b} complementary.

    Raises:
        CapabilityError: length above golay_max_length, candidate count above
            exhaustive_cap, or an alphabet that cannot be enumerated
    """
    n = len(a)
    if n > settings.golay_max_length:
        raise CapabilityError(
            f"Golay mate search is bounded to length {settings.golay_max_length}, got {n}",
            cap=settings.golay_max_length,
        )
    if a.alphabet is Alphabet.GAUSS:
        raise CapabilityError("Golay mate search needs a finite alphabet")
    symbols = kernels.symbol_values(a.alphabet.symbols())
    total = len(symbols) ** n
    if total > settings.exhaustive_cap:
        raise CapabilityError(
            f"{total} candidates exceed the exhaustive cap {settings.exhaustive_cap}",
            cap=settings.exhaustive_cap,
        )
    values = np.array([complex(e) for e in a], dtype=np.complex128)
    if not np.iscomplexobj(symbols) and a.is_real():
        values = values.real.astype(np.int64)
    target = kernels.batch_acf(values[np.newaxis, :])[0]
    logger.debug(f"Searching {total} Golay mate candidates of length {n}")
    mate = kernels.find_golay_mate(target, symbols)
    if mate is None:
        return None
    return Seq.of([complex(v) for v in mate], a.alphabet)


def is_golay_sequence(a: Seq) -> bool:
    return find_golay_mate(a) is not None
