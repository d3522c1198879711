"""
Recursive builders: R-sets, mates, length/size extension and the Golay seed.

A build starts from a companion pair, length-extends it p times, pairs the
result with its mate and then size-extends t times, giving an MO collection
of 2^(t+1) sets of 2^t*m rows and 2^t*2^(p+1) columns.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import DomainError
from ..utils.seqcore import Seq, concat, conjugate, interleave, negate, repeat_signed, reverse
from .complementary import (
    CompanionPair,
    Pairing,
    SeqMatrix,
    pairing_issue,
    adjacent_pairing,
    is_companion_pair,
    is_golay_pair,
    is_mo_collection,
)

logger = logging.getLogger(__name__)


class ExtensionMode(str, Enum):
    CONCAT = "concat"
    INTERLEAVE = "interleave"


LengthMode = ExtensionMode
SizeMode = ExtensionMode


@dataclass(frozen=True)
class BuildRecipe:
    """Per-step modes: len(length_modes) = p, len(size_modes) = t."""

    length_modes: Tuple[ExtensionMode, ...] = ()
    size_modes: Tuple[ExtensionMode, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "length_modes", tuple(ExtensionMode(m) for m in self.length_modes))
        object.__setattr__(self, "size_modes", tuple(ExtensionMode(m) for m in self.size_modes))

    @classmethod
    def uniform(
        cls,
        p: int,
        t: int,
        length_mode: ExtensionMode = ExtensionMode.CONCAT,
        size_mode: ExtensionMode = ExtensionMode.CONCAT,
    ) -> "BuildRecipe":
        if p < 0 or t < 0:
            raise DomainError(f"p and t must be nonnegative, got p={p}, t={t}")
        return cls((length_mode,) * p, (size_mode,) * t)

    @property
    def p(self) -> int:
        return len(self.length_modes)

    @property
    def t(self) -> int:
        return len(self.size_modes)

    def dims(self, m: int) -> Dict[str, int]:
        """Expected shape of the build for seed length m."""
        n_p = 2 ** (self.p + 1)
        return {
            "rows": 2 ** self.t * m,
            "columns": 2 ** (2 * self.t + 1) * n_p,
            "sets": 2 ** (self.t + 1),
            "set_columns": 2 ** self.t * n_p,
        }

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "t": self.t,
            "length_modes": [m.value for m in self.length_modes],
            "size_modes": [m.value for m in self.size_modes],
        }


@dataclass(frozen=True)
class RSet:
    """Row set of the sign-block recursion R^(v) = [[R R], [R -R]], R^(0) = {c, -c}."""

    level: int
    seeds: Tuple[Seq, ...]
    members: Tuple[Seq, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item: Seq) -> bool:
        return any(item.elems == s.elems for s in self.members)


@dataclass(frozen=True)
class MOMatrix:
    """
    MO collection stored as one wide matrix plus the column indices of each set.

    Size extension interleaves the sets' columns, so a set is not always a
    contiguous block of the wide layout.
    """

    matrix: SeqMatrix
    set_columns: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(j for cols in self.set_columns for j in cols)
        if seen != list(range(self.matrix.n)):
            raise DomainError("set columns do not partition the matrix columns")
        widths = {len(cols) for cols in self.set_columns}
        if len(widths) != 1:
            raise DomainError("sets differ in column count")

    @classmethod
    def from_blocks(cls, blocks: Sequence[SeqMatrix]) -> "MOMatrix":
        """Sets laid side by side as contiguous column blocks."""
        if not blocks:
            raise DomainError("no sets given")
        wide = blocks[0].hstack(*blocks[1:])
        w = blocks[0].n
        return cls(wide, tuple(tuple(range(k * w, (k + 1) * w)) for k in range(len(blocks))))

    @property
    def k(self) -> int:
        return len(self.set_columns)

    @property
    def m(self) -> int:
        return self.matrix.m

    @property
    def set_width(self) -> int:
        return len(self.set_columns[0])

    def sets(self) -> List[SeqMatrix]:
        return [self.matrix.select_columns(cols) for cols in self.set_columns]

    def columns(self) -> List[Seq]:
        return self.matrix.columns()


# ---------------------------------------------------------------------------
# R-sets
# ---------------------------------------------------------------------------

def _dedupe(seqs: Iterable[Seq]) -> Tuple[Seq, ...]:
    seen = {}
    for s in seqs:
        seen.setdefault(s.elems, s)
    return tuple(seen.values())


def rset(c: Seq, v: int) -> RSet:
    if v < 0:
        raise DomainError(f"R-set level must be nonnegative, got {v}")
    rows = [c, negate(c)]
    for _ in range(v):
        rows = [repeat_signed(r, sign) for r in rows for sign in (1, -1)]
    return RSet(v, (c,), _dedupe(rows))


def rset_pair(c: Seq, d: Seq, v: int) -> RSet:
    if len(c) != len(d):
        raise DomainError(f"R-set seeds differ in length: {len(c)} != {len(d)}")
    members = rset(c, v).members + rset(d, v).members
    return RSet(v, (c, d), _dedupe(members))


# ---------------------------------------------------------------------------
# Mates and extensions
# ---------------------------------------------------------------------------

def _check_pairs(C: SeqMatrix, pairing: Optional[Sequence[Tuple[int, int]]]) -> Pairing:
    if C.m % 2:
        raise DomainError(f"mate construction needs an even row count, got {C.m}")
    pairing = tuple(pairing) if pairing is not None else adjacent_pairing(C.m)
    issue = pairing_issue(pairing, C.m)
    if issue:
        raise DomainError(f"invalid row pairing: {issue}")
    for k, (x, y) in enumerate(pairing):
        if not is_golay_pair(C.row(x), C.row(y)):
            raise DomainError(f"rows {x} and {y} are not a complementary pair", index=k)
    return pairing


def mate_of(C: SeqMatrix, pairing: Optional[Sequence[Tuple[int, int]]] = None) -> SeqMatrix:
    """
    Mate D of C: for each row pair (x, y), D_x = conj(rev(C_y)) and D_y = -conj(rev(C_x)).

    Args:
        C: Matrix whose paired rows are complementary pairs
        pairing: Row pairs (adjacent when omitted)

    Returns:
        D with are_mates(C, D)
    """
    pairing = _check_pairs(C, pairing)
    rows: List[Optional[Seq]] = [None] * C.m
    for x, y in pairing:
        rows[x] = conjugate(reverse(C.row(y)))
        rows[y] = negate(conjugate(reverse(C.row(x))))
    return SeqMatrix(tuple(rows))


def length_extend(
    C: SeqMatrix,
    mode: ExtensionMode = ExtensionMode.CONCAT,
    pairing: Optional[Sequence[Tuple[int, int]]] = None,
) -> SeqMatrix:
    """[C D] (CONCAT) or C ⊗ D (INTERLEAVE); row pairs stay complementary pairs."""
    D = mate_of(C, pairing)
    if ExtensionMode(mode) is ExtensionMode.CONCAT:
        return C.hstack(D)
    return SeqMatrix(tuple(interleave(a, b) for a, b in zip(C.rows, D.rows)))


def size_extend(mo: MOMatrix, mode: ExtensionMode = ExtensionMode.CONCAT, verify: bool = True) -> MOMatrix:
    """
    Double rows, columns and set count.

    CONCAT:      [[M M, -M M], [-M M, M M]]
    INTERLEAVE:  [[M⊗M, (-M)⊗M], [(-M)⊗M, M⊗M]]

    Each old set S (column indices, r = old width) becomes S ∪ (S+r) and
    (S+2r) ∪ (S+3r) under CONCAT, or {2c, 2c+1} and {2r+2c, 2r+2c+1} for
    c in S under INTERLEAVE.
    """
    if verify and not is_mo_collection(mo.sets()):
        raise DomainError("size extension needs a valid MO collection")
    r = mo.matrix.n
    top, bottom = [], []
    for row in mo.matrix.rows:
        neg = negate(row)
        if ExtensionMode(mode) is ExtensionMode.CONCAT:
            top.append(concat(concat(row, row), concat(neg, row)))
            bottom.append(concat(concat(neg, row), concat(row, row)))
        else:
            same, mixed = interleave(row, row), interleave(neg, row)
            top.append(concat(same, mixed))
            bottom.append(concat(mixed, same))

    if ExtensionMode(mode) is ExtensionMode.CONCAT:
        left = [tuple(sorted(cols + tuple(c + r for c in cols))) for cols in mo.set_columns]
        right = [tuple(sorted(tuple(c + 2 * r for c in cols) + tuple(c + 3 * r for c in cols)))
                 for cols in mo.set_columns]
    else:
        left = [tuple(sorted(j for c in cols for j in (2 * c, 2 * c + 1))) for cols in mo.set_columns]
        right = [tuple(sorted(j for c in cols for j in (2 * r + 2 * c, 2 * r + 2 * c + 1)))
                 for cols in mo.set_columns]

    extended = MOMatrix(SeqMatrix(tuple(top + bottom)), tuple(left + right))
    logger.debug(f"Size-extended ({mode}) to {extended.m}x{extended.matrix.n}, {extended.k} sets")
    return extended


def build(c0: Seq, c1: Seq, recipe: BuildRecipe) -> MOMatrix:
    """
    MO collection from a companion pair.

    The witness pairing of (c0, c1) is used for every mate construction;
    length extension never moves rows, so it stays valid.

    Raises:
        DomainError: (c0, c1) is not a companion pair
    """
    companion = is_companion_pair(c0, c1)
    if companion is None:
        raise DomainError("build needs a companion pair")
    C = companion.matrix()
    for mode in recipe.length_modes:
        C = length_extend(C, mode, companion.pairing)
    D = mate_of(C, companion.pairing)
    mo = MOMatrix.from_blocks([C, D])
    for mode in recipe.size_modes:
        mo = size_extend(mo, mode, verify=False)
    logger.info(
        f"Built {mo.k} sets of {mo.m}x{mo.set_width} (p={recipe.p}, t={recipe.t}) from length {len(c0)} seeds"
    )
    return mo


def build_from_pair(pair: CompanionPair, recipe: BuildRecipe) -> MOMatrix:
    return build(pair.c0, pair.c1, recipe)


def golay_seed(q: int) -> Tuple[Seq, Seq, Seq, Seq]:
    """
    (h00, h01, h10, h11) of length 2^(q+1).

    h_{i,0} <- h_{i,0} rev(h_{i,1}) and h_{i,1} <- h_{i,1} -rev(h_{i,0}),
    starting from H0 = [(+,+), (+,-)] and H1 = [(+,-), (+,+)].
    """
    if q < 0:
        raise DomainError(f"q must be nonnegative, got {q}")
    h = [[Seq.of([1, 1]), Seq.of([1, -1])], [Seq.of([1, -1]), Seq.of([1, 1])]]
    for _ in range(q):
        h = [[concat(a, reverse(b)), concat(b, negate(reverse(a)))] for a, b in h]
    return h[0][0], h[0][1], h[1][0], h[1][1]
