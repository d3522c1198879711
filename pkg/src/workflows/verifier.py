"""
Verification workflow: the predicate verbs behind `verify` and /verify.
"""

import logging
from typing import List, Optional, Sequence

from ..errors import DomainError
from ..schemas import VerifyPayload
from ..services.complementary import (
    SeqMatrix,
    are_mates,
    find_golay_mate,
    is_companion_pair,
    is_complementary_set,
    is_golay_pair,
    is_mo_collection,
)
from ..utils.seqcore import Seq
from ..utils.seqio import format_seq, parse_matrices

logger = logging.getLogger(__name__)


class Verifier:
    """Runs one predicate and reports verdict plus witness."""

    def mo(self, sets: Sequence[SeqMatrix]) -> VerifyPayload:
        verdict = is_mo_collection(list(sets))
        logger.info(f"MO check over {len(sets)} sets: {verdict}")
        return VerifyPayload(
            predicate="mo",
            verdict=verdict,
            detail=f"{len(sets)} sets of {sets[0].m}x{sets[0].n}" if sets else "no sets",
        )

    def complementary(self, M: SeqMatrix) -> VerifyPayload:
        return VerifyPayload(predicate="complementary", verdict=is_complementary_set(M))

    def mates(self, Ma: SeqMatrix, Mb: SeqMatrix) -> VerifyPayload:
        verdict = is_complementary_set(Ma) and is_complementary_set(Mb) and are_mates(Ma, Mb)
        return VerifyPayload(predicate="mates", verdict=verdict)

    def companion(self, c0: Seq, c1: Seq) -> VerifyPayload:
        pair = is_companion_pair(c0, c1)
        witness = {"pairing": [list(p) for p in pair.pairing]} if pair else None
        return VerifyPayload(predicate="companion", verdict=pair is not None, witness=witness)

    def golay(self, rows: List[Seq]) -> VerifyPayload:
        """Golay pair check for two rows, mate search for one."""
        if len(rows) == 2:
            return VerifyPayload(predicate="golay_pair", verdict=is_golay_pair(rows[0], rows[1]))
        if len(rows) != 1:
            return VerifyPayload(predicate="golay", verdict=False, detail=f"expected 1 or 2 sequences, got {len(rows)}")
        mate: Optional[Seq] = find_golay_mate(rows[0])
        witness = {"mate": format_seq(mate)} if mate is not None else None
        return VerifyPayload(predicate="golay_sequence", verdict=mate is not None, witness=witness)

    def check(self, predicate: str, text: str) -> VerifyPayload:
        """
        Parse matrix text and run one predicate on it.

        Args:
            predicate: mo, complementary, mates, companion or golay
            text: Blocks in the sequence/matrix grammar

        Returns:
            VerifyPayload with the verdict
        """
        blocks = [SeqMatrix(tuple(rows)) for rows in parse_matrices(text)]
        if not blocks:
            raise DomainError("no sequences given")
        rows = [row for block in blocks for row in block.rows]

        if predicate == "mo":
            return self.mo(blocks)
        if predicate == "complementary":
            return self.complementary(blocks[0].hstack(*blocks[1:]) if len(blocks) > 1 else blocks[0])
        if predicate == "mates":
            if len(blocks) != 2:
                raise DomainError(f"mates needs two matrices, got {len(blocks)}")
            return self.mates(*blocks)
        if predicate == "companion":
            if len(rows) != 2:
                raise DomainError(f"companion needs c0 and c1, got {len(rows)} sequences")
            return self.companion(*rows)
        if predicate == "golay":
            return self.golay(rows)
        raise DomainError(f"unknown predicate {predicate!r}")


# Global verifier instance
verifier = Verifier()
