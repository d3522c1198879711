"""
Reference data Service
Loads the bundled published sequences, matrices and tables from data/reference.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Union

from ..config import settings
from ..errors import ParseError
from ..utils.seqcore import Alphabet, Seq
from ..utils.seqio import parse_seq, read_matrices
from .complementary import SeqMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MinimumPairRow:
    m: int
    c0: Seq
    c1: Seq
    lambda_A_min: Optional[int]
    S_A_min: Optional[int]


@dataclass(frozen=True)
class ThresholdRow:
    m: int
    lambda_W: int
    prior_lambda_B: int
    lambda_B: int


@dataclass(frozen=True)
class AnnealedPairRow:
    m: int
    s0: Seq
    s1: Seq
    lambda_B: int
    lambda_u: int


def _optional_int(token: str) -> Optional[int]:
    return None if token == "x" else int(token)


class ReferenceDataService:
    """Service for reading the bundled reference files."""

    def __init__(self, data_dir: Union[str, Path]):
        """
        Initialize reference data service.

        Args:
            data_dir: Folder holding the reference .txt files
        """
        self.data_dir = Path(data_dir)
        if not self.data_dir.exists():
            raise ValueError(f"Reference data path does not exist: {data_dir}")

    def path(self, name: str) -> Path:
        path = self.data_dir / (name if name.endswith(".txt") else f"{name}.txt")
        if not path.exists():
            raise ValueError(f"Unknown reference file: {name}")
        return path

    def available(self) -> List[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.txt"))

    def matrices(self, name: str) -> List[SeqMatrix]:
        """Blank-line separated blocks of a reference file as matrices."""
        blocks = read_matrices(self.path(name))
        logger.debug(f"Loaded {len(blocks)} matrices from {name}")
        return [SeqMatrix(tuple(rows)) for rows in blocks]

    def _rows(self, name: str, width: int) -> List[List[str]]:
        rows = []
        for lineno, raw in enumerate(self.path(name).read_text().splitlines(), start=1):
            body = raw.split("#", 1)[0].split()
            if not body:
                continue
            if len(body) != width:
                raise ParseError(f"expected {width} fields, got {len(body)}", line=lineno)
            rows.append(body)
        return rows

    def minimum_pairs(self) -> List[MinimumPairRow]:
        return [
            MinimumPairRow(
                m=int(m),
                c0=parse_seq(c0, Alphabet.BINARY),
                c1=parse_seq(c1, Alphabet.BINARY),
                lambda_A_min=_optional_int(lam),
                S_A_min=_optional_int(s),
            )
            for m, c0, c1, lam, s in self._rows("minimum_pairs", 5)
        ]

    def thresholds(self) -> List[ThresholdRow]:
        return [
            ThresholdRow(int(m), int(w), int(prior), int(b))
            for m, w, prior, b in self._rows("annealed_thresholds", 4)
        ]

    def annealed_pairs(self) -> List[AnnealedPairRow]:
        return [
            AnnealedPairRow(
                m=int(m),
                s0=parse_seq(s0, Alphabet.BINARY),
                s1=parse_seq(s1, Alphabet.BINARY),
                lambda_B=int(b),
                lambda_u=int(u),
            )
            for m, s0, s1, b, u in self._rows("annealed_pairs", 5)
        ]


@lru_cache(maxsize=1)
def get_reference_data() -> ReferenceDataService:
    return ReferenceDataService(settings.data_dir)
