"""
Versioned JSON payloads shared by the CLI (--json) and the HTTP API.
"""

from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field

from .config import settings
from .services.analysis import BoundReport, CaseBounds, ColumnReport, ExistenceThresholds
from .services.search import AnnealResult, FoundPair, SearchResult
from .utils.seqcore import MeritReport, Seq
from .utils.seqio import format_seq

Num = Union[int, float]


class Payload(BaseModel):
    schema_version: str = Field(default_factory=lambda: settings.schema_version)
    verb: str
    success: bool = True


class ErrorPayload(Payload):
    success: bool = False
    error: str
    exit_code: int


class MeritModel(BaseModel):
    lambda_A: Num
    lambda_P: Num
    S_A: Num
    S_P: Num

    @classmethod
    def of(cls, report: MeritReport) -> "MeritModel":
        return cls(lambda_A=report.lambda_A, lambda_P=report.lambda_P, S_A=report.S_A, S_P=report.S_P)


class PairModel(BaseModel):
    c0: str
    c1: str
    merits0: MeritModel
    merits1: MeritModel
    pairing: List[Tuple[int, int]]

    @classmethod
    def of(cls, pair: FoundPair) -> "PairModel":
        return cls(
            c0=format_seq(pair.c0),
            c1=format_seq(pair.c1),
            merits0=MeritModel.of(pair.merits0),
            merits1=MeritModel.of(pair.merits1),
            pairing=list(pair.pairing),
        )


class BuildVerification(BaseModel):
    complementary: bool
    mo: bool
    column_membership: bool


class BuildPayload(Payload):
    verb: str = "build"
    dims: Dict[str, int]
    recipe: dict
    verified: BuildVerification
    set_columns: List[List[int]]
    sets: Optional[List[List[str]]] = None


class ColumnReportPayload(Payload):
    verb: str = "analyze"
    columns: int
    lambda_A_u: Num
    lambda_P_u: Num
    S_A_u: Num
    S_P_u: Num
    zero_counts: List[int]
    per_column: List[dict]

    @classmethod
    def of(cls, report: ColumnReport) -> "ColumnReportPayload":
        return cls(**report.to_dict())


class BoundsPayload(Payload):
    verb: str = "bounds"
    bounds: dict
    thresholds: Optional[dict] = None

    @classmethod
    def of(cls, report: BoundReport, thresholds: Optional[ExistenceThresholds]) -> "BoundsPayload":
        return cls(bounds=report.to_dict(), thresholds=thresholds.to_dict() if thresholds else None)


class AnnealModel(BaseModel):
    s0: str
    s1: str
    lambda_B: Num
    evaluations: int
    restarts: int
    chain: int
    history: List[Tuple[int, float, int]]

    @classmethod
    def of(cls, result: AnnealResult) -> "AnnealModel":
        return cls(
            s0=format_seq(result.s0),
            s1=format_seq(result.s1),
            lambda_B=result.lambda_B,
            evaluations=result.evaluations,
            restarts=result.restarts,
            chain=result.chain,
            history=[list(h) for h in result.history],
        )


class SearchPayload(Payload):
    verb: str = "search"
    config: dict
    pairs: List[PairModel]
    count: int
    examined: int
    elapsed: float = Field(0.0, exclude=True)  # wall-clock, text output only
    minimum: Optional[Num] = None
    truncated: bool = False
    anneal: Optional[AnnealModel] = None

    @classmethod
    def of(cls, result: SearchResult, config: dict) -> "SearchPayload":
        return cls(
            config=config,
            pairs=[PairModel.of(p) for p in result.pairs],
            count=result.count,
            examined=result.examined,
            elapsed=result.elapsed,
            minimum=result.minimum,
            truncated=result.truncated,
            anneal=AnnealModel.of(result.anneal) if result.anneal else None,
        )


class LiftPayload(Payload):
    verb: str = "lift"
    case: int
    c0: str
    c1: str
    merits0: MeritModel
    merits1: MeritModel
    lambda_u: Num
    lambda_B: Num
    bounds: dict
    decomposition_holds: bool
    decomposition_failure: Optional[Tuple[str, int]] = None

    @classmethod
    def of(cls, case: int, c0: Seq, c1: Seq, m0: MeritReport, m1: MeritReport,
           lam_B: Num, bounds: CaseBounds, check) -> "LiftPayload":
        return cls(
            case=case,
            c0=format_seq(c0),
            c1=format_seq(c1),
            merits0=MeritModel.of(m0),
            merits1=MeritModel.of(m1),
            lambda_u=max(m0.lambda_A, m1.lambda_A),
            lambda_B=lam_B,
            bounds=bounds.to_dict(),
            decomposition_holds=bool(check),
            decomposition_failure=check.failure,
        )


class VerifyPayload(Payload):
    verb: str = "verify"
    predicate: str
    verdict: bool
    witness: Optional[dict] = None
    detail: Optional[str] = None


class SelftestItem(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    elapsed: float = 0.0


class SelftestPayload(Payload):
    verb: str = "selftest"
    items: List[SelftestItem]
    passed: int
    failed: int
