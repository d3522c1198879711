"""
Main FastAPI application entry point for Vercel deployment.
Exposes the toolkit verbs over HTTP with the same JSON payloads as the CLI.
"""

import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from typing import List, Literal, Optional, Union
from datetime import datetime, timezone
from fractions import Fraction
import logging

from src.config import settings
from src.errors import CapabilityError, CompseqError
from src.schemas import (
    BoundsPayload,
    BuildPayload,
    ColumnReportPayload,
    ErrorPayload,
    LiftPayload,
    SearchPayload,
    SelftestPayload,
    VerifyPayload,
)
from src.services.complementary import SeqMatrix
from src.services.construct import BuildRecipe, ExtensionMode
from src.services.search import SearchConfig
from src.utils.seqio import parse_matrices, parse_seq
from src.workflows.operations import operations
from src.workflows.reproduction import ReproductionSuite
from src.workflows.verifier import verifier

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
)
logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Complementary Sequence Toolkit API",
    description="Complementary set matrices from companion pairs: build, analyze, bound and search",
    version=settings.schema_version,
)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

Rational = Union[int, float, str]


# Request/Response Models
class RecipeRequest(BaseModel):
    seed: Optional[str] = Field(None, description="golay:<q>")
    c0: Optional[str] = None
    c1: Optional[str] = None
    p: int = Field(0, ge=0)
    t: int = Field(0, ge=0)
    length_modes: List[ExtensionMode] = Field(default_factory=list)
    size_modes: List[ExtensionMode] = Field(default_factory=list)

    def recipe(self) -> BuildRecipe:
        length = self.length_modes or [ExtensionMode.CONCAT]
        size = self.size_modes or [ExtensionMode.CONCAT]
        if len(length) == 1:
            length = length * self.p
        if len(size) == 1:
            size = size * self.t
        if len(length) != self.p or len(size) != self.t:
            raise CompseqError("mode lists must hold one mode or one per step")
        return BuildRecipe(tuple(length), tuple(size))

    def pair(self):
        if self.seed:
            if not self.seed.startswith("golay:"):
                raise CompseqError("only golay:<q> seeds are accepted over HTTP")
            return operations.seed_pair(self.seed)
        if not (self.c0 and self.c1):
            raise CompseqError("give seed, or both c0 and c1")
        return parse_seq(self.c0), parse_seq(self.c1)


class BuildRequest(RecipeRequest):
    include_sets: bool = True


class AnalyzeRequest(RecipeRequest):
    matrix: Optional[str] = Field(None, description="Matrix text; blocks are placed side by side")


class BoundsRequest(BaseModel):
    m: int
    t: int = 0
    E: Optional[Rational] = None
    lambda0: Optional[Rational] = None
    S0: Optional[Rational] = None
    s0: Optional[str] = None
    s1: Optional[str] = None


class LiftRequest(BaseModel):
    case: Literal[1, 2]
    s0: str
    s1: str


class VerifyRequest(BaseModel):
    predicate: Literal["mo", "complementary", "mates", "companion", "golay"]
    text: str


class HealthResponse(BaseModel):
    status: str
    timestamp: str
    environment: str
    schema_version: str


def _exact(value: Optional[Rational]):
    if value is None:
        return None
    fraction = Fraction(str(value))
    return int(fraction) if fraction.denominator == 1 else fraction


def _failure(verb: str, e: Exception) -> JSONResponse:
    """Error payload with the status the CLI exit code maps to."""
    if isinstance(e, CapabilityError):
        code, status = 3, 422
    elif isinstance(e, (CompseqError, ValueError)):
        code, status = 2, 400
    else:
        logger.error(f"Error in {verb} endpoint: {e}", exc_info=True)
        code, status = 2, 500
    payload = ErrorPayload(verb=verb, error=str(e), exit_code=code)
    return JSONResponse(status_code=status, content=payload.model_dump())


# Health check endpoint
@app.get("/", response_model=HealthResponse)
@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint to verify the API is running."""
    return HealthResponse(
        status="healthy",
        timestamp=datetime.now(timezone.utc).isoformat(),
        environment=settings.environment,
        schema_version=settings.schema_version,
    )


@app.post("/build", response_model=BuildPayload)
def build(request: BuildRequest):
    """Build an MO collection from a companion pair and verify it."""
    try:
        c0, c1 = request.pair()
        _, payload = operations.build(c0, c1, request.recipe(), include_sets=request.include_sets)
        return payload
    except Exception as e:
        return _failure("build", e)


@app.post("/analyze", response_model=ColumnReportPayload)
def analyze(request: AnalyzeRequest):
    """Column correlation report of a matrix, or of a build through the recursion."""
    try:
        if request.matrix:
            blocks = [SeqMatrix(tuple(rows)) for rows in parse_matrices(request.matrix)]
            if not blocks:
                raise CompseqError("matrix text holds no rows")
            M = blocks[0].hstack(*blocks[1:]) if len(blocks) > 1 else blocks[0]
            return operations.analyze(M)
        c0, c1 = request.pair()
        return operations.analyze_recipe(c0, c1, request.recipe())
    except Exception as e:
        return _failure("analyze", e)


@app.post("/bounds", response_model=BoundsPayload)
def bounds(request: BoundsRequest):
    """Closed-form bounds and Welch existence thresholds."""
    try:
        s0 = parse_seq(request.s0) if request.s0 else None
        s1 = parse_seq(request.s1) if request.s1 else None
        return operations.bounds(
            request.m, request.t, _exact(request.E), _exact(request.lambda0), _exact(request.S0), s0, s1
        )
    except Exception as e:
        return _failure("bounds", e)


@app.post("/search", response_model=SearchPayload)
def search(request: dict):
    """Exhaustive, minimum or annealing search; the body is a SearchConfig."""
    try:
        cfg = SearchConfig(**request)
        logger.info(f"Search request: {cfg.model_dump(mode='json')}")
        return operations.search(cfg)
    except Exception as e:
        return _failure("search", e)


@app.post("/lift", response_model=LiftPayload)
def lift(request: LiftRequest):
    """Case 1 / Case 2 lift of a half-length pair."""
    try:
        return operations.lift(request.case, parse_seq(request.s0), parse_seq(request.s1))
    except Exception as e:
        return _failure("lift", e)


@app.post("/verify", response_model=VerifyPayload)
def verify(request: VerifyRequest):
    """Check one predicate on matrix text."""
    try:
        return verifier.check(request.predicate, request.text)
    except Exception as e:
        return _failure("verify", e)


@app.get("/selftest", response_model=SelftestPayload)
def selftest(max_search_m: int = 8):
    """Reproduce the bundled reference data."""
    try:
        return ReproductionSuite(max_search_m=max_search_m).run()
    except Exception as e:
        return _failure("selftest", e)


# For local development
if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
