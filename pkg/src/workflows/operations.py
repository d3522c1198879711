"""
Toolkit operations shared by the command line and the HTTP API.
Each method runs one verb and returns its JSON payload.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

from ..schemas import (
    BoundsPayload,
    BuildPayload,
    BuildVerification,
    ColumnReportPayload,
    LiftPayload,
    SearchPayload,
)
from ..services.analysis import (
    bound_report,
    case1_decomposition_check,
    case2_decomposition_check,
    case_bounds,
    column_report,
    recursive_column_report,
    existence_thresholds,
    lambda_B,
)
from ..services.complementary import SeqMatrix, is_complementary_set, is_mo_collection, make_companion
from ..services.construct import BuildRecipe, MOMatrix, build, golay_seed, rset_pair
from ..services.search import SearchConfig, case1_lift, case2_lift, search_service
from ..errors import DomainError
from ..utils.seqcore import Seq, merits
from ..utils.seqio import format_seq, read_sequences

logger = logging.getLogger(__name__)


class Operations:
    """Build, analyze, bounds, lift and search verbs."""

    def seed_pair(self, descriptor: str) -> Tuple[Seq, Seq]:
        """
        Companion seeds from 'golay:q' (h00, h10 of the Golay seed) or a file.

        A file holds c0 and c1 on two lines, or c0 alone, in which case the
        adjacent-pairing companion is derived.

        Args:
            descriptor: Seed descriptor or path

        Returns:
            (c0, c1)
        """
        kind, _, arg = descriptor.partition(":")
        if kind == "golay":
            if not arg.isdigit():
                raise DomainError(f"bad Golay seed descriptor {descriptor!r} (expected golay:<q>)")
            h00, _, h10, _ = golay_seed(int(arg))
            return h00, h10

        rows = read_sequences(Path(descriptor))
        if len(rows) == 1:
            return rows[0], make_companion(rows[0])
        if len(rows) != 2:
            raise DomainError(f"seed file {descriptor} must hold one or two sequences, got {len(rows)}")
        return rows[0], rows[1]

    def build(self, c0: Seq, c1: Seq, recipe: BuildRecipe, include_sets: bool = True) -> Tuple[MOMatrix, BuildPayload]:
        mo = build(c0, c1, recipe)
        sets = mo.sets()
        members = rset_pair(c0, c1, recipe.t)
        verified = BuildVerification(
            complementary=all(is_complementary_set(s) for s in sets),
            mo=is_mo_collection(sets),
            column_membership=all(col in members for col in mo.columns()),
        )
        if not (verified.complementary and verified.mo and verified.column_membership):
            logger.error(f"Build verification failed: {verified}")
        payload = BuildPayload(
            dims={"rows": mo.m, "columns": mo.matrix.n, "sets": mo.k, "set_columns": mo.set_width},
            recipe=recipe.to_dict(),
            verified=verified,
            set_columns=[list(cols) for cols in mo.set_columns],
            sets=[[format_seq(row) for row in s.rows] for s in sets] if include_sets else None,
        )
        return mo, payload

    def analyze(self, M: SeqMatrix) -> ColumnReportPayload:
        logger.info(f"Analyzing {M.m}x{M.n} matrix")
        return ColumnReportPayload.of(column_report(M))

    def analyze_recipe(self, c0: Seq, c1: Seq, recipe: BuildRecipe) -> ColumnReportPayload:
        """Column report of a build through the ACF recursion; nothing is materialized."""
        dims = recipe.dims(len(c0))
        logger.info(f"Analyzing build {dims} through the column recursion")
        return ColumnReportPayload.of(recursive_column_report(c0, c1, recipe))

    def bounds(
        self,
        m: int,
        t: int = 0,
        E=None,
        lambda0=None,
        S0=None,
        s0: Optional[Seq] = None,
        s1: Optional[Seq] = None,
    ) -> BoundsPayload:
        report = bound_report(m, t, E, lambda0, S0, s0, s1)
        thresholds = existence_thresholds(m) if m >= 4 else None
        return BoundsPayload.of(report, thresholds)

    def lift(self, case: int, s0: Seq, s1: Seq) -> LiftPayload:
        if case not in (1, 2):
            raise DomainError(f"lift case must be 1 or 2, got {case}")
        pair = case1_lift(s0, s1) if case == 1 else case2_lift(s0, s1)
        check = case1_decomposition_check(s0, s1) if case == 1 else case2_decomposition_check(s0, s1)
        m0, m1 = merits(pair.c0), merits(pair.c1)
        logger.info(f"Case {case} lift of length {pair.m}: lambda_u = {max(m0.lambda_A, m1.lambda_A)}")
        return LiftPayload.of(case, pair.c0, pair.c1, m0, m1, lambda_B(s0, s1), case_bounds(s0, s1), check)

    def search(self, cfg: SearchConfig) -> SearchPayload:
        result = search_service.run(cfg)
        return SearchPayload.of(result, cfg.model_dump(mode="json"))


# Global operations instance
operations = Operations()
