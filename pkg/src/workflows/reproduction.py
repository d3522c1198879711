"""
Self-test workflow
Rebuilds the bundled reference matrices and tables and compares bit for bit.
"""

import logging
import time
from typing import Callable, List, Optional, Tuple

from ..schemas import SelftestItem, SelftestPayload
from ..services.analysis import column_report, existence_thresholds, lambda_B
from ..services.complementary import (
    SeqMatrix,
    are_mates,
    is_companion_pair,
    is_complementary_set,
    is_golay_sequence,
    is_mo_collection,
)
from ..services.construct import BuildRecipe, ExtensionMode, build, golay_seed
from ..services.reference_data import ReferenceDataService, get_reference_data
from ..services.search import case1_lift, search_service
from ..utils.seqcore import Alphabet, MeritKind, merits

logger = logging.getLogger(__name__)

Check = Tuple[bool, str]


def _same(a: SeqMatrix, b: SeqMatrix) -> bool:
    return [r.elems for r in a.rows] == [r.elems for r in b.rows]


class ReproductionSuite:
    """Runs every reference check and collects one SelftestItem per check."""

    def __init__(self, data: Optional[ReferenceDataService] = None, max_search_m: int = 8):
        """
        Args:
            data: Reference data (bundled files when omitted)
            max_search_m: Largest m re-derived by exhaustive minimum search
        """
        self.data = data or get_reference_data()
        self.max_search_m = max_search_m

    def checks(self) -> List[Tuple[str, Callable[[], Check]]]:
        return [
            ("quad_mates_build", self.quad_mates_build),
            ("size_extension", self.size_extension),
            ("golay_seed_build", self.golay_seed_build),
            ("ternary_mates_build", self.ternary_mates_build),
            ("minimum_pairs_merits", self.minimum_pair_merits),
            ("minimum_pairs_search", self.minimum_pair_search),
            ("existence_thresholds", self.existence_thresholds),
            ("annealed_pairs", self.annealed_pairs),
        ]

    # -- individual checks -------------------------------------------------

    def quad_mates_build(self) -> Check:
        C, D = self.data.matrices("quad_mates")
        mo = build(C.column(0), C.column(1), BuildRecipe.uniform(1, 0))
        built_C, built_D = mo.sets()
        ok = _same(built_C, C) and _same(built_D, D) and are_mates(C, D)
        return ok, f"C {C.m}x{C.n} and D {D.m}x{D.n} {'match' if ok else 'differ'}"

    def size_extension(self) -> Check:
        (C, _) = self.data.matrices("quad_mates")
        (wide,) = self.data.matrices("quad_mo_wide")
        sets = self.data.matrices("quad_mo_sets")
        mo = build(C.column(0), C.column(1), BuildRecipe.uniform(1, 1))
        report = column_report(mo)
        ok = (
            _same(mo.matrix, wide)
            and all(_same(a, b) for a, b in zip(mo.sets(), sets))
            and is_mo_collection(sets)
            and report.lambda_A_u == 4
            and report.S_A_u == 12
        )
        return ok, f"lambda_A_u={report.lambda_A_u}, S_A_u={report.S_A_u}"

    def golay_seed_build(self) -> Check:
        seeds, C = self.data.matrices("golay_seed_q2")
        h00, h01, h10, h11 = golay_seed(2)
        seeds_ok = [r.elems for r in seeds.rows] == [s.elems for s in (h00, h01, h10, h11)]
        mo = build(h00, h10, BuildRecipe.uniform(2, 0, length_mode=ExtensionMode.INTERLEAVE))
        built_ok = _same(mo.sets()[0], C)
        golay_columns = all(is_golay_sequence(col) for col in C.columns())
        return seeds_ok and built_ok and golay_columns, (
            f"seed {'ok' if seeds_ok else 'differs'}, build {'ok' if built_ok else 'differs'}, "
            f"Golay columns {golay_columns}"
        )

    def ternary_mates_build(self) -> Check:
        C, D = self.data.matrices("ternary_mates")
        mo = build(C.column(0), C.column(1), BuildRecipe.uniform(2, 0))
        built_C, built_D = mo.sets()
        report = column_report(mo)
        ok = (
            _same(built_C, C)
            and _same(built_D, D)
            and is_complementary_set(C)
            and all(z == 1 for z in report.zero_counts)
            and report.S_A_u <= 5
        )
        return ok, f"S_A_u={report.S_A_u}, zeros per column={sorted(set(report.zero_counts))}"

    def minimum_pair_merits(self) -> Check:
        bad = []
        for row in self.data.minimum_pairs():
            if is_companion_pair(row.c0, row.c1) is None:
                bad.append(f"m={row.m} not a companion pair")
                continue
            m0, m1 = merits(row.c0), merits(row.c1)
            if row.lambda_A_min is not None and max(m0.lambda_A, m1.lambda_A) != row.lambda_A_min:
                bad.append(f"m={row.m} lambda_A {max(m0.lambda_A, m1.lambda_A)}")
            if row.S_A_min is not None and max(m0.S_A, m1.S_A) != row.S_A_min:
                bad.append(f"m={row.m} S_A {max(m0.S_A, m1.S_A)}")
        return not bad, "; ".join(bad) or "all listed pairs attain their values"

    def minimum_pair_search(self) -> Check:
        bad = []
        for row in self.data.minimum_pairs():
            if row.m > self.max_search_m:
                continue
            for kind, expected in ((MeritKind.LAMBDA_A, row.lambda_A_min), (MeritKind.S_A, row.S_A_min)):
                if expected is None:
                    continue
                found = search_service.min_constraint_search(Alphabet.BINARY, row.m, kind)
                if found.minimum != expected:
                    bad.append(f"m={row.m} {kind.value} {found.minimum} != {expected}")
        return not bad, "; ".join(bad) or f"minima re-derived up to m={self.max_search_m}"

    def existence_thresholds(self) -> Check:
        bad = [
            f"m={row.m}: {existence_thresholds(row.m).lambda_W_A} != {row.lambda_W}"
            for row in self.data.thresholds()
            if existence_thresholds(row.m).lambda_W_A != row.lambda_W
        ]
        return not bad, "; ".join(bad) or "all lambda_W values match"

    def annealed_pairs(self) -> Check:
        bad = []
        for row in self.data.annealed_pairs():
            lifted = case1_lift(row.s0, row.s1)
            lam_u = max(merits(lifted.c0).lambda_A, merits(lifted.c1).lambda_A)
            lam_b = lambda_B(row.s0, row.s1)
            if lifted.m != row.m or lam_b != row.lambda_B or lam_u != row.lambda_u:
                bad.append(f"m={row.m}: lambda_B={lam_b}, lambda_u={lam_u}")
        return not bad, "; ".join(bad) or "all annealed pairs reproduce"

    # -- runner ------------------------------------------------------------

    def run(self) -> SelftestPayload:
        logger.info("=" * 80)
        logger.info("Running reference self-test")
        logger.info("=" * 80)

        items = []
        for name, check in self.checks():
            started = time.monotonic()
            try:
                passed, detail = check()
            except Exception as e:
                logger.error(f"Self-test item {name} raised: {e}", exc_info=True)
                passed, detail = False, f"{type(e).__name__}: {e}"
            elapsed = time.monotonic() - started
            logger.info(f"{'PASS' if passed else 'FAIL'} {name} ({elapsed:.2f}s): {detail}")
            items.append(SelftestItem(name=name, passed=passed, detail=detail, elapsed=elapsed))

        passed = sum(1 for i in items if i.passed)
        logger.info("=" * 80)
        logger.info(f"Self-test: {passed} passed, {len(items) - passed} failed")
        logger.info("=" * 80)
        return SelftestPayload(success=passed == len(items), items=items, passed=passed, failed=len(items) - passed)


def run_selftest(max_search_m: int = 8) -> SelftestPayload:
    return ReproductionSuite(max_search_m=max_search_m).run()
