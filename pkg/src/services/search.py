"""
Companion-pair search Service
Exhaustive and minimum-constraint search, half-length lifts and simulated annealing.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..config import settings
from ..errors import CapabilityError, DomainError
from ..utils import kernels
from ..utils.seqcore import (
    Alphabet,
    MeritKind,
    MeritReport,
    Number,
    Seq,
    conjugate,
    concat,
    interleave,
    merits,
    negate,
)
from .analysis import lambda_B, lambda_B_from_merits
from .complementary import CompanionPair, adjacent_pairing, half_split_pairing, is_companion_pair
from .construct import rset

logger = logging.getLogger(__name__)

_TOLERANCE = 1e-9


class SearchMode(str, Enum):
    EXHAUSTIVE = "exhaustive"
    ANNEAL = "anneal"


class SearchConfig(BaseModel):
    """One search request; bound=None means minimize the merit."""

    alphabet: Alphabet = Alphabet.BINARY
    m: int
    t: int = 0
    merit: MeritKind = MeritKind.LAMBDA_A
    bound: Optional[float] = None
    mode: SearchMode = SearchMode.EXHAUSTIVE
    max_candidates: Optional[int] = None
    max_evaluations: Optional[int] = None
    time_limit: Optional[float] = None
    chains: int = 1
    rng_seed: int = 0
    jobs: int = Field(default_factory=lambda: settings.jobs)

    @field_validator("m")
    @classmethod
    def even_length(cls, v: int) -> int:
        if v < 2 or v % 2:
            raise ValueError("m must be an even integer >= 2")
        return v

    @field_validator("t")
    @classmethod
    def nonnegative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("t must be nonnegative")
        return v

    @field_validator("rng_seed")
    @classmethod
    def seed_range(cls, v: int) -> int:
        if not 0 <= v < 2 ** 64:
            raise ValueError("rng_seed must fit in 64 bits")
        return v

    @field_validator("jobs", "chains")
    @classmethod
    def positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @model_validator(mode="after")
    def anneal_scope(self):
        if self.mode is SearchMode.ANNEAL and self.alphabet is not Alphabet.BINARY:
            raise ValueError("annealing supports the binary alphabet only")
        if self.mode is SearchMode.EXHAUSTIVE and self.alphabet is Alphabet.GAUSS:
            raise ValueError("the Gaussian alphabet cannot be enumerated")
        return self

    @property
    def minimize(self) -> bool:
        return self.bound is None


@dataclass(frozen=True)
class FoundPair:
    c0: Seq
    c1: Seq
    merits0: MeritReport
    merits1: MeritReport
    pairing: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class AnnealResult:
    s0: Seq
    s1: Seq
    lambda_B: Number
    history: Tuple[Tuple[int, float, int], ...]
    evaluations: int
    restarts: int
    chain: int = 0


@dataclass(frozen=True)
class SearchResult:
    pairs: Tuple[FoundPair, ...]
    count: int
    examined: int
    elapsed: float
    minimum: Optional[Number] = None
    truncated: bool = False
    anneal: Optional[AnnealResult] = None


@dataclass(frozen=True)
class MinConstraintResult:
    minimum: Number
    witnesses: Tuple[FoundPair, ...]
    count: int
    examined: int
    elapsed: float


# ---------------------------------------------------------------------------
# Candidate scanning (runs in worker processes)
# ---------------------------------------------------------------------------

def _clean(value: float) -> Number:
    return int(round(value)) if abs(value - round(value)) < _TOLERANCE else float(value)


def _merit_of_acf(acf: np.ndarray, t: int, kind: str) -> float:
    if t == 0 and kind == "lambdaA":
        return float(np.abs(acf[1:]).max()) if len(acf) > 1 else 0.0
    return float(kernels.rset_merit(acf[np.newaxis, :], t, kind)[0])


def _scan_range(
    alphabet: str,
    m: int,
    t: int,
    kind: str,
    bound: Optional[float],
    start: int,
    stop: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """(lexicographic indices, merits) of candidates in [start, stop) within the bound."""
    limit = math.inf if bound is None else bound + _TOLERANCE
    if Alphabet(alphabet) is Alphabet.BINARY:
        codes, values = [], []
        for code, acf in kernels.gray_scan(m, start, stop):
            value = _merit_of_acf(acf, t, kind)
            if value <= limit:
                codes.append(code)
                values.append(value)
        order = np.argsort(np.array(codes, dtype=np.int64), kind="stable")
        return np.array(codes, dtype=np.int64)[order], np.array(values, dtype=np.float64)[order]

    symbols = kernels.symbol_values(Alphabet(alphabet).symbols())
    X = kernels.symbol_grid(symbols, m, start, stop)
    values = kernels.rset_merit(kernels.batch_acf(X), t, kind)
    keep = values <= limit
    return np.arange(start, stop, dtype=np.int64)[keep], values[keep]


def _ranges(total: int, parts: int, chunk: int = 1 << 16) -> List[Tuple[int, int]]:
    size = max(1, min(chunk, -(-total // parts)))
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def _index_to_values(indices: np.ndarray, m: int, symbols: np.ndarray) -> np.ndarray:
    q = len(symbols)
    idx = indices.astype(np.int64).copy()
    digits = np.empty((len(idx), m), dtype=np.int64)
    for pos in range(m - 1, -1, -1):
        digits[:, pos] = idx % q
        idx //= q
    return symbols[digits]


def _to_seq(row: np.ndarray, alphabet: Alphabet) -> Seq:
    return Seq.of([complex(v) for v in row], alphabet)


# ---------------------------------------------------------------------------
# Service
# ---------------------------------------------------------------------------

class SearchService:
    """Service for discovering companion pairs under column correlation constraints."""

    def __init__(self, exhaustive_cap: Optional[int] = None, max_reported_pairs: Optional[int] = None):
        """
        Initialize search service.

        Args:
            exhaustive_cap: Candidate limit for enumeration (settings when omitted)
            max_reported_pairs: Pairs listed per result; counts stay exact
        """
        self.exhaustive_cap = exhaustive_cap or settings.exhaustive_cap
        self.max_reported_pairs = max_reported_pairs or settings.max_reported_pairs

    # -- enumeration -------------------------------------------------------

    def _check_capacity(self, alphabet: Alphabet, m: int, budget: Optional[int] = None) -> int:
        total = len(alphabet.symbols()) ** m
        cap = min(self.exhaustive_cap, budget) if budget else self.exhaustive_cap
        if total > cap:
            raise CapabilityError(
                f"{alphabet.value} search at m={m} needs {total} candidates, cap is {cap}",
                cap=cap,
            )
        return total

    def _scan(
        self,
        alphabet: Alphabet,
        m: int,
        t: int,
        kind: MeritKind,
        bound: Optional[float],
        jobs: int,
    ) -> Tuple[np.ndarray, np.ndarray, int]:
        total = len(alphabet.symbols()) ** m
        ranges = _ranges(total, jobs)
        args = [(alphabet.value, m, t, kind.value, bound, s, e) for s, e in ranges]
        logger.info(f"Scanning {total} {alphabet.value} candidates of length {m} in {len(ranges)} ranges ({jobs} jobs)")

        if jobs > 1 and len(ranges) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_scan_range, *zip(*args)))
        else:
            parts = [_scan_range(*a) for a in args]

        indices = np.concatenate([p[0] for p in parts]) if parts else np.empty(0, dtype=np.int64)
        values = np.concatenate([p[1] for p in parts]) if parts else np.empty(0)
        order = np.argsort(indices, kind="stable")
        logger.info(f"Retained {len(indices)} of {total} candidates")
        return indices[order], values[order], total

    def _companion_indices(
        self,
        left: np.ndarray,
        right: np.ndarray,
        symbols: np.ndarray,
        m: int,
        alphabet: Alphabet,
        strict_upper: bool,
    ) -> List[Tuple[int, int]]:
        """
        Index pairs (i, j) of rows from left and right that form companions.

        The Hermitian inner product must vanish for any companion pair (and is
        sufficient for binary columns); other alphabets are confirmed exactly.
        """
        if len(left) == 0 or len(right) == 0:
            return []
        L = _index_to_values(left, m, symbols)
        R = _index_to_values(right, m, symbols)
        Rc = np.conj(R) if np.iscomplexobj(R) else R
        found = []
        block = 1024
        for b0 in range(0, len(L), block):
            gram = L[b0:b0 + block] @ Rc.T
            ii, jj = np.nonzero(gram == 0)
            for i, j in zip(ii + b0, jj):
                a, b = int(left[i]), int(right[j])
                if strict_upper and a >= b:
                    continue
                if a == b:
                    continue
                if alphabet is not Alphabet.BINARY:
                    if is_companion_pair(_to_seq(L[i], alphabet), _to_seq(R[j], alphabet)) is None:
                        continue
                found.append((min(a, b), max(a, b)))
        return sorted(set(found))

    def _found(self, a: int, b: int, m: int, symbols: np.ndarray, alphabet: Alphabet) -> FoundPair:
        rows = _index_to_values(np.array([a, b], dtype=np.int64), m, symbols)
        c0, c1 = _to_seq(rows[0], alphabet), _to_seq(rows[1], alphabet)
        companion = is_companion_pair(c0, c1)
        return FoundPair(c0, c1, merits(c0), merits(c1), companion.pairing)

    def exhaustive_search(self, cfg: SearchConfig) -> SearchResult:
        """
        All companion pairs whose R-set members meet the constraint.

        Candidates are enumerated in lexicographic order (alphabet symbol order,
        first element most significant). A candidate is retained when every
        member of its R-set satisfies the bound; retained candidates are then
        paired. Pairs are listed once, lower index first.
        """
        if cfg.minimize:
            found = self.min_constraint_search(cfg.alphabet, cfg.m, cfg.merit, cfg.t, jobs=cfg.jobs,
                                               budget=cfg.max_candidates)
            return SearchResult(
                pairs=found.witnesses,
                count=found.count,
                examined=found.examined,
                elapsed=found.elapsed,
                minimum=found.minimum,
                truncated=found.count > len(found.witnesses),
            )

        started = time.monotonic()
        self._check_capacity(cfg.alphabet, cfg.m, cfg.max_candidates)
        symbols = kernels.symbol_values(cfg.alphabet.symbols())
        indices, _, total = self._scan(cfg.alphabet, cfg.m, cfg.t, cfg.merit, cfg.bound, cfg.jobs)
        index_pairs = self._companion_indices(indices, indices, symbols, cfg.m, cfg.alphabet, strict_upper=True)

        reported = []
        for a, b in index_pairs[:self.max_reported_pairs]:
            pair = self._found(a, b, cfg.m, symbols, cfg.alphabet)
            if not verify_pair(pair.c0, pair.c1, cfg.t, cfg.merit, cfg.bound):
                raise RuntimeError(f"search produced an invalid pair at indices ({a}, {b})")
            reported.append(pair)
        elapsed = time.monotonic() - started
        logger.info(f"Exhaustive search found {len(index_pairs)} pairs in {elapsed:.2f}s")
        return SearchResult(
            pairs=tuple(reported),
            count=len(index_pairs),
            examined=total,
            elapsed=elapsed,
            truncated=len(index_pairs) > len(reported),
        )

    def min_constraint_search(
        self,
        alphabet: Alphabet,
        m: int,
        merit: MeritKind = MeritKind.LAMBDA_A,
        t: int = 0,
        jobs: Optional[int] = None,
        budget: Optional[int] = None,
    ) -> MinConstraintResult:
        """
        Smallest achievable max(merit(c0), merit(c1)) over companion pairs.

        Candidates are admitted in ascending merit order; the first threshold
        at which an admitted candidate pairs with any admitted candidate is
        the minimum, and every such pair is a witness.
        """
        if m < 2 or m % 2:
            raise DomainError(f"m must be even and at least 2, got {m}")
        started = time.monotonic()
        alphabet = Alphabet(alphabet)
        merit = MeritKind(merit)
        self._check_capacity(alphabet, m, budget)
        symbols = kernels.symbol_values(alphabet.symbols())
        indices, values, total = self._scan(alphabet, m, t, merit, None, jobs or settings.jobs)

        order = np.lexsort((indices, values))
        indices, values = indices[order], values[order]
        admitted = np.empty(0, dtype=np.int64)
        start = 0
        while start < len(values):
            stop = start
            while stop < len(values) and values[stop] - values[start] < _TOLERANCE:
                stop += 1
            group = indices[start:stop]
            admitted = np.concatenate([admitted, group])
            index_pairs = self._companion_indices(group, admitted, symbols, m, alphabet, strict_upper=False)
            if index_pairs:
                minimum = _clean(values[start])
                witnesses = tuple(
                    self._found(a, b, m, symbols, alphabet) for a, b in index_pairs[:self.max_reported_pairs]
                )
                elapsed = time.monotonic() - started
                logger.info(f"Minimum {merit.value} for m={m}, t={t}: {minimum} ({len(index_pairs)} pairs)")
                return MinConstraintResult(minimum, witnesses, len(index_pairs), total, elapsed)
            start = stop
        raise DomainError(f"no companion pair of length {m} over the {alphabet.value} alphabet")

    # -- annealing ---------------------------------------------------------

    def anneal_pair(
        self,
        half_len: int,
        alphabet: Alphabet = Alphabet.BINARY,
        budget: Optional[int] = None,
        rng_seed: int = 0,
        chains: int = 1,
        jobs: Optional[int] = None,
        time_limit: Optional[float] = None,
        stagnation_unit: Optional[str] = None,
    ) -> AnnealResult:
        """
        Minimize max{lambda_s0 + lambda_s1, 2 * lambda_s0s1} over binary half-length pairs.

        Chains get seeds spawned from rng_seed; the lowest cost wins, ties
        going to the lower chain index.

        Args:
            half_len: Length of s0 and s1
            budget: Cost evaluations per chain (settings.anneal_budget when omitted)
            rng_seed: Run seed
            chains: Independent chains
            jobs: Worker processes for the chains
            stagnation_unit: "sweep" or "evaluation"; a chain restarts after
                stagnation_factor * half_len idle units (settings default)

        Returns:
            Best AnnealResult found
        """
        if half_len < 2:
            raise DomainError(f"annealing needs half_len >= 2, got {half_len}")
        if Alphabet(alphabet) is not Alphabet.BINARY:
            raise DomainError("annealing supports the binary alphabet only")
        stagnation_unit = stagnation_unit or settings.anneal_stagnation_unit
        if stagnation_unit not in ("sweep", "evaluation"):
            raise DomainError(f"unknown stagnation unit {stagnation_unit!r}")
        budget = budget or settings.anneal_budget
        jobs = jobs or settings.jobs
        seeds = np.random.SeedSequence(rng_seed).spawn(chains)
        args = [
            (half_len, budget, seed, settings.anneal_cooling, settings.anneal_stagnation_factor,
             settings.anneal_history_every, index, time_limit, stagnation_unit)
            for index, seed in enumerate(seeds)
        ]

        logger.info("=" * 80)
        logger.info(f"Annealing half_len={half_len}: {chains} chain(s), budget {budget}, seed {rng_seed}")
        logger.info("=" * 80)
        if jobs > 1 and chains > 1:
            with ProcessPoolExecutor(max_workers=min(jobs, chains)) as pool:
                results = list(pool.map(_anneal_chain, *zip(*args)))
        else:
            results = [_anneal_chain(*a) for a in args]

        best = min(results, key=lambda r: (r.lambda_B, r.chain))
        exact = lambda_B(best.s0, best.s1)
        if exact != best.lambda_B:
            raise RuntimeError(f"annealing cost {best.lambda_B} disagrees with lambda_B {exact}")
        logger.info(f"Best lambda_B {best.lambda_B} from chain {best.chain} ({best.restarts} restarts)")
        return best

    # -- dispatch ----------------------------------------------------------

    def run(self, cfg: SearchConfig) -> SearchResult:
        if cfg.mode is SearchMode.EXHAUSTIVE:
            return self.exhaustive_search(cfg)

        started = time.monotonic()
        annealed = self.anneal_pair(
            cfg.m // 2,
            cfg.alphabet,
            budget=cfg.max_evaluations,
            rng_seed=cfg.rng_seed,
            chains=cfg.chains,
            jobs=cfg.jobs,
            time_limit=cfg.time_limit,
        )
        lifted = case1_lift(annealed.s0, annealed.s1)
        pair = FoundPair(lifted.c0, lifted.c1, merits(lifted.c0), merits(lifted.c1), lifted.pairing)
        return SearchResult(
            pairs=(pair,),
            count=1,
            examined=annealed.evaluations,
            elapsed=time.monotonic() - started,
            anneal=annealed,
        )


def _binary_cost(A0: np.ndarray, A1: np.ndarray, X: np.ndarray) -> int:
    return int(lambda_B_from_merits(
        int(np.abs(A0[1:]).max()), int(np.abs(A1[1:]).max()), int(np.abs(X).max())
    ))


def _anneal_chain(
    half_len: int,
    budget: int,
    seed: np.random.SeedSequence,
    cooling: float,
    stagnation_factor: int,
    history_every: int,
    chain: int = 0,
    time_limit: Optional[float] = None,
    stagnation_unit: str = "sweep",
) -> AnnealResult:
    """
    One Metropolis chain over single-element flips, alternating s0 and s1.

    The temperature starts at half_len and is multiplied by the cooling
    factor after every sweep of 2*half_len proposals. A run that goes
    stagnation_factor*half_len idle units without improving its own best
    restarts from a fresh random pair at the initial temperature. The unit
    is a sweep by default; "evaluation" counts single proposals instead.
    """
    rng = np.random.default_rng(seed)
    n = half_len
    signs = np.array([1, -1], dtype=np.int64)
    started = time.monotonic()

    def fresh():
        pair = [rng.choice(signs, n), rng.choice(signs, n)]
        acfs = [kernels.batch_acf(pair[0][np.newaxis, :])[0], kernels.batch_acf(pair[1][np.newaxis, :])[0]]
        return pair, acfs, kernels.cross_correlation(pair[0], pair[1])

    s, A, X = fresh()
    cost = _binary_cost(A[0], A[1], X)
    T0 = float(n)
    T = T0
    sweep = 2 * n
    idle_limit = stagnation_factor * n
    best_cost, best_s = cost, (s[0].copy(), s[1].copy())
    run_best, idle, improved = cost, 0, False
    per_evaluation = stagnation_unit == "evaluation"
    restarts = 0
    history = [(0, T, cost)]

    evaluations = 0
    while evaluations < budget:
        which = evaluations % 2
        k = int(rng.integers(n))
        x = s[which]
        value = int(x[k])
        new_A = A[which] + kernels.auto_flip_delta(x, k)
        if which == 0:
            region, delta_X = kernels.cross_flip_delta_first(value, s[1], k)
        else:
            region, delta_X = kernels.cross_flip_delta_second(value, s[0], k)
        new_X = X.copy()
        new_X[region] += delta_X
        other = A[1 - which]
        new_cost = _binary_cost(new_A, other, new_X) if which == 0 else _binary_cost(other, new_A, new_X)
        evaluations += 1

        delta = new_cost - cost
        if delta <= 0 or rng.random() < math.exp(-delta / T):
            x[k] = -value
            A[which] = new_A
            X = new_X
            cost = new_cost
            if cost < run_best:
                run_best, improved = cost, True
            if cost < best_cost:
                best_cost, best_s = cost, (s[0].copy(), s[1].copy())
                history.append((evaluations, T, cost))
                logger.debug(f"chain {chain}: cost {cost} at evaluation {evaluations}")

        if history_every and evaluations % history_every == 0:
            history.append((evaluations, T, cost))

        end_of_sweep = evaluations % sweep == 0
        if end_of_sweep:
            T *= cooling
        if per_evaluation or end_of_sweep:
            idle = 0 if improved else idle + 1
            improved = False
            if idle >= idle_limit:
                s, A, X = fresh()
                cost = _binary_cost(A[0], A[1], X)
                T, run_best, idle = T0, cost, 0
                restarts += 1
                history.append((evaluations, T, cost))
        if end_of_sweep:
            if time_limit is not None and time.monotonic() - started > time_limit:
                logger.info(f"chain {chain}: time limit reached after {evaluations} evaluations")
                break

    return AnnealResult(
        s0=Seq.of(best_s[0].tolist(), Alphabet.BINARY),
        s1=Seq.of(best_s[1].tolist(), Alphabet.BINARY),
        lambda_B=best_cost,
        history=tuple(history),
        evaluations=evaluations,
        restarts=restarts,
        chain=chain,
    )


# ---------------------------------------------------------------------------
# Lifts and verification
# ---------------------------------------------------------------------------

def _check_halves(s0: Seq, s1: Seq) -> None:
    if len(s0) != len(s1):
        raise DomainError(f"half-length sequences differ: {len(s0)} != {len(s1)}")


def case1_lift(s0: Seq, s1: Seq) -> CompanionPair:
    """c0 = s0 ⊗ s1, c1 = s1* ⊗ (-s0*)."""
    _check_halves(s0, s1)
    c0 = interleave(s0, s1)
    c1 = interleave(conjugate(s1), negate(conjugate(s0)))
    return CompanionPair(c0, c1, adjacent_pairing(len(c0)))


def case2_lift(s0: Seq, s1: Seq) -> CompanionPair:
    """c0 = s0 s1, c1 = s1* (-s0*)."""
    _check_halves(s0, s1)
    c0 = concat(s0, s1)
    c1 = concat(conjugate(s1), negate(conjugate(s0)))
    return CompanionPair(c0, c1, half_split_pairing(len(c0)))


def verify_pair(c0: Seq, c1: Seq, t: int, merit: MeritKind, bound: Optional[float]) -> bool:
    """Companion check plus the bound on every member of both R-sets."""
    if is_companion_pair(c0, c1) is None:
        return False
    if bound is None:
        return True
    merit = MeritKind(merit)
    for seed in (c0, c1):
        for member in rset(seed, t):
            if merits(member).value(merit) > bound + _TOLERANCE:
                return False
    return True


# Global service instance
search_service = SearchService()
