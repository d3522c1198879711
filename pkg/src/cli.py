"""
Command line front end.

    compseq build --seed golay:2 --p 2 --length-mode interleave
    compseq analyze matrix.txt --json
    compseq bounds --m 62
    compseq search --m 8 --minimize lambdaA
    compseq search --m 126 --anneal --budget 5000000 --seed 42
    compseq lift --case 1 --s0 s0.txt --s1 s1.txt
    compseq verify --mo sets.txt
    compseq selftest

Exit codes: 0 success, 1 verification failure, 2 usage/domain/parse error,
3 capability error.
"""

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from pydantic import BaseModel, ValidationError

from .config import settings
from .errors import CapabilityError, CompseqError
from .schemas import ErrorPayload
from .services.complementary import SeqMatrix
from .services.construct import BuildRecipe, ExtensionMode
from .services.search import SearchConfig, SearchMode
from .utils.seqcore import Alphabet, MeritKind
from .utils.seqio import format_matrices, read_matrices, read_sequences
from .workflows.operations import operations
from .workflows.reproduction import ReproductionSuite
from .workflows.verifier import verifier

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPABILITY = 3


class UsageError(CompseqError):
    """Flag combination the parser cannot express."""


def _number(text: str):
    """Exact rational from '3', '7/2' or '2.5'."""
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    return int(value) if value.denominator == 1 else value


def _budget(text: str) -> int:
    """Integer budget; accepts scientific notation such as 5e6."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value < 1 or value != int(value):
        raise argparse.ArgumentTypeError(f"budget must be a positive integer, got {text!r}")
    return int(value)


def _modes(text: Optional[str], count: int, flag: str) -> List[ExtensionMode]:
    if count == 0:
        return []
    names = [part.strip() for part in (text or "concat").split(",") if part.strip()]
    try:
        modes = [ExtensionMode(name) for name in names]
    except ValueError:
        raise UsageError(f"{flag}: expected concat or interleave, got {text!r}")
    if len(modes) == 1:
        return modes * count
    if len(modes) != count:
        raise UsageError(f"{flag} lists {len(modes)} modes for {count} steps")
    return modes


def _recipe(args: argparse.Namespace) -> BuildRecipe:
    if args.p < 0 or args.t < 0:
        raise UsageError(f"--p and --t must be nonnegative, got {args.p} and {args.t}")
    return BuildRecipe(
        tuple(_modes(args.length_mode, args.p, "--length-mode")),
        tuple(_modes(args.size_mode, args.t, "--size-mode")),
    )


def _one_matrix(path: str) -> SeqMatrix:
    """All blocks of a file, side by side, as one matrix."""
    blocks = [SeqMatrix(tuple(rows)) for rows in read_matrices(path)]
    if not blocks:
        raise UsageError(f"{path} holds no matrix")
    return blocks[0].hstack(*blocks[1:]) if len(blocks) > 1 else blocks[0]


def _emit(payload: BaseModel, args: argparse.Namespace, text: str, out: TextIO) -> None:
    if args.json:
        out.write(payload.model_dump_json(indent=2) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _table(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def cmd_build(args: argparse.Namespace, out: TextIO) -> int:
    if not args.seed:
        raise UsageError("build needs --seed")
    c0, c1 = operations.seed_pair(args.seed)
    recipe = _recipe(args)
    mo, payload = operations.build(c0, c1, recipe, include_sets=args.json)
    header = (
        f"{mo.k} sets of {mo.m}x{mo.set_width} from length {len(c0)} seeds, "
        f"p={recipe.p} ({','.join(m.value for m in recipe.length_modes) or '-'}), "
        f"t={recipe.t} ({','.join(m.value for m in recipe.size_modes) or '-'})"
    )
    text = format_matrices([s.rows for s in mo.sets()], header=header)

    if args.out:
        target = Path(args.out)
        target.write_text(text)
        target.with_suffix(".json").write_text(payload.model_dump_json(indent=2) + "\n")
        logger.info(f"Wrote {target} and {target.with_suffix('.json')}")
    _emit(payload, args, text, out)

    verified = payload.verified
    return EXIT_OK if verified.complementary and verified.mo and verified.column_membership else EXIT_VERIFY_FAILED


def cmd_analyze(args: argparse.Namespace, out: TextIO) -> int:
    if args.matrix and args.seed:
        raise UsageError("analyze takes a matrix file or --seed, not both")
    if args.matrix:
        payload = operations.analyze(_one_matrix(args.matrix))
    elif args.seed:
        c0, c1 = operations.seed_pair(args.seed)
        payload = operations.analyze_recipe(c0, c1, _recipe(args))
    else:
        raise UsageError("analyze needs a matrix file or --seed")

    key_max, key_sum = ("lambda_P", "S_P") if args.periodic else ("lambda_A", "S_A")
    rows = [(j, col[key_max], col[key_sum], z)
            for j, (col, z) in enumerate(zip(payload.per_column, payload.zero_counts))]
    summary = (
        f"{payload.columns} columns: {key_max}_u = {getattr(payload, key_max + '_u')}, "
        f"{key_sum}_u = {getattr(payload, key_sum + '_u')}"
    )
    _emit(payload, args, summary + "\n" + _table(rows, ("column", key_max, key_sum, "zeros")), out)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace, out: TextIO) -> int:
    s0 = s1 = None
    if bool(args.s0) != bool(args.s1):
        raise UsageError("--s0 and --s1 go together")
    if args.s0:
        (s0,), (s1,) = read_sequences(args.s0), read_sequences(args.s1)
    payload = operations.bounds(args.m, args.t, args.E, args.lambda0, args.S0, s0, s1)
    lines = [f"{k}: {v}" for k, v in payload.bounds.items() if v is not None]
    if payload.thresholds:
        lines += [f"{k}: {v}" for k, v in payload.thresholds.items() if k != "m"]
    _emit(payload, args, "\n".join(lines), out)
    return EXIT_OK


def cmd_search(args: argparse.Namespace, out: TextIO) -> int:
    bound, merit = None, MeritKind(args.minimize) if args.minimize else MeritKind.LAMBDA_A
    if args.constraint and args.minimize:
        raise UsageError("--constraint and --minimize are exclusive")
    if args.constraint:
        name, _, value = args.constraint.partition(":")
        try:
            merit, bound = MeritKind(name), float(value)
        except ValueError:
            raise UsageError(f"--constraint expects <merit>:<bound>, got {args.constraint!r}")

    m = args.m
    if args.anneal:
        if args.half_len:
            m = 2 * args.half_len
        if m is None:
            raise UsageError("--anneal needs --m or --half-len")
    elif m is None:
        raise UsageError("search needs --m")

    cfg = SearchConfig(
        alphabet=Alphabet(args.alphabet),
        m=m,
        t=args.t,
        merit=merit,
        bound=bound,
        mode=SearchMode.ANNEAL if args.anneal else SearchMode.EXHAUSTIVE,
        max_candidates=args.max_candidates,
        max_evaluations=args.budget,
        time_limit=args.time_limit,
        chains=args.chains,
        rng_seed=args.seed,
        jobs=args.jobs or settings.jobs,
    )
    payload = operations.search(cfg)

    lines = [f"examined {payload.examined} in {payload.elapsed:.2f}s, {payload.count} pair(s)"]
    if payload.minimum is not None:
        lines.append(f"minimum {cfg.merit.value} = {payload.minimum}")
    if payload.anneal:
        lines.append(
            f"annealed lambda_B = {payload.anneal.lambda_B} (chain {payload.anneal.chain}, "
            f"{payload.anneal.restarts} restarts)"
        )
    for pair in payload.pairs:
        lines.append(f"{pair.c0} | {pair.c1}")
    if payload.truncated:
        lines.append(f"... {payload.count - len(payload.pairs)} more not listed")
    _emit(payload, args, "\n".join(lines), out)
    return EXIT_OK


def cmd_lift(args: argparse.Namespace, out: TextIO) -> int:
    if args.pair:
        rows = read_sequences(args.pair)
        if len(rows) != 2:
            raise UsageError(f"{args.pair} must hold s0 and s1, got {len(rows)} sequences")
        s0, s1 = rows
    elif args.s0 and args.s1:
        (s0,), (s1,) = read_sequences(args.s0), read_sequences(args.s1)
    else:
        raise UsageError("lift needs --pair or both --s0 and --s1")
    payload = operations.lift(args.case, s0, s1)
    text = "\n".join([
        payload.c0,
        payload.c1,
        f"lambda_u = {payload.lambda_u}, lambda_B = {payload.lambda_B}",
        f"decomposition {'holds' if payload.decomposition_holds else f'fails at {payload.decomposition_failure}'}",
    ])
    _emit(payload, args, text, out)
    return EXIT_OK if payload.decomposition_holds else EXIT_VERIFY_FAILED


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    for predicate in ("mo", "complementary", "mates", "companion", "golay"):
        path = getattr(args, predicate)
        if path:
            payload = verifier.check(predicate, Path(path).read_text())
            break

    text = f"{payload.predicate}: {str(payload.verdict).lower()}"
    if payload.witness:
        text += f" {payload.witness}"
    _emit(payload, args, text, out)
    return EXIT_OK if payload.verdict else EXIT_VERIFY_FAILED


def cmd_selftest(args: argparse.Namespace, out: TextIO) -> int:
    payload = ReproductionSuite(max_search_m=args.max_search_m).run()
    rows = [("PASS" if i.passed else "FAIL", i.name, f"{i.elapsed:.2f}s", i.detail) for i in payload.items]
    _emit(payload, args, _table(rows, ("", "check", "time", "detail")), out)
    return EXIT_OK if payload.failed == 0 else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the versioned JSON payload.")

    recipe = argparse.ArgumentParser(add_help=False)
    recipe.add_argument("--seed", help="Seed pair: a file with c0 (and c1) or golay:<q>.")
    recipe.add_argument("--p", type=int, default=0, help="Length-extension steps.")
    recipe.add_argument("--t", type=int, default=0, help="Size-extension steps.")
    recipe.add_argument("--length-mode", help="concat or interleave, or a comma list with one mode per step.")
    recipe.add_argument("--size-mode", help="concat or interleave, or a comma list with one mode per step.")

    parser = argparse.ArgumentParser(
        prog="compseq",
        description="Complementary set matrices from companion pairs: build, analyze, bound and search.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("build", parents=[common, recipe], help="Build an MO collection.")
    p.add_argument("--out", help="Write the sets here plus a .json sidecar.")
    p.set_defaults(handler=cmd_build)

    p = verbs.add_parser("analyze", parents=[common, recipe], help="Column correlation report.")
    p.add_argument("matrix", nargs="?", help="Matrix file; blocks are placed side by side.")
    p.add_argument("--periodic", action="store_true", help="Show periodic merits in the table.")
    p.set_defaults(handler=cmd_analyze)

    p = verbs.add_parser("bounds", parents=[common], help="Closed-form bounds and Welch thresholds.")
    p.add_argument("--m", type=int, required=True, help="Companion length (even).")
    p.add_argument("--t", type=int, default=0, help="Size-extension steps.")
    p.add_argument("--E", type=_number, help="Column energy (defaults to m).")
    p.add_argument("--lambda0", type=_number, help="Companion lambda^A bound.")
    p.add_argument("--S0", type=_number, help="Companion S^A bound.")
    p.add_argument("--s0", help="Half-length sequence file for lambda_B.")
    p.add_argument("--s1", help="Half-length sequence file for lambda_B.")
    p.set_defaults(handler=cmd_bounds)

    p = verbs.add_parser("search", parents=[common], help="Search for companion pairs.")
    p.add_argument("--alphabet", default="binary", choices=[a.value for a in Alphabet])
    p.add_argument("--m", type=int, help="Companion length (even).")
    p.add_argument("--t", type=int, default=0, help="R-set level of the constraint.")
    p.add_argument("--constraint", help="<merit>:<bound>, e.g. lambdaA:2.")
    p.add_argument("--minimize", choices=[k.value for k in MeritKind], help="Find the smallest achievable merit.")
    p.add_argument("--max-candidates", type=_budget, help="Refuse enumerations above this size.")
    p.add_argument("--anneal", action="store_true", help="Anneal a half-length pair and lift it.")
    p.add_argument("--half-len", type=int, help="Half length for --anneal.")
    p.add_argument("--budget", type=_budget, help="Cost evaluations per annealing chain.")
    p.add_argument("--time-limit", type=float, help="Seconds per annealing chain.")
    p.add_argument("--chains", type=int, default=1, help="Independent annealing chains.")
    p.add_argument("--seed", type=int, default=0, help="RNG seed.")
    p.add_argument("--jobs", type=int, help="Worker processes (COMPSEQ_JOBS).")
    p.set_defaults(handler=cmd_search)

    p = verbs.add_parser("lift", parents=[common], help="Lift a half-length pair to a companion pair.")
    p.add_argument("--case", type=int, choices=(1, 2), required=True)
    p.add_argument("--pair", help="File with s0 and s1.")
    p.add_argument("--s0", help="File with s0.")
    p.add_argument("--s1", help="File with s1.")
    p.set_defaults(handler=cmd_lift)

    p = verbs.add_parser("verify", parents=[common], help="Check a predicate on sequences or matrices.")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--mo", metavar="FILE", help="Blocks are the sets of an MO collection.")
    which.add_argument("--complementary", metavar="FILE", help="One complementary set matrix.")
    which.add_argument("--mates", metavar="FILE", help="Two blocks checked as mates.")
    which.add_argument("--companion", metavar="FILE", help="c0 and c1.")
    which.add_argument("--golay", metavar="FILE", help="A Golay pair, or one sequence to find a mate for.")
    p.set_defaults(handler=cmd_verify)

    p = verbs.add_parser("selftest", parents=[common], help="Reproduce the bundled reference data.")
    p.add_argument("--max-search-m", type=int, default=8, help="Largest m re-derived by exhaustive search.")
    p.set_defaults(handler=cmd_selftest)

    return parser


def run(argv: Sequence[str], out: Optional[TextIO] = None) -> int:
    """
    Parse argv, run one verb and return its exit code.

    Args:
        argv: Arguments without the program name
        out: Output stream (stdout when omitted)

    Returns:
        Exit code
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        return args.handler(args, out)
    except CapabilityError as e:
        logger.error(f"{args.verb}: {e}")
        code, message = EXIT_CAPABILITY, str(e)
    except (CompseqError, ValidationError, ValueError, FileNotFoundError) as e:
        logger.error(f"{args.verb}: {e}", exc_info=logger.isEnabledFor(logging.DEBUG))
        code, message = EXIT_USAGE, str(e)

    if getattr(args, "json", False):
        out.write(ErrorPayload(verb=args.verb, error=message, exit_code=code).model_dump_json(indent=2) + "\n")
    return code
