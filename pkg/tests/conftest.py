"""
Shared fixtures: published example sequences, seeded generators and a
random corpus of companion pairs.
"""

import sys
from pathlib import Path
from typing import Tuple

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.services.complementary import make_companion
from src.services.construct import BuildRecipe, ExtensionMode
from src.utils.seqcore import Alphabet, Seq, f_i
from src.utils.seqio import parse_seq


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run slow reproductions.")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def quad_pair():
    """Quadriphase companion pair behind the 4 x 4 example matrices."""
    return parse_seq("+ j - j"), parse_seq("-j - -j +")


@pytest.fixture
def ternary_pair():
    c0 = parse_seq("+--+++0+")
    return c0, f_i(c0)


@pytest.fixture
def golay_pairs():
    return [
        (parse_seq("++"), parse_seq("+-")),
        (parse_seq("+++-"), parse_seq("++-+")),
        (parse_seq("+++-++-+"), parse_seq("+++---+-")),
    ]


def random_seq(rng, alphabet: Alphabet, n: int) -> Seq:
    symbols = alphabet.symbols()
    return Seq(tuple(symbols[int(i)] for i in rng.integers(len(symbols), size=n)), alphabet)


def random_companion(rng, alphabet: Alphabet, m: int) -> Tuple[Seq, Seq]:
    c0 = random_seq(rng, alphabet, m)
    perm = rng.permutation(m)
    pairing = [(int(perm[2 * k]), int(perm[2 * k + 1])) for k in range(m // 2)]
    signs = rng.integers(2, size=m // 2).tolist()
    return c0, make_companion(c0, pairing, signs)


@pytest.fixture
def random_companions(rng):
    """(c0, c1) over binary, ternary and quad alphabets with random pairings and sign bits."""
    pairs = []
    for alphabet in (Alphabet.BINARY, Alphabet.TERNARY, Alphabet.QUAD):
        for m in (2, 4, 6, 8):
            for _ in range(4):
                pairs.append(random_companion(rng, alphabet, m))
    return pairs


@pytest.fixture(scope="session")
def companion_corpus():
    """204 seeded (c0, c1, recipe) triples: t <= 2, p <= 1 below t = 2, random modes per step."""
    rng = np.random.default_rng(7)
    modes = (ExtensionMode.CONCAT, ExtensionMode.INTERLEAVE)
    corpus = []
    for i in range(204):
        alphabet = (Alphabet.BINARY, Alphabet.TERNARY, Alphabet.QUAD)[i % 3]
        m = (2, 4, 6, 8)[(i // 3) % 4]
        c0, c1 = random_companion(rng, alphabet, m)
        t = int(rng.integers(3))
        p = int(rng.integers(2)) if t < 2 else 0
        recipe = BuildRecipe(
            tuple(modes[int(k)] for k in rng.integers(2, size=p)),
            tuple(modes[int(k)] for k in rng.integers(2, size=t)),
        )
        corpus.append((c0, c1, recipe))
    return corpus
