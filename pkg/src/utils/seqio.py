"""
Text grammar for sequences and matrices.

One sequence per line, whitespace-separated tokens:
    +  -  0  +j  -j  j  <int>  a+bi
Runs of + - 0 without separators ("+-+0") are accepted as one token per
character, which is how published tables print binary/ternary sequences.
'#' starts a comment; a blank line separates matrices.
"""

import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Union

from ..errors import ParseError
from .seqcore import Alphabet, Element, Seq, infer_alphabet

logger = logging.getLogger(__name__)

_SIMPLE = {
    "+": Element(1, 0),
    "-": Element(-1, 0),
    "0": Element(0, 0),
    "+j": Element(0, 1),
    "j": Element(0, 1),
    "-j": Element(0, -1),
}
_INT = re.compile(r"^[+-]?\d+$")
_GAUSS = re.compile(r"^([+-]?\d+)([+-]\d+)i$")
_IMAG = re.compile(r"^([+-]?\d*)i$")
_RUN = re.compile(r"^[+\-0]{2,}$")


def parse_token(token: str) -> List[Element]:
    """Elements denoted by one token (a compact run yields several)."""
    if token in _SIMPLE:
        return [_SIMPLE[token]]
    if _RUN.match(token):
        return [_SIMPLE[c] for c in token]
    if _INT.match(token):
        return [Element(int(token), 0)]
    m = _GAUSS.match(token)
    if m:
        return [Element(int(m.group(1)), int(m.group(2)))]
    m = _IMAG.match(token)
    if m:
        coeff = m.group(1)
        if coeff in ("", "+"):
            return [Element(0, 1)]
        if coeff == "-":
            return [Element(0, -1)]
        return [Element(0, int(coeff))]
    raise ParseError(f"unknown token {token!r}")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_seq(text: str, alphabet: Optional[Alphabet] = None) -> Seq:
    """Parse a single sequence line."""
    body = _strip_comment(text)
    if not body:
        raise ParseError("empty sequence")
    elems: List[Element] = []
    for token in body.split():
        elems.extend(parse_token(token))
    return Seq.of(elems, alphabet)


def parse_matrices(text: str, alphabet: Optional[Alphabet] = None) -> List[List[Seq]]:
    """Split text into blank-line separated blocks of row sequences."""
    blocks: List[List[Seq]] = []
    current: List[Seq] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            if current:
                blocks.append(current)
                current = []
            continue
        body = _strip_comment(raw)
        if not body:
            # comment-only lines do not end a block
            continue
        try:
            current.append(parse_seq(body, alphabet))
        except ParseError as e:
            raise ParseError(str(e), line=lineno) from e
    if current:
        blocks.append(current)
    if alphabet is None:
        # one alphabet per block so rows share a tag
        blocks = [_retag_block(block) for block in blocks]
    return blocks


def _retag_block(rows: List[Seq]) -> List[Seq]:
    tag = infer_alphabet(e for row in rows for e in row)
    return [row.retag(tag) for row in rows]


def parse_sequences(text: str, alphabet: Optional[Alphabet] = None) -> List[Seq]:
    """All sequence lines of a text, ignoring block structure."""
    return [row for block in parse_matrices(text, alphabet) for row in block]


def read_matrices(path: Union[str, Path], alphabet: Optional[Alphabet] = None) -> List[List[Seq]]:
    path = Path(path)
    logger.debug(f"Reading matrices from {path}")
    return parse_matrices(path.read_text(), alphabet)


def read_sequences(path: Union[str, Path], alphabet: Optional[Alphabet] = None) -> List[Seq]:
    return [row for block in read_matrices(path, alphabet) for row in block]


def format_element(e: Element) -> str:
    if e.im == 0 and e.re in (1, -1, 0):
        return {1: "+", -1: "-", 0: "0"}[e.re]
    if e.re == 0 and e.im in (1, -1):
        return "+j" if e.im == 1 else "-j"
    return f"{e.re}{e.im:+d}i"


def format_seq(a: Iterable[Element]) -> str:
    return " ".join(format_element(e) for e in a)


def format_matrix(rows: Iterable[Iterable[Element]]) -> str:
    return "\n".join(format_seq(row) for row in rows)


def format_matrices(blocks: Iterable[Iterable[Iterable[Element]]], header: Optional[str] = None) -> str:
    parts = [format_matrix(block) for block in blocks]
    text = "\n\n".join(parts) + "\n"
    if header:
        text = "".join(f"# {line}\n" for line in header.splitlines()) + text
    return text
