"""Kneading sequences, the parity-lexicographic order and RL-block encoding.

Sequences are kept as plain strings over ``"LCR"``; a C-terminated sequence
carries its single ``C`` in the last position.
"""

from dataclasses import dataclass
from enum import IntEnum
from itertools import accumulate, islice
from os.path import commonprefix
from typing import Iterator

from . import kernels
from .errors import MalformedSequenceError
from .map_core import SkewTentMap

DEFAULT_C_TOL = 1e-12
DEFAULT_PREFIX_LEN = 200

OPEN = "open-prefix"
C_TERMINATED = "C-terminated"

PERIODIC = "periodic"
L_INFINITY = "ends-in-L-infinity"
TRUNCATED = "truncated"

_TRANSLATE = bytes.maketrans(bytes([0, 1, 2]), b"LCR")


class Symbol(IntEnum):
    """Itinerary symbols with their base order ``L < C < R``."""

    L = kernels.CODE_L
    C = kernels.CODE_C
    R = kernels.CODE_R


_RANK = {"L": 0, "C": 1, "R": 2}


@dataclass(frozen=True)
class KneadingSequence:
    symbols: str
    kind: str

    def __post_init__(self):
        if self.kind == C_TERMINATED:
            if not self.symbols.endswith("C") or self.symbols.count("C") != 1:
                raise MalformedSequenceError(
                    f"C-terminated sequence must end in its only C: {self.symbols!r}"
                )
        elif self.kind == OPEN:
            if "C" in self.symbols:
                raise MalformedSequenceError(f"open prefix contains C: {self.symbols!r}")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def from_string(cls, text: str) -> "KneadingSequence":
        return cls(text, C_TERMINATED if text.endswith("C") else OPEN)

    @property
    def is_periodic(self) -> bool:
        return self.kind == C_TERMINATED

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return self.symbols

    def render(self) -> str:
        """``"RLC (periodic, n=2)"`` or ``"RLLLLL (open)"``."""
        if self.is_periodic:
            return f"{self.symbols} (periodic, n={len(self.symbols) - 1})"
        return f"{self.symbols} (open)"


def _itinerary(alpha, beta, n, c_tol):
    codes, length = kernels.kneading_codes(float(alpha), float(beta), int(n), float(c_tol))
    text = codes[:length].tobytes().translate(_TRANSLATE).decode("ascii")
    return KneadingSequence(text, C_TERMINATED if text.endswith("C") else OPEN)


def kneading_prefix(
    tmap: SkewTentMap, n: int = DEFAULT_PREFIX_LEN, c_tol: float = DEFAULT_C_TOL
) -> KneadingSequence:
    """First ``n`` itinerary symbols of the turning point ``alpha``.

    The symbol of ``T^k(alpha)`` is ``C`` when it lies within ``c_tol`` of
    ``alpha``; the sequence stops there.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if c_tol < 0:
        raise ValueError("c_tol must be >= 0")
    return _itinerary(tmap.alpha, tmap.beta, n, c_tol)


def parity_lex_compare(a, b) -> int:
    """Compare two itineraries in the parity-lexicographic order.

    Returns -1, 0 or 1. At the first differing position the base order
    ``L < C < R`` applies when the common prefix holds an even number of ``R``
    and is reversed otherwise. A sequence that is a prefix of the other compares
    equal.
    """
    sa, sb = str(a), str(b)
    if not sa or not sb:
        raise ValueError("cannot compare empty sequences")
    j = len(commonprefix((sa, sb)))
    if j == min(len(sa), len(sb)):
        return 0
    diff = _RANK[sa[j]] - _RANK[sb[j]]
    sign = 1 if diff > 0 else -1
    if sa.count("R", 0, j) % 2:
        sign = -sign
    return sign


@dataclass(frozen=True)
class RLBlocks:
    """Exponents of the word ``R L^m1 R L^m2 R ...``.

    ``m`` holds the fully known blocks. The tail is one of

    * ``periodic``: ``m`` is one period, repeated forever;
    * ``ends-in-L-infinity``: after ``m`` an infinite run of ``L`` follows, so
      block ``len(m) + 1`` never closes;
    * ``truncated``: the word is only known up to ``m`` plus ``partial``
      trailing ``L`` symbols of the next, still open, block.
    """

    m: tuple
    tail: str
    partial: int = 0

    def __post_init__(self):
        if any(k < 0 for k in self.m):
            raise MalformedSequenceError("block exponents must be nonnegative")
        if self.tail == PERIODIC and not self.m:
            raise MalformedSequenceError("periodic blocks need a nonempty period")
        if self.tail not in (PERIODIC, L_INFINITY, TRUNCATED):
            raise ValueError(f"unknown tail {self.tail!r}")

    @property
    def period(self):
        return len(self.m) if self.tail == PERIODIC else None

    @property
    def finite_blocks(self):
        """Number of usable blocks, or None when unlimited (periodic)."""
        return None if self.tail == PERIODIC else len(self.m)

    def exponents(self) -> Iterator[int]:
        if self.tail == PERIODIC:
            while True:
                yield from self.m
        else:
            yield from self.m

    def cumulative(self, count: int) -> list:
        """``m1, m1+m2, ...`` for the first ``count`` blocks that exist."""
        return list(accumulate(islice(self.exponents(), count)))

    def word(self, length: int) -> str:
        """The first ``length`` symbols of the encoded word."""
        parts = []
        size = 0
        for mk in self.exponents():
            parts.append("R" + "L" * mk)
            size += mk + 1
            if size >= length:
                break
        else:
            if self.tail == L_INFINITY:
                parts.append("R" + "L" * length)
            elif self.tail == TRUNCATED:
                parts.append("R" + "L" * self.partial)
        return "".join(parts)[:length]


def rl_blocks(seq, max_blocks: int = 10_000) -> RLBlocks:
    """Encode a kneading sequence as RL blocks.

    A C-terminated sequence becomes a periodic word after replacing its C by L.
    An open prefix whose symbols after the leading R are all L encodes
    ``R L^infinity``; any other open prefix gives its complete blocks (at most
    ``max_blocks``) with the trailing open block recorded as ``partial``.
    """
    seq = seq if isinstance(seq, KneadingSequence) else KneadingSequence.from_string(seq)
    text = seq.symbols
    if not text.startswith("R"):
        raise MalformedSequenceError(f"kneading word must start with R: {text[:20]!r}")
    if seq.is_periodic:
        blocks = [len(piece) for piece in text.replace("C", "L")[1:].split("R")]
        return RLBlocks(tuple(blocks), PERIODIC)
    pieces = text[1:].split("R")
    if len(pieces) == 1:
        return RLBlocks((), L_INFINITY)
    complete = [len(p) for p in pieces[:-1]]
    partial = len(pieces[-1])
    if len(complete) > max_blocks:
        complete = complete[:max_blocks]
        partial = 0
    return RLBlocks(tuple(complete), TRUNCATED, partial)
