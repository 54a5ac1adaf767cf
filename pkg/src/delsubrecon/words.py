"""Words over Z_q, their runs, and support of differences.

All public positions are 1-based.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from itertools import groupby

from .errors import DimensionError, EmptySupportError, WordIndexError

MAX_Q = 36
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True, order=True)
class Word:
    """A q-ary sequence. Ordering is lexicographic on the symbols."""

    symbols: tuple[int, ...]
    q: int = 2

    def __post_init__(self):
        if not isinstance(self.symbols, tuple):
            object.__setattr__(self, "symbols", tuple(self.symbols))
        if not 2 <= self.q <= MAX_Q:
            raise DimensionError(f"alphabet size must lie in [2, {MAX_Q}], got {self.q}")
        if not self.symbols:
            raise DimensionError("a word has length at least 1")
        for s in self.symbols:
            if not 0 <= s < self.q:
                raise DimensionError(f"symbol {s} outside Z_{self.q}")

    @classmethod
    def parse(cls, text: str, q: int = 2) -> "Word":
        text = text.strip().lower()
        try:
            symbols = tuple(_DIGITS.index(c) for c in text)
        except ValueError:
            raise DimensionError(f"cannot parse word {text!r}") from None
        return cls(symbols, q)

    @classmethod
    def from_code(cls, code: int, n: int, q: int) -> "Word":
        out = [0] * n
        for i in range(n - 1, -1, -1):
            code, out[i] = divmod(code, q)
        return cls(tuple(out), q)

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def code(self) -> int:
        """Integer value with the first symbol most significant.

        Numeric order of codes equals lexicographic order of words.
        """
        c = 0
        for s in self.symbols:
            c = c * self.q + s
        return c

    def __len__(self):
        return len(self.symbols)

    def __getitem__(self, pos):
        return self.symbols[pos]

    def __str__(self):
        return "".join(_DIGITS[s] for s in self.symbols)

    def __repr__(self):
        return f"Word({str(self)!r}, q={self.q})"


def word(text: str, q: int = 2) -> Word:
    """Shorthand for ``Word.parse``."""
    return Word.parse(text, q)


@dataclass(frozen=True)
class RunProfile:
    boundaries: tuple[int, ...]
    run_symbols: tuple[int, ...]
    run_lengths: tuple[int, ...]
    q: int = 2

    @property
    def m(self) -> int:
        return len(self.boundaries)

    def expand(self) -> Word:
        out = []
        for s, k in zip(self.run_symbols, self.run_lengths):
            out.extend([s] * k)
        return Word(tuple(out), self.q)


@dataclass(frozen=True)
class SupportDiff:
    indices: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.indices)


def _check_pair(x: Word, y: Word):
    if x.q != y.q:
        raise DimensionError(f"alphabet mismatch: q={x.q} vs q={y.q}")
    if len(x) != len(y):
        raise DimensionError(f"length mismatch: {len(x)} vs {len(y)}")


def hamming(x: Word, y: Word) -> int:
    _check_pair(x, y)
    return sum(a != b for a, b in zip(x.symbols, y.symbols))


def support_diff(x: Word, y: Word) -> SupportDiff:
    _check_pair(x, y)
    idx = tuple(i + 1 for i, (a, b) in enumerate(zip(x.symbols, y.symbols)) if a != b)
    if not idx:
        raise EmptySupportError("words are equal; the support of their difference is empty")
    return SupportDiff(idx)


def delete_at(x: Word, j: int) -> Word:
    n = len(x)
    if n < 2:
        raise WordIndexError("cannot delete from a word of length 1")
    if not 1 <= j <= n:
        raise WordIndexError(f"position {j} outside [1, {n}]")
    s = x.symbols
    return Word(s[: j - 1] + s[j:], x.q)


def run_profile(x: Word) -> RunProfile:
    boundaries, symbols, lengths = [], [], []
    end = 0
    for sym, grp in groupby(x.symbols):
        k = sum(1 for _ in grp)
        end += k
        boundaries.append(end)
        symbols.append(sym)
        lengths.append(k)
    return RunProfile(tuple(boundaries), tuple(symbols), tuple(lengths), x.q)


def run_index_of(x: Word, pos: int, profile: RunProfile | None = None) -> int:
    """Index (1-based) of the run containing position ``pos``."""
    if not 1 <= pos <= len(x):
        raise WordIndexError(f"position {pos} outside [1, {len(x)}]")
    profile = profile or run_profile(x)
    return bisect_left(profile.boundaries, pos) + 1
