"""Error-ball enumeration and closed-form ball and intersection sizes.

Enumerated balls are returned as :class:`WordSet` objects, which store the
words as a sorted array of integer codes (first symbol most significant), so
numeric order is lexicographic order and set algebra is vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator

import numpy as np

from .errors import DimensionError, DomainError, GuardrailError, SpecError
from .words import Word

INT64_MAX = 2**63 - 1
# Enumeration guardrail: q * n must not exceed this unless forced.
GUARD_QN = 48


def enumeration_allowed(n: int, q: int) -> bool:
    return q * n <= GUARD_QN


def _guard(n: int, q: int, force: bool):
    if q**n > INT64_MAX:
        raise GuardrailError(f"q^n = {q}^{n} does not fit the 64-bit word encoding")
    if not force and not enumeration_allowed(n, q):
        raise GuardrailError(
            f"enumeration refused for n={n}, q={q} (q*n > {GUARD_QN}); pass force=True to override"
        )


def _powers(n: int, q: int) -> np.ndarray:
    return q ** np.arange(n - 1, -1, -1, dtype=np.int64)


class WordSet:
    """Deduplicated, canonically sorted set of equal-length words."""

    __slots__ = ("codes", "length", "q")

    def __init__(self, codes, length: int, q: int, *, presorted: bool = False):
        arr = np.asarray(codes, dtype=np.int64)
        if not presorted:
            arr = np.unique(arr)
        arr.setflags(write=False)
        self.codes = arr
        self.length = length
        self.q = q

    @classmethod
    def from_words(cls, words: Iterable[Word], length: int | None = None, q: int | None = None):
        words = list(words)
        if words:
            length = length if length is not None else len(words[0])
            q = q if q is not None else words[0].q
        if length is None or q is None:
            raise DimensionError("length and q are required for an empty WordSet")
        for w in words:
            if len(w) != length or w.q != q:
                raise DimensionError("all members of a WordSet share length and alphabet")
        return cls([w.code for w in words], length, q)

    @classmethod
    def empty(cls, length: int, q: int):
        return cls(np.empty(0, dtype=np.int64), length, q, presorted=True)

    def _same_space(self, other: "WordSet"):
        if self.length != other.length or self.q != other.q:
            raise DimensionError("WordSets over different spaces")

    def __len__(self):
        return int(self.codes.size)

    def __iter__(self) -> Iterator[Word]:
        for c in self.codes.tolist():
            yield Word.from_code(c, self.length, self.q)

    def __contains__(self, w: Word):
        if len(w) != self.length or w.q != self.q:
            return False
        c = w.code
        i = np.searchsorted(self.codes, c)
        return bool(i < self.codes.size and self.codes[i] == c)

    def __eq__(self, other):
        if not isinstance(other, WordSet):
            return NotImplemented
        return (
            self.length == other.length
            and self.q == other.q
            and np.array_equal(self.codes, other.codes)
        )

    __hash__ = None

    def __or__(self, other: "WordSet") -> "WordSet":
        self._same_space(other)
        return WordSet(np.union1d(self.codes, other.codes), self.length, self.q, presorted=True)

    def __and__(self, other: "WordSet") -> "WordSet":
        self._same_space(other)
        out = np.intersect1d(self.codes, other.codes, assume_unique=True)
        return WordSet(out, self.length, self.q, presorted=True)

    def __sub__(self, other: "WordSet") -> "WordSet":
        self._same_space(other)
        out = np.setdiff1d(self.codes, other.codes, assume_unique=True)
        return WordSet(out, self.length, self.q, presorted=True)

    def issubset(self, other: "WordSet") -> bool:
        self._same_space(other)
        return bool(np.isin(self.codes, other.codes, assume_unique=True).all())

    def isdisjoint(self, other: "WordSet") -> bool:
        return len(self & other) == 0

    def words(self) -> list[Word]:
        return list(self)

    def strings(self) -> list[str]:
        return [str(w) for w in self]

    def __repr__(self):
        shown = ", ".join(self.strings()[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"WordSet(n={self.length}, q={self.q}, size={len(self)}: {{{shown}{more}}})"


def union_all(sets: Iterable[WordSet], length: int, q: int) -> WordSet:
    parts = [s.codes for s in sets]
    if not parts:
        return WordSet.empty(length, q)
    return WordSet(np.concatenate(parts), length, q)


@dataclass(frozen=True)
class BallSpec:
    """Exactly ``t`` deletions followed by at most ``s`` substitutions."""

    t: int
    s: int

    def __post_init__(self):
        if self.t < 0 or self.s < 0:
            raise SpecError("t and s are nonnegative")

    def check(self, n: int):
        if not self.t + self.s < n:
            raise SpecError(f"t + s < n violated: t={self.t}, s={self.s}, n={n}")


@lru_cache(maxsize=256)
def _offset_patterns(n: int, q: int, s: int):
    """Sparse table of all offset vectors in Z_q^n of weight <= s.

    Returns (positions, offsets, delta) where row r of positions/offsets
    lists the touched coordinates (padded with offset 0) and
    delta[i, a, e] is the code change when symbol a at position i moves by e.
    """
    width = max(1, min(s, n))
    pos_rows = [[0] * width]
    off_rows = [[0] * width]
    nonzero = range(1, q)
    for k in range(1, min(s, n) + 1):
        for pos in combinations(range(n), k):
            for vals in product(nonzero, repeat=k):
                pos_rows.append(list(pos) + [0] * (width - k))
                off_rows.append(list(vals) + [0] * (width - k))
    positions = np.array(pos_rows, dtype=np.intp)
    offsets = np.array(off_rows, dtype=np.intp)
    pw = _powers(n, q)
    a = np.arange(q)[:, None]
    e = np.arange(q)[None, :]
    step = (a + e) % q - a
    delta = pw[:, None, None] * step[None, :, :]
    for arr in (positions, offsets, delta):
        arr.setflags(write=False)
    return positions, offsets, delta


def _sub_ball_codes(symbols: tuple[int, ...], q: int, s: int) -> np.ndarray:
    n = len(symbols)
    positions, offsets, delta = _offset_patterns(n, q, s)
    u = np.asarray(symbols, dtype=np.intp)
    base = int(u @ _powers(n, q))
    return base + delta[positions, u[positions], offsets].sum(axis=1)


def enum_sub_ball(u: Word, s: int, *, force: bool = False) -> WordSet:
    """All words within Hamming distance ``s`` of ``u``."""
    if s < 0:
        raise SpecError("s must be nonnegative")
    _guard(len(u), u.q, force)
    # distinct offset patterns give distinct words, so sorting suffices
    return WordSet(np.sort(_sub_ball_codes(u.symbols, u.q, s)), len(u), u.q, presorted=True)


def _deletion_results(x: Word, t: int) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    syms = x.symbols
    for dele in combinations(range(len(syms)), t):
        drop = set(dele)
        sub = tuple(c for i, c in enumerate(syms) if i not in drop)
        if sub not in seen:
            seen.add(sub)
            out.append(sub)
    return out


def enum_del_ball(x: Word, t: int, *, force: bool = False) -> WordSet:
    """All length-(n - t) subsequences of ``x``."""
    n = len(x)
    if not 0 <= t < n:
        raise SpecError(f"deletion count must lie in [0, {n - 1}], got {t}")
    _guard(n, x.q, force)
    subs = _deletion_results(x, t)
    pw = _powers(n - t, x.q)
    return WordSet(np.asarray(subs, dtype=np.int64) @ pw, n - t, x.q)


def enum_ds_ball(x: Word, spec: BallSpec, *, force: bool = False) -> WordSet:
    """B^DS_{t,s}(x): exactly t deletions then at most s substitutions."""
    n = len(x)
    spec.check(n)
    _guard(n, x.q, force)
    subs = _deletion_results(x, spec.t)
    codes = np.concatenate([_sub_ball_codes(sub, x.q, spec.s) for sub in subs])
    return WordSet(codes, n - spec.t, x.q)


# --- closed forms -----------------------------------------------------------


def _checked(value: int) -> int:
    if value > INT64_MAX:
        raise OverflowError(f"value {value} exceeds the 64-bit range")
    return value


def xi_0s(q: int, n: int, s: int) -> int:
    """Size of a radius-s substitution ball in Z_q^n."""
    if q < 2 or n < 0 or s < 0:
        raise DomainError("need q >= 2, n >= 0, s >= 0")
    return _checked(sum(comb(n, k) * (q - 1) ** k for k in range(s + 1)))


@dataclass(frozen=True)
class XiQuery:
    q: int
    n: int
    d: int
    s: int

    def evaluate(self) -> int:
        return xi_ds(self)


def _eta(q, n, d, s, i, j):
    top = s - d + min(i, j)
    if top < 0:
        return 0
    return (q - 2) ** (d - i - j) * sum(comb(n - d, k) * (q - 1) ** k for k in range(top + 1))


def xi_ds(query: XiQuery | int, n: int | None = None, d: int | None = None, s: int | None = None) -> int:
    """Intersection size of two radius-s substitution balls at distance d.

    Accepts either an :class:`XiQuery` or the four integers ``q, n, d, s``.
    """
    if isinstance(query, XiQuery):
        q, n, d, s = query.q, query.n, query.d, query.s
    else:
        q = query
    if q < 2:
        raise DomainError("q >= 2 required")
    if not 1 <= d <= 2 * s:
        raise DomainError(f"d must lie in [1, 2s] = [1, {2 * s}], got d={d}")
    if n < d:
        raise DomainError(f"n >= d required, got n={n}, d={d}")

    if q == 2:
        lo = 0 if d <= s else d - s
        hi = d if d <= s else s
        total = 0
        for i in range(lo, hi + 1):
            top = s - d + min(i, d - i)
            if top >= 0:
                total += comb(d, i) * sum(comb(n - d, k) for k in range(top + 1))
        return _checked(total)

    total = 0
    if d <= s:
        for i in range(0, d + 1):
            for j in range(0, d - i + 1):
                total += comb(d, i) * comb(d - i, j) * _eta(q, n, d, s, i, j)
    else:
        for i in range(d - s, s + 1):
            for j in range(d - s, d - i + 1):
                total += comb(d, i) * comb(d - i, j) * _eta(q, n, d, s, i, j)
    return _checked(total)


def xi_02_deleted_closed(q: int, n: int) -> int:
    """Radius-2 ball size for words of length n - 1, as a polynomial in n."""
    twice = (q - 1) ** 2 * n * n - (3 * q - 5) * (q - 1) * n
    return _checked(twice // 2 + (q * q - 3 * q + 3))


def xi_d2_closed(q: int, length: int, d: int) -> int:
    """Radius-2 intersection size at distance d for words of the given length.

    The polynomials are written in the original (pre-deletion) length
    ``n = length + 1``.
    """
    n = length + 1
    if d == 1:
        v = q * (q - 1) * n - 2 * q * q + 3 * q
    elif d == 2:
        v = 2 * (q - 1) * n + q * q - 6 * q + 6
    elif d == 3:
        v = 6 * q - 6
    elif d == 4:
        v = 6
    else:
        raise DomainError(f"d must lie in {{1, 2, 3, 4}}, got {d}")
    return _checked(v)


def sub2_intersection_size(q: int, length: int, d: int) -> int:
    """|B^S_2(u) & B^S_2(u')| for words of the given length at distance d >= 0."""
    if d == 0:
        return xi_0s(q, length, 2)
    if d >= 5:
        return 0
    return xi_d2_closed(q, length, d)
