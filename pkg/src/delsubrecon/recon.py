"""Codes, read coverage, channel sampling and intersection decoding."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .balls import BallSpec, WordSet, enum_ds_ball
from .errors import CapacityError, DimensionError, DomainError, GuardrailError, LoadError
from .words import MAX_Q, Word, hamming

DS12 = BallSpec(1, 2)
RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
MODES = ("uniform-ball", "process")
# Above this many codeword pairs an exact coverage scan must be requested.
EXACT_PAIR_LIMIT = 10**7


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise DomainError("a seed is required for randomized operations")
    return np.random.Generator(np.random.PCG64(seed))


class Code:
    """A set of distinct codewords sharing length and alphabet."""

    def __init__(self, words, q: int | None = None, n: int | None = None):
        words = list(words)
        if not words:
            raise DomainError("a code has at least one codeword")
        q = q if q is not None else words[0].q
        n = n if n is not None else len(words[0])
        for w in words:
            if w.q != q or len(w) != n:
                raise DimensionError("codewords must share length and alphabet")
        if len(set(words)) != len(words):
            raise DomainError("codewords must be distinct")
        self.words = tuple(sorted(words))
        self.q = q
        self.n = n
        self.q_inferred = False
        self._dmin = None
        self._coverage = None

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, w):
        return w in set(self.words)

    def symbol_matrix(self) -> np.ndarray:
        return np.array([w.symbols for w in self.words], dtype=np.int8)

    @classmethod
    def from_strings(cls, texts, q: int = 2) -> "Code":
        return cls([Word.parse(t, q) for t in texts], q=q)

    @classmethod
    def even_weight(cls, n: int) -> "Code":
        words = [Word.from_code(c, n, 2) for c in range(2**n) if c.bit_count() % 2 == 0]
        return cls(words, q=2, n=n)


def _parse_header(line: str) -> dict:
    out = {}
    for tok in line.split():
        key, sep, val = tok.partition("=")
        if not sep or key not in ("q", "n"):
            raise LoadError(f"bad header token {tok!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise LoadError(f"bad header value {tok!r}") from None
    return out


def parse_code_text(text: str, q: int | None = None, n: int | None = None) -> Code:
    """Parse the text code format.

    An optional first content line ``q=<int> n=<int>`` fixes the alphabet and
    length; ``#`` starts a comment; blank lines are skipped. Without a header
    or explicit q the alphabet is inferred from the largest symbol.
    """
    header = {}
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            if entries or header:
                raise LoadError(f"line {lineno}: header must precede codewords")
            header = _parse_header(line)
            continue
        entries.append((lineno, line.lower()))
    for key, given in (("q", q), ("n", n)):
        if given is not None and key in header and header[key] != given:
            raise LoadError(f"{key}={given} conflicts with header {key}={header[key]}")
    q = q if q is not None else header.get("q")
    n = n if n is not None else header.get("n")
    if not entries:
        raise LoadError("no codewords")
    inferred = q is None
    if inferred:
        digits = "0123456789abcdefghijklmnopqrstuvwxyz"
        try:
            top = max(digits.index(ch) for _, t in entries for ch in t)
        except ValueError:
            raise LoadError("unparseable symbol in code file") from None
        q = max(2, top + 1)
        if q > MAX_Q:
            raise LoadError("alphabet too large")
    words = []
    seen = set()
    for lineno, t in entries:
        try:
            w = Word.parse(t, q)
        except DimensionError as e:
            raise LoadError(f"line {lineno}: {e}") from None
        if n is not None and len(w) != n:
            raise LoadError(f"line {lineno}: length {len(w)} != n={n}")
        if w in seen:
            raise LoadError(f"line {lineno}: duplicate codeword {t}")
        seen.add(w)
        words.append(w)
    lengths = {len(w) for w in words}
    if len(lengths) != 1:
        raise LoadError("codewords have different lengths")
    code = Code(words, q=q, n=lengths.pop())
    code.q_inferred = inferred
    return code


def load_code(path, q: int | None = None, n: int | None = None) -> Code:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise LoadError(f"cannot read {path}: {e}") from None
    return parse_code_text(text, q=q, n=n)


def min_hamming_distance(C: Code) -> int:
    if len(C) < 2:
        raise DomainError("minimum distance needs at least two codewords")
    if C._dmin is None:
        M = C.symbol_matrix()
        best = C.n
        for i in range(len(C) - 1):
            d = (M[i + 1 :] != M[i]).sum(axis=1).min()
            best = min(best, int(d))
        C._dmin = best
    return C._dmin


@dataclass(frozen=True)
class Coverage:
    nu: int
    pair: tuple
    exact: bool
    pairs_checked: int

    @property
    def threshold(self) -> int:
        return self.nu + 1


def _balls(C: Code) -> list[np.ndarray]:
    return [enum_ds_ball(w, DS12, force=True).codes for w in C.words]


def read_coverage(C: Code, *, exhaustive: bool = False, sample_budget: int | None = None, rng_seed=None) -> Coverage:
    """Max |B^DS_{1,2}(x) & B^DS_{1,2}(x')| over distinct codewords.

    Small codes are scanned exactly. Larger ones need ``exhaustive`` or a
    ``sample_budget`` of random pairs; sampled results are lower bounds.
    """
    if len(C) < 2:
        raise DomainError("read coverage needs at least two codewords")
    if C.n < 4:
        raise DomainError("read coverage needs n >= 4")
    if min_hamming_distance(C) < 2:
        warnings.warn("code has minimum distance 1; coverage is dominated by adjacent pairs", stacklevel=2)
    k = len(C)
    npairs = k * (k - 1) // 2
    sampled = npairs > EXACT_PAIR_LIMIT and not exhaustive
    if sampled and not sample_budget:
        raise GuardrailError(f"{npairs} pairs; pass exhaustive=True or a sample budget")
    if not sampled and C._coverage is not None:
        return C._coverage
    balls = _balls(C)
    best = (-1, None)
    if sampled:
        rng = make_rng(rng_seed)
        idx = set()
        while len(idx) < min(sample_budget, npairs):
            a, b = sorted(int(v) for v in rng.choice(k, size=2, replace=False))
            idx.add((a, b))
        pairs = sorted(idx)
    else:
        pairs = combinations(range(k), 2)
    checked = 0
    for a, b in pairs:
        size = np.intersect1d(balls[a], balls[b], assume_unique=True).size
        checked += 1
        if size > best[0]:
            best = (int(size), (C.words[a], C.words[b]))
    cov = Coverage(best[0], best[1], not sampled, checked)
    if not sampled:
        C._coverage = cov
    return cov


def is_reconstruction_code(C: Code, N: int) -> bool:
    if N < 1:
        raise DomainError("N >= 1 required")
    return read_coverage(C).nu < N


@dataclass(frozen=True)
class ReadSet:
    reads: tuple
    source: Word | None = None

    def __post_init__(self):
        object.__setattr__(self, "reads", tuple(self.reads))
        if len(set(self.reads)) != len(self.reads):
            raise DomainError("reads must be pairwise distinct")
        lengths = {len(r) for r in self.reads}
        if len(lengths) > 1:
            raise DimensionError("reads must share one length")

    def __len__(self):
        return len(self.reads)

    def __iter__(self):
        return iter(self.reads)


def _check_mode(mode):
    if mode not in MODES:
        raise DomainError(f"unknown sampling mode {mode!r}; choose from {MODES}")


def _process_draw(x: Word, rng) -> tuple:
    n, q = len(x), x.q
    j = int(rng.integers(0, n))
    v = list(x.symbols[:j] + x.symbols[j + 1 :])
    k = int(rng.integers(0, 3))
    for p in rng.choice(n - 1, size=k, replace=False):
        v[int(p)] = (v[int(p)] + int(rng.integers(1, q))) % q
    return tuple(v)


def channel_sample(x: Word, mode: str = "uniform-ball", rng_seed=None) -> Word:
    """One channel output: one deletion, then at most two substitutions."""
    _check_mode(mode)
    if len(x) < 4:
        raise DomainError("need n >= 4")
    rng = make_rng(rng_seed)
    if mode == "uniform-ball":
        ball = enum_ds_ball(x, DS12, force=True).codes
        return Word.from_code(int(ball[int(rng.integers(0, ball.size))]), len(x) - 1, x.q)
    return Word(_process_draw(x, rng), x.q)


def sample_distinct_reads(
    x: Word, N: int, mode: str = "uniform-ball", rng_seed=None, *, with_replacement: bool = False
) -> ReadSet:
    """N distinct reads from B^DS_{1,2}(x).

    With ``with_replacement`` the N draws are independent and duplicates are
    collapsed, so fewer than N reads may come back.
    """
    _check_mode(mode)
    if N < 1:
        raise DomainError("N >= 1 required")
    rng = make_rng(rng_seed)
    ball = enum_ds_ball(x, DS12, force=True).codes
    if not with_replacement and N > ball.size:
        raise CapacityError(f"N={N} exceeds the ball size {ball.size}", ball_size=int(ball.size))
    L = len(x) - 1
    if mode == "uniform-ball":
        picks = rng.choice(ball, size=N, replace=with_replacement)
        codes = sorted(set(int(c) for c in picks))
        reads = [Word.from_code(c, L, x.q) for c in codes]
    else:
        seen = {}
        draws = 0
        while len(seen) < N if not with_replacement else draws < N:
            v = _process_draw(x, rng)
            draws += 1
            seen.setdefault(v, None)
        reads = [Word(v, x.q) for v in seen]
    return ReadSet(tuple(reads), source=x)


def membership_matrix(reads, C: Code) -> np.ndarray:
    """Boolean |C| x |reads| matrix: read r lies in B^DS_{1,2}(c).

    A read is in the ball iff some single deletion of c is within Hamming
    distance 2 of it; balls are never materialized.
    """
    R = np.array([r.symbols for r in reads], dtype=np.int8)
    M = C.symbol_matrix()
    n = C.n
    out = np.zeros((len(C), len(R)), dtype=bool)
    if R.size == 0:
        return out
    if R.shape[1] != n - 1:
        raise DimensionError(f"reads have length {R.shape[1]}, expected {n - 1}")
    chunk = max(1, 2_000_000 // max(1, len(R) * n))
    for s in range(0, len(C), chunk):
        block = M[s : s + chunk]
        hit = np.zeros((block.shape[0], len(R)), dtype=bool)
        for j in range(n):
            deleted = np.delete(block, j, axis=1)
            dist = (deleted[:, None, :] != R[None, :, :]).sum(axis=2)
            hit |= dist <= 2
        out[s : s + chunk] = hit
    return out


def decode(reads: ReadSet, C: Code) -> set:
    """Codewords whose error ball contains every read."""
    reads = list(reads)
    for r in reads:
        if r.q != C.q:
            raise DimensionError("reads and code use different alphabets")
    if not reads:
        return set(C.words)
    ok = membership_matrix(reads, C).all(axis=1)
    return {C.words[i] for i in np.flatnonzero(ok)}


@dataclass
class SimulationResult:
    trials: int
    N: int
    mode: str
    unique_correct: int = 0
    ambiguous: int = 0
    wrong: int = 0
    capacity_errors: int = 0
    sources: int = 0
    failures: list = field(default_factory=list)


def simulate(
    C: Code,
    N: int,
    trials: int,
    seed,
    mode: str = "uniform-ball",
    *,
    with_replacement: bool = False,
    feasible_only: bool = False,
) -> SimulationResult:
    """Draw a codeword, sample N reads, decode; tally outcomes.

    With ``feasible_only`` the source is drawn among codewords whose ball
    holds at least N distinct reads.
    """
    _check_mode(mode)
    rng = make_rng(seed)
    res = SimulationResult(trials, N, mode)
    pool = list(C.words)
    if feasible_only:
        pool = [w for w in pool if len(enum_ds_ball(w, DS12, force=True)) >= N]
        if not pool:
            raise CapacityError(f"no codeword has {N} distinct reads", ball_size=0)
    res.sources = len(pool)
    for t in range(trials):
        x = pool[int(rng.integers(0, len(pool)))]
        try:
            reads = sample_distinct_reads(x, N, mode, rng, with_replacement=with_replacement)
        except CapacityError:
            res.capacity_errors += 1
            continue
        cand = decode(reads, C)
        if cand == {x}:
            res.unique_correct += 1
        elif x in cand:
            res.ambiguous += 1
        else:
            res.wrong += 1
            if len(res.failures) < 5:
                res.failures.append({"trial": t, "source": str(x), "candidates": sorted(map(str, cand))})
    return res


def ball_as_readset(x: Word) -> ReadSet:
    return ReadSet(tuple(enum_ds_ball(x, DS12, force=True)), source=x)


def intersection_readset(x: Word, xp: Word) -> ReadSet:
    inter: WordSet = enum_ds_ball(x, DS12, force=True) & enum_ds_ball(xp, DS12, force=True)
    return ReadSet(tuple(inter))
