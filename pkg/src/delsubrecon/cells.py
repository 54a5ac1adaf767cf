"""Intersection machinery for B^DS_{1,2}.

The intersection of two single-deletion, two-substitution balls splits into
cells E^j_{j'} = B^S_2(x without j) & B^S_2(x' without j'). Only run-end
positions need to be visited, and the deleted-pair distance of a cell has a
closed description in terms of the support outside the deletion window plus
a misalignment count inside it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
from numba import njit

from .balls import BallSpec, WordSet, enum_ds_ball, enum_sub_ball, union_all
from .errors import DimensionError, DisjointBallsError, DomainError, IdenticalWordsError
from .words import Word, _check_pair, delete_at, hamming, run_profile, support_diff


@dataclass(frozen=True)
class CellIndex:
    j: int
    jp: int
    d_prime: int
    delta: int
    s_out: int

    @property
    def orientation(self) -> str:
        return "le" if self.j <= self.jp else "gt"


def deletion_pair_distance(x: Word, xp: Word, j: int, jp: int) -> CellIndex:
    """Distance between x without j and x' without j', via the window split."""
    _check_pair(x, xp)
    n = len(x)
    if not (1 <= j <= n and 1 <= jp <= n):
        raise DimensionError(f"positions ({j}, {jp}) outside [1, {n}]")
    a, b = x.symbols, xp.symbols
    lo, hi = min(j, jp), max(j, jp)
    s_out = sum(1 for i in range(n) if a[i] != b[i] and not lo - 1 <= i <= hi - 1)
    if j <= jp:
        # x'_i vs x_{i+1} for i in [j, j'-1]
        delta = sum(1 for i in range(j - 1, jp - 1) if b[i] != a[i + 1])
    else:
        # x_i vs x'_{i+1} for i in [j', j-1]
        delta = sum(1 for i in range(jp - 1, j - 1) if a[i] != b[i + 1])
    return CellIndex(j, jp, s_out + delta, delta, s_out)


@njit(cache=True)
def _obs2_scan(table, n):
    # Returns (mismatches, x, x', j, j') for the first failure, or zeros.
    total = table.shape[0]
    bad = 0
    wx = wy = wj = wjp = -1
    diff = np.zeros(n + 1, dtype=np.int64)  # prefix counts of the support
    fwd = np.zeros(n, dtype=np.int64)  # prefix of x'_i != x_{i+1}
    bwd = np.zeros(n, dtype=np.int64)  # prefix of x_i != x'_{i+1}
    for cx in range(total):
        a = table[cx]
        for cy in range(total):
            b = table[cy]
            for i in range(n):
                diff[i + 1] = diff[i] + (1 if a[i] != b[i] else 0)
            for i in range(n - 1):
                fwd[i + 1] = fwd[i] + (1 if b[i] != a[i + 1] else 0)
                bwd[i + 1] = bwd[i] + (1 if a[i] != b[i + 1] else 0)
            for j in range(n):
                for jp in range(n):
                    lo = min(j, jp)
                    hi = max(j, jp)
                    s_out = diff[n] - (diff[hi + 1] - diff[lo])
                    if j <= jp:
                        delta = fwd[jp] - fwd[j]
                    else:
                        delta = bwd[j] - bwd[jp]
                    # direct distance of the two deleted words
                    direct = 0
                    ia = 0
                    ib = 0
                    for _ in range(n - 1):
                        if ia == j:
                            ia += 1
                        if ib == jp:
                            ib += 1
                        if a[ia] != b[ib]:
                            direct += 1
                        ia += 1
                        ib += 1
                    if direct != s_out + delta:
                        if bad == 0:
                            wx, wy, wj, wjp = cx, cy, j + 1, jp + 1
                        bad += 1
    return bad, wx, wy, wj, wjp


def all_words_table(n: int, q: int) -> np.ndarray:
    """Symbols of every word in Z_q^n, one row per code, in code order."""
    codes = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n), dtype=np.int8)
    for i in range(n - 1, -1, -1):
        out[:, i] = codes % q
        codes //= q
    return out


def observation2_exhaustive(q: int, n: int) -> dict:
    """Check the window identity for every pair of words and every (j, j')."""
    if n < 2:
        raise DomainError("need n >= 2 for a deletion")
    bad, wx, wy, wj, wjp = _obs2_scan(all_words_table(n, q), n)
    out = {"q": q, "n": n, "checked": (q**n) ** 2 * n * n, "mismatches": int(bad)}
    if bad:
        out["counterexample"] = {
            "x": str(Word.from_code(int(wx), n, q)),
            "x_prime": str(Word.from_code(int(wy), n, q)),
            "j": int(wj),
            "j_prime": int(wjp),
        }
    return out


def brute_intersection(x: Word, xp: Word, spec: BallSpec, *, force: bool = False) -> WordSet:
    _check_pair(x, xp)
    return enum_ds_ball(x, spec, force=force) & enum_ds_ball(xp, spec, force=force)


def _to_set(rows, length, q) -> WordSet:
    if not rows:
        return WordSet.empty(length, q)
    pw = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return WordSet(np.asarray(rows, dtype=np.int64) @ pw, length, q)


def sub2_intersection_structural(u: Word, up: Word) -> WordSet:
    """B^S_2(u) & B^S_2(u') built from case templates, one per distance."""
    _check_pair(u, up)
    q, L = u.q, len(u)
    sup = [i - 1 for i in support_diff(u, up).indices] if u != up else []
    d = len(sup)
    if d == 0:
        raise IdenticalWordsError("u = u'; the intersection is the whole ball")
    if d >= 5:
        raise DisjointBallsError(f"d = {d} >= 5; the radius-2 balls are disjoint")
    base = list(u.symbols)
    rows = []

    if d == 1:
        (i1,) = sup
        others = [p for p in range(L) if p != i1]
        rest = [base[:]]
        for p in others:
            for c in range(q):
                if c != base[p]:
                    r = base[:]
                    r[p] = c
                    rest.append(r)
        for r in rest:
            for c in range(q):
                v = r[:]
                v[i1] = c
                rows.append(v)

    elif d == 2:
        i1, i2 = sup
        case_i = []
        for c1, c2 in product(range(q), repeat=2):
            v = base[:]
            v[i1], v[i2] = c1, c2
            case_i.append(tuple(v))
        case_ii = []
        for p in range(L):
            if p in (i1, i2):
                continue
            for c in range(q):
                if c == base[p]:
                    continue
                for c1, c2 in ((u[i1], up[i2]), (up[i1], u[i2])):
                    v = base[:]
                    v[p] = c
                    v[i1], v[i2] = c1, c2
                    case_ii.append(tuple(v))
        assert not set(case_i) & set(case_ii), "case templates overlap"
        rows = case_i + case_ii

    elif d == 3:
        for free in range(3):
            a, b = [sup[k] for k in range(3) if k != free]
            for first, second in ((u, up), (up, u)):
                for c in range(q):
                    v = base[:]
                    v[sup[free]] = c
                    v[a], v[b] = first[a], second[b]
                    rows.append(v)

    else:
        for from_u in combinations(sup, 2):
            v = list(up.symbols)
            for p in from_u:
                v[p] = u[p]
            rows.append(v)

    return _to_set(rows, L, q)


def cell(x: Word, xp: Word, j: int, jp: int) -> WordSet:
    """E^j_{j'}: the radius-2 intersection of x without j and x' without j'."""
    _check_pair(x, xp)
    if len(x) < 4:
        raise DomainError("cells need n >= 4")
    u, up = delete_at(x, j), delete_at(xp, jp)
    return _cell_of(u, up)


def _cell_of(u: Word, up: Word) -> WordSet:
    dp = hamming(u, up)
    if dp == 0:
        return enum_sub_ball(u, 2, force=True)
    if dp >= 5:
        return WordSet.empty(len(u), u.q)
    return sub2_intersection_structural(u, up)


def ds12_intersection_via_cells(x: Word, xp: Word) -> WordSet:
    """B^DS_{1,2}(x) & B^DS_{1,2}(x') as the union of run-end cells."""
    _check_pair(x, xp)
    n = len(x)
    if n < 4:
        raise DomainError("need n >= 4")
    left = [delete_at(x, j) for j in run_profile(x).boundaries]
    right = [delete_at(xp, j) for j in run_profile(xp).boundaries]
    parts = []
    for u in left:
        for up in right:
            if hamming(u, up) <= 4:
                parts.append(_cell_of(u, up))
    return union_all(parts, n - 1, x.q)


# --- pair-count histograms --------------------------------------------------


@dataclass
class PairHistogram:
    """Counts of run-end pairs keyed by (orientation, k, d').

    ``k`` is the number of support positions outside the deletion window and
    ``d'`` is capped at 5 (meaning five or more).
    """

    n: int
    d: int
    m: int
    m_prime: int
    two_sided: bool
    counts: Counter = field(default_factory=Counter)
    windows: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def column(self, d_prime: int) -> int:
        return sum(v for (o, k, dp), v in self.counts.items() if dp == d_prime)

    def get(self, orientation: str, k: int, d_prime: int) -> int:
        return self.counts.get((orientation, k, d_prime), 0)

    def as_rows(self) -> list[dict]:
        rows = []
        for (o, k, dp), v in sorted(self.counts.items()):
            rows.append({"orientation": o, "k": k, "d_prime": dp, "count": v})
        return rows


def _is_two_sided_d2(x: Word, xp: Word, sup) -> bool:
    if len(sup) != 2:
        return False
    i1, i2 = sup
    return delete_at(x, i1) != delete_at(xp, i2) and delete_at(x, i2) != delete_at(xp, i1)


def pair_distance_histogram(x: Word, xp: Word) -> PairHistogram:
    _check_pair(x, xp)
    d = hamming(x, xp)
    if d <= 1:
        raise DomainError(f"histograms need d >= 2, got d = {d}")
    sup = support_diff(x, xp).indices
    js = run_profile(x).boundaries
    jps = run_profile(xp).boundaries
    hist = PairHistogram(len(x), d, len(js), len(jps), _is_two_sided_d2(x, xp, sup))
    for j in js:
        for jp in jps:
            ci = deletion_pair_distance(x, xp, j, jp)
            lo, hi = min(j, jp), max(j, jp)
            inside = tuple(lam + 1 for lam, i in enumerate(sup) if lo <= i <= hi)
            hist.counts[(ci.orientation, ci.s_out, min(ci.d_prime, 5))] += 1
            hist.windows.append((ci, inside))
    return hist


def table_bound(d: int, n: int, orientation: str, k: int, d_prime: int, two_sided: bool = False) -> int:
    """Upper bound on the number of run-end pairs in one table cell.

    Rows with k < d come from windows holding d - k consecutive support
    positions (k + 1 such windows, each allowing d' - k - Delta + 1 pairs).
    The row k = d collects windows free of the support.
    """
    if orientation not in ("le", "gt"):
        raise ValueError("orientation is 'le' or 'gt'")
    if k > d or k < 0:
        return 0
    if k == d:
        if orientation == "le":
            return n - d if d_prime >= d else 0
        return n - d if d_prime > d else 0
    delta_min = 1 if (two_sided and d == 2 and k == 0) else 0
    per_window = max(0, d_prime - k - delta_min + 1)
    return (k + 1) * per_window


def table_rows(d: int, n: int, two_sided: bool = False, max_dp: int = 4) -> dict:
    """The full bound table for distance d: {(orientation, k): [d'=0..max_dp]}."""
    out = {}
    for o in ("le", "gt"):
        for k in range(0, min(d, 4) + 1):
            out[(o, k)] = [table_bound(d, n, o, k, dp, two_sided) for dp in range(max_dp + 1)]
    return out


def histogram_violations(hist: PairHistogram) -> list[dict]:
    """Buckets (d' <= 4) whose count exceeds the table bound."""
    bad = []
    for (o, k, dp), v in sorted(hist.counts.items()):
        if dp > 4:
            continue
        bound = table_bound(hist.d, hist.n, o, k, dp, hist.two_sided)
        if v > bound:
            bad.append({"orientation": o, "k": k, "d_prime": dp, "count": v, "bound": bound})
    if hist.d == 2 and hist.two_sided and hist.column(2) > hist.n + 10:
        bad.append({"column": 2, "count": hist.column(2), "bound": hist.n + 10})
    return bad


def lemma3_violations(x: Word, xp: Word, hist: PairHistogram | None = None) -> list[dict]:
    """Per-window check of the pair-count bounds using the actual misalignments.

    For a window holding supports lambda..lambda', the count at d' is at most
    d' - S - Delta + 1 (zero below S + Delta). Support-free windows allow at
    most n - d pairs at each d' >= d per orientation, none below d, and none
    at d' = d in the reversed orientation.
    """
    hist = hist or pair_distance_histogram(x, xp)
    n, d = hist.n, hist.d
    sup = support_diff(x, xp).indices
    groups = Counter()
    for ci, inside in hist.windows:
        groups[(ci.orientation, inside, ci.d_prime)] += 1
    bad = []
    for (o, inside, dp), v in sorted(groups.items()):
        if inside:
            lam, lamp = inside[0], inside[-1]
            lo, hi = sup[lam - 1], sup[lamp - 1]
            S = d - len(inside)
            if o == "le":
                delta = sum(1 for i in range(lo, hi) if xp[i - 1] != x[i])
            else:
                delta = sum(1 for i in range(lo, hi) if x[i - 1] != xp[i])
            bound = max(0, dp - S - delta + 1)
        else:
            if dp < d:
                bound = 0
            elif dp == d:
                bound = n - d if o == "le" else 0
            else:
                bound = n - d
        if v > bound:
            bad.append({"orientation": o, "window": list(inside), "d_prime": dp, "count": v, "bound": bound})
    return bad


# --- subset relations between cells ---------------------------------------


def lemma4_relations(x: Word, xp: Word) -> list[dict]:
    """Evaluate every applicable cell-inclusion relation for a d = 2 pair.

    Returns one record per (relation, l) with the inclusion result. Positions
    are run ends of x, used for both words.
    """
    _check_pair(x, xp)
    sup = set(support_diff(x, xp).indices)
    if len(sup) != 2:
        raise DomainError("the inclusion relations are stated for d = 2")
    js = (0,) + run_profile(x).boundaries
    m = len(js) - 1
    cache = {}

    def E(a, b):
        key = (a, b)
        if key not in cache:
            cache[key] = cell(x, xp, js[a], js[b])
        return cache[key]

    def free(lo, hi):
        return not any(lo <= i <= hi for i in sup)

    out = []
    for ell in range(1, m + 1):
        specs = [
            ("back1", ell - 2 >= 0 and ell - 1 >= 1, lambda: (js[ell - 2] + 1, js[ell]), ell - 1),
            ("back2", ell - 3 >= 0 and ell - 2 >= 1, lambda: (js[ell - 3] + 1, js[ell]), ell - 2),
            ("fwd1", ell + 1 <= m, lambda: (js[ell - 1] + 1, js[ell + 1]), ell + 1),
            ("fwd2", ell + 2 <= m, lambda: (js[ell - 1] + 1, js[ell + 2]), ell + 2),
        ]
        for name, ok, window, other in specs:
            if not ok:
                continue
            lo, hi = window()
            if not free(lo, hi):
                continue
            holds = E(ell, other).issubset(E(ell, ell) | E(other, other))
            out.append({"relation": name, "l": ell, "holds": holds})
    return out
