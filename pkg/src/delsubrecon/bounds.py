"""The distance-2 case split, the quadratic bound, the extremal family, and
exact checks of the cell identities used to reach the bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .balls import BallSpec, WordSet, enum_ds_ball, enum_sub_ball, union_all, xi_0s, xi_d2_closed
from .cells import cell
from .errors import DomainError
from .words import Word, _check_pair, delete_at, hamming, run_index_of, run_profile, support_diff

TRANSPOSED = "TransposedAdjacent"
ONE_SIDED = "OneSided"
TWO_SIDED = "TwoSided"


@dataclass(frozen=True)
class CanonicalD2Form:
    """Decomposition of a Hamming-distance-2 pair.

    TransposedAdjacent: x = w a b w', x' = w b a w'.
    OneSided: x = w a b^s0 b w', x' = w b b^s0 c w' (roles of x and x' are
    exchanged when ``swapped`` is set).
    TwoSided: only the support positions are recorded.
    """

    subcase: str
    i1: int
    i2: int
    q: int
    w: tuple = ()
    wp: tuple = ()
    a: int | None = None
    b: int | None = None
    c: int | None = None
    sigma0: int | None = None
    sigma1: int | None = None
    sigma2: int | None = None
    sigma1p: int | None = None
    sigma2p: int | None = None
    tau: int | None = None
    taup: int | None = None
    swapped: bool = False

    def reconstruct(self) -> tuple[Word, Word]:
        if self.subcase == TRANSPOSED:
            x = self.w + (self.a, self.b) + self.wp
            xp = self.w + (self.b, self.a) + self.wp
        elif self.subcase == ONE_SIDED:
            mid = (self.b,) * self.sigma0
            x = self.w + (self.a,) + mid + (self.b,) + self.wp
            xp = self.w + (self.b,) + mid + (self.c,) + self.wp
            if self.swapped:
                x, xp = xp, x
        else:
            raise DomainError("a two-sided pair carries no context decomposition")
        return Word(x, self.q), Word(xp, self.q)

    def as_dict(self) -> dict:
        out = {"subcase": self.subcase, "i1": self.i1, "i2": self.i2}
        if self.subcase != TWO_SIDED:
            out.update(
                w="".join(map(str, self.w)) if self.q <= 10 else list(self.w),
                w_prime="".join(map(str, self.wp)) if self.q <= 10 else list(self.wp),
                a=self.a,
                b=self.b,
            )
        if self.subcase == ONE_SIDED:
            out.update(c=self.c, sigma0=self.sigma0, swapped=self.swapped)
        if self.subcase == TRANSPOSED:
            out.update(
                sigma1=self.sigma1,
                sigma2=self.sigma2,
                sigma1_prime=self.sigma1p,
                sigma2_prime=self.sigma2p,
                tau=self.tau,
                tau_prime=self.taup,
            )
        return out


def classify_d2(x: Word, xp: Word) -> CanonicalD2Form:
    _check_pair(x, xp)
    d = hamming(x, xp)
    if d != 2:
        raise DomainError(f"the case split needs d = 2, got d = {d}")
    i1, i2 = support_diff(x, xp).indices
    first = delete_at(x, i1) == delete_at(xp, i2)
    second = delete_at(x, i2) == delete_at(xp, i1)
    if first and second:
        return canonical_d2_form(x, xp)
    if first or second:
        u, up = (x, xp) if first else (xp, x)
        s = u.symbols
        return CanonicalD2Form(
            ONE_SIDED,
            i1,
            i2,
            x.q,
            w=s[: i1 - 1],
            wp=s[i2:],
            a=s[i1 - 1],
            b=s[i2 - 1],
            c=up[i2 - 1],
            sigma0=i2 - i1 - 1,
            swapped=not first,
        )
    return CanonicalD2Form(TWO_SIDED, i1, i2, x.q)


def canonical_d2_form(x: Word, xp: Word) -> CanonicalD2Form:
    """Run-level parameters of an adjacent transposition pair."""
    _check_pair(x, xp)
    if hamming(x, xp) != 2:
        raise DomainError("need d = 2")
    i1, i2 = support_diff(x, xp).indices
    if not (delete_at(x, i1) == delete_at(xp, i2) and delete_at(x, i2) == delete_at(xp, i1)):
        raise DomainError("pair is not an adjacent transposition")
    rp, rpp = run_profile(x), run_profile(xp)
    tau = run_index_of(x, i1, rp)
    taup = run_index_of(xp, i1, rpp)
    s = x.symbols
    return CanonicalD2Form(
        TRANSPOSED,
        i1,
        i2,
        x.q,
        w=s[: i1 - 1],
        wp=s[i2:],
        a=s[i1 - 1],
        b=s[i2 - 1],
        sigma1=rp.run_lengths[tau - 1] - 1,
        sigma2=rp.run_lengths[tau] - 1,
        sigma1p=rpp.run_lengths[taup - 1] - 1,
        sigma2p=rpp.run_lengths[taup] - 1,
        tau=tau,
        taup=taup,
    )


# --- the quadratic bound ----------------------------------------------------


def bound_coefficients(q: int) -> tuple[int, int]:
    return q * q - 1, -(3 * q * q + 5 * q - 5)


def theorem_bound(q: int, n: int, c: int) -> int:
    if q < 2 or n < 1:
        raise DomainError("need q >= 2 and n >= 1")
    a, b = bound_coefficients(q)
    return a * n * n + b * n + c


@dataclass
class BoundModel:
    q: int
    c: Fraction | None = None
    window: tuple | None = None

    @property
    def a(self) -> int:
        return bound_coefficients(self.q)[0]

    @property
    def b(self) -> int:
        return bound_coefficients(self.q)[1]

    def evaluate(self, n: int) -> Fraction:
        if self.c is None:
            raise DomainError("the constant is unknown; fit it first")
        return self.a * n * n + self.b * n + self.c


def extremal_pair(q: int, n: int) -> tuple[Word, Word]:
    """x = 101010 followed by alternating 10s, and x' with 10 swapped to 01 at positions 3-4."""
    if n < 8 or n % 2:
        raise DomainError(f"the extremal family needs even n >= 8, got {n}")
    tail = "10" * ((n - 6) // 2)
    return Word.parse("101010" + tail, q), Word.parse("100110" + tail, q)


@dataclass(frozen=True)
class QuadraticFit:
    a: Fraction
    b: Fraction
    c: Fraction
    consistent: bool
    residuals: tuple = ()

    def __call__(self, n) -> Fraction:
        return self.a * n * n + self.b * n + self.c

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in (self.a, self.b, self.c))


def fit_quadratic(points) -> QuadraticFit:
    """Exact interpolation through the first three points; check the rest."""
    pts = [(int(n), Fraction(v)) for n, v in points]
    if len(pts) < 3:
        raise DomainError("need at least 3 points")
    if len({n for n, _ in pts}) != len(pts):
        raise DomainError("duplicate n in fit points")
    (n0, y0), (n1, y1), (n2, y2) = pts[:3]
    # divided differences
    f01 = (y1 - y0) / (n1 - n0)
    f12 = (y2 - y1) / (n2 - n1)
    a = (f12 - f01) / (n2 - n0)
    b = f01 - a * (n0 + n1)
    c = y0 - a * n0 * n0 - b * n0
    res = tuple(y - (a * n * n + b * n + c) for n, y in pts[3:])
    return QuadraticFit(a, b, c, all(r == 0 for r in res), res)


def quadratic_onset(points) -> int | None:
    """Smallest n from which every later point lies on one quadratic."""
    pts = sorted(points)
    onset = None
    for start in range(len(pts) - 2, -1, -1):
        tail = pts[start:]
        if len(tail) < 3:
            continue
        if fit_quadratic(tail).consistent:
            onset = tail[0][0]
        else:
            break
    return onset


def ds12_size(x: Word, xp: Word, *, force: bool = False) -> int:
    spec = BallSpec(1, 2)
    return len(enum_ds_ball(x, spec, force=force) & enum_ds_ball(xp, spec, force=force))


def extremal_sweep(q: int, ns, *, force: bool = False) -> list[tuple[int, int]]:
    return [(n, ds12_size(*extremal_pair(q, n), force=force)) for n in ns]


# --- cell identities for adjacent transpositions ---------------------------


def claim_cell_predictions(q: int, n: int) -> dict:
    if n < 6:
        raise DomainError("predictions need n >= 6")
    return {
        "union_i1_i2": 2 * xi_0s(q, n - 1, 2) - xi_d2_closed(q, n - 1, 1),
        "diff_two": 2 * (q - 1) * n + q * q - 8 * q + 4,
        "diff_one": 2 * (q - 1) * n + q * q - 8 * q + 6,
    }


@dataclass
class ClaimReport:
    x: str
    xp: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["holds"] for c in self.checks)

    def add(self, name, holds, **info):
        self.checks.append({"claim": name, "holds": bool(holds), **info})

    def failures(self):
        return [c for c in self.checks if not c["holds"]]


def check_claims(x: Word, xp: Word) -> ClaimReport:
    """Verify the exact cell identities on one adjacent transposition pair."""
    form = canonical_d2_form(x, xp)
    q, n = x.q, len(x)
    pred = claim_cell_predictions(q, n)
    i1, i2 = form.i1, form.i2
    tau, m = form.tau, run_profile(x).m
    js = (0,) + run_profile(x).boundaries
    rep = ClaimReport(str(x), str(xp))

    e_i1 = union_all((cell(x, xp, i1, jp) for jp in range(1, n + 1)), n - 1, q)
    e_i2 = union_all((cell(x, xp, i2, jp) for jp in range(1, n + 1)), n - 1, q)
    rep.add("1:E_i1_is_ball", e_i1 == enum_sub_ball(delete_at(x, i1), 2))
    rep.add("1:E_i2_is_ball", e_i2 == enum_sub_ball(delete_at(x, i2), 2))
    union = e_i1 | e_i2
    rep.add("1:union_size", len(union) == pred["union_i1_i2"], got=len(union), want=pred["union_i1_i2"])

    diag = {}

    def E(ell):
        if ell not in diag:
            diag[ell] = cell(x, xp, js[ell], js[ell])
        return diag[ell]

    empty = WordSet.empty(n - 1, q)
    # left side, runs 1 .. tau-1
    for ell in range(1, tau - 3):
        rest = union_all((E(k) for k in range(ell + 3, tau)), n - 1, q) if ell + 3 <= tau - 1 else empty
        rep.add("7.1", E(ell).isdisjoint(rest), l=ell)
    for ell in range(1, tau - 2):
        got = len(E(ell) - (E(ell + 1) | E(ell + 2)))
        rep.add("7.2", got == pred["diff_two"], l=ell, got=got, want=pred["diff_two"])
    for ell in range(1, tau - 1):
        got = len(E(ell) - E(ell + 1))
        rep.add("7.3", got == pred["diff_one"], l=ell, got=got, want=pred["diff_one"])
    # right side, runs tau+2 .. m
    for ell in range(tau + 5, m + 1):
        rest = union_all((E(k) for k in range(tau + 2, ell - 2)), n - 1, q)
        rep.add("7'.1", E(ell).isdisjoint(rest), l=ell)
    for ell in range(tau + 4, m + 1):
        got = len(E(ell) - (E(ell - 1) | E(ell - 2)))
        rep.add("7'.2", got == pred["diff_two"], l=ell, got=got, want=pred["diff_two"])
    for ell in range(tau + 3, m + 1):
        got = len(E(ell) - E(ell - 1))
        rep.add("7'.3", got == pred["diff_one"], l=ell, got=got, want=pred["diff_one"])
    if form.sigma1 == 0 and tau > 1:
        rep.add("8:2.1", E(tau - 1).issubset(union), l=tau - 1)
    if form.sigma2 == 0 and tau < m - 1:
        rep.add("8':2.1", E(tau + 2).issubset(union), l=tau + 2)
    return rep


def transposition_instance(
    q: int, n: int, rng, left_runs: int | None = None, right_runs: int | None = None
) -> tuple[Word, Word]:
    """Random adjacent transposition pair of length n.

    The transposed position is uniform over the interior unless ``left_runs``
    (or ``right_runs``) asks for that many single-symbol runs before (after)
    the transposed pair.
    """
    if n < 4:
        raise DomainError("need n >= 4")
    if left_runs is not None and right_runs is not None:
        raise DomainError("choose left_runs or right_runs, not both")
    if left_runs is not None:
        i1 = left_runs + 1
    elif right_runs is not None:
        i1 = n - right_runs - 1
    else:
        i1 = int(rng.integers(1, n))
    if not 1 <= i1 <= n - 1:
        raise DomainError("not enough room for the requested runs")
    s = [int(v) for v in rng.integers(0, q, size=n)]
    a = s[i1 - 1]
    s[i1] = (a + int(rng.integers(1, q))) % q

    def differ_from(c):
        choices = [v for v in range(q) if v != c]
        return choices[int(rng.integers(0, len(choices)))]

    if left_runs is not None:
        for p in range(i1 - 2, -1, -1):
            s[p] = differ_from(s[p + 1])
    if right_runs is not None:
        for p in range(i1 + 1, n):
            s[p] = differ_from(s[p - 1])
    x = Word(tuple(s), q)
    t = s[:]
    t[i1 - 1], t[i1] = t[i1], t[i1 - 1]
    return x, Word(tuple(t), q)


# --- exhaustive search --------------------------------------------------------


def exhaustive_max_intersection(q: int, n: int, *, force: bool = False) -> dict:
    """Max |B^DS_{1,2}(x, x')| over all pairs at distance >= 2, split by distance.

    Balls are held as integer bitmasks over the length-(n-1) words so every
    pair costs one AND and one popcount. Ties go to the lexicographically
    smallest pair.
    """
    total = q**n
    if total > 4096 and not force:
        from .errors import GuardrailError

        raise GuardrailError(f"exhaustive pair search over {total} words refused; pass force=True")
    spec = BallSpec(1, 2)
    masks = []
    for c in range(total):
        m = 0
        for v in enum_ds_ball(Word.from_code(c, n, q), spec, force=True).codes.tolist():
            m |= 1 << v
        masks.append(m)
    words = [Word.from_code(c, n, q) for c in range(total)]
    best = {}
    for a in range(total):
        ma, wa = masks[a], words[a]
        for b in range(a + 1, total):
            d = hamming(wa, words[b]) if q > 2 else (a ^ b).bit_count()
            if d < 2:
                continue
            size = (ma & masks[b]).bit_count()
            key = min(d, 5)
            if key not in best or size > best[key][0]:
                best[key] = (size, a, b)
    per_d = {}
    for key, (size, a, b) in sorted(best.items()):
        per_d[str(key) if key < 5 else ">=5"] = {"max": size, "x": str(words[a]), "x_prime": str(words[b])}
    overall = max(best.values(), key=lambda t: (t[0], -t[1], -t[2]))
    return {
        "q": q,
        "n": n,
        "max": overall[0],
        "argmax": [str(words[overall[1]]), str(words[overall[2]])],
        "by_distance": per_d,
    }
