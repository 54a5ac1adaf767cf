"""Invariant suites: each returns a SuiteResult with one entry per check."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import bounds as bd
from .balls import (
    BallSpec,
    enum_ds_ball,
    enum_sub_ball,
    sub2_intersection_size,
    xi_02_deleted_closed,
    xi_0s,
    xi_d2_closed,
    xi_ds,
)
from .cells import (
    brute_intersection,
    ds12_intersection_via_cells,
    histogram_violations,
    lemma3_violations,
    lemma4_relations,
    observation2_exhaustive,
    pair_distance_histogram,
    sub2_intersection_structural,
)
from .errors import DomainError
from .words import Word, delete_at, hamming, run_index_of, run_profile

SUITES = ("xi", "lemma2", "cells", "lemma3-tables", "claims", "bound")
RANDOMIZED = {"lemma2": "random", "cells": "random", "lemma3-tables": "always", "claims": "always"}


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def add(self, name: str, passed: bool, counterexample=None, **details):
        entry = {"name": name, "passed": bool(passed), **details}
        if counterexample is not None and not passed:
            entry["counterexample"] = counterexample
        self.checks.append(entry)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": self.checks, "info": self.info}


def _rng(seed):
    if seed is None:
        raise DomainError("this suite samples at random and needs a seed")
    return np.random.Generator(np.random.PCG64(seed))


def random_pair(q: int, n: int, d: int, rng) -> tuple[Word, Word]:
    """Uniform word x and a partner at exact Hamming distance d."""
    x = rng.integers(0, q, size=n)
    y = x.copy()
    pos = rng.choice(n, size=d, replace=False)
    y[pos] = (y[pos] + rng.integers(1, q, size=d)) % q
    return Word(tuple(int(v) for v in x), q), Word(tuple(int(v) for v in y), q)


# --- xi ---------------------------------------------------------------------


def xi_formulas(qs=(2, 3, 4), n_min=3, n_max=8, s_values=(1, 2, 3)) -> SuiteResult:
    """Ball sizes and substitution-ball intersection sizes against the formulas.

    Intersection sizes are translation invariant (v -> v - u is a bijection
    of Z_q^n), so pairing the zero word with every other word covers every
    pair's distance class exactly.
    """
    res = SuiteResult("xi")
    for q in qs:
        for n in range(n_min, n_max + 1):
            words = [Word.from_code(c, n, q) for c in range(q**n)]
            for s in s_values:
                want = xi_0s(q, n, s)
                zero = enum_sub_ball(words[0], s)
                bad = None
                sizes = {}
                for w in words:
                    ball = enum_sub_ball(w, s)
                    if len(ball) != want:
                        bad = bad or str(w)
                    d = sum(1 for v in w.symbols if v)
                    if d:
                        sizes.setdefault(d, set()).add(len(zero & ball))
                res.add(f"ball_size q={q} n={n} s={s}", bad is None, counterexample=bad, expected=want)
                for d in sorted(sizes):
                    expect = xi_ds(q, n, d, s) if d <= 2 * s else 0
                    got = sizes[d]
                    res.add(
                        f"intersection q={q} n={n} s={s} d={d}",
                        got == {expect},
                        counterexample=sorted(got),
                        expected=expect,
                    )
    return res


def closed_forms(q_max=6, length_max=40) -> SuiteResult:
    res = SuiteResult("closed-forms")
    bad = []
    for q in range(2, q_max + 1):
        for L in range(4, length_max + 1):
            for d in range(1, 5):
                if xi_d2_closed(q, L, d) != xi_ds(q, L, d, 2):
                    bad.append(("eq5", q, L, d))
            if xi_02_deleted_closed(q, L + 1) != xi_0s(q, L, 2):
                bad.append(("eq4", q, L))
            seq = [sub2_intersection_size(q, L, d) for d in range(5)]
            if q > 2:
                if any(seq[d] >= seq[d - 1] for d in range(1, 5)):
                    bad.append(("strictly decreasing", q, L))
            elif not (seq[0] > seq[1] == seq[2] > seq[3] == seq[4]):
                # binary sizes tie at d = 1, 2 and at d = 3, 4
                bad.append(("binary ties", q, L))
    res.add("closed forms agree with the sums", not bad, counterexample=bad[:5])
    spec_bad = [L for L in range(4, length_max + 1) if not (
        xi_d2_closed(2, L, 1) == xi_d2_closed(2, L, 2) == 2 * L
        and xi_d2_closed(2, L, 3) == xi_d2_closed(2, L, 4) == 6
    )]
    res.add("binary specializations 2(n-1) and 6", not spec_bad, counterexample=spec_bad[:5])
    return res


# --- lemma2 -----------------------------------------------------------------


def lemma2(exhaustive_n_max=6, random_q=(2, 3), random_n=9, per_d=500, seed=None) -> SuiteResult:
    res = SuiteResult("lemma2")
    for n in range(1, exhaustive_n_max + 1):
        words = [Word(s, 2) for s in product(range(2), repeat=n)]
        balls = {w: enum_sub_ball(w, 2) for w in words}
        bad, count = None, 0
        for u in words:
            for up in words:
                d = hamming(u, up)
                if not 1 <= d <= 4:
                    continue
                count += 1
                if sub2_intersection_structural(u, up) != balls[u] & balls[up]:
                    bad = bad or (str(u), str(up))
        res.add(f"exhaustive q=2 n={n}", bad is None, counterexample=bad, pairs=count)
    if seed is not None:
        rng = _rng(seed)
        for q in random_q:
            for d in range(1, 5):
                bad = None
                for _ in range(per_d):
                    u, up = random_pair(q, random_n, d, rng)
                    got = sub2_intersection_structural(u, up)
                    if got != enum_sub_ball(u, 2) & enum_sub_ball(up, 2) or len(got) != xi_ds(q, random_n, d, 2):
                        bad = bad or (str(u), str(up))
                res.add(f"random q={q} n={random_n} d={d}", bad is None, counterexample=bad, pairs=per_d)
    return res


# --- cells ------------------------------------------------------------------


def cells_suite(
    qs=(2, 3),
    obs_n_max=8,
    union_q=2,
    union_n_max=7,
    random_cases=((2, 10), (3, 8)),
    per_case=200,
    seed=None,
    exhaustive=True,
) -> SuiteResult:
    res = SuiteResult("cells")
    if exhaustive:
        for q in qs:
            for n in range(2, obs_n_max + 1):
                out = observation2_exhaustive(q, n)
                res.add(
                    f"window identity q={q} n={n}",
                    out["mismatches"] == 0,
                    counterexample=out.get("counterexample"),
                    checked=out["checked"],
                )
        for n in range(4, union_n_max + 1):
            words = [Word.from_code(c, n, union_q) for c in range(union_q**n)]
            balls = {w: enum_ds_ball(w, BallSpec(1, 2)) for w in words}
            bad = None
            for x in words:
                for xp in words:
                    if ds12_intersection_via_cells(x, xp) != balls[x] & balls[xp]:
                        bad = bad or (str(x), str(xp))
            res.add(f"cell union exhaustive q={union_q} n={n}", bad is None, counterexample=bad)
        # run-index distance of two deletions from one word
        for q in qs:
            n = min(obs_n_max, 6 if q > 2 else 8)
            bad = None
            for c in range(q**n):
                x = Word.from_code(c, n, q)
                rp = run_profile(x)
                dels = [delete_at(x, j) for j in range(1, n + 1)]
                lam = [run_index_of(x, j, rp) for j in range(1, n + 1)]
                for j in range(n):
                    for jp in range(n):
                        if hamming(dels[j], dels[jp]) != abs(lam[j] - lam[jp]):
                            bad = bad or (str(x), j + 1, jp + 1)
            res.add(f"run-index distance q={q} n={n}", bad is None, counterexample=bad)
    if seed is not None:
        rng = _rng(seed)
        for q, n in random_cases:
            bad = None
            for _ in range(per_case):
                d = int(rng.integers(0, n + 1))
                x, xp = random_pair(q, n, d, rng)
                if ds12_intersection_via_cells(x, xp) != brute_intersection(x, xp, BallSpec(1, 2)):
                    bad = bad or (str(x), str(xp))
            res.add(f"cell union random q={q} n={n}", bad is None, counterexample=bad, pairs=per_case)
        bad, count = None, 0
        for q in qs:
            for _ in range(100):
                x, xp = _long_prefix_pair(q, 12, rng)
                for r in lemma4_relations(x, xp):
                    count += 1
                    if not r["holds"]:
                        bad = bad or (str(x), str(xp), r)
        res.add("cell inclusions for support-free windows", bad is None, counterexample=bad, relations=count)
    return res


def _long_prefix_pair(q, n, rng):
    """d = 2 pair with both differences in the last third of the word."""
    x = rng.integers(0, q, size=n)
    y = x.copy()
    pos = rng.choice(np.arange(2 * n // 3, n), size=2, replace=False)
    y[pos] = (y[pos] + rng.integers(1, q, size=2)) % q
    return Word(tuple(int(v) for v in x), q), Word(tuple(int(v) for v in y), q)


# --- lemma3 tables ----------------------------------------------------------


def lemma3_tables(qs=(2, 3), n=12, ds=(2, 3, 4, 5, 6), per_d=1000, two_sided_extra=1000, seed=None) -> SuiteResult:
    res = SuiteResult("lemma3-tables")
    rng = _rng(seed)
    two_sided_seen = 0
    for q in qs:
        for d in ds:
            tbad = lbad = None
            for _ in range(per_d):
                x, xp = random_pair(q, n, d, rng)
                h = pair_distance_histogram(x, xp)
                two_sided_seen += h.two_sided
                if h.total != h.m * h.m_prime:
                    tbad = tbad or (str(x), str(xp), "total")
                v = histogram_violations(h)
                if v:
                    tbad = tbad or (str(x), str(xp), v)
                w = lemma3_violations(x, xp, h)
                if w:
                    lbad = lbad or (str(x), str(xp), w)
            res.add(f"table bounds q={q} n={n} d={d}", tbad is None, counterexample=tbad, pairs=per_d)
            res.add(f"per-window bounds q={q} n={n} d={d}", lbad is None, counterexample=lbad, pairs=per_d)
        # pairs drawn until enough of them are two-sided
        got, tries, worst, bad = 0, 0, 0, None
        while got < two_sided_extra and tries < 200 * two_sided_extra:
            tries += 1
            x, xp = random_pair(q, n, 2, rng)
            h = pair_distance_histogram(x, xp)
            if not h.two_sided:
                continue
            got += 1
            worst = max(worst, h.column(2))
            if histogram_violations(h):
                bad = bad or (str(x), str(xp))
        res.add(
            f"two-sided column total q={q} n={n}",
            bad is None and got == two_sided_extra,
            counterexample=bad,
            pairs=got,
            max_column_2=worst,
            bound=n + 10,
        )
    res.info["two_sided_in_main_sample"] = two_sided_seen
    return res


# --- claims -----------------------------------------------------------------


def claims(qs=(2, 3), ns=range(6, 11), per_case=60, seed=None) -> SuiteResult:
    """Exact cell identities on adjacent transposition instances.

    Instances rotate between a random word, a run-rich prefix and a run-rich
    suffix so that both the left and right identities get exercised.
    """
    res = SuiteResult("claims")
    rng = _rng(seed)
    tally, used, fails, instances = {}, {}, {}, 0
    for q in qs:
        for n in ns:
            for t in range(per_case):
                kind = t % 3
                if kind == 0:
                    x, xp = bd.transposition_instance(q, n, rng)
                elif kind == 1:
                    x, xp = bd.transposition_instance(q, n, rng, left_runs=int(rng.integers(n // 2, n - 1)))
                else:
                    x, xp = bd.transposition_instance(q, n, rng, right_runs=int(rng.integers(n // 2 - 1, n - 2)))
                instances += 1
                rep = bd.check_claims(x, xp)
                for c in rep.checks:
                    key = c["claim"]
                    tally[key] = tally.get(key, 0) + 1
                    used.setdefault(key, set()).add(instances)
                    if not c["holds"] and key not in fails:
                        fails[key] = {"x": rep.x, "x_prime": rep.xp, **c}
    for key in sorted(tally):
        res.add(
            f"claim {key}",
            key not in fails,
            counterexample=fails.get(key),
            applications=tally[key],
            instances=len(used[key]),
        )
    pred = bd.claim_cell_predictions(2, 8)
    res.add("union prediction at q=2 n=8", pred["union_i1_i2"] == 44, got=pred["union_i1_i2"])
    res.info["instances"] = instances
    return res


# --- bound ------------------------------------------------------------------


def bound_suite(q=2, n=9, fit_ns=(12, 14, 16, 18)) -> SuiteResult:
    """Exhaustive maximum against the quadratic bound with the fitted constant."""
    res = SuiteResult("bound")
    t0 = time.perf_counter()
    sweep = bd.extremal_sweep(q, fit_ns)
    fit = bd.fit_quadratic(sweep)
    c_star = fit.c
    exh = bd.exhaustive_max_intersection(q, n)
    bound = bd.theorem_bound(q, n, 0) + c_star
    a_thm, b_thm = bd.bound_coefficients(q)
    res.info.update(
        extremal_sizes=[list(p) for p in sweep],
        fit={"a": str(fit.a), "b": str(fit.b), "c": str(fit.c), "consistent": fit.consistent},
        theorem_coefficients={"a": a_thm, "b": b_thm},
        c_star=str(c_star),
        exhaustive=exh,
        bound=str(bound),
        margin=str(bound - exh["max"]),
        seconds=round(time.perf_counter() - t0, 3),
    )
    res.add("exhaustive max within bound", exh["max"] <= bound, max=exh["max"], bound=str(bound))
    d2 = exh["by_distance"].get("2", {}).get("max", 0)
    others = {k: v["max"] for k, v in exh["by_distance"].items() if k != "2"}
    res.add("distance-2 maximum dominates", all(d2 >= v for v in others.values()), d2=d2, others=others)
    return res


def run_suite(name: str, **kw) -> SuiteResult:
    if name == "xi":
        r = xi_formulas(**{k: v for k, v in kw.items() if k in ("qs", "n_min", "n_max", "s_values")})
        cf = closed_forms()
        r.checks.extend(cf.checks)
        return r
    if name == "lemma2":
        return lemma2(**kw)
    if name == "cells":
        return cells_suite(**kw)
    if name == "lemma3-tables":
        return lemma3_tables(**kw)
    if name == "claims":
        return claims(**kw)
    if name == "bound":
        return bound_suite(**kw)
    raise DomainError(f"unknown suite {name!r}")
