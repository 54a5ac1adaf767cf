"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line; the lines are repeated in the
terminal summary at the end of the run.
"""

import time

import pytest

from delsubrecon import verify as vf
from delsubrecon.balls import xi_0s, xi_ds
from delsubrecon.bounds import bound_coefficients, exhaustive_max_intersection, extremal_sweep, fit_quadratic, quadratic_onset
from delsubrecon.cells import deletion_pair_distance
from delsubrecon.recon import Code, read_coverage, simulate
from delsubrecon.words import Word, delete_at, hamming


def _failed(res):
    return [c["name"] for c in res.checks if not c["passed"]]


def _extremal_fit():
    pts = extremal_sweep(2, [12, 14, 16, 18])
    return pts, fit_quadratic(pts)


def test_c1_xi_formulas(criterion, oracle):
    t0 = time.perf_counter()
    res = vf.xi_formulas(qs=(2, 3, 4), n_min=3, n_max=8, s_values=(1, 2, 3))
    dt = time.perf_counter() - t0
    # spot check against direct set enumeration, independent of the package
    spot = []
    for q, n in [(2, 4), (3, 3), (4, 3)]:
        ws = oracle.words(q, n)
        for s in (1, 2, 3):
            base = oracle.sub_ball(ws[0], s)
            spot.append(len(base) == xi_0s(q, n, s))
            for w in ws[1:]:
                d = sum(1 for v in w.symbols if v)
                want = xi_ds(q, n, d, s) if d <= 2 * s else 0
                spot.append(len(base & oracle.sub_ball(w, s)) == want)
    ok = res.passed and all(spot) and dt < 30
    criterion("1", ok, f"{len(res.checks)} checks, {dt:.1f}s")
    assert not _failed(res)
    assert all(spot)
    assert dt < 30


def test_c2_closed_forms(criterion):
    t0 = time.perf_counter()
    res = vf.closed_forms(q_max=6, length_max=40)
    dt = time.perf_counter() - t0
    ok = res.passed and dt < 1
    criterion("2", ok, f"{dt:.2f}s")
    assert not _failed(res)
    assert dt < 1


def test_c3_lemma2(criterion):
    t0 = time.perf_counter()
    res = vf.lemma2(exhaustive_n_max=6, random_q=(2, 3), random_n=9, per_d=500, seed=20)
    dt = time.perf_counter() - t0
    criterion("3", res.passed and dt < 60, f"{len(res.checks)} checks, {dt:.1f}s")
    assert not _failed(res)
    assert dt < 60


def test_c4_window_machinery(criterion):
    t0 = time.perf_counter()
    res = vf.cells_suite(
        qs=(2, 3), obs_n_max=8, union_q=2, union_n_max=7, random_cases=((2, 10), (3, 8)), per_case=200, seed=40
    )
    # a few direct comparisons outside the compiled kernel
    direct = all(
        deletion_pair_distance(x, y, j, jp).d_prime == hamming(delete_at(x, j), delete_at(y, jp))
        for x, y in [(Word((0, 1, 2, 2, 1, 0, 0, 1), 3), Word((2, 1, 0, 2, 1, 1, 0, 1), 3))]
        for j in range(1, 9)
        for jp in range(1, 9)
    )
    dt = time.perf_counter() - t0
    criterion("4", res.passed and direct and dt < 300, f"{len(res.checks)} checks, {dt:.1f}s")
    assert not _failed(res)
    assert direct
    assert dt < 300


def test_c5_tables(criterion):
    t0 = time.perf_counter()
    res = vf.lemma3_tables(qs=(2, 3), n=12, ds=(2, 3, 4, 5, 6), per_d=1000, seed=50)
    dt = time.perf_counter() - t0
    criterion("5", res.passed and dt < 120, f"{len(res.checks)} checks, {dt:.1f}s")
    assert not _failed(res)
    assert dt < 120


def test_c6_transposition_identities(criterion):
    t0 = time.perf_counter()
    res = vf.claims(qs=(2, 3), ns=range(6, 11), seed=60)
    dt = time.perf_counter() - t0
    per_claim = {c["name"]: c["instances"] for c in res.checks if "instances" in c}
    fewest = min(per_claim.values())
    ok = res.passed and fewest >= 100 and dt < 120
    criterion("6", ok, f"{res.info['instances']} instances, fewest per identity {fewest}, {dt:.1f}s")
    assert not _failed(res)
    assert fewest >= 100
    assert dt < 120


@pytest.mark.xfail(
    strict=True,
    reason="exact fit of the extremal sizes gives b = -19; the stated -27 (and -(3q^2+5q-5) = -17) are not attained",
)
def test_c7_coefficient_recovery(criterion):
    t0 = time.perf_counter()
    pts, fit = _extremal_fit()
    dt = time.perf_counter() - t0
    onset = quadratic_onset(extremal_sweep(2, range(8, 21, 2)))
    ok = fit.consistent and fit.is_integral() and fit.a == 3 and fit.b == -27 and dt < 600
    criterion(
        "7",
        ok,
        f"sizes {[v for _, v in pts]}, fit a={fit.a} b={fit.b} c={fit.c}, onset n={onset}, "
        f"formula b={bound_coefficients(2)[1]}, {dt:.1f}s",
    )
    assert fit.consistent and fit.is_integral()
    assert fit.a == 3
    assert fit.b == -27


@pytest.mark.xfail(
    strict=True,
    reason="with c* from the extremal fit, 3n^2 - 27n + c* = 34 at n = 9, below the exhaustive maximum 111",
)
def test_c8a_upper_bound(criterion):
    t0 = time.perf_counter()
    _, fit = _extremal_fit()
    exh = exhaustive_max_intersection(2, 9)
    n = 9
    bound = 3 * n * n - 27 * n + fit.c
    margin = bound - exh["max"]
    dt = time.perf_counter() - t0
    criterion("8a", margin >= 0 and dt < 900, f"max {exh['max']} at {exh['argmax']}, bound {bound}, margin {margin}")
    assert margin >= 0


def test_c8b_distance_two_dominates(criterion):
    t0 = time.perf_counter()
    exh = exhaustive_max_intersection(2, 9)
    dt = time.perf_counter() - t0
    per = {k: v["max"] for k, v in exh["by_distance"].items()}
    ok = all(per["2"] >= v for v in per.values()) and dt < 900
    criterion("8b", ok, f"per-distance maxima {per}, {dt:.1f}s")
    assert all(per["2"] >= v for v in per.values())


def test_c9_reconstruction(criterion):
    t0 = time.perf_counter()
    rep = Code.from_strings(["0000", "1111"])
    nu_rep = read_coverage(rep).nu
    r1 = simulate(rep, 7, 1000, seed=1)
    ev = Code.even_weight(8)
    cov = read_coverage(ev, exhaustive=True)
    r2 = simulate(ev, cov.nu + 1, 1000, seed=2, feasible_only=True)
    dt = time.perf_counter() - t0
    ok = nu_rep == 6 and r1.unique_correct == 1000 and cov.exact and r2.unique_correct == 1000 and dt < 300
    criterion(
        "9",
        ok,
        f"nu={nu_rep} -> {r1.unique_correct}/1000; even-weight nu={cov.nu} -> {r2.unique_correct}/1000 "
        f"({r2.sources} of {len(ev)} codewords admit {cov.nu + 1} reads), {dt:.1f}s",
    )
    assert nu_rep == 6
    assert r1.unique_correct == 1000
    assert cov.exact and cov.nu == 78
    assert r2.unique_correct == 1000
