from itertools import combinations, product

import pytest

from delsubrecon.words import Word


def naive_sub_ball(u, s):
    """Every word within Hamming distance s of u, by direct enumeration."""
    q, n = u.q, len(u)
    out = set()
    for k in range(s + 1):
        for pos in combinations(range(n), k):
            for vals in product(range(1, q), repeat=k):
                v = list(u.symbols)
                for p, e in zip(pos, vals):
                    v[p] = (v[p] + e) % q
                out.add(tuple(v))
    return out


def naive_ds_ball(x, t, s):
    """Delete t symbols in every way, then substitute up to s."""
    n = len(x)
    out = set()
    shorts = {tuple(c for i, c in enumerate(x.symbols) if i not in set(drop)) for drop in combinations(range(n), t)}
    for sh in shorts:
        out |= naive_sub_ball(Word(sh, x.q), s)
    return out


def all_words(q, n):
    return [Word(s, q) for s in product(range(q), repeat=n)]


@pytest.fixture
def oracle():
    class O:
        sub_ball = staticmethod(naive_sub_ball)
        ds_ball = staticmethod(naive_ds_ball)
        words = staticmethod(all_words)

    return O


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion."""

    def record(key, ok, detail=""):
        line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _CRITERIA[key] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: (int(k.rstrip("ab")), k)):
        terminalreporter.write_line(_CRITERIA[key])
