"""Exhaustive pump-sensitive linkage checks over four-segment splits.

A word is split into four consecutive segments by three cuts.  A segment
pair (first and third, or second and fourth) is pump-sensitively linked
for a language when every factorization u v x y z whose pumping window
vxy meets exactly one member of the pair and misses the other, with v or
y nonempty, pumps out of the language: u v v x y y z is not a member.
The checker enumerates every factorization of the given word, so its
verdicts are exact for that word while remaining finite evidence about
the family it was drawn from.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arcs import SegmentDecomposition

FOUR_LARGE = "four-large"
INNER_GROWING = "inner-growing"

OUTER_PAIR = (1, 3)
INNER_PAIR = (2, 4)


@dataclass(frozen=True)
class Factorization:
    cuts: tuple  # (a, b, c, d) with u=w[:a], v=w[a:b], x=w[b:c], y=w[c:d]

    def parts(self, word: str) -> tuple:
        a, b, c, d = self.cuts
        return (word[:a], word[a:b], word[b:c], word[c:d], word[d:])

    def pumped(self, word: str) -> str:
        u, v, x, y, z = self.parts(word)
        return u + v + v + x + y + y + z

    def window(self) -> tuple:
        return (self.cuts[0], self.cuts[3])


@dataclass(frozen=True)
class Counterexample:
    factorization: Factorization
    parts: tuple
    pumped: str


@dataclass(frozen=True)
class LinkageReport:
    pair: tuple
    holds: bool
    vacuous: bool
    counterexample: Counterexample | None
    examined: int
    relevant: int
    oracle_calls: int


@dataclass(frozen=True)
class CaseTrace:
    label: str
    touched: tuple
    invoked_pair: tuple | None


@dataclass(frozen=True)
class HypothesesReport:
    mode: str
    n: int
    segment_lengths: tuple
    sizes_ok: bool
    outer_linkage: LinkageReport
    inner_linkage: LinkageReport
    holds: bool
    note: str


def _segment_intervals(cuts: SegmentDecomposition) -> tuple:
    i, i_prime, j = cuts.cuts()
    return ((0, i), (i, i_prime), (i_prime, j), (j, cuts.word_len))


def _meets(window: tuple, interval: tuple) -> bool:
    return max(window[0], interval[0]) < min(window[1], interval[1])


def _factorizations(n: int):
    """All cut tuples ordered by window width, then left to right."""
    for width in range(n + 1):
        for a in range(n - width + 1):
            d = a + width
            for b in range(a, d + 1):
                for c in range(b, d + 1):
                    yield (a, b, c, d)


def check_linkage(
    oracle, word: str, cuts: SegmentDecomposition, pair: tuple = OUTER_PAIR
) -> LinkageReport:
    """Exhaustively test one segment pair; the reported counterexample, if
    any, is the first in window-width order.

    `oracle` is a membership predicate for the language under test.  When
    either member of the pair is empty the linkage holds vacuously and no
    factorization is examined.
    """
    if pair not in (OUTER_PAIR, INNER_PAIR):
        raise ValueError(f"pair must be {OUTER_PAIR} or {INNER_PAIR}")
    if cuts.word_len != len(word):
        raise ValueError("cut positions were made for a different word length")
    intervals = _segment_intervals(cuts)
    member_a = intervals[pair[0] - 1]
    member_b = intervals[pair[1] - 1]
    if member_a[0] == member_a[1] or member_b[0] == member_b[1]:
        return LinkageReport(pair, True, True, None, 0, 0, 0)
    n = len(word)
    memo: dict = {}

    def member(w: str) -> bool:
        if w not in memo:
            memo[w] = bool(oracle(w))
        return memo[w]

    examined = 0
    relevant = 0
    for a, b, c, d in _factorizations(n):
        examined += 1
        if b == a and d == c:
            continue
        window = (a, d)
        if _meets(window, member_a) == _meets(window, member_b):
            continue
        relevant += 1
        fact = Factorization((a, b, c, d))
        pumped = fact.pumped(word)
        if member(pumped):
            return LinkageReport(
                pair,
                False,
                False,
                Counterexample(fact, fact.parts(word), pumped),
                examined,
                relevant,
                len(memo),
            )
    return LinkageReport(pair, True, False, None, examined, relevant, len(memo))


def case_trace(
    word: str, cuts: SegmentDecomposition, factorization: Factorization
) -> CaseTrace:
    """Which segments the pumping window meets, and which linkage that
    invokes: the outer pair when exactly one of segments one and three is
    met, else the inner pair when exactly one of two and four is, else
    none."""
    if cuts.word_len != len(word):
        raise ValueError("cut positions were made for a different word length")
    intervals = _segment_intervals(cuts)
    window = factorization.window()
    touched = tuple(
        idx for idx, iv in enumerate(intervals, start=1) if _meets(window, iv)
    )
    if not touched:
        label = "empty-window"
    elif len(touched) == 1:
        label = f"inside-segment-{touched[0]}"
    elif len(touched) == 2:
        label = f"straddle-segments-{touched[0]}-{touched[1]}"
    else:
        label = "multi-straddle"
    if (1 in touched) != (3 in touched):
        invoked = OUTER_PAIR
    elif (2 in touched) != (4 in touched):
        invoked = INNER_PAIR
    else:
        invoked = None
    return CaseTrace(label, touched, invoked)


def check_crossing_hypotheses(
    oracle, word: str, cuts: SegmentDecomposition, mode: str, n: int
) -> HypothesesReport:
    """Size conditions plus both linkages for one witness word.

    four-large asks all four segments to have length at least n;
    inner-growing asks it only of the two inner segments.  The verdict is
    exact for this word and finite evidence only for its family.
    """
    if mode not in (FOUR_LARGE, INNER_GROWING):
        raise ValueError(f"mode must be {FOUR_LARGE!r} or {INNER_GROWING!r}")
    if n < 1:
        raise ValueError("size threshold must be positive")
    lengths = cuts.lengths()
    if mode == FOUR_LARGE:
        sizes_ok = all(length >= n for length in lengths)
    else:
        sizes_ok = lengths[1] >= n and lengths[2] >= n
    outer = check_linkage(oracle, word, cuts, OUTER_PAIR)
    inner = check_linkage(oracle, word, cuts, INNER_PAIR)
    return HypothesesReport(
        mode=mode,
        n=n,
        segment_lengths=lengths,
        sizes_ok=sizes_ok,
        outer_linkage=outer,
        inner_linkage=inner,
        holds=sizes_ok and outer.holds and inner.holds,
        note="exhaustive for this word; finite evidence only for the family",
    )
