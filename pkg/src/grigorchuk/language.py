"""The language of the subshift: factors, complexity, powers and n-partitions."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .words import SPACERS, PointedWord, eta_prefix, level_word

__all__ = [
    "SubwordSet",
    "PartitionResult",
    "PowerReport",
    "PartitionError",
    "subwords",
    "stable_subwords",
    "factor_counts",
    "enumerated_complexity",
    "complexity_closed_form",
    "right_special",
    "max_power_scan",
    "n_partition",
    "special_sequence_window",
    "block_occurrences",
]


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class SubwordSet:
    length: int
    words: tuple[str, ...]
    source_window: int
    stabilized: bool

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return w in set(self.words)


def _factor_set(s: str, L: int) -> set[str]:
    return {s[i:i + L] for i in range(len(s) - L + 1)}


def subwords(L: int, window: int) -> SubwordSet:
    """All distinct factors of length ``L`` of ``eta_1 ... eta_window``.

    ``stabilized`` records whether the doubled prefix yields the same set.
    """
    if L < 1:
        raise ValueError("L must be positive")
    if L > window:
        raise ValueError(f"factor length {L} exceeds window {window}")
    s = eta_prefix(2 * window)
    found = _factor_set(s[:window], L)
    stable = found == _factor_set(s, L)
    return SubwordSet(L, tuple(sorted(found)), window, stable)


def stable_subwords(L: int, window: int | None = None) -> SubwordSet:
    """Like :func:`subwords`, doubling the window until the set stabilises."""
    window = window or max(64, 16 * L)
    while True:
        res = subwords(L, window)
        if res.stabilized:
            return res
        window *= 2


# -- counting factors of every length at once ---------------------------------

def _doubling_ranks(codes: np.ndarray, levels: int) -> list[np.ndarray]:
    """``ranks[j][i]`` orders ``s[i:i+2**j]`` (end of string sorts first)."""
    n = len(codes)
    _, rank = np.unique(codes, return_inverse=True)
    rank = rank.astype(np.int64) + 1
    ranks = [rank]
    for j in range(levels):
        k = 1 << j
        second = np.zeros(n, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        key = rank * (n + 1) + second
        _, rank = np.unique(key, return_inverse=True)
        rank = rank.astype(np.int64) + 1
        ranks.append(rank)
    return ranks


def factor_counts(s: str, max_len: int) -> np.ndarray:
    """Number of distinct factors of ``s`` of each length ``0 .. max_len``.

    Suffixes are sorted by their first ``2**K > max_len`` letters; factors of
    length ``L`` then form contiguous blocks, and their number is the count of
    suffixes of length at least ``L`` minus the adjacent pairs sharing a
    prefix of length ``L``.
    """
    n = len(s)
    levels = max(1, int(max_len).bit_length())
    codes = np.frombuffer(s.encode("ascii"), dtype=np.uint8)
    ranks = _doubling_ranks(codes, levels)
    order = np.argsort(ranks[-1], kind="stable")
    left, right = order[:-1], order[1:]
    # common prefix length of neighbours, capped at 2**levels - 1
    lcp = np.zeros(n - 1, dtype=np.int64)
    for j in range(levels - 1, -1, -1):
        k = 1 << j
        i1, i2 = left + lcp, right + lcp
        ok = (i1 < n) & (i2 < n)
        same = np.zeros(n - 1, dtype=bool)
        same[ok] = ranks[j][i1[ok]] == ranks[j][i2[ok]]
        # a truncated block never equals a full one; guard the overrun
        same &= (i1 + k <= n) & (i2 + k <= n)
        lcp[same] += k
    lengths = np.arange(max_len + 1)
    suffixes_long_enough = np.maximum(n - lengths + 1, 0)
    suffixes_long_enough[0] = 1
    hist = np.bincount(np.minimum(lcp, max_len + 1), minlength=max_len + 2)
    ge = np.cumsum(hist[::-1])[::-1]  # ge[L] = #pairs with lcp >= L
    counts = suffixes_long_enough - ge[: max_len + 1]
    counts[0] = 1
    return counts


def enumerated_complexity(max_len: int, window: int | None = None) -> tuple[np.ndarray, int]:
    """Factor counts of eta for lengths ``0 .. max_len``.

    The eta prefix is doubled until the counts no longer change; returns the
    counts and the window they stabilised at.
    """
    window = window or max(1024, 16 * max_len)
    counts = factor_counts(eta_prefix(window), max_len)
    while True:
        bigger = factor_counts(eta_prefix(2 * window), max_len)
        if np.array_equal(counts, bigger):
            return counts, window
        window, counts = 2 * window, bigger


def complexity_closed_form(L: int) -> int:
    if L < 1:
        raise ValueError("L must be positive")
    if L <= 3:
        return (4, 6, 8)[L - 1]
    n = L.bit_length() - 1
    k = L - 2**n
    if k < 2 ** (n - 1):
        return 2 ** (n + 1) + 2 ** (n - 1) + 3 * k
    return 2 ** (n + 1) + 2**n + 2 * k


def right_special(L: int, window: int | None = None) -> list[tuple[str, str]]:
    """Factors of length ``L`` with at least two right extensions."""
    if L < 1:
        raise ValueError("L must be positive")
    ext = defaultdict(set)
    for w in stable_subwords(L + 1, window).words:
        ext[w[:-1]].add(w[-1])
    return [(w, "".join(sorted(e))) for w, e in sorted(ext.items()) if len(e) > 1]


# -- powers --------------------------------------------------------------------

@dataclass
class PowerReport:
    max_len: int
    window: int
    max_index: Fraction
    max_index_word: str
    index_by_length: dict[int, Fraction] = field(default_factory=dict)
    witness_by_length: dict[int, str] = field(default_factory=dict)
    cube_root_lengths: list[int] = field(default_factory=list)

    @property
    def has_fourth_power(self) -> bool:
        return self.max_index >= 4


def _longest_true_run(mask: np.ndarray) -> tuple[int, int]:
    """Length and start of the longest run of ``True``."""
    if not mask.any():
        return 0, 0
    padded = np.concatenate(([0], mask.view(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    starts, ends = edges[::2], edges[1::2]
    j = int(np.argmax(ends - starts))
    return int(ends[j] - starts[j]), int(starts[j])


def max_power_scan(max_len: int, window: int) -> PowerReport:
    """Largest index ``N + |v|/|w|`` of factors ``w`` with ``|w| <= max_len``.

    For each period ``p`` the longest stretch of the prefix with period ``p``
    gives the largest power of a length ``p`` word.
    """
    if window < 4 * max_len:
        raise ValueError("window must be at least 4 * max_len")
    s = np.frombuffer(eta_prefix(window).encode("ascii"), dtype=np.uint8)
    text = eta_prefix(window)
    report = PowerReport(max_len, window, Fraction(0), "")
    for p in range(1, max_len + 1):
        run, start = _longest_true_run(s[:-p] == s[p:])
        total = run + p
        index = Fraction(total, p)
        report.index_by_length[p] = index
        report.witness_by_length[p] = text[start:start + total]
        if run >= 2 * p:
            report.cube_root_lengths.append(p)
        if index > report.max_index:
            report.max_index = index
            report.max_index_word = text[start:start + p]
    return report


# -- n-partitions ----------------------------------------------------------------

@dataclass(frozen=True)
class PartitionResult:
    n: int
    residue: int
    witness_positions: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return 2 ** (self.n + 1)


_SPACER_CODES = np.frombuffer(SPACERS.encode("ascii"), dtype=np.uint8)


def _codes(w: str) -> np.ndarray:
    return np.frombuffer(w.encode("ascii"), dtype=np.uint8)


def _consistent(letters: np.ndarray, positions: np.ndarray, pattern: np.ndarray,
                q0: int, period: int) -> bool:
    """Does every visible letter agree with spacers at ``q0 + period*Z``?

    ``pattern[0]`` is a wildcard code standing for any spacer.
    """
    r = (positions - q0) % period
    expected = pattern[r]
    spacer_slot = r == 0
    if not np.all(letters[~spacer_slot] == expected[~spacer_slot]):
        return False
    return bool(np.all(np.isin(letters[spacer_slot], _SPACER_CODES)))


def n_partition(w: PointedWord, n: int) -> PartitionResult:
    """The unique residue class mod ``2**(n+1)`` carrying the spacers.

    Every one of the ``2**(n+1)`` classes is tested against all visible
    letters; exactly one must fit.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    period = 2 ** (n + 1)
    if len(w) < 3 * period:
        raise PartitionError(f"window of length {len(w)} too short for n={n}")
    letters = _codes(w.word)
    positions = np.arange(w.first, w.last + 1)
    pattern = _codes("?" + level_word(n))
    fits = [r for r in range(period) if _consistent(letters, positions, pattern, r, period)]
    if not fits:
        raise PartitionError("no residue class fits; not a window of the subshift")
    if len(fits) > 1:
        raise PartitionError(f"several residue classes fit: {fits}")
    r = fits[0]
    first = w.first + (r - w.first) % period
    return PartitionResult(n, r, tuple(range(first, w.last + 1, period)))


def special_sequence_window(s: str, radius: int) -> PointedWord:
    """``omega_(-radius+1) ... omega_radius`` of the sequence ``... p s | p ...``.

    For ``j >= 1`` both ``omega_j`` and ``omega_(-j)`` equal ``eta_j``, and
    ``omega_0 = s``.
    """
    if s not in SPACERS:
        raise ValueError("s must be one of x, y, z")
    if radius < 1:
        raise ValueError("radius must be positive")
    right = eta_prefix(radius)
    left = right[: radius - 1][::-1]
    return PointedWord(left + s + right, radius + 1)


def block_occurrences(n: int, s: str, window: int) -> list[int]:
    """1-based start positions of ``p(n) s p(n)`` in ``eta_1 ... eta_window``."""
    p = level_word(n)
    target = p + s + p
    text = eta_prefix(window)
    out, i = [], text.find(target)
    while i >= 0:
        out.append(i + 1)
        i = text.find(target, i + 1)
    return out


def derived_sequence(n: int, count: int) -> str:
    """First ``count`` spacers ``r_1^(n) r_2^(n) ...`` of the n-decomposition of eta."""
    period = 2 ** (n + 1)
    text = eta_prefix(period * count)
    return text[period - 1::period]
