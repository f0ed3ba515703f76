from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grigorchuk.language import (
    PartitionError,
    block_occurrences,
    complexity_closed_form,
    derived_sequence,
    enumerated_complexity,
    factor_counts,
    max_power_scan,
    n_partition,
    right_special,
    special_sequence_window,
    stable_subwords,
    subwords,
)
from grigorchuk.words import PointedWord, eta_prefix, level_word

from oracles import brute_power_index, factor_set


def test_subwords_examples():
    assert subwords(1, 2**12).words == ("a", "x", "y", "z")
    assert len(subwords(2, 2**12)) == 6
    s3 = subwords(3, 2**12)
    assert len(s3) == 8 and "axa" in s3
    assert s3.stabilized


def test_subwords_rejects_long_factor():
    with pytest.raises(ValueError):
        subwords(10, 5)


def test_short_window_is_not_stable():
    assert not subwords(8, 16).stabilized


def test_complexity_closed_form_examples():
    assert complexity_closed_form(3) == 8
    assert complexity_closed_form(4) == 10
    # counted factors settle which branch applies at L = 6
    assert complexity_closed_form(6) == 16 == len(stable_subwords(6))


def test_first_differences():
    diffs = [complexity_closed_form(L + 1) - complexity_closed_form(L) for L in range(4, 2048)]
    assert set(diffs) == {2, 3}
    # steps of 3 on the first half of each dyadic scale, 2 on the second
    for L in range(4, 2048):
        n = L.bit_length() - 1
        k = L - 2**n
        d = complexity_closed_form(L + 1) - complexity_closed_form(L)
        assert d == (3 if k < 2 ** (n - 1) else 2)


@pytest.mark.parametrize("L", [1, 2, 3, 5, 9, 17, 40])
def test_factor_counts_against_set_enumeration(L):
    s = eta_prefix(3000)
    assert factor_counts(s, L)[L] == len(factor_set(s, L))


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="ab", min_size=1, max_size=80), st.integers(1, 20))
def test_factor_counts_on_arbitrary_strings(s, L):
    counts = factor_counts(s, L)
    for k in range(1, L + 1):
        assert counts[k] == len(factor_set(s, k))


def test_enumerated_complexity_small():
    counts, window = enumerated_complexity(300)
    assert all(counts[L] == complexity_closed_form(L) for L in range(1, 301))
    assert counts[6] == 16


def test_reflection_closure():
    for L in (5, 16, 64):
        words = set(stable_subwords(L).words)
        assert {w[::-1] for w in words} == words


def test_right_special_examples():
    rs4 = right_special(4)
    assert len(rs4) == 2
    rs6 = right_special(6)
    assert rs6 == [(level_word(2)[-6:], "xyz")]
    rs7 = dict(right_special(7))
    assert rs7[level_word(2)] == "xyz"


@pytest.mark.parametrize("L", range(4, 40))
def test_right_special_counts(L):
    n = L.bit_length() - 1
    k = L - 2**n
    rs = dict(right_special(L))
    suffix = level_word(n)[-L:]
    assert rs.get(suffix) == "xyz"
    assert len(rs) == (2 if k < 2 ** (n - 1) else 1)


def test_power_scan_small():
    rep = max_power_scan(16, 2**14)
    assert rep.index_by_length[2] == Fraction(7, 2)
    assert rep.witness_by_length[2] == "axaxaxa"
    assert not rep.has_fourth_power
    assert rep.max_index < 4
    assert all(p & (p - 1) == 0 for p in rep.cube_root_lengths)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 6, 8, 12])
def test_power_index_matches_brute(p):
    s = eta_prefix(2**11)
    rep = max_power_scan(12, 2**11)
    total, _ = brute_power_index(s, p)
    assert rep.index_by_length[p] == Fraction(total, p)


def test_power_scan_window_check():
    with pytest.raises(ValueError):
        max_power_scan(100, 300)


def test_n_partition_on_eta():
    w = PointedWord(eta_prefix(31), 1)
    res = n_partition(w, 1)
    assert res.residue == 0 and res.modulus == 4
    assert res.witness_positions[:3] == (4, 8, 12)
    for q in res.witness_positions:
        assert w.at(q) in "xyz"


def test_n_partition_shift():
    w = PointedWord(eta_prefix(31), 5)
    base = n_partition(w, 1)
    assert n_partition(w.shift(1), 1).residue == (base.residue + 1) % 4


def test_n_partition_too_short():
    with pytest.raises(PartitionError):
        n_partition(PointedWord(eta_prefix(10), 1), 1)


def test_n_partition_rejects_illegal_window():
    with pytest.raises(PartitionError):
        n_partition(PointedWord("ax" * 20, 1), 1)


@pytest.mark.parametrize("s", "xyz")
@pytest.mark.parametrize("n", range(0, 5))
def test_special_window_spacer_at_origin(s, n):
    w = special_sequence_window(s, 64)
    res = n_partition(w, n)
    assert res.residue == 0
    assert w.at(0) == s


def test_special_sequence_window_examples():
    w = special_sequence_window("x", 3)
    assert str(w) == "xax|axa"
    wy = special_sequence_window("y", 100)
    assert wy.word[wy.origin - 1:] == eta_prefix(100)
    wx = special_sequence_window("x", 100)
    diff = [wx.position(i + 1) for i, (c, d) in enumerate(zip(wx.word, wy.word)) if c != d]
    assert diff == [0]


def test_alignment_small():
    for n in range(0, 6):
        for s in "xyz":
            occ = block_occurrences(n, s, 2**14)
            assert all(q % 2 ** (n + 1) == 1 for q in occ)


def test_derived_sequence():
    # the spacers of the n-decomposition of eta are again eta's spacers, shifted in the cycle
    assert derived_sequence(0, 7) == "xyxzxyx"
    assert derived_sequence(1, 3) == "yzy"
