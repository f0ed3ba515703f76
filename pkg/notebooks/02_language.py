"""Factors of eta: complexity, special words, powers and n-partitions."""

from grigorchuk import (
    PointedWord,
    complexity_closed_form,
    enumerated_complexity,
    eta_prefix,
    max_power_scan,
    n_partition,
    right_special,
    special_sequence_window,
)

# %% complexity: counted factors against the closed form
counts, window = enumerated_complexity(64)
print(f"counts stabilise on a prefix of length {window}")
print(" L  counted  formula")
for L in (1, 2, 3, 4, 5, 6, 7, 8, 12, 16, 24, 32, 48, 64):
    print(f"{L:2d} {counts[L]:8d} {complexity_closed_form(L):8d}")

# %% right special factors: two on the first half of each dyadic scale, one after
for L in range(4, 17):
    print(L, right_special(L))

# %% powers: (ax)^3 a occurs, no fourth power does
rep = max_power_scan(64, 2**16)
print("largest index", rep.max_index, "for the root", rep.max_index_word[:16], "...")
print("roots with a cube:", rep.cube_root_lengths)
print("index of length-2 roots:", rep.index_by_length[2], rep.witness_by_length[2])

# %% n-partitions: the spacers of the n-decomposition form one residue class
w = PointedWord(eta_prefix(64), 9)
for n in range(4):
    r = n_partition(w, n)
    shifted = n_partition(w.shift(1), n)
    print(f"n={n}: residue {r.residue} mod {r.modulus}, after T: {shifted.residue}")

# %% the two-sided sequences ... p(n) s | p(n) ... differ only at 0
for s in "xyz":
    print(s, special_sequence_window(s, 8))
