"""The fixed point eta, built four ways.

tau sends a -> axa and permutes x -> y -> z -> x.  Starting from ``a`` it
produces ever longer palindromes p(n) = tau^n(a), each a prefix of the next.
"""

import numpy as np

from grigorchuk import (
    ETA_AUTOMATON,
    TAU,
    automaton_prefix,
    eta_prefix,
    iterate,
    letter_at,
    level_word,
    zeta_power,
)
from grigorchuk.words import automaton_block, letters_at

# %% the first few levels
for n in range(5):
    print(n, level_word(n))

# %% iterating the substitution gives the same words as p(n+1) = p(n) s_n p(n)
assert all(iterate(TAU, "a", n) == level_word(n) for n in range(12))

# %% letters by position: odd places carry a, the rest follow the 2-adic valuation
print([letter_at(k) for k in range(1, 17)])
print("position 3 * 2**40 holds", letter_at(3 * 2**40))

# %% the output automaton reads positions in binary, most significant bit first
N = 2**16
auto = "".join(automaton_prefix(ETA_AUTOMATON, N))
closed = "".join(letters_at(np.arange(1, N + 1)))
print("automaton agrees with the closed form:", auto == closed == eta_prefix(N))
for i in range(4):
    print(f"block read from q{i} at depth 3:", automaton_block(ETA_AUTOMATON, i, 3))

# %% zeta: a -> ax, x -> ay, y -> az, z -> ax is primitive and recodes eta
for n in range(1, 6):
    z = zeta_power(n)
    print(n, z, z == level_word(n - 1) + "xyz"[(n - 1) % 3])
