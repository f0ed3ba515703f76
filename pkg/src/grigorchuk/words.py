"""Words over {a, x, y, z}, the substitution tau and its fixed point eta.

Words are plain ``str`` objects.  Positions in eta are 1-based
(``eta = eta_1 eta_2 ...``) except for the automaton, which reads eta as a
map on ``{0, 1, 2, ...}``.

The fixed point is produced in four independent ways:

* iterating ``tau`` on ``a`` (:func:`apply`),
* the recursion ``p(n+1) = p(n) s_n p(n)`` (:func:`level_word`),
* the closed form in terms of the 2-adic valuation (:func:`letter_at`),
* the four state output automaton (:func:`automaton_letter`),

plus the primitive recoding ``zeta`` with ``zeta^n(a) = p(n-1) s_(n-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

ALPHABET = "axyz"
SPACERS = "xyz"
MAX_EXPONENT = 30


class SizeGuardError(ValueError):
    """Raised when a request would materialise a word that is too long."""


@dataclass(frozen=True)
class Substitution:
    images: Mapping[str, str]

    def __post_init__(self):
        if set(self.images) != set(ALPHABET):
            raise ValueError("substitution must be defined on a, x, y, z")
        if any(not img for img in self.images.values()):
            raise ValueError("substitution images must be nonempty")
        object.__setattr__(self, "images", MappingProxyType(dict(self.images)))
        object.__setattr__(self, "_table", str.maketrans(dict(self.images)))

    def __call__(self, w: str) -> str:
        return apply(self, w)


TAU = Substitution({"a": "axa", "x": "y", "y": "z", "z": "x"})
ZETA = Substitution({"a": "ax", "x": "ay", "y": "az", "z": "ax"})


def apply(sub: Substitution, w: str) -> str:
    """Image of ``w`` under the morphism ``sub``."""
    return w.translate(sub._table)


def iterate(sub: Substitution, w: str, times: int) -> str:
    for _ in range(times):
        w = apply(sub, w)
    return w


def spacer(n: int) -> str:
    """The letter ``s_n = tau^n(x)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return SPACERS[n % 3]


def _check_exponent(n: int):
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_EXPONENT:
        raise SizeGuardError(f"exponent {n} exceeds guard {MAX_EXPONENT}")


def level_word(n: int) -> str:
    """``p(n) = tau^n(a)``, of length ``2**(n+1) - 1``, built by the recursion."""
    _check_exponent(n)
    p = "a"
    for k in range(n):
        p = p + spacer(k) + p
    return p


def eta_prefix(length: int) -> str:
    """The first ``length`` letters of eta."""
    if length < 1:
        raise ValueError("length must be positive")
    if length > 2**MAX_EXPONENT:
        raise SizeGuardError(f"prefix length {length} exceeds 2**{MAX_EXPONENT}")
    n = max(0, (length).bit_length() - 1)
    return level_word(n)[:length]


def _valuation2(m: int) -> int:
    return (m & -m).bit_length() - 1


def letter_at(pos: int) -> str:
    """``eta_pos`` from the 2-adic valuation of ``pos`` (1-based)."""
    if pos < 1:
        raise ValueError("positions are 1-based")
    if pos & 1:
        return "a"
    return SPACERS[(_valuation2(pos) - 1) % 3]


def letters_at(positions) -> np.ndarray:
    """Vectorised :func:`letter_at`; returns an array of single characters."""
    pos = np.asarray(positions, dtype=np.int64)
    if np.any(pos < 1):
        raise ValueError("positions are 1-based")
    low = pos & -pos
    val = np.zeros_like(pos)
    # bit_length of a power of two; exact for int64 via log2 on floats
    val[:] = np.round(np.log2(low.astype(np.float64))).astype(np.int64)
    codes = np.where(pos & 1 == 1, 0, 1 + (val - 1) % 3)
    return np.array(list(ALPHABET))[codes]


@dataclass(frozen=True)
class OutputAutomaton:
    """Deterministic automaton with output over the binary alphabet.

    ``transitions[i][bit]`` is the state reached from ``q_i`` on ``bit``.
    """

    labels: tuple[str, ...]
    transitions: tuple[tuple[int, int], ...]
    initial: int = 0


# on 0 every state goes to q0; on 1, q_i goes to q_(i+1) with q3 -> q1
ETA_AUTOMATON = OutputAutomaton(
    labels=("a", "x", "y", "z"),
    transitions=((0, 1), (0, 2), (0, 3), (0, 1)),
)


def run_automaton(aut: OutputAutomaton, bits: str, state: int | None = None) -> int:
    q = aut.initial if state is None else state
    for b in bits:
        q = aut.transitions[q][int(b)]
    return q


def automaton_letter(aut: OutputAutomaton, pos: int) -> str:
    """Label reached by feeding ``pos`` most significant bit first.

    ``pos = 0`` has the empty expansion and yields the initial label, so
    ``automaton_letter(ETA_AUTOMATON, m) == letter_at(m + 1)``.
    """
    if pos < 0:
        raise ValueError("pos must be nonnegative")
    bits = format(pos, "b") if pos else ""
    return aut.labels[run_automaton(aut, bits)]


def automaton_prefix(aut: OutputAutomaton, count: int) -> np.ndarray:
    """Labels for ``pos = 0 .. count-1``, vectorised over positions."""
    pos = np.arange(count, dtype=np.int64)
    nbits = max(1, int(count - 1).bit_length())
    table = np.array(aut.transitions, dtype=np.int64)
    state = np.full(count, aut.initial, dtype=np.int64)
    # leading zeros are harmless only if the initial state is fixed by 0
    assert aut.transitions[aut.initial][0] == aut.initial
    for shift in range(nbits - 1, -1, -1):
        state = table[state, (pos >> shift) & 1]
    return np.array(aut.labels)[state]


def automaton_block(aut: OutputAutomaton, state: int, n: int) -> str:
    """Labels along all length-``n`` binary words in lexicographic order."""
    return "".join(
        aut.labels[run_automaton(aut, format(k, f"0{n}b") if n else "", state)]
        for k in range(2**n)
    )


def zeta_power(n: int) -> str:
    """``zeta^n(a)`` by direct iteration of ``zeta``."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_exponent(n)
    return iterate(ZETA, "a", n)


def is_palindrome(w: str) -> bool:
    return w == w[::-1]


@dataclass(frozen=True)
class PointedWord:
    """Finite window of a two-sided sequence.

    ``origin`` is the 1-based index in ``word`` of the letter ``omega_1``; the
    origin marker ``|`` sits just before it.
    """

    word: str
    origin: int = 1

    def __post_init__(self):
        if not 1 <= self.origin <= len(self.word):
            raise ValueError(f"origin {self.origin} outside window of length {len(self.word)}")

    def __len__(self):
        return len(self.word)

    def index(self, pos: int) -> int:
        """1-based index in ``word`` of ``omega_pos``."""
        return pos + self.origin - 1

    def position(self, index: int) -> int:
        """Sequence position of the letter at 1-based ``index``."""
        return index - self.origin + 1

    def at(self, pos: int) -> str:
        i = self.index(pos)
        if not 1 <= i <= len(self.word):
            raise IndexError(f"position {pos} not visible in window")
        return self.word[i - 1]

    def visible(self, pos: int) -> bool:
        return 1 <= self.index(pos) <= len(self.word)

    @property
    def first(self) -> int:
        return self.position(1)

    @property
    def last(self) -> int:
        return self.position(len(self.word))

    def shift(self, k: int = 1) -> "PointedWord":
        """Apply ``T^k``: ``(T omega)_j = omega_(j-1)``, so the origin moves left."""
        return PointedWord(self.word, self.origin - k)

    def __str__(self):
        i = self.origin - 1
        return self.word[:i] + "|" + self.word[i:]
