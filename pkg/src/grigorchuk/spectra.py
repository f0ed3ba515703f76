"""Jacobi operators of the subshift and weighted Laplacians of Schreier graphs.

Eigenvalues come from Sturm-sequence bisection on the symmetric tridiagonal
form.  On top of that sit the normalised eigenvalue counting function
(integrated density of states), the comparison of level-``n`` Laplacians with
window operators, nesting of level spectra and epsilon-cover lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numba
import numpy as np

from .group import LabeledGraph, graph_from_window, schreier_graph
from .language import special_sequence_window
from .words import PointedWord, eta_prefix

DEFAULT_TOL = 1e-12
BATCH = 16


@dataclass(frozen=True)
class Params:
    """Weights ``t, u, v, w`` of the generators ``a, b, c, d``."""

    t: float
    u: float
    v: float
    w: float

    @property
    def D(self) -> float:
        return self.u + self.v + self.w

    @property
    def in_P(self) -> bool:
        """Nondegenerate weights: no coupling of the path can vanish."""
        return (self.t != 0 and self.u + self.v != 0
                and self.u + self.w != 0 and self.v + self.w != 0)

    @property
    def isotropic(self) -> bool:
        return self.u == self.v == self.w

    def weight(self, label: str) -> float:
        return {"a": self.t, "b": self.u, "c": self.v, "d": self.w}[label]

    def scaled(self, c: float) -> "Params":
        return Params(c * self.t, c * self.u, c * self.v, c * self.w)

    def as_dict(self) -> dict[str, float]:
        return {"t": self.t, "u": self.u, "v": self.v, "w": self.w}

    def __iter__(self):
        return iter((self.t, self.u, self.v, self.w))


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=np.float64)
        e = np.ascontiguousarray(self.offdiag, dtype=np.float64)
        if d.ndim != 1 or len(d) < 1 or e.shape != (len(d) - 1,):
            raise ValueError("need m >= 1 diagonal and m - 1 off-diagonal entries")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    def __len__(self):
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(len(self.diag))
        r[:-1] += np.abs(self.offdiag)
        r[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))


# -- potentials and operators --------------------------------------------------------

def potential_f(w: PointedWord, i: int, p: Params) -> float:
    """Off-diagonal weight attached to the letter ``omega_i``."""
    letter = w.at(i)
    return {"a": p.t, "x": p.D - p.w, "y": p.D - p.v, "z": p.D - p.u}[letter]


def potential_g(w: PointedWord, i: int, p: Params) -> float:
    """Diagonal weight attached to the pair ``omega_i omega_(i+1)``."""
    pair = w.at(i) + w.at(i + 1)
    if pair.count("a") != 1:
        raise ValueError(f"illegal pair {pair!r}: exactly one letter must be 'a'")
    other = pair.replace("a", "")
    return {"x": p.w, "y": p.v, "z": p.u}[other]


def jacobi_from_window(w: PointedWord, p: Params, m: int) -> TridiagonalOperator:
    """Restriction of the Jacobi operator of ``omega`` to the sites ``1 .. m``.

    Site ``k`` carries ``g`` at ``omega_k omega_(k+1)``; sites ``k`` and
    ``k+1`` are coupled by ``f`` at ``omega_(k+1)``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if not (w.visible(1) and w.visible(m + 1)):
        raise ValueError(f"window does not cover positions 1..{m + 1}")
    diag = [potential_g(w, k, p) for k in range(1, m + 1)]
    off = [potential_f(w, k + 1, p) for k in range(1, m)]
    return TridiagonalOperator(np.array(diag), np.array(off))


def laplacian_from_graph(g: LabeledGraph, p: Params) -> TridiagonalOperator:
    """``t a + u b + v c + w d`` acting on a path-shaped graph, in path order."""
    loops, links, _ = g.path_profile()
    # parallel edges are stored once per label in the profile, so count them
    pos = {v: i for i, v in enumerate(g.path_order())}
    diag = np.zeros(len(loops))
    off = np.zeros(len(links))
    for v, w, lab in g.edges:
        i, j = pos[v], pos[w]
        if i == j:
            diag[i] += p.weight(lab)
        else:
            off[min(i, j)] += p.weight(lab)
    return TridiagonalOperator(diag, off)


@lru_cache(maxsize=32)
def _schreier_profile(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-label loop and link indicator arrays of the level-``n`` path."""
    g = schreier_graph(n)
    loops, links, _ = g.path_profile()
    loop_ind = np.array([[lab in s for lab in "abcd"] for s in loops], dtype=float)
    link_ind = np.array([[lab in s for lab in "abcd"] for s in links], dtype=float)
    loop_ind.setflags(write=False)
    link_ind.setflags(write=False)
    return loop_ind, link_ind


def level_operator(n: int, p: Params) -> TridiagonalOperator:
    """Tridiagonal form of the level-``n`` Laplacian ``M_n(t, u, v, w)``."""
    loop_ind, link_ind = _schreier_profile(n)
    weights = np.array(tuple(p), dtype=float)
    return TridiagonalOperator(loop_ind @ weights, link_ind @ weights)


def window_operator(n: int, p: Params, s: str = "x") -> TridiagonalOperator:
    """Jacobi operator of ``omega^(s)`` on the ``2**n`` sites matching ``M_n``.

    Site ``k`` of the shifted sequence ``T omega^(s)`` is vertex ``k`` of the
    graph of ``omega^(s)``, so sites ``1 .. 2**n`` cover the block
    ``p(n-1)`` sitting right of the origin.
    """
    m = 2**n
    w = special_sequence_window(s, m + 2).shift(1)
    return jacobi_from_window(w, p, m)


def graph_window_operator(n: int, p: Params) -> TridiagonalOperator:
    """Laplacian of the graph of ``eta_1 ... eta_(2**n - 1)``; size ``2**n``."""
    return laplacian_from_graph(graph_from_window(eta_prefix(2**n - 1)), p)


# -- Sturm bisection -----------------------------------------------------------------

@numba.njit(cache=True, nogil=True)
def _count_below(d, e2, x, pivmin):
    """Number of eigenvalues strictly below ``x`` (negative LDL^T pivots)."""
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@numba.njit(cache=True, nogil=True)
def _count_below_batch(d, e2, xs, pivmin, out):
    """:func:`_count_below` for several shifts in one sweep over the matrix."""
    nb = xs.shape[0]
    q = np.empty(nb)
    for b in range(nb):
        q[b] = d[0] - xs[b]
        if abs(q[b]) < pivmin:
            q[b] = -pivmin
        out[b] = 1 if q[b] < 0.0 else 0
    for i in range(1, d.shape[0]):
        di = d[i]
        ei = e2[i - 1]
        for b in range(nb):
            qb = di - xs[b] - ei / q[b]
            if abs(qb) < pivmin:
                qb = -pivmin
            q[b] = qb
            if qb < 0.0:
                out[b] += 1


@numba.njit(cache=True, nogil=True)
def _bisect_all(d, e2, lo0, hi0, tol, pivmin, batch):
    m = d.shape[0]
    lower = np.full(m, lo0)
    upper = np.full(m, hi0)
    mids = np.empty(batch)
    counts = np.empty(batch, dtype=np.int64)
    for k0 in range(0, m, batch):
        nb = min(batch, m - k0)
        xs = mids[:nb]
        cs = counts[:nb]
        while True:
            active = False
            for b in range(nb):
                lo = lower[k0 + b]
                hi = upper[k0 + b]
                mid = 0.5 * (lo + hi)
                if hi - lo > tol and lo < mid < hi:
                    active = True
                xs[b] = mid
            if not active:
                break
            _count_below_batch(d, e2, xs, pivmin, cs)
            for b in range(nb):
                mid = xs[b]
                c = cs[b]
                # c eigenvalues lie below mid: tighten every bracket we can
                for j in range(min(c, m) - 1, k0 - 1, -1):
                    if mid < upper[j]:
                        upper[j] = mid
                    else:
                        break
                for j in range(max(c, k0), m):
                    if mid > lower[j]:
                        lower[j] = mid
                    else:
                        break
    return lower, upper


def _pivmin(op: TridiagonalOperator) -> float:
    scale = max(1.0, float(np.max(op.offdiag**2)) if len(op.offdiag) else 1.0)
    return np.finfo(float).tiny * scale


def sturm_count(op: TridiagonalOperator, x: float) -> int:
    """Number of eigenvalues of ``op`` strictly below ``x``."""
    return int(_count_below(op.diag, op.offdiag**2, float(x), _pivmin(op)))


@dataclass
class SpectralData:
    eigenvalues: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    params: Params | None = None
    provenance: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    def __len__(self):
        return self.size


def eigenvalues(op: TridiagonalOperator, tol: float = DEFAULT_TOL, *,
                params: Params | None = None, provenance: str = "") -> SpectralData:
    """All eigenvalues of ``op`` by bisection on the Sturm count.

    Eigenvalue ``k`` (0-based, ascending) is bracketed by ``[lower[k],
    upper[k]]`` with at most ``k`` eigenvalues below ``lower[k]`` and at least
    ``k + 1`` below ``upper[k]``; the bracket width is at most ``tol`` unless
    floating point spacing runs out first.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = op.gershgorin()
    pad = max(tol, 1e-14 * max(1.0, abs(lo), abs(hi)))
    lower, upper = _bisect_all(op.diag, op.offdiag**2, lo - pad, hi + pad, tol,
                                _pivmin(op), BATCH)
    # brackets of a tight cluster may overlap, so midpoints can come out of order
    vals = np.sort(0.5 * (lower + upper))
    return SpectralData(vals, lower, upper, params, provenance)


@lru_cache(maxsize=160)
def _level_spectrum(n: int, p: Params, tol: float) -> SpectralData:
    return eigenvalues(level_operator(n, p), tol, params=p, provenance=f"level {n}")


def level_spectrum(n: int, p: Params, tol: float = DEFAULT_TOL) -> SpectralData:
    """Spectrum of ``M_n(p)``; cached, so treat the result as read only."""
    return _level_spectrum(n, p, tol)


# -- derived quantities ----------------------------------------------------------------

def ids_distribution(source: SpectralData, E) -> float | np.ndarray:
    """Fraction of eigenvalues not exceeding ``E``."""
    counts = np.searchsorted(source.eigenvalues, E, side="right")
    return counts / source.size


def ids_sup_distance(ev1: np.ndarray, ev2: np.ndarray, resolution: float = 0.0) -> float:
    """``sup_E |N_1(E) - N_2(E)|`` for two equally sized sorted spectra.

    With ``resolution = delta > 0`` an eigenvalue of one spectrum is allowed to
    sit up to ``delta`` to the right of its partner in the other, i.e. the
    quantity is ``sup_E max(N_1(E) - N_2(E + delta), N_2(E) - N_1(E + delta))``.
    Counting functions are step functions, so the supremum is taken over the
    jump points.
    """
    if len(ev1) != len(ev2):
        raise ValueError("spectra must have the same size")
    pts = np.concatenate((ev1, ev2))
    n1 = np.searchsorted(ev1, pts, side="right")
    n2 = np.searchsorted(ev2, pts, side="right")
    n1d = np.searchsorted(ev1, pts + resolution, side="right")
    n2d = np.searchsorted(ev2, pts + resolution, side="right")
    return float(max(np.max(n1 - n2d), np.max(n2 - n1d), 0)) / len(ev1)


IDS_RESOLUTION = 1e-9


def ids_comparison(n: int, p: Params, tol: float = DEFAULT_TOL,
                   resolution: float = IDS_RESOLUTION) -> float:
    """Sup distance between the counting functions of ``M_n`` and the window operator.

    The level spectra contain clusters of eigenvalues far tighter than the
    bisection tolerance; ``resolution`` (kept well above ``tol``) stops the
    arbitrary order of eigenvalues inside a cluster from counting as a
    difference.  Pass ``resolution=0`` for the raw comparison.
    """
    if not 1 <= n <= 14:
        raise ValueError("n must be in 1..14")
    if resolution and resolution < 2 * tol:
        raise ValueError("resolution must exceed twice the eigenvalue tolerance")
    a = level_spectrum(n, p, tol).eigenvalues
    b = eigenvalues(window_operator(n, p), tol).eigenvalues
    return ids_sup_distance(a, b, resolution)


def nesting_defect(n: int, p: Params, tol: float = DEFAULT_TOL) -> float:
    """Largest distance from an eigenvalue of ``M_n`` to the spectrum of ``M_(n+1)``."""
    small = level_spectrum(n, p, tol).eigenvalues
    big = level_spectrum(n + 1, p, tol).eigenvalues
    idx = np.clip(np.searchsorted(big, small), 1, len(big) - 1)
    dist = np.minimum(np.abs(small - big[idx - 1]), np.abs(small - big[idx]))
    return float(np.max(dist))


def nesting_check(n: int, p: Params, tol: float) -> bool:
    """Is every eigenvalue of ``M_n`` within ``tol`` of one of ``M_(n+1)``?"""
    if not 1 <= n <= 13:
        raise ValueError("n must be in 1..13")
    if math.isinf(tol):
        return True
    return nesting_defect(n, p) <= tol


@dataclass(frozen=True)
class MeasureEstimate:
    epsilon: float
    cover_length: float
    components: int


def measure_estimate(sd: SpectralData | np.ndarray, epsilon: float) -> MeasureEstimate:
    """Total length of the union of ``[E - eps, E + eps]`` over eigenvalues ``E``."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    ev = np.sort(np.asarray(getattr(sd, "eigenvalues", sd), dtype=float))
    gaps = np.diff(ev)
    # neighbouring intervals merge when their centres are within 2 eps
    covered = np.minimum(gaps, 2 * epsilon).sum() + 2 * epsilon
    components = int(np.count_nonzero(gaps > 2 * epsilon)) + 1
    return MeasureEstimate(epsilon, float(covered), components)


def gap_count(sd: SpectralData, threshold: float) -> int:
    """Number of gaps wider than ``threshold`` between consecutive eigenvalues."""
    return int(np.count_nonzero(np.diff(sd.eigenvalues) > threshold))


def dichotomy_table(p: Params, levels, tol: float = DEFAULT_TOL) -> list[dict]:
    """Cover length with ``eps = 2**-n`` of the level spectra."""
    rows = []
    for n in levels:
        sd = level_spectrum(n, p, tol)
        eps = 2.0**-n
        est = measure_estimate(sd, eps)
        rows.append({
            "params": p.as_dict(),
            "level": n,
            "size": sd.size,
            "min": float(sd.eigenvalues[0]),
            "max": float(sd.eigenvalues[-1]),
            "gap_count": gap_count(sd, 2 * eps),
            "cover_length": est.cover_length,
            "epsilon": eps,
        })
    return rows
