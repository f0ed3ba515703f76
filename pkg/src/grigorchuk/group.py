"""Grigorchuk's group acting on the binary tree, its Schreier graphs, and the
matching action of A, B, C, D on windows of the subshift.

Tree vertices are strings over ``{0, 1}``.  For bulk work a level is
encoded as integers ``0 .. 2**n - 1`` with the first letter as the most
significant bit, and each generator becomes a permutation array.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable

import numpy as np

from .words import PointedWord

GENERATORS = "abcd"
MAX_LEVEL = 16

# letter of the subshift -> labels of the double edge and of the loops it carries
LETTER_EDGES = {"a": ("a",), "x": ("b", "c"), "y": ("b", "d"), "z": ("c", "d")}
LETTER_LOOPS = {"a": (), "x": ("d",), "y": ("c",), "z": ("b",)}

# kappa: tau with x -> c, y -> b, z -> d
KAPPA = {"a": "aca", "b": "d", "c": "b", "d": "c"}


class GraphShapeError(ValueError):
    pass


class WindowBoundaryError(ValueError):
    pass


# -- action on the tree ----------------------------------------------------------

def act(gen: str, v: str) -> str:
    """Image of the vertex ``v`` under one generator."""
    out = []
    for i, bit in enumerate(v):
        if gen == "a":
            out.append("1" if bit == "0" else "0")
            out.append(v[i + 1:])
            break
        out.append(bit)
        if gen == "b":
            gen = "a" if bit == "0" else "c"
        elif gen == "c":
            gen = "a" if bit == "0" else "d"
        elif gen == "d":
            if bit == "0":
                out.append(v[i + 1:])
                break
            gen = "b"
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return "".join(out)


def act_word(gw: str, v: str) -> str:
    """Apply a group word; the rightmost letter acts first."""
    for g in reversed(gw):
        v = act(g, v)
    return v


@lru_cache(maxsize=None)
def _level_perms(n: int) -> tuple[np.ndarray, ...]:
    if n == 0:
        ident = np.zeros(1, dtype=np.int64)
        return (ident,) * 4
    a, b, c, d = _level_perms(n - 1)
    half = 2 ** (n - 1)
    rest = np.arange(half, dtype=np.int64)
    ident = rest
    new_a = np.concatenate((rest + half, rest))
    new_b = np.concatenate((a, half + c))
    new_c = np.concatenate((a, half + d))
    new_d = np.concatenate((ident, half + b))
    for p in (new_a, new_b, new_c, new_d):
        p.setflags(write=False)
    return new_a, new_b, new_c, new_d


def level_permutations(n: int) -> dict[str, np.ndarray]:
    """Generators as permutations of level ``n``; vertex ``k`` is ``format(k, '0nb')``."""
    if not 0 <= n <= 24:
        raise ValueError("level out of range")
    return dict(zip(GENERATORS, _level_perms(n)))


def word_permutation(gw: str, n: int) -> np.ndarray:
    perms = level_permutations(n)
    result = np.arange(2**n, dtype=np.int64)
    for g in gw:
        # result := result composed after g (rightmost acts first)
        result = result[perms[g]]
    return result


def kappa(gw: str) -> str:
    return "".join(KAPPA[g] for g in gw)


def lysenok_relators(k_max: int) -> list[str]:
    """``kappa^k((ad)^4)`` and ``kappa^k((adacac)^4)`` for ``k <= k_max``."""
    base = ["ad" * 4, "adacac" * 4]
    out = []
    for w in base:
        for _ in range(k_max + 1):
            out.append(w)
            w = kappa(w)
    return out


def acts_trivially(gw: str, n: int) -> bool:
    return bool(np.array_equal(word_permutation(gw, n), np.arange(2**n)))


def relator_check(level: int, k_max: int) -> bool:
    """Involutions, ``bc = d`` and the Lysenok relators on one level."""
    if level < 1 or level > 14 or k_max < 0 or k_max > 3:
        raise ValueError("need 1 <= level <= 14 and 0 <= k_max <= 3")
    words = [g + g for g in GENERATORS] + ["bcd", "cbd"] + lysenok_relators(k_max)
    return all(acts_trivially(w, level) for w in words)


def orbit(n: int, start: str | None = None) -> set[int]:
    """Orbit of a level-``n`` vertex (default ``1^n``) as integer codes."""
    perms = level_permutations(n)
    root = int(start, 2) if start else 2**n - 1
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for p in perms.values():
            w = int(p[v])
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def is_transitive(n: int) -> bool:
    return len(orbit(n)) == 2**n


# -- labelled graphs ---------------------------------------------------------------

Edge = tuple[Hashable, Hashable, str]


@dataclass
class LabeledGraph:
    """Undirected graph with labelled edges; a loop is ``(v, v, label)``.

    Each undirected edge is stored once.  Every generator is an involution,
    so the edge ``(v, w, l)`` stands for both directions.
    """

    vertices: list
    edges: list[Edge]
    root: Hashable

    def labels_at(self) -> dict[Hashable, Counter]:
        out = {v: Counter() for v in self.vertices}
        for v, w, lab in self.edges:
            out[v][lab] += 1
            if w != v:
                out[w][lab] += 1
        return out

    def label_defects(self) -> dict[Hashable, dict[str, int]]:
        """Vertices whose label count differs from one per generator."""
        bad = {}
        for v, cnt in self.labels_at().items():
            diff = {g: cnt.get(g, 0) for g in GENERATORS if cnt.get(g, 0) != 1}
            if diff:
                bad[v] = diff
        return bad

    def is_regular(self) -> bool:
        return not self.label_defects()

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for v, w, _ in self.edges:
            adj[v].add(w)
            adj[w].add(v)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def path_order(self) -> list:
        """Vertices along the path, starting at the smaller end.

        Raises :class:`GraphShapeError` unless the graph with loops removed
        and parallel edges merged is a simple path.
        """
        adj = {v: set() for v in self.vertices}
        for v, w, _ in self.edges:
            if v != w:
                adj[v].add(w)
                adj[w].add(v)
        n = len(self.vertices)
        if n == 1:
            return list(self.vertices)
        ends = [v for v in self.vertices if len(adj[v]) == 1]
        if any(len(s) > 2 for s in adj.values()) or len(ends) != 2:
            raise GraphShapeError("graph is not path shaped")
        start = min(ends, key=str)
        order, prev = [start], None
        while len(order) < n:
            nxt = [w for w in adj[order[-1]] if w != prev]
            if not nxt:
                raise GraphShapeError("graph is not connected")
            prev = order[-1]
            order.append(nxt[0])
        return order

    def path_profile(self) -> tuple[list[frozenset], list[frozenset], list]:
        """Loop labels per vertex and link labels per consecutive pair."""
        order = self.path_order()
        pos = {v: i for i, v in enumerate(order)}
        loops = [set() for _ in order]
        links = [set() for _ in order[1:]]
        for v, w, lab in self.edges:
            i, j = pos[v], pos[w]
            if i == j:
                loops[i].add(lab)
            else:
                links[min(i, j)].add(lab)
        return [frozenset(s) for s in loops], [frozenset(s) for s in links], order

    def to_edge_list(self) -> str:
        lines = [f"root {self.root}"]
        lines += [f"{v} {w} {lab}" for v, w, lab in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str, vertex_type=str) -> "LabeledGraph":
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0][0] != "root" or len(lines[0]) != 2:
            raise ValueError("edge list must start with 'root <v>'")
        root = vertex_type(lines[0][1])
        edges, verts = [], {root: None}
        for parts in lines[1:]:
            if len(parts) != 3:
                raise ValueError(f"bad edge line {' '.join(parts)!r}")
            v, w = vertex_type(parts[0]), vertex_type(parts[1])
            edges.append((v, w, parts[2]))
            verts.setdefault(v)
            verts.setdefault(w)
        return cls(list(verts), edges, root)


def schreier_graph(n: int) -> LabeledGraph:
    """The Schreier graph of level ``n``, rooted at ``1^n``."""
    if not 1 <= n <= MAX_LEVEL:
        raise ValueError(f"level must be in 1..{MAX_LEVEL}")
    perms = level_permutations(n)
    names = [format(k, f"0{n}b") for k in range(2**n)]
    edges = []
    for g in GENERATORS:
        p = perms[g]
        for k in range(2**n):
            j = int(p[k])
            if k <= j:
                edges.append((names[k], names[j], g))
    return LabeledGraph(names, edges, "1" * n)


def graph_from_window(w: PointedWord | str) -> LabeledGraph:
    """The linear graph on vertices ``1 .. |w|+1`` encoded by the letters.

    Letter ``i`` joins vertices ``i`` and ``i+1``; its loops go on both
    endpoints, also at the window boundary.
    """
    if isinstance(w, str):
        w = PointedWord(w, 1)
    edges = []
    for i, letter in enumerate(w.word, start=1):
        for lab in LETTER_EDGES[letter]:
            edges.append((i, i + 1, lab))
        for lab in LETTER_LOOPS[letter]:
            edges.append((i, i, lab))
            edges.append((i + 1, i + 1, lab))
    return LabeledGraph(list(range(1, len(w) + 2)), edges, w.origin)


def edge_census(g: LabeledGraph) -> dict[str, int]:
    """Counts of single a-edges, double edges and loops of a path graph."""
    loops, links, _ = g.path_profile()
    return {
        "a_edges": sum(1 for s in links if s == {"a"}),
        "double_edges": sum(1 for s in links if len(s) == 2),
        "loops": sum(len(s) for s in loops),
    }


@dataclass
class GraphDiff:
    """Edges present in only one of two aligned path graphs.

    Vertices are path positions ``0 .. len-1`` of the first graph.
    """

    only_first: list[tuple[int, int, str]] = field(default_factory=list)
    only_second: list[tuple[int, int, str]] = field(default_factory=list)
    reversed: bool = False

    def __len__(self):
        return len(self.only_first) + len(self.only_second)

    @property
    def empty(self) -> bool:
        return len(self) == 0

    def positions(self) -> set[int]:
        return {e[0] for e in self.only_first + self.only_second} | {
            e[1] for e in self.only_first + self.only_second}

    def loops_only(self) -> bool:
        return all(v == w for v, w, _ in self.only_first + self.only_second)


def _diff_profiles(p1, p2, flipped) -> GraphDiff:
    loops1, links1 = p1
    loops2, links2 = p2
    diff = GraphDiff(reversed=flipped)
    for i, (s1, s2) in enumerate(zip(loops1, loops2)):
        diff.only_first += [(i, i, lab) for lab in sorted(s1 - s2)]
        diff.only_second += [(i, i, lab) for lab in sorted(s2 - s1)]
    for i, (s1, s2) in enumerate(zip(links1, links2)):
        diff.only_first += [(i, i + 1, lab) for lab in sorted(s1 - s2)]
        diff.only_second += [(i, i + 1, lab) for lab in sorted(s2 - s1)]
    return diff


def compare_graphs(g1: LabeledGraph, g2: LabeledGraph) -> GraphDiff:
    """Align two path graphs end to end and list their edge differences.

    Both orientations of ``g2`` are tried; an orientation is admissible when
    the a-edges sit at the same places.  The smaller difference wins.
    """
    loops1, links1, _ = g1.path_profile()
    loops2, links2, _ = g2.path_profile()
    if len(loops1) != len(loops2):
        raise GraphShapeError(f"paths of different length: {len(loops1)} vs {len(loops2)}")
    a_pattern = [("a" in s) for s in links1]
    best = None
    for flipped in (False, True):
        lo, li = (loops2[::-1], links2[::-1]) if flipped else (loops2, links2)
        if [("a" in s) for s in li] != a_pattern:
            continue
        diff = _diff_profiles((loops1, links1), (lo, li), flipped)
        if best is None or len(diff) < len(best):
            best = diff
    if best is None:
        raise GraphShapeError("a-edge patterns cannot be aligned")
    return best


# -- A, B, C, D on windows of the subshift -----------------------------------------------

MOVING_LETTERS = {"A": "a", "B": "xy", "C": "xz", "D": "yz"}


def subshift_generator(gen: str, w: PointedWord) -> PointedWord:
    """Apply one of ``A, B, C, D`` to a pointed window.

    The origin moves right across ``omega_1`` or left across ``omega_0``
    when that letter belongs to the generator, and stays put otherwise.
    Both ``omega_0`` and ``omega_1`` must be visible before and after.
    """
    letters = MOVING_LETTERS[gen]
    if not 2 <= w.origin <= len(w):
        raise WindowBoundaryError("omega_0 and omega_1 must both be visible")
    if w.at(1) in letters:
        new = w.origin + 1
    elif w.at(0) in letters:
        new = w.origin - 1
    else:
        return w
    if not 2 <= new <= len(w):
        raise WindowBoundaryError("move leaves the window")
    return PointedWord(w.word, new)


def subshift_word(gw: str, w: PointedWord) -> PointedWord:
    """Apply a word in ``A, B, C, D``; the rightmost letter acts first."""
    for g in reversed(gw):
        w = subshift_generator(g, w)
    return w


def movers(w: PointedWord, k: int) -> set[str]:
    """Generators taking ``w`` to ``T^k w`` in one step."""
    target = w.shift(k)
    out = set()
    for g in "ABCD":
        try:
            if subshift_generator(g, w) == target:
                out.add(g)
        except WindowBoundaryError:
            pass
    return out


def orbit_coincidence_check(w: PointedWord, steps: int) -> bool:
    """Do the ``A, B, C, D`` orbit and the shifts ``T^k``, ``|k| <= steps``, agree?

    Breadth-first search over generator applications inside the window; every
    shift with ``|k| <= steps`` must be reached and everything reached must be
    a shift of ``w`` (the same letters with a moved origin).
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if not (w.origin - steps >= 2 and w.origin + steps <= len(w)):
        raise WindowBoundaryError("window too short for the requested steps")
    seen = {w.origin}
    queue = deque([w])
    while queue:
        cur = queue.popleft()
        for g in "ABCD":
            try:
                nxt = subshift_generator(g, cur)
            except WindowBoundaryError:
                continue
            if nxt.word != w.word:
                return False
            if nxt.origin not in seen:
                seen.add(nxt.origin)
                queue.append(nxt)
    shifts = {w.shift(k).origin for k in range(-steps, steps + 1)}
    return shifts <= seen


def tree_vertices(n: int) -> Iterable[str]:
    return (format(k, f"0{n}b") for k in range(2**n))
