"""The group on the binary tree, its Schreier graphs and the graphs of the subshift."""

from grigorchuk import (
    act,
    compare_graphs,
    edge_census,
    eta_prefix,
    graph_from_window,
    is_transitive,
    lysenok_relators,
    movers,
    relator_check,
    schreier_graph,
    special_sequence_window,
)

# %% the generators on level 3
for g in "abcd":
    print(g, [act(g, format(k, "03b")) for k in range(8)])

# %% relations and transitivity
print("relators:", [len(w) for w in lysenok_relators(3)])
print("all relations hold on level 12:", relator_check(12, 3))
print("transitive on levels 1..12:", all(is_transitive(n) for n in range(1, 13)))

# %% Schreier graphs are paths: a-edges alternate with double edges
g = schreier_graph(3)
loops, links, order = g.path_profile()
print("path order:", order)
print("links:", ["".join(sorted(s)) for s in links])
print(edge_census(g))

# %% the level-n graph is the graph of p(n-1) up to loops at the two ends
for n in range(2, 9):
    diff = compare_graphs(schreier_graph(n), graph_from_window(eta_prefix(2**n - 1)))
    print(n, len(diff), "differences, loops only:", diff.loops_only(), sorted(diff.positions()))

# %% A, B, C, D move the origin of a two-sided sequence
w = special_sequence_window("x", 8)
print(w)
print("T^-1 by", movers(w, -1), " T by", movers(w, 1), " fixed by", movers(w, 0))
