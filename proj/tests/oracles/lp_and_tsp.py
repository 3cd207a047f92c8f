"""Independent float oracle for the frozen constants in the unit tests.

LP(G) by full subset enumeration with scipy; graph-TSP by shortest closed
walk = min over Eulerian connected multigraphs, via networkx shortest paths
and an exhaustive search over vertex orders (small n only).
"""
import itertools
from fractions import Fraction

import networkx as nx
from scipy.optimize import linprog


def lp_value(g, box):
    nodes = list(g.nodes)
    edges = list(g.edges)
    n = len(nodes)
    rows, rhs = [], []
    for r in range(1, n):
        for s in itertools.combinations(nodes[:-1], r):
            s = set(s)
            rows.append([-1.0 if (u in s) != (v in s) else 0.0 for u, v in edges])
            rhs.append(-2.0)
    bounds = [(0, 1 if box else None)] * len(edges)
    res = linprog([1.0] * len(edges), A_ub=rows, b_ub=rhs, bounds=bounds, method="highs")
    return Fraction(res.fun).limit_denominator(1000)


def tsp_value(g):
    d = dict(nx.all_pairs_shortest_path_length(g))
    nodes = list(g.nodes)
    first, rest = nodes[0], nodes[1:]
    best = None
    for perm in itertools.permutations(rest):
        tour = (first,) + perm
        length = sum(d[tour[i]][tour[(i + 1) % len(tour)]] for i in range(len(tour)))
        best = length if best is None else min(best, length)
    return best


def theta(a, b, c):
    g = nx.Graph()
    nxt = 2
    for k in (a, b, c):
        prev = 0
        for _ in range(k):
            g.add_edge(prev, nxt)
            prev = nxt
            nxt += 1
        g.add_edge(prev, 1)
    return g


CASES = {
    "K4": nx.complete_graph(4),
    "diamond": nx.Graph([(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
    "C6": nx.cycle_graph(6),
    "K23": theta(1, 1, 1),
    "theta222": theta(2, 2, 2),
    "theta123": theta(1, 2, 3),
    "petersen": nx.petersen_graph(),
    "prism": nx.circular_ladder_graph(3),
    "bowtie": nx.Graph([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]),
}

if __name__ == "__main__":
    for name, g in CASES.items():
        print(f"{name}: n={g.number_of_nodes()} m={g.number_of_edges()} "
              f"lp_box={lp_value(g, True)} lp_free={lp_value(g, False)} tsp={tsp_value(g)}")
