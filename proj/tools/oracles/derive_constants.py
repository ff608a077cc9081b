"""Independent reference values for the regression constants in tests/.

Uses networkx path enumeration, a brute-force edge-disjoint search and a
floating-point LP (scipy HiGHS) rounded to a small-denominator fraction.
Instances are raw graphs with pair lists; every pair endpoint gets its own
pendant leaf, as in the library's normalization.
"""

import itertools
import json
from fractions import Fraction

import networkx as nx
from scipy.optimize import linprog


def normalize(n, edges, pairs):
    g = nx.MultiGraph()
    g.add_nodes_from(range(n))
    caps = {}
    for i, (u, v, c) in enumerate(edges):
        g.add_edge(u, v, key=i)
        caps[i] = c
    terms = []
    nxt = n
    for a, b in pairs:
        la, lb = nxt, nxt + 1
        nxt += 2
        for leaf, x in ((la, a), (lb, b)):
            k = len(caps)
            g.add_edge(leaf, x, key=k)
            caps[k] = 1
        terms.append((la, lb))
    return g, caps, terms


def edge_paths(g, s, t):
    out = []
    for nodes in nx.all_simple_paths(g, s, t):
        options = [list(g[nodes[i]][nodes[i + 1]].keys()) for i in range(len(nodes) - 1)]
        for combo in itertools.product(*options):
            out.append(combo)
    return out


def exact_medp(n, edges, pairs, cap):
    g, caps, terms = normalize(n, edges, pairs)
    paths = [edge_paths(g, s, t) for s, t in terms]
    best = 0
    for choice in itertools.product(*[[None] + p for p in paths]):
        load = {}
        ok = True
        for p in choice:
            if p is None:
                continue
            for e in p:
                load[e] = load.get(e, 0) + 1
                if load[e] > caps[e] * cap:
                    ok = False
        if ok:
            best = max(best, sum(p is not None for p in choice))
    return best


def lp_value(n, edges, pairs):
    g, caps, terms = normalize(n, edges, pairs)
    cols = []
    for h, (s, t) in enumerate(terms):
        for p in edge_paths(g, s, t):
            cols.append((h, p))
    if not cols:
        return Fraction(0)
    rows_e = sorted(caps)
    a, b = [], []
    for e in rows_e:
        a.append([1 if e in p else 0 for _, p in cols])
        b.append(caps[e])
    for h in range(len(terms)):
        a.append([1 if hh == h else 0 for hh, _ in cols])
        b.append(1)
    res = linprog([-1] * len(cols), A_ub=a, b_ub=b, bounds=(0, None), method="highs")
    return Fraction(-res.fun).limit_denominator(1000)


def grid(r, c):
    e = []
    for i in range(r):
        for j in range(c):
            if j + 1 < c:
                e.append((i * c + j, i * c + j + 1, 1))
            if i + 1 < r:
                e.append((i * c + j, (i + 1) * c + j, 1))
    return e


INSTANCES = {
    "k4_three_pairs": (4, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)], [(0, 1), (2, 3), (0, 2)]),
    "triangle_two_pairs": (3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [(0, 1), (0, 2)]),
    "bridge_two_pairs": (4, [(0, 1, 1), (2, 1, 1), (1, 3, 1)], [(0, 3), (2, 3)]),
    "k4_two_disjoint": (4, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)], [(0, 1), (2, 3)]),
    "grid3_crossing": (9, grid(3, 3), [(0, 6), (3, 7), (6, 8)]),
    "cycle4_diagonals": (4, [(0, 1, 1), (1, 3, 1), (3, 2, 1), (2, 0, 1)], [(0, 3), (1, 2)]),
    "star5_three_pairs": (6, [(0, i, 1) for i in range(1, 6)], [(1, 2), (3, 4), (5, 1)]),
    "cap2_path_three_pairs": (3, [(0, 1, 2), (1, 2, 1)], [(0, 2), (0, 2), (0, 1)]),
}


def main():
    out = {}
    for name, (n, edges, pairs) in INSTANCES.items():
        out[name] = {
            "lp": str(lp_value(n, edges, pairs)),
            "exact_cap1": exact_medp(n, edges, pairs, 1),
            "exact_cap2": exact_medp(n, edges, pairs, 2),
        }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
