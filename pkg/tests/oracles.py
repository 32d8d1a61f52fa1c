"""Independent brute-force reference implementations.

Everything here works on raw triangle/value data and never imports the
package under test. Expected values in the suite are either computed
against these functions or frozen from hand calculations that are
spelled out at the point of use.
"""
from __future__ import annotations

from math import gcd, lcm


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent
        if x not in p:
            p[x] = x
            return x
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def surface_edges(triangles):
    out = set()
    for a, b, c in triangles:
        for u, w in ((a, b), (b, c), (c, a)):
            out.add((u, w) if u < w else (w, u))
    return out


def euler_characteristic(triangles):
    verts = {v for t in triangles for v in t}
    return len(verts) - len(surface_edges(triangles)) + len(triangles)


def triangle_component_count(triangles):
    """Connected components of a triangle set glued along shared edges."""
    uf = UnionFind()
    owner = {}
    for idx, (a, b, c) in enumerate(triangles):
        uf.find(idx)
        for u, w in ((a, b), (b, c), (c, a)):
            key = (min(u, w), max(u, w))
            if key in owner:
                uf.union(idx, owner[key])
            else:
                owner[key] = idx
    return len({uf.find(i) for i in range(len(triangles))})


def triangle_level_pieces(tri, values, level):
    """Pieces of one level set inside one triangle.

    A piece is an on-level vertex ("v", v) or an edge whose endpoints
    strictly straddle the level ("e", lo, hi).
    """
    a, b, c = tri
    pieces = [("v", v) for v in tri if values[v] == level]
    if len(pieces) == 3:
        raise ValueError(f"triangle {tri} lies entirely in level {level}")
    for u, w in ((a, b), (b, c), (c, a)):
        fu, fw = values[u], values[w]
        if (fu < level < fw) or (fw < level < fu):
            pieces.append(("e", min(u, w), max(u, w)))
    return pieces


def level_components(triangles, values, level):
    """Connected components of a level set, with a cell census per component.

    Returns a list of dicts {"pieces", "segments", "vertices"}; the census
    Euler characteristic of a component is len(pieces) - len(segments).
    """
    uf = UnionFind()
    segments = set()
    for tri in triangles:
        pieces = triangle_level_pieces(tri, values, level)
        if not pieces:
            continue
        first = pieces[0]
        uf.find(first)
        for p in pieces[1:]:
            uf.union(first, p)
        if len(pieces) == 2:
            segments.add(frozenset(pieces))
    groups = {}
    for p in list(uf.parent):
        groups.setdefault(uf.find(p), set()).add(p)
    out = []
    for root, pieces in sorted(groups.items(), key=lambda kv: min(kv[1])):
        segs = {s for s in segments if s <= pieces}
        verts = {p[1] for p in pieces if p[0] == "v"}
        out.append({"pieces": pieces, "segments": segs, "vertices": verts})
    return out


def count_contours(triangles, values, level):
    return len(level_components(triangles, values, level))


def component_euler(comp) -> int:
    return len(comp["pieces"]) - len(comp["segments"])


def cokernel_pair(mat2):
    """Invariant factors (d1, d2) of Z^2 / A Z^2 for a nonsingular integer 2x2 A.

    Brute force: the order of a standard generator e is the least t >= 1
    with t*e in the column lattice, tested by exact divisibility against
    adj(A); d2 is the group exponent lcm(ord e1, ord e2) and d1 follows
    from d1*d2 = |det A|.
    """
    (a, b), (c, d) = mat2
    det = a * d - b * c
    if det == 0:
        raise ValueError("matrix is singular")
    big = abs(det)
    adj = ((d, -b), (-c, a))

    def order(e):
        x = adj[0][0] * e[0] + adj[0][1] * e[1]
        y = adj[1][0] * e[0] + adj[1][1] * e[1]
        for t in range(1, big + 1):
            if (t * x) % big == 0 and (t * y) % big == 0:
                return t
        raise AssertionError("generator order exceeded the group order")

    d2 = lcm(order((1, 0)), order((0, 1)))
    assert big % d2 == 0
    d1 = big // d2
    assert d2 % d1 == 0
    return (d1, d2)


def permutation_orbits(perms, count):
    """Orbits of {0..count-1} under a list of permutations (given as tuples)."""
    uf = UnionFind()
    for x in range(count):
        uf.find(x)
        for p in perms:
            uf.union(x, p[x])
    orbits = {}
    for x in range(count):
        orbits.setdefault(uf.find(x), set()).add(x)
    return sorted(orbits.values(), key=min)
