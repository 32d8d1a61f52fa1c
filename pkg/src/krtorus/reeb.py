"""Kronrod-Reeb graph of a generic PL field on a closed oriented surface.

Nodes are connected components of critical level sets; edges are the
annulus families of regular contours between consecutive critical
values. Everything is combinatorial:

- a level set is a union of pieces (on-level vertices and edges whose
  endpoints strictly straddle the level) glued by the segments that the
  level cuts inside triangles; a triangle meets at most one component
  of a given level, so gluing pieces within triangles is sound;
- a band is the part of the surface strictly between two consecutive
  critical values; its components are unions of triangles glued across
  edges whose interiors meet the open band;
- graph edges arise by chaining band components through the regular
  level components they share; every chain ends at critical components
  on both sides.

Each node stores two independently computed Euler numbers: the census
of its level component (pieces minus segments) and the sum of PL
indices of its critical vertices. Downstream consumers compare them.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputRejected, InternalInvariantError
from .surface import SurfaceField, format_scalar, vertex_classes


class _UnionFind:
    __slots__ = ("parent",)

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


@dataclass(frozen=True)
class LevelComponent:
    """One connected component of one level set, with its census data."""

    level: object
    pieces: frozenset
    segments: frozenset
    triangles: tuple[int, ...]
    critical_vertices: tuple[int, ...]

    @property
    def census_euler(self) -> int:
        return len(self.pieces) - len(self.segments)

    @property
    def is_node(self) -> bool:
        return bool(self.critical_vertices)

    @property
    def sort_key(self):
        return min(self.pieces)


def triangle_level_pieces(s: SurfaceField, tri: tuple[int, int, int], level) -> list:
    a, b, c = tri
    pieces = [("v", v) for v in tri if s.values[v] == level]
    if len(pieces) == 3:
        raise InputRejected(
            "degenerate-level",
            f"triangle {tri} lies entirely in critical level {format_scalar(level)}; "
            "the tie-broken order cannot repair a flat triangle")
    for u, w in ((a, b), (b, c), (c, a)):
        fu, fw = s.values[u], s.values[w]
        if (fu < level < fw) or (fw < level < fu):
            pieces.append(("e", min(u, w), max(u, w)))
    return pieces


def level_structure(s: SurfaceField, level, classes):
    """All components of one level set.

    Returns (components, triangle_component) where triangle_component
    maps each triangle meeting the level to its component index.
    """
    uf = _UnionFind()
    segments = set()
    tri_pieces = {}
    for idx, tri in enumerate(s.triangles):
        pieces = triangle_level_pieces(s, tri, level)
        if not pieces:
            continue
        tri_pieces[idx] = pieces
        first = pieces[0]
        uf.find(first)
        for p in pieces[1:]:
            uf.union(first, p)
        if len(pieces) == 2:
            segments.add(frozenset(pieces))
    groups: dict = {}
    for p in list(uf.parent):
        groups.setdefault(uf.find(p), set()).add(p)
    roots = sorted(groups, key=lambda r: min(groups[r]))
    comp_index = {r: i for i, r in enumerate(roots)}
    comp_tris: list[list[int]] = [[] for _ in roots]
    triangle_component = {}
    for idx, pieces in tri_pieces.items():
        ci = comp_index[uf.find(pieces[0])]
        comp_tris[ci].append(idx)
        triangle_component[idx] = ci
    components = []
    for r in roots:
        pieces = groups[r]
        segs = frozenset(sg for sg in segments if sg <= pieces)
        crit = tuple(sorted(p[1] for p in pieces
                            if p[0] == "v" and classes[p[1]].is_critical))
        components.append(LevelComponent(
            level=level,
            pieces=frozenset(pieces),
            segments=segs,
            triangles=tuple(sorted(comp_tris[comp_index[r]])),
            critical_vertices=crit))
    return components, triangle_component


@dataclass(frozen=True)
class ReebNode:
    id: int
    level: object
    kinds: tuple[str, ...]
    critical_vertices: tuple[int, ...]
    census_euler: int
    index_sum: int
    is_critical: bool = True


@dataclass(frozen=True)
class ReebEdge:
    id: int
    lower: int
    upper: int
    interval: tuple  # open level interval (a, b), a < b


@dataclass(frozen=True)
class Branch:
    """One component of the graph minus a vertex, with its attaching edges."""

    root_edges: tuple[int, ...]
    nodes: frozenset
    inner_edges: frozenset
    side: str  # "up", "down", or "mixed" relative to the removed vertex


class ReebGraph:
    def __init__(self, nodes, edges, node_map, band_map, vertex_node, surface_chi):
        self.nodes: tuple[ReebNode, ...] = tuple(nodes)
        self.edges: tuple[ReebEdge, ...] = tuple(edges)
        self.node_map: dict[int, tuple[int, ...]] = dict(node_map)
        self.band_map: dict[int, tuple[int, ...]] = dict(band_map)
        self.vertex_node: dict[int, int] = dict(vertex_node)
        self.surface_chi = surface_chi
        adj: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            adj[e.lower].append(e.id)
            adj[e.upper].append(e.id)
        self._adj = {k: tuple(sorted(v)) for k, v in adj.items()}

    def node(self, node_id: int) -> ReebNode:
        return self.nodes[node_id]

    def edge(self, edge_id: int) -> ReebEdge:
        return self.edges[edge_id]

    def edges_at(self, node_id: int) -> tuple[int, ...]:
        return self._adj[node_id]

    def degree(self, node_id: int) -> int:
        return len(self._adj[node_id])

    def b1(self) -> int:
        return len(self.edges) - len(self.nodes) + 1

    def branches_at(self, node_id: int) -> tuple[Branch, ...]:
        """Components of the graph minus one vertex, ordered by smallest root edge."""
        uf = _UnionFind()
        for e in self.edges:
            if e.lower != node_id and e.upper != node_id:
                uf.union(e.lower, e.upper)
        for n in self.nodes:
            if n.id != node_id:
                uf.find(n.id)
        comp_nodes: dict = {}
        for n in self.nodes:
            if n.id != node_id:
                comp_nodes.setdefault(uf.find(n.id), set()).add(n.id)
        comp_roots: dict = {}
        comp_sides: dict = {}
        for eid in self._adj[node_id]:
            e = self.edges[eid]
            other = e.upper if e.lower == node_id else e.lower
            root = uf.find(other)
            comp_roots.setdefault(root, []).append(eid)
            comp_sides.setdefault(root, set()).add("up" if e.lower == node_id else "down")
        if set(comp_roots) != set(comp_nodes):
            raise InternalInvariantError("graph minus a vertex has an unreachable component")
        branches = []
        for root, roots_edges in comp_roots.items():
            nodes = frozenset(comp_nodes[root])
            inner = frozenset(e.id for e in self.edges
                              if e.lower in nodes and e.upper in nodes)
            sides = comp_sides[root]
            side = sides.pop() if len(sides) == 1 else "mixed"
            branches.append(Branch(tuple(sorted(roots_edges)), nodes, inner, side))
        return tuple(sorted(branches, key=lambda b: b.root_edges[0]))


def compute_reeb(s: SurfaceField) -> ReebGraph:
    classes = vertex_classes(s)
    crit = [v for v, c in enumerate(classes) if c.is_critical]
    if not crit:
        raise InternalInvariantError("closed surface field with no critical vertex")
    levels = sorted({s.values[v] for v in crit})

    per_level = []
    for c in levels:
        per_level.append(level_structure(s, c, classes))

    # node ids in (level, component key) order
    nodes = []
    node_ref: dict[tuple[int, int], int] = {}
    vertex_node = {}
    for t, (comps, _) in enumerate(per_level):
        for ci, comp in enumerate(comps):
            if not comp.is_node:
                continue
            nid = len(nodes)
            node_ref[(t, ci)] = nid
            kinds = tuple(sorted(classes[v].label() for v in comp.critical_vertices))
            idx_sum = sum(classes[v].index for v in comp.critical_vertices)
            nodes.append(ReebNode(nid, comp.level, kinds, comp.critical_vertices,
                                  comp.census_euler, idx_sum))
            for v in comp.critical_vertices:
                vertex_node[v] = nid

    tmin = [min(s.values[v] for v in tri) for tri in s.triangles]
    tmax = [max(s.values[v] for v in tri) for tri in s.triangles]
    edge_tris: dict = {}
    for idx, (a, b, c) in enumerate(s.triangles):
        for u, w in ((a, b), (b, c), (c, a)):
            edge_tris.setdefault((min(u, w), max(u, w)), []).append(idx)

    # band components per critical-value gap
    band_comps = []  # (t, member triangles tuple)
    tri_bands: dict[int, list[int]] = {}
    band_sides = []  # per band comp: ((t, ci) of lower attachment, (t+1, ci) of upper)
    for t in range(len(levels) - 1):
        lo, hi = levels[t], levels[t + 1]
        members = [i for i in range(s.triangle_count)
                   if tmax[i] > lo and tmin[i] < hi]
        uf = _UnionFind()
        for i in members:
            uf.find(i)
        for (u, w), tris in edge_tris.items():
            eu, ew = s.values[u], s.values[w]
            if max(eu, ew) > lo and min(eu, ew) < hi and len(tris) == 2:
                uf.union(tris[0], tris[1])
        groups: dict = {}
        for i in members:
            groups.setdefault(uf.find(i), []).append(i)
        for root in sorted(groups, key=lambda r: min(groups[r])):
            tris = tuple(sorted(groups[root]))
            bi = len(band_comps)
            band_comps.append((t, tris))
            for i in tris:
                tri_bands.setdefault(i, []).append(bi)
            lower_refs = {per_level[t][1][i] for i in tris if tmin[i] <= lo}
            upper_refs = {per_level[t + 1][1][i] for i in tris if tmax[i] >= hi}
            if len(lower_refs) != 1 or len(upper_refs) != 1:
                raise InternalInvariantError(
                    f"band component between {lo} and {hi} has ambiguous attachments")
            band_sides.append(((t, lower_refs.pop()), (t + 1, upper_refs.pop())))

    # chain bands through regular components into graph edges
    glue = _UnionFind()
    reg_band_count: dict = {}
    for bi, ((lt, lc), (ut, uc)) in enumerate(band_sides):
        glue.find(("b", bi))
        for ref, t in (((lt, lc), lt), ((ut, uc), ut)):
            if ref in node_ref:
                continue
            glue.union(("b", bi), ("r", ref))
            reg_band_count[ref] = reg_band_count.get(ref, 0) + 1
    for ref, count in reg_band_count.items():
        if count != 2:
            raise InternalInvariantError(
                f"regular level component {ref} does not continue on both sides")

    chains: dict = {}
    for bi in range(len(band_comps)):
        chains.setdefault(glue.find(("b", bi)), []).append(bi)
    edge_raw = []
    for root, bis in chains.items():
        lowers = []
        uppers = []
        for bi in bis:
            (lref, uref) = band_sides[bi]
            if lref in node_ref:
                lowers.append(node_ref[lref])
            if uref in node_ref:
                uppers.append(node_ref[uref])
        if len(lowers) != 1 or len(uppers) != 1:
            raise InternalInvariantError("contour family does not end at exactly two nodes")
        a, b = lowers[0], uppers[0]
        min_tri = min(min(band_comps[bi][1]) for bi in bis)
        edge_raw.append((a, b, min_tri, tuple(sorted(bis))))
    edge_raw.sort(key=lambda r: (r[0], r[1], r[2]))
    edges = []
    band_edge = {}
    for eid, (a, b, _, bis) in enumerate(edge_raw):
        la, lb = nodes[a].level, nodes[b].level
        if not la < lb:
            raise InternalInvariantError("edge interval is not increasing")
        edges.append(ReebEdge(eid, a, b, (la, lb)))
        for bi in bis:
            band_edge[bi] = eid

    # exclusive triangle ownership: node carriers first, then the unique edge
    tri_nodes: dict[int, list[int]] = {}
    for t, (comps, tri_comp) in enumerate(per_level):
        for idx, ci in tri_comp.items():
            if (t, ci) in node_ref:
                tri_nodes.setdefault(idx, []).append(node_ref[(t, ci)])
    node_map: dict[int, list[int]] = {n.id: [] for n in nodes}
    band_map: dict[int, list[int]] = {e.id: [] for e in edges}
    for idx in range(s.triangle_count):
        if idx in tri_nodes:
            node_map[min(tri_nodes[idx])].append(idx)
            continue
        owners = {band_edge[bi] for bi in tri_bands.get(idx, [])}
        if len(owners) != 1:
            raise InternalInvariantError(f"triangle {idx} is not owned by exactly one edge")
        band_map[owners.pop()].append(idx)

    g = ReebGraph(nodes,
                  edges,
                  {k: tuple(v) for k, v in node_map.items()},
                  {k: tuple(v) for k, v in band_map.items()},
                  vertex_node,
                  surface_chi=s.vertex_count - len(s.undirected_edges()) + s.triangle_count)

    # connectivity of the graph itself
    uf = _UnionFind()
    for n in g.nodes:
        uf.find(n.id)
    for e in g.edges:
        uf.union(e.lower, e.upper)
    if len({uf.find(n.id) for n in g.nodes}) != 1:
        raise InternalInvariantError("graph is disconnected for a connected surface")
    # bands are annuli, so nodes alone must carry the Euler characteristic
    if sum(n.census_euler for n in g.nodes) != g.surface_chi:
        raise InternalInvariantError("node census does not add up to the surface Euler number")
    if sum(n.index_sum for n in g.nodes) != g.surface_chi:
        raise InternalInvariantError("index sum does not add up to the surface Euler number")
    return g


def is_tree(g: ReebGraph) -> bool:
    return len(g.edges) == len(g.nodes) - 1


def reeb_to_dot(g: ReebGraph) -> str:
    """Deterministic DOT rendering of the graph."""
    lines = ["graph kr {"]
    for n in g.nodes:
        kinds = ",".join(n.kinds)
        lines.append(f'  n{n.id} [label="level={format_scalar(n.level)} {kinds}"];')
    for e in g.edges:
        lo, hi = e.interval
        lines.append(f'  n{e.lower} -- n{e.upper} '
                     f'[label="({format_scalar(lo)},{format_scalar(hi)})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def branch_euler(g: ReebGraph, node_id: int, branch: Branch) -> int:
    """Euler characteristic of the part of the surface over one branch.

    Computed two independent ways: summing level-census Euler numbers of
    the branch nodes (regular contour families are annuli and contribute
    zero), and summing PL indices of the critical vertices over the
    branch. A mismatch is an internal error, never silently resolved.
    """
    route_census = sum(g.nodes[w].census_euler for w in branch.nodes)
    route_index = sum(g.nodes[w].index_sum for w in branch.nodes)
    if route_census != route_index:
        raise InternalInvariantError(
            f"branch Euler computations disagree at node {node_id}: "
            f"census {route_census} vs index sum {route_index}")
    return route_index


def find_special_vertex(g: ReebGraph) -> int:
    """The unique tree vertex all of whose branches carry Euler number 1."""
    if not is_tree(g):
        raise InputRejected("not-a-tree",
                            f"graph has first Betti number {g.b1()}, expected a tree",
                            b1=g.b1())
    winners = []
    for n in g.nodes:
        branches = g.branches_at(n.id)
        if branches and all(branch_euler(g, n.id, b) == 1 for b in branches):
            winners.append(n.id)
    if not winners:
        raise InputRejected(
            "no-special-vertex",
            "no vertex has all branches of Euler number 1; "
            "the torus/tree hypotheses do not hold for this input")
    if len(winners) > 1:
        raise InternalInvariantError(f"multiple special vertices {winners}")
    return winners[0]
