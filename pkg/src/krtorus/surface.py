"""Triangulated closed oriented surfaces carrying a scalar vertex field.

The field lives on vertices and is affine inside each triangle, so level
sets are polygonal. Genericity is simulated: criticality decisions break
value ties by vertex index, which makes the vertex order strictly total.
Level-set geometry (which edges a contour crosses) always compares raw
values; only the local classification uses the tie-broken order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputRejected, InternalInvariantError

Scalar = "float | Fraction | int"

HEADER = "torus-field v1"


@dataclass(frozen=True)
class VertexClass:
    """Local type of a vertex: minimum, regular, saddle (with multiplicity) or maximum."""

    kind: str
    multiplicity: int = 0

    @property
    def index(self) -> int:
        # extrema contribute +1, a k-fold saddle -k, regular vertices 0
        if self.kind in ("minimum", "maximum"):
            return 1
        if self.kind == "saddle":
            return -self.multiplicity
        return 0

    @property
    def is_critical(self) -> bool:
        return self.kind != "regular"

    def label(self) -> str:
        if self.kind == "saddle" and self.multiplicity > 1:
            return f"saddle:{self.multiplicity}"
        return self.kind


class SurfaceField:
    """Immutable triangulated surface with one scalar per vertex.

    triangles: CCW vertex triples indexing into values.
    coords: optional embedding, never consulted by the algorithms.
    Construction validates local well-formedness only; the global
    closed/oriented/connected checks live in validate_closed_orientable.
    """

    def __init__(self, triangles, values, coords=None):
        vals = tuple(values)
        if not vals:
            raise InputRejected("malformed-input", "surface has no vertices")
        for x in vals:
            if not isinstance(x, (int, float, Fraction)) or isinstance(x, bool):
                raise InputRejected("malformed-input", f"unsupported scalar {x!r}")
        tris = []
        seen: set[frozenset] = set()
        for raw in triangles:
            t = tuple(raw)
            if len(t) != 3:
                raise InputRejected("malformed-input", f"triangle {t} does not have 3 vertices")
            for i in t:
                if not isinstance(i, int) or isinstance(i, bool) or i < 0 or i >= len(vals):
                    raise InputRejected("malformed-input", f"vertex index {i!r} out of range")
            if len(set(t)) != 3:
                raise InputRejected("malformed-input", f"triangle {t} repeats a vertex")
            key = frozenset(t)
            if key in seen:
                raise InputRejected("malformed-input", f"duplicate triangle {sorted(t)}")
            seen.add(key)
            tris.append(t)
        if not tris:
            raise InputRejected("malformed-input", "surface has no triangles")
        if coords is not None:
            coords = tuple(tuple(float(c) for c in xyz) for xyz in coords)
            if len(coords) != len(vals):
                raise InputRejected("malformed-input", "coordinate count does not match vertex count")
            for xyz in coords:
                if len(xyz) != 3:
                    raise InputRejected("malformed-input", "coordinates must be x y z triples")
        self.triangles: tuple[tuple[int, int, int], ...] = tuple(tris)
        self.values = vals
        self.coords = coords
        self._succ = None
        self._fans: list | None = None
        self._classes = None

    @property
    def vertex_count(self) -> int:
        return len(self.values)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def value(self, v: int):
        return self.values[v]

    def order_key(self, v: int):
        """Strict total order simulating genericity: value first, index breaks ties."""
        return (self.values[v], v)

    def undirected_edges(self) -> set[tuple[int, int]]:
        out = set()
        for a, b, c in self.triangles:
            for u, w in ((a, b), (b, c), (c, a)):
                out.add((u, w) if u < w else (w, u))
        return out

    def _corner_successors(self):
        # succ[a][b] = c for each CCW triangle (a, b, c); doubled directed
        # edges mean inconsistent orientation or a non-surface gluing
        if self._succ is None:
            succ = [dict() for _ in range(len(self.values))]
            for a, b, c in self.triangles:
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    if y in succ[x]:
                        raise InputRejected(
                            "not-a-surface",
                            f"directed edge {x}->{y} used by two triangles; "
                            "orientations are inconsistent or the gluing is not orientable")
                    succ[x][y] = z
            self._succ = succ
        return self._succ

    def vertex_fan(self, v: int) -> tuple[int, ...]:
        """Neighbors of v in CCW cyclic order. Rejects pinched or boundary vertices."""
        if self._fans is None:
            self._fans = [None] * len(self.values)
        fan = self._fans[v]
        if fan is None:
            d = self._corner_successors()[v]
            if not d:
                raise InputRejected("not-a-surface", f"vertex {v} has no incident triangle")
            start = min(d)
            cyc = [start]
            cur = d[start]
            while cur != start:
                if cur not in d:
                    raise InputRejected("not-a-surface",
                                        f"boundary edge at vertex {v}: the fan does not close")
                cyc.append(cur)
                if len(cyc) > len(d):
                    raise InternalInvariantError(f"fan walk at vertex {v} does not terminate")
                cur = d[cur]
            if len(cyc) != len(d):
                raise InputRejected("not-a-surface",
                                    f"vertex {v} is pinched: its link is not a single cycle")
            fan = tuple(cyc)
            self._fans[v] = fan
        return fan


def validate_closed_orientable(s: SurfaceField) -> dict:
    """Check that the complex is a closed connected consistently oriented surface.

    Returns {"chi": ..., "genus": ...} on success, raises InputRejected otherwise.
    """
    succ = s._corner_successors()
    directed = set()
    for a, b, c in s.triangles:
        directed.add((a, b))
        directed.add((b, c))
        directed.add((c, a))
    for u, w in directed:
        if (w, u) not in directed:
            raise InputRejected("not-a-surface", f"boundary edge {u}-{w}: no opposite triangle")
    for v in range(s.vertex_count):
        s.vertex_fan(v)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != s.vertex_count:
        raise InputRejected("not-a-surface", "surface is disconnected")
    if len(directed) % 2:
        raise InternalInvariantError("odd directed edge count on a closed complex")
    chi = s.vertex_count - len(directed) // 2 + s.triangle_count
    if chi % 2 or chi > 2:
        raise InternalInvariantError(f"impossible Euler characteristic {chi}")
    return {"chi": chi, "genus": (2 - chi) // 2}


def classify_vertex(s: SurfaceField, v: int) -> VertexClass:
    """PL type of vertex v: counts cyclic runs of below/above neighbors in the fan."""
    fan = s.vertex_fan(v)
    kv = s.order_key(v)
    below = [s.order_key(u) < kv for u in fan]
    if not any(below):
        return VertexClass("minimum")
    if all(below):
        return VertexClass("maximum")
    n = len(fan)
    c_minus = sum(1 for i in range(n) if below[i] and not below[i - 1])
    c_plus = sum(1 for i in range(n) if not below[i] and below[i - 1])
    if c_minus != c_plus:
        raise InternalInvariantError(f"run counts disagree at vertex {v}")
    if c_minus == 1:
        return VertexClass("regular")
    return VertexClass("saddle", c_minus - 1)


def vertex_classes(s: SurfaceField) -> tuple[VertexClass, ...]:
    if s._classes is None:
        s._classes = tuple(classify_vertex(s, v) for v in range(s.vertex_count))
    return s._classes


def total_index(s: SurfaceField) -> int:
    """Sum of PL indices over all vertices; equals chi on valid closed surfaces."""
    return sum(c.index for c in vertex_classes(s))


def parse_scalar(tok: str):
    if "/" in tok:
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise InputRejected("malformed-input", f"bad rational literal {tok!r}")
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise InputRejected("malformed-input", f"bad scalar literal {tok!r}")


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(x) if isinstance(x, float) else str(x)


def load_surface(source) -> SurfaceField:
    """Parse the torus-field v1 text format.

    Line 1 is the header, line 2 holds the vertex and triangle counts.
    Then one line per vertex ("value" or "value x y z") and one line per
    triangle (three 0-based CCW indices). Lines starting with '#' are
    comments. Accepts a string, bytes, or a readable object.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append(stripped)
    if not lines or lines[0] != HEADER:
        raise InputRejected("malformed-input", f"missing or wrong header; expected {HEADER!r}")
    if len(lines) < 2:
        raise InputRejected("malformed-input", "missing count line")
    head = lines[1].split()
    try:
        nv, nt = (int(h) for h in head)
    except ValueError:
        raise InputRejected("malformed-input", f"count line must hold two integers, got {lines[1]!r}")
    if nv <= 0 or nt <= 0:
        raise InputRejected("malformed-input", "vertex and triangle counts must be positive")
    body = lines[2:]
    if len(body) != nv + nt:
        raise InputRejected("malformed-input",
                            f"expected {nv + nt} data lines, found {len(body)}")
    values = []
    coords = []
    have_coords = None
    for ln in body[:nv]:
        toks = ln.split()
        if len(toks) not in (1, 4):
            raise InputRejected("malformed-input", f"vertex line {ln!r} must hold 1 or 4 numbers")
        values.append(parse_scalar(toks[0]))
        with_xyz = len(toks) == 4
        if have_coords is None:
            have_coords = with_xyz
        elif have_coords != with_xyz:
            raise InputRejected("malformed-input", "vertex lines mix bare and coordinate forms")
        if with_xyz:
            try:
                coords.append(tuple(float(t) for t in toks[1:]))
            except ValueError:
                raise InputRejected("malformed-input", f"bad coordinates in line {ln!r}")
    tris = []
    for ln in body[nv:]:
        toks = ln.split()
        if len(toks) != 3:
            raise InputRejected("malformed-input", f"triangle line {ln!r} must hold 3 indices")
        try:
            tris.append(tuple(int(t) for t in toks))
        except ValueError:
            raise InputRejected("malformed-input", f"bad triangle indices in line {ln!r}")
    return SurfaceField(tris, values, coords if have_coords else None)


def dump_surface(s: SurfaceField) -> str:
    """Serialize back to the torus-field v1 text format (lossless for load_surface)."""
    out = [HEADER, f"{s.vertex_count} {s.triangle_count}"]
    for v in range(s.vertex_count):
        line = format_scalar(s.values[v])
        if s.coords is not None:
            line += " " + " ".join(repr(c) for c in s.coords[v])
        out.append(line)
    for a, b, c in s.triangles:
        out.append(f"{a} {b} {c}")
    return "\n".join(out) + "\n"
