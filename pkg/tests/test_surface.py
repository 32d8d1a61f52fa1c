"""Mesh validation, vertex classification and the text format."""
from __future__ import annotations

from fractions import Fraction

import pytest

from krtorus.errors import InputRejected
from krtorus.fields import grid_vertex
from krtorus.surface import (SurfaceField, classify_vertex, dump_surface,
                             format_scalar, load_surface, parse_scalar,
                             total_index, validate_closed_orientable,
                             vertex_classes)

import oracles

# boundary of a 3-simplex: the minimal closed orientable surface
TETRA = [(0, 1, 2), (0, 3, 1), (1, 3, 2), (2, 3, 0)]


def tetra_field(values=(0, 1, 2, 3)) -> SurfaceField:
    return SurfaceField(TETRA, list(values))


def test_validate_sphere():
    info = validate_closed_orientable(tetra_field())
    assert info == {"chi": 2, "genus": 0}
    assert oracles.euler_characteristic(TETRA) == 2


def test_validate_torus(surface):
    s = surface("two-cell")
    info = validate_closed_orientable(s)
    assert info == {"chi": 0, "genus": 1}
    assert oracles.euler_characteristic(s.triangles) == 0


def test_validate_rejects_boundary():
    # drop one face: two directed edges lose their partners
    s = SurfaceField(TETRA[:3], [0, 1, 2, 3])
    with pytest.raises(InputRejected) as exc:
        validate_closed_orientable(s)
    assert exc.value.code == "not-a-surface"


def test_validate_rejects_inconsistent_orientation():
    bad = [(0, 1, 2), (0, 3, 1), (1, 3, 2), (2, 0, 3)]
    with pytest.raises(InputRejected) as exc:
        validate_closed_orientable(SurfaceField(bad, [0, 1, 2, 3]))
    assert exc.value.code == "not-a-surface"


def test_validate_rejects_disconnected():
    tris = TETRA + [(a + 4, b + 4, c + 4) for a, b, c in TETRA]
    with pytest.raises(InputRejected) as exc:
        validate_closed_orientable(SurfaceField(tris, list(range(8))))
    assert exc.value.code == "not-a-surface"


def test_tetra_classification():
    s = tetra_field()
    kinds = [classify_vertex(s, v).kind for v in range(4)]
    assert kinds == ["minimum", "regular", "regular", "maximum"]
    assert total_index(s) == 2


def test_fan_is_cyclic(surface):
    s = surface("two-cell")
    fan = s.vertex_fan(grid_vertex(16, 5, 7))
    assert len(fan) == 6
    assert len(set(fan)) == 6
    edges = s.undirected_edges()
    for u in fan:
        v = grid_vertex(16, 5, 7)
        assert (min(u, v), max(u, v)) in edges


def test_two_cell_critical_points(surface):
    s = surface("two-cell")
    classes = vertex_classes(s)
    crit = {v: c for v, c in enumerate(classes) if c.is_critical}
    # one max, one min, two plain saddles; everything else regular
    assert sorted(c.kind for c in crit.values()) == [
        "maximum", "minimum", "saddle", "saddle"]
    assert all(c.multiplicity == 1 for c in crit.values() if c.kind == "saddle")
    assert crit[grid_vertex(16, 0, 0)].kind == "maximum"
    assert crit[grid_vertex(16, 8, 8)].kind == "minimum"
    assert total_index(s) == 0


def test_total_index_matches_chi(surface, twin_peaks):
    for name in ("two-cell", "z2-sym", "z2xz2-sym", "cyclic-height"):
        assert total_index(surface(name)) == 0
    assert total_index(twin_peaks) == 0


def test_ties_break_by_vertex_id():
    # equal values: the higher index counts as higher, so v3 is the unique max
    s = tetra_field((0, 1, 3, 3))
    assert classify_vertex(s, 2).kind == "regular"
    assert classify_vertex(s, 3).kind == "maximum"


def test_scalar_round_trip():
    for x in (0, -17, 2.5, -1.75, Fraction(3, 7), 1e-9):
        assert parse_scalar(format_scalar(x)) == x
    assert parse_scalar("3/7") == Fraction(3, 7)
    with pytest.raises(InputRejected):
        parse_scalar("1/0")
    with pytest.raises(InputRejected):
        parse_scalar("spam")


def test_dump_load_round_trip(surface):
    s = surface("two-cell")
    text = dump_surface(s)
    s2 = load_surface(text)
    assert s2.values == s.values
    assert s2.triangles == s.triangles
    assert s2.coords == s.coords
    assert dump_surface(s2) == text


def test_load_accepts_comments_and_blank_lines():
    text = dump_surface(tetra_field())
    lines = text.splitlines()
    lines.insert(1, "# a comment")
    lines.insert(4, "")
    s = load_surface("\n".join(lines))
    assert s.vertex_count == 4 and s.triangle_count == 4


def test_load_rejects_bad_header():
    with pytest.raises(InputRejected) as exc:
        load_surface("torus-field v2\n1 1\n0\n0 0 0\n")
    assert exc.value.code == "malformed-input"


def test_load_rejects_wrong_line_count():
    text = dump_surface(tetra_field())
    with pytest.raises(InputRejected) as exc:
        load_surface(text + "0 1 2\n")
    assert exc.value.code == "malformed-input"


def test_load_rejects_mixed_vertex_forms():
    with pytest.raises(InputRejected) as exc:
        load_surface("torus-field v1\n4 4\n0\n1 0.0 0.0 0.0\n2\n3\n"
                     "0 1 2\n0 3 1\n1 3 2\n2 3 0\n")
    assert exc.value.code == "malformed-input"
