"""Complex construction, mesh document parsing, and validation."""

import json

import numpy as np
import pytest

from spherepack import (
    Complex,
    MeshFormatError,
    parse_mesh,
    parse_radii,
    serialize_mesh,
    validate_closed,
    vertex_star,
)


def doc(vertices, tets):
    return json.dumps({"vertices": vertices, "tetrahedra": tets})


def test_parse_pentatope_counts(pentatope):
    c = parse_mesh(serialize_mesh(pentatope))
    assert c.vertex_count == 5
    assert len(c.edges) == 10
    assert len(c.faces) == 10
    assert len(c.tetrahedra) == 5


def test_parse_single_tet_counts():
    c = parse_mesh(doc(4, [[0, 1, 2, 3]]))
    assert len(c.edges) == 6
    assert len(c.faces) == 4
    assert len(c.tetrahedra) == 1


def test_duplicate_vertex_rejected():
    with pytest.raises(MeshFormatError, match="duplicate vertex"):
        parse_mesh(doc(4, [[0, 1, 1, 2]]))


def test_index_out_of_range_rejected():
    with pytest.raises(MeshFormatError, match="out of range"):
        parse_mesh(doc(4, [[0, 1, 2, 7]]))


def test_malformed_document_rejected():
    with pytest.raises(MeshFormatError, match="invalid JSON"):
        parse_mesh("{not json")
    with pytest.raises(MeshFormatError, match="missing keys"):
        parse_mesh(json.dumps({"vertices": 4}))
    with pytest.raises(MeshFormatError):
        parse_mesh(json.dumps({"vertices": 4, "tetrahedra": [[0, 1, 2]]}))


def test_isolated_vertex_rejected():
    with pytest.raises(MeshFormatError, match="no tetrahedron"):
        parse_mesh(doc(5, [[0, 1, 2, 3]]))


def test_tetrahedron_order_preserved():
    tets = [[0, 1, 2, 3], [4, 1, 2, 3], [0, 4, 2, 3]]
    c = parse_mesh(doc(5, tets))
    assert [list(t) for t in c.tetrahedra] == tets


def test_validate_pentatope_closed_connected(pentatope):
    report = validate_closed(pentatope)
    assert report.is_closed
    assert report.is_connected
    assert report.offending_faces == ()
    assert report.counts == (5, 10, 10, 5)


def test_validate_single_tet_open():
    report = validate_closed(parse_mesh(doc(4, [[0, 1, 2, 3]])))
    assert not report.is_closed
    assert len(report.offending_faces) == 4
    assert all(count == 1 for _, count in report.offending_faces)


def test_validate_disjoint_union_disconnected(pentatope):
    tets = [list(t) for t in pentatope.tetrahedra]
    shifted = [[v + 5 for v in t] for t in tets]
    c = parse_mesh(doc(10, tets + shifted))
    report = validate_closed(c)
    assert report.is_closed
    assert not report.is_connected


def test_closed_face_count_identity(pentatope, cross_polytope):
    for c in (pentatope, cross_polytope):
        report = validate_closed(c)
        assert report.is_closed
        assert 2 * len(c.faces) == 4 * len(c.tetrahedra)


def test_vertex_star_pentatope(pentatope):
    for v in range(5):
        star = vertex_star(pentatope, v)
        assert len(star) == 4
        assert all(v in pentatope.tetrahedra[t] for t in star)


def test_vertex_star_single_tet():
    c = parse_mesh(doc(4, [[0, 1, 2, 3]]))
    assert vertex_star(c, 0) == [0]


def test_vertex_star_out_of_range(pentatope):
    with pytest.raises(IndexError):
        vertex_star(pentatope, 7)


def test_star_sizes_sum_to_four_per_tet(pentatope, cross_polytope):
    for c in (pentatope, cross_polytope):
        total = sum(len(vertex_star(c, v)) for v in range(c.vertex_count))
        assert total == 4 * len(c.tetrahedra)


def test_parse_serialize_round_trip(pentatope, cross_polytope):
    for c in (pentatope, cross_polytope):
        again = parse_mesh(serialize_mesh(c))
        assert again.vertex_count == c.vertex_count
        assert again.tetrahedra == c.tetrahedra
        assert again.edges == c.edges
        assert again.faces == c.faces


def test_parse_radii_good():
    radii = parse_radii(json.dumps({"radii": [1.0, 2, 0.5]}))
    assert np.allclose(radii, [1.0, 2.0, 0.5])


def test_parse_radii_errors():
    with pytest.raises(MeshFormatError):
        parse_radii(json.dumps({"values": [1.0]}))
    with pytest.raises(MeshFormatError, match="positive"):
        parse_radii(json.dumps({"radii": [1.0, -2.0]}))
    with pytest.raises(MeshFormatError, match="positive"):
        parse_radii(json.dumps({"radii": [0.0]}))
    with pytest.raises(MeshFormatError, match="expected 5"):
        parse_radii(json.dumps({"radii": [1.0, 1.0]}), vertex_count=5)


def test_complex_direct_construction_validates():
    with pytest.raises(MeshFormatError):
        Complex(0, [[0, 1, 2, 3]])
    with pytest.raises(MeshFormatError):
        Complex(4, [])
