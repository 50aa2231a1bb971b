"""Combinatorial model of a triangulated 3-manifold and its JSON format.

A mesh document is ``{"vertices": N, "tetrahedra": [[i,j,k,l], ...]}``
with 0-based vertex indices; a radii document is ``{"radii": [...]}``
with one strictly positive number per vertex.  Non-closed complexes
are accepted here and rejected only by operations that need a closed
manifold.
"""

import json
from collections import deque
from dataclasses import dataclass

import numpy as np


class MeshFormatError(ValueError):
    """A mesh or radii document violates the expected structure."""


class Complex:
    """A collection of tetrahedra on vertices 0..N-1 with derived incidence.

    Instances are immutable after construction and safe to share
    across threads.  Tetrahedron order is preserved from the input;
    edge and face sets are deduplicated and sorted.
    """

    def __init__(self, vertex_count: int, tetrahedra):
        if not isinstance(vertex_count, int) or vertex_count <= 0:
            raise MeshFormatError(f"vertex count must be a positive integer, got {vertex_count!r}")
        self.vertex_count = vertex_count

        tets = []
        for pos, tet in enumerate(tetrahedra):
            tet = tuple(tet)
            if len(tet) != 4:
                raise MeshFormatError(f"tetrahedron {pos}: expected 4 vertices, got {len(tet)}")
            for v in tet:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise MeshFormatError(f"tetrahedron {pos}: vertex index {v!r} is not an integer")
                if not 0 <= v < vertex_count:
                    raise MeshFormatError(
                        f"tetrahedron {pos}: vertex index {v} out of range [0, {vertex_count})"
                    )
            if len(set(tet)) != 4:
                raise MeshFormatError(f"tetrahedron {pos}: duplicate vertex in {tet}")
            tets.append(tet)
        if not tets:
            raise MeshFormatError("complex has no tetrahedra")
        self.tetrahedra = tuple(tets)

        star = [[] for _ in range(vertex_count)]
        edge_set = set()
        face_to_tets: dict[tuple[int, int, int], list[int]] = {}
        for t, tet in enumerate(self.tetrahedra):
            for v in tet:
                star[v].append(t)
            s = sorted(tet)
            for i in range(4):
                for j in range(i + 1, 4):
                    edge_set.add((s[i], s[j]))
            for skip in range(4):
                face = tuple(s[m] for m in range(4) if m != skip)
                face_to_tets.setdefault(face, []).append(t)

        isolated = [v for v in range(vertex_count) if not star[v]]
        if isolated:
            raise MeshFormatError(f"vertices {isolated} belong to no tetrahedron")

        self.edges = tuple(sorted(edge_set))
        self.faces = tuple(sorted(face_to_tets))
        self.face_to_tets = {f: tuple(ts) for f, ts in face_to_tets.items()}
        self.vertex_to_tets = tuple(tuple(ts) for ts in star)

    def __repr__(self):
        return (
            f"Complex(V={self.vertex_count}, E={len(self.edges)}, "
            f"F={len(self.faces)}, T={len(self.tetrahedra)})"
        )


@dataclass(frozen=True)
class ValidationReport:
    """Closedness and connectivity diagnostics for a complex.

    offending_faces lists (face, incidence count) for every face whose
    count differs from 2; is_closed is true iff that list is empty.
    """

    is_closed: bool
    is_connected: bool
    offending_faces: tuple
    counts: tuple  # (|V|, |E|, |F|, |T|)


def parse_mesh(text: str) -> Complex:
    """Parse a mesh document into a Complex with derived incidence built."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeshFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MeshFormatError("mesh document must be a JSON object")
    missing = {"vertices", "tetrahedra"} - doc.keys()
    if missing:
        raise MeshFormatError(f"mesh document missing keys: {sorted(missing)}")
    if not isinstance(doc["tetrahedra"], list):
        raise MeshFormatError("'tetrahedra' must be a list of 4-element lists")
    return Complex(doc["vertices"], doc["tetrahedra"])


def serialize_mesh(c: Complex) -> str:
    """Render a Complex back into its mesh document."""
    return json.dumps(
        {"vertices": c.vertex_count, "tetrahedra": [list(t) for t in c.tetrahedra]}
    )


def parse_radii(text: str, vertex_count: int | None = None) -> np.ndarray:
    """Parse a radii document; entries must be strictly positive and finite."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeshFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "radii" not in doc:
        raise MeshFormatError("radii document must be an object with a 'radii' key")
    values = doc["radii"]
    if not isinstance(values, list) or not values:
        raise MeshFormatError("'radii' must be a non-empty list of numbers")
    radii = np.empty(len(values))
    for i, x in enumerate(values):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise MeshFormatError(f"radius {i} is not a number: {x!r}")
        if not np.isfinite(x) or x <= 0:
            raise MeshFormatError(f"radius {i} must be positive and finite, got {x!r}")
        radii[i] = float(x)
    if vertex_count is not None and len(values) != vertex_count:
        raise MeshFormatError(f"expected {vertex_count} radii, got {len(values)}")
    return radii


def validate_closed(c: Complex) -> ValidationReport:
    """Check that every face lies in exactly 2 tetrahedra and the complex is connected.

    The report is cached on the complex, which is immutable.
    """
    cached = getattr(c, "_validation", None)
    if cached is not None:
        return cached
    offending = tuple(
        (face, len(ts)) for face, ts in sorted(c.face_to_tets.items()) if len(ts) != 2
    )

    # Connectivity of the tetrahedron adjacency graph (shared faces).
    n_tets = len(c.tetrahedra)
    seen = [False] * n_tets
    queue = deque([0])
    seen[0] = True
    reached = 1
    while queue:
        t = queue.popleft()
        s = sorted(c.tetrahedra[t])
        for skip in range(4):
            face = tuple(s[m] for m in range(4) if m != skip)
            for u in c.face_to_tets[face]:
                if not seen[u]:
                    seen[u] = True
                    reached += 1
                    queue.append(u)

    report = ValidationReport(
        is_closed=not offending,
        is_connected=reached == n_tets,
        offending_faces=offending,
        counts=(c.vertex_count, len(c.edges), len(c.faces), len(c.tetrahedra)),
    )
    c._validation = report
    return report


def vertex_star(c: Complex, v: int) -> list[int]:
    """Indices of the tetrahedra containing vertex v, in stored order."""
    if not 0 <= v < c.vertex_count:
        raise IndexError(f"vertex index {v} out of range [0, {c.vertex_count})")
    return list(c.vertex_to_tets[v])
