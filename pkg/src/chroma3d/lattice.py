"""Construction of tetrahedral and cubic 3D color-code lattices with boundaries.

Both families are carved out of an infinite 4-colorable honeycomb:

* tetrahedral (odd d >= 3): the body-centered tessellation by truncated
  octahedra, clipped by four planes normal to (1,1,1)-type directions that
  pass through vertex layers;
* cubic (even d >= 2): the rock-salt tessellation by chamfered cubes and
  cubes, keeping a (d-1)^3 grid of cells plus one sublattice of chamfered
  cells appended on each face, clipped to a box.

All coordinates are integers; exported coordinates are scaled by 2 so edge
midpoints stay integral. Correctness is gated by `validate` and
`family_counts` rather than by the geometry itself.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import gf2
from .colors import MONO_COLORS, complement, mixed

Vec = tuple[int, int, int]

TETRA_NORMALS: tuple[Vec, ...] = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))

_TETRA_COLOR = {0: "r", 1: "g", 2: "b", 3: "y"}
# cubic: parity class (0,0,0) is the color whose cells jointly cover every
# qubit; it is never used by a boundary.
_CUBIC_COLOR = {(0, 0, 0): "g", (0, 1, 1): "r", (1, 0, 1): "b", (1, 1, 0): "y"}


class LatticeError(ValueError):
    """Invalid build parameters or an internally inconsistent construction."""


# --------------------------------------------------------------------------
# data model
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimalLattice:
    """Vertex/edge/face/cell view with boundaries and borders."""

    vertex_coords: tuple[Vec, ...]            # scaled by 2
    corner_vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]        # vertex id pairs
    edge_colors: tuple[str, ...]              # monochrome
    faces: tuple[tuple[int, ...], ...]        # vertex id sets (sorted)
    face_colors: tuple[str, ...]              # mixed
    cells: tuple[tuple[int, ...], ...]
    cell_colors: tuple[str, ...]
    boundaries: tuple[tuple[int, ...], ...]   # face id sets
    boundary_colors: tuple[str, ...]
    boundary_names: tuple[str, ...]
    borders: tuple[tuple[int, ...], ...]      # edge id sets
    border_boundaries: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DualLattice:
    """Cells become vertices, one tetrahedron per physical qubit."""

    vertex_coords: tuple[Vec, ...]            # cells then boundary vertices
    vertex_colors: tuple[str, ...]
    boundary_vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    edge_colors: tuple[str, ...]              # mixed
    border_edges: tuple[int, ...]             # ids of boundary-boundary edges
    faces: tuple[tuple[int, int, int], ...]   # triangles (primal edges)
    face_colors: tuple[str, ...]              # monochrome (the missing color)
    cells: tuple[tuple[int, int, int, int], ...]  # one per qubit


@dataclass(frozen=True)
class ColorLattice:
    family: str
    distance: int
    correctable: bool
    primal: PrimalLattice
    dual: DualLattice
    # qubit i <-> primal vertex i <-> dual cell i
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", len(self.primal.vertex_coords))

    @property
    def num_cells(self) -> int:
        return len(self.primal.cells)

    @property
    def num_boundaries(self) -> int:
        return len(self.primal.boundaries)

    def to_json_dict(self) -> dict:
        """Schema `lattice.v1`."""
        p, dl = self.primal, self.dual
        return {
            "format": "lattice.v1",
            "family": self.family,
            "distance": self.distance,
            "correctable": self.correctable,
            "vertices": [
                {"id": i, "xyz": list(xyz), "is_corner": i in set(p.corner_vertices)}
                for i, xyz in enumerate(p.vertex_coords)
            ],
            "edges": [
                {"id": i, "v": list(e), "color": p.edge_colors[i]}
                for i, e in enumerate(p.edges)
            ],
            "faces": [
                {"id": i, "verts": _ring(p.vertex_coords, f), "color": p.face_colors[i]}
                for i, f in enumerate(p.faces)
            ],
            "cells": [
                {"id": i, "verts": list(c), "color": p.cell_colors[i]}
                for i, c in enumerate(p.cells)
            ],
            "boundaries": [
                {"id": i, "color": p.boundary_colors[i], "name": p.boundary_names[i],
                 "faces": list(fs)}
                for i, fs in enumerate(p.boundaries)
            ],
            "borders": [
                {"id": i, "colors": sorted([p.boundary_colors[a], p.boundary_colors[b]]),
                 "boundaries": [a, b], "edges": list(es)}
                for i, (es, (a, b)) in enumerate(zip(p.borders, p.border_boundaries))
            ],
            "dual": {
                "vertices": [
                    {"id": i, "xyz": list(xyz), "color": dl.vertex_colors[i],
                     "is_boundary": i in set(dl.boundary_vertices)}
                    for i, xyz in enumerate(dl.vertex_coords)
                ],
                "edges": [
                    {"id": i, "v": list(e), "color": dl.edge_colors[i],
                     "is_border": i in set(dl.border_edges)}
                    for i, e in enumerate(dl.edges)
                ],
                "faces": [
                    {"id": i, "verts": list(t), "color": dl.face_colors[i]}
                    for i, t in enumerate(dl.faces)
                ],
                "cells": [
                    {"id": i, "verts": list(t)} for i, t in enumerate(dl.cells)
                ],
            },
            "qubit_map": [
                {"qubit": i, "primal_vertex": i, "dual_cell": i} for i in range(self.n)
            ],
        }


def _ring(coords: Sequence[Vec], face: Sequence[int]) -> list[int]:
    """Order face vertices cyclically around the face centroid (for rendering)."""
    import math

    pts = [coords[v] for v in face]
    k = len(pts)
    cx = [sum(p[i] for p in pts) / k for i in range(3)]
    rel = [(p[0] - cx[0], p[1] - cx[1], p[2] - cx[2]) for p in pts]
    # face normal from first two spokes made robust by picking the widest pair
    nrm = None
    for a, b in itertools.combinations(range(k), 2):
        c = _cross(rel[a], rel[b])
        if nrm is None or _norm2(c) > _norm2(nrm):
            nrm = c
    u = rel[0]
    w = _cross(nrm, u)
    order = sorted(range(k), key=lambda i: math.atan2(_dot(rel[i], w), _dot(rel[i], u) * math.sqrt(_norm2(w))))
    return [face[i] for i in order]


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _norm2(a):
    return _dot(a, a)


# --------------------------------------------------------------------------
# family counts (closed forms)
# --------------------------------------------------------------------------

def family_counts(family: str, d: int) -> dict[str, int]:
    """Closed-form qubit / independent-face / independent-cell counts.

    Used as the oracle that every built lattice must reproduce exactly
    (faces and cells are counted as independent generators over GF(2)).
    """
    _check_params(family, d)
    dd = Fraction(d)
    if family == "tetrahedral":
        n = (dd**3 + dd) / 2
        faces = (Fraction(5, 3) * dd**3 - dd**2 + Fraction(7, 3) * dd - 3) / 4
        cells = (Fraction(1, 3) * dd**3 + dd**2 - Fraction(1, 3) * dd - 1) / 4
    else:
        n = 5 * dd**3 - 12 * dd**2 + 16
        faces = 4 * dd**3 - Fraction(21, 2) * dd**2 + 3 * dd + 8
        cells = dd**3 - Fraction(3, 2) * dd**2 - 3 * dd + 5
    out = {"n": n, "faces": faces, "cells": cells}
    assert all(v.denominator == 1 for v in out.values())
    return {k: int(v) for k, v in out.items()}


def _check_params(family: str, d: int) -> None:
    if family == "tetrahedral":
        if d < 3 or d % 2 == 0:
            raise LatticeError(f"tetrahedral family requires odd d >= 3, got d={d}")
    elif family == "cubic":
        if d < 2 or d % 2 == 1:
            raise LatticeError(f"cubic family requires even d >= 2, got d={d}")
    else:
        raise LatticeError(f"unknown family {family!r} (expected tetrahedral or cubic)")


# --------------------------------------------------------------------------
# tetrahedral family: truncated-octahedra honeycomb
# --------------------------------------------------------------------------

_TRUNC_OCT_OFFSETS = sorted(
    {
        (sx * a, sy * b, sz * c)
        for (a, b, c) in itertools.permutations((0, 1, 2))
        for sx in (1, -1)
        for sy in (1, -1)
        for sz in (1, -1)
    }
)


def _is_bcc_vertex(v: Vec) -> bool:
    odd = [w & 1 for w in v]
    if sum(odd) != 1:
        return False
    ev = [w for w in v if not (w & 1)]
    return (ev[0] - ev[1]) % 4 == 2


def _bcc_cells_of_vertex(v: Vec) -> list[Vec]:
    out = []
    for p in _TRUNC_OCT_OFFSETS:
        c = (v[0] - p[0], v[1] - p[1], v[2] - p[2])
        if c[0] & 1 or c[1] & 1 or c[2] & 1:
            continue
        if (c[0] - c[1]) % 4 == 0 and (c[0] - c[2]) % 4 == 0:
            out.append(c)
    return out


def _build_tetra_model(d: int):
    offsets = (d + 2, d, d - 2, d - 4)
    rng = 2 * d + 6

    def inside(v: Vec) -> bool:
        return all(_dot(n, v) <= a for n, a in zip(TETRA_NORMALS, offsets))

    verts = [
        (x, y, z)
        for x in range(-rng, rng + 1)
        for y in range(-rng, rng + 1)
        for z in range(-rng, rng + 1)
        if _is_bcc_vertex((x, y, z)) and inside((x, y, z))
    ]

    rel_cache: dict[Vec, tuple[int, ...]] = {}

    def rels(c: Vec) -> tuple[int, ...]:
        r = rel_cache.get(c)
        if r is None:
            r = tuple(a - _dot(n, c) for n, a in zip(TETRA_NORMALS, offsets))
            rel_cache[c] = r
        return r

    tets = []
    alive: dict[Vec, bool] = {}
    for v in verts:
        cells4 = _bcc_cells_of_vertex(v)
        if len(cells4) != 4:
            raise LatticeError(f"vertex {v} lies in {len(cells4)} cells")
        members = []
        for c in cells4:
            r = rels(c)
            if min(r) >= -1:
                alive[c] = True
                members.append(("c", c))
            else:
                kill = [i for i, x in enumerate(r) if x <= -3]
                if len(kill) != 1:
                    raise LatticeError(f"ambiguous facet for dead cell {c} at {v}")
                members.append(("b", kill[0]))
        tets.append(members)

    cell_ids = {c: i for i, c in enumerate(sorted(alive))}
    cell_colors = {c: _TETRA_COLOR[((c[0] + c[1] + c[2]) // 2) % 4] for c in alive}
    boundary_names = ["+++", "+--", "-+-", "--+"]
    return verts, tets, cell_ids, cell_colors, 4, boundary_names, "tetrahedral"


# --------------------------------------------------------------------------
# cubic family: chamfered-cube + cube honeycomb
# --------------------------------------------------------------------------

_CHAMFERED_OFFSETS = sorted(
    {
        (sx * a, sy * b, sz * c)
        for (a, b, c) in itertools.permutations((4, 2, 2))
        for sx in (1, -1)
        for sy in (1, -1)
        for sz in (1, -1)
    }
    | {(sx * 3, sy * 3, sz * 3) for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)}
)


def _site_parity(c: Vec) -> int:
    return ((c[0] + c[1] + c[2]) // 6) % 2


def _cubic_color(c: Vec) -> str:
    p = [(w // 6) % 2 for w in c]
    if _site_parity(c) == 1:
        p = [(w + 1) % 2 for w in p]
    return _CUBIC_COLOR[tuple(p)]


def _cubic_cells_of_vertex(v: Vec) -> list[Vec]:
    out = []
    for off in _CHAMFERED_OFFSETS:
        c = (v[0] - off[0], v[1] - off[1], v[2] - off[2])
        if all(w % 6 == 0 for w in c) and _site_parity(c) == 0:
            out.append(c)
    if all(w % 2 == 0 for w in v):
        for sx in (2, -2):
            for sy in (2, -2):
                for sz in (2, -2):
                    c = (v[0] - sx, v[1] - sy, v[2] - sz)
                    if all(w % 6 == 0 for w in c) and _site_parity(c) == 1:
                        out.append(c)
    return out


def _cubic_cell_vertices(c: Vec) -> list[Vec]:
    if _site_parity(c) == 0:
        return [(c[0] + o[0], c[1] + o[1], c[2] + o[2]) for o in _CHAMFERED_OFFSETS]
    return [
        (c[0] + sx, c[1] + sy, c[2] + sz)
        for sx in (2, -2)
        for sy in (2, -2)
        for sz in (2, -2)
    ]


def _build_cubic_model(d: int):
    lo, hi = 3, 6 * d - 3
    kept: set[Vec] = set()
    for i in range(1, d):
        for j in range(1, d):
            for k in range(1, d):
                kept.add((6 * i, 6 * j, 6 * k))
    # one sublattice of chamfered cells appended on each face; these carry the
    # color that never appears on a boundary
    evens = [6 * a for a in range(2, d - 1, 2)]
    for f in (0, 6 * d):
        for a in evens:
            for b in evens:
                kept.update({(f, a, b), (a, f, b), (a, b, f)})

    verts: set[Vec] = set()
    for c in kept:
        for v in _cubic_cell_vertices(c):
            if all(lo <= w <= hi for w in v):
                verts.add(v)

    qubits = []
    for v in sorted(verts):
        cells4 = _cubic_cells_of_vertex(v)
        if len(cells4) != 4:
            raise LatticeError(f"vertex {v} lies in {len(cells4)} cells")
        green = [c for c in cells4 if _cubic_color(c) == "g"]
        if len(green) != 1:
            raise LatticeError(f"vertex {v} has {len(green)} green cells")
        if green[0] in kept:
            qubits.append(v)

    def facet_of(c: Vec) -> list[int]:
        out = []
        for ax in range(3):
            w = c[ax] // 6
            if w < 1:
                out.append(2 * ax)
            elif w > d - 1:
                out.append(2 * ax + 1)
        return out

    tets = []
    for v in qubits:
        members = []
        for c in _cubic_cells_of_vertex(v):
            if c in kept:
                members.append(("c", c))
            else:
                f = facet_of(c)
                if len(f) != 1:
                    raise LatticeError(f"ambiguous facet for dead cell {c} at {v}")
                members.append(("b", f[0]))
        tets.append(members)

    cell_ids = {c: i for i, c in enumerate(sorted(kept))}
    cell_colors = {c: _cubic_color(c) for c in kept}
    boundary_names = ["x-", "x+", "y-", "y+", "z-", "z+"]
    return qubits, tets, cell_ids, cell_colors, 6, boundary_names, "cubic"


# --------------------------------------------------------------------------
# assembly shared by both families
# --------------------------------------------------------------------------

def _assemble(model, d: int, correctable: bool) -> ColorLattice:
    verts, raw_tets, cell_ids, cell_colors, n_bound, bnames, family = model
    ncells = len(cell_ids)

    tets: list[frozenset[int]] = []
    for members in raw_tets:
        ids = frozenset(
            cell_ids[c] if kind == "c" else ncells + c for kind, c in members
        )
        if len(ids) != 4:
            raise LatticeError("degenerate dual tetrahedron")
        tets.append(ids)

    # solve boundary colors from the rainbow constraint
    dv_color: list[Optional[str]] = [None] * (ncells + n_bound)
    for c, i in cell_ids.items():
        dv_color[i] = cell_colors[c]
    for t in tets:
        cols = [dv_color[m] for m in t if m < ncells]
        bs = [m for m in t if m >= ncells]
        if len(bs) == 1 and len(set(cols)) == 3:
            want = complement(cols)
            cur = dv_color[bs[0]]
            if cur is None:
                dv_color[bs[0]] = want
            elif cur != want:
                raise LatticeError("inconsistent boundary coloring")
    if any(c is None for c in dv_color):
        raise LatticeError("boundary color left undetermined")

    # dual edges (pairs) and triangles from the tetrahedra
    edge_qubits: dict[tuple[int, int], list[int]] = {}
    tri_qubits: dict[tuple[int, int, int], list[int]] = {}
    for qi, t in enumerate(tets):
        ms = sorted(t)
        for pair in itertools.combinations(ms, 2):
            edge_qubits.setdefault(pair, []).append(qi)
        for tri in itertools.combinations(ms, 3):
            tri_qubits.setdefault(tri, []).append(qi)

    dual_edges = sorted(edge_qubits)
    dual_edge_ids = {e: i for i, e in enumerate(dual_edges)}
    border_edge_ids = tuple(
        i for i, (a, b) in enumerate(dual_edges) if a >= ncells and b >= ncells
    )

    # primal edges <-> dual triangles incident to exactly two qubits
    primal_edges = []
    primal_edge_tris = []
    for tri in sorted(tri_qubits):
        qs = tri_qubits[tri]
        if len(qs) == 2:
            primal_edges.append(tuple(sorted(qs)))
            primal_edge_tris.append(tri)
        elif len(qs) > 2:
            raise LatticeError(f"dual triangle {tri} in {len(qs)} tetrahedra")

    edge_colors = tuple(
        complement([dv_color[m] for m in tri]) for tri in primal_edge_tris
    )

    # primal faces <-> non-border dual edges
    face_ids: dict[tuple[int, int], int] = {}
    faces = []
    face_colors = []
    for e in dual_edges:
        if e in face_ids or (e[0] >= ncells and e[1] >= ncells):
            continue
        face_ids[e] = len(faces)
        faces.append(tuple(sorted(edge_qubits[e])))
        face_colors.append(mixed(dv_color[e[0]], dv_color[e[1]]))

    cells_by_id = sorted(cell_ids, key=cell_ids.get)
    cell_qubits = [[] for _ in range(ncells)]
    for qi, t in enumerate(tets):
        for m in t:
            if m < ncells:
                cell_qubits[m].append(qi)

    boundaries = []
    for b in range(n_bound):
        dv = ncells + b
        fs = sorted(face_ids[e] for e in dual_edges if dv in e and e in face_ids)
        boundaries.append(tuple(fs))

    borders = []
    border_bounds = []
    pe_index = {tri: i for i, tri in enumerate(primal_edge_tris)}
    for e in dual_edges:
        if e[0] >= ncells and e[1] >= ncells:
            es = sorted(
                pe_index[tri]
                for tri in primal_edge_tris
                if e[0] in tri and e[1] in tri
            )
            borders.append(tuple(es))
            border_bounds.append((e[0] - ncells, e[1] - ncells))

    # corner vertices: exactly three boundary members in the tetrahedron
    corners = tuple(
        qi for qi, t in enumerate(tets) if sum(1 for m in t if m >= ncells) == 3
    )

    vertex_coords = tuple((2 * v[0], 2 * v[1], 2 * v[2]) for v in verts)
    cell_centers = tuple((2 * c[0], 2 * c[1], 2 * c[2]) for c in cells_by_id)
    bound_coords = _boundary_coords(vertex_coords, tets, ncells, n_bound)

    primal = PrimalLattice(
        vertex_coords=vertex_coords,
        corner_vertices=corners,
        edges=tuple(primal_edges),
        edge_colors=edge_colors,
        faces=tuple(faces),
        face_colors=tuple(face_colors),
        cells=tuple(tuple(sorted(q)) for q in cell_qubits),
        cell_colors=tuple(cell_colors[c] for c in cells_by_id),
        boundaries=tuple(boundaries),
        boundary_colors=tuple(dv_color[ncells + b] for b in range(n_bound)),
        boundary_names=tuple(bnames),
        borders=tuple(borders),
        border_boundaries=tuple(border_bounds),
    )
    dual = DualLattice(
        vertex_coords=cell_centers + bound_coords,
        vertex_colors=tuple(dv_color),
        boundary_vertices=tuple(range(ncells, ncells + n_bound)),
        edges=tuple(dual_edges),
        edge_colors=tuple(mixed(dv_color[a], dv_color[b]) for a, b in dual_edges),
        border_edges=border_edge_ids,
        faces=tuple(primal_edge_tris),
        face_colors=edge_colors,
        cells=tuple(tuple(sorted(t)) for t in tets),
    )
    return ColorLattice(
        family=family, distance=d, correctable=correctable, primal=primal, dual=dual
    )


def _boundary_coords(vertex_coords, tets, ncells, n_bound) -> tuple[Vec, ...]:
    """Place each boundary vertex outside the centroid of its facet qubits."""
    out = []
    all_c = [sum(v[i] for v in vertex_coords) // len(vertex_coords) for i in range(3)]
    for b in range(n_bound):
        dv = ncells + b
        pts = [vertex_coords[qi] for qi, t in enumerate(tets) if dv in t]
        c = [sum(p[i] for p in pts) // len(pts) for i in range(3)]
        out.append(tuple(2 * c[i] - all_c[i] for i in range(3)))
    return tuple(out)


def build_tetrahedral(d: int) -> ColorLattice:
    """Tetrahedral color code of odd distance d >= 3 (four boundaries, k=1)."""
    _check_params("tetrahedral", d)
    return _assemble(_build_tetra_model(d), d, correctable=True)


def build_cubic(d: int) -> ColorLattice:
    """Cubic color code of even distance d >= 2 (six boundaries, k=3).

    d=2 is built and validated but flagged `correctable: False`.
    """
    _check_params("cubic", d)
    return _assemble(_build_cubic_model(d), d, correctable=d > 2)


def build(family: str, d: int) -> ColorLattice:
    _check_params(family, d)
    return build_tetrahedral(d) if family == "tetrahedral" else build_cubic(d)


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def __str__(self) -> str:
        lines = [
            f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}" for name, ok, detail in self.checks
        ]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def validate(lattice: ColorLattice) -> ValidationReport:
    """Check every structural invariant; reports instead of raising."""
    p, dl = lattice.primal, lattice.dual
    n = lattice.n
    checks: list[tuple[str, bool, str]] = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    # vertex valences
    deg = [0] * n
    for a, b in p.edges:
        deg[a] += 1
        deg[b] += 1
    corners = set(p.corner_vertices)
    bad = [i for i in range(n) if deg[i] != (3 if i in corners else 4)]
    add(
        "valence(non-corner=4, corner=3)",
        not bad,
        f"{len(corners)} corners" if not bad else f"offending vertices {bad[:6]}",
    )
    add("corner vertices exist", len(corners) > 0, f"count={len(corners)}")

    # 4-colorability of cells+boundaries: adjacent dual vertices differ
    clash = [
        e for e in dl.edges if dl.vertex_colors[e[0]] == dl.vertex_colors[e[1]]
    ]
    add("cells/boundaries sharing a face or border have distinct colors",
        not clash, f"{len(dl.edges)} adjacencies" if not clash else f"e.g. {clash[:4]}")

    # face color = mixed color of its two sides
    ncells = len(p.cells)
    nonborder = [e for i, e in enumerate(dl.edges) if i not in set(dl.border_edges)]
    okf = all(
        p.face_colors[i] == mixed(dl.vertex_colors[a], dl.vertex_colors[b])
        for i, (a, b) in enumerate(nonborder)
    )
    add("face colors are the mixed colors of their sides", okf)

    # cell sizes: the bulk cells have |c| = 0 mod 4; truncated boundary cells
    # keep an even vertex count
    sizes_ok = True
    detail = ""
    for ci, qs in enumerate(p.cells):
        touches_boundary = any(
            any(m >= ncells for m in dl.cells[q]) for q in qs
        )
        if len(qs) % 2 or (not touches_boundary and len(qs) % 4):
            sizes_ok = False
            detail = f"cell {ci} has {len(qs)} vertices"
            break
    add("cell sizes even (bulk cells multiples of 4)", sizes_ok, detail)

    # boundary structure
    nb = lattice.num_boundaries
    if lattice.family == "tetrahedral":
        add("exactly 4 boundaries with 4 distinct colors",
            nb == 4 and len(set(p.boundary_colors)) == 4, str(p.boundary_colors))
    else:
        opp = all(
            p.boundary_colors[2 * ax] == p.boundary_colors[2 * ax + 1] for ax in range(3)
        )
        add("exactly 6 boundaries, opposite boundaries share colors",
            nb == 6 and opp and len(set(p.boundary_colors)) == 3,
            str(p.boundary_colors))

    # dual cells: tetrahedra with one vertex of each color
    okt = all(
        len(t) == 4 and sorted(dl.vertex_colors[m] for m in t) == sorted(MONO_COLORS)
        for t in dl.cells
    )
    add("dual cells are rainbow tetrahedra, one per qubit",
        okt and len(dl.cells) == n, f"n={n}")

    # boundary vertices adjacent iff they share a border
    bb = {tuple(sorted(e)) for i, e in enumerate(dl.edges) if i in set(dl.border_edges)}
    shared = {
        tuple(sorted((ncells + a, ncells + b))) for (a, b) in p.border_boundaries
    }
    add("boundary-vertex adjacency matches shared borders", bb == shared,
        f"{len(bb)} border edges")
    add("every border holds at least d-1 edges",
        all(len(es) >= lattice.distance - 1 for es in p.borders),
        str(sorted(len(es) for es in p.borders)))

    # duality counts
    add("|primal.edges| equals |dual.faces|", len(p.edges) == len(dl.faces),
        f"{len(p.edges)}")

    # element counts against the closed forms (faces/cells as independent
    # generators over GF(2))
    want = family_counts(lattice.family, lattice.distance)
    rank_x = gf2.rank(gf2.pack(qs) for qs in p.cells)
    rank_z = gf2.rank(gf2.pack(qs) for qs in p.faces)
    add("qubit count matches closed form", n == want["n"], f"n={n} want={want['n']}")
    add("independent cells match closed form", rank_x == want["cells"],
        f"rank={rank_x} want={want['cells']}")
    add("independent faces match closed form", rank_z == want["faces"],
        f"rank={rank_z} want={want['faces']}")

    return ValidationReport(checks)


def export_lattice_json(lattice: ColorLattice, path) -> None:
    with open(path, "w") as fh:
        json.dump(lattice.to_json_dict(), fh, indent=None, separators=(",", ":"), sort_keys=True)
        fh.write("\n")
