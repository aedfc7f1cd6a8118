"""CSS stabilizer code derived from a color lattice.

X-stabilizers live on cells (dual vertices), Z-stabilizers on faces (dual
edges that are not borders). Logical operators sit on boundaries (X) and
borders (Z). All supports are qubit-index sets over GF(2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .lattice import ColorLattice


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class PauliFrame:
    z_support: frozenset[int] = frozenset()
    x_support: frozenset[int] = frozenset()

    def __xor__(self, other: "PauliFrame") -> "PauliFrame":
        return PauliFrame(
            self.z_support ^ other.z_support, self.x_support ^ other.x_support
        )


@dataclass(frozen=True)
class Syndrome:
    cell_defects: frozenset[int]  # dual vertices with flipped X-stabilizers
    face_defects: frozenset[int]  # dual edges with flipped Z-stabilizers

    def __bool__(self) -> bool:
        return bool(self.cell_defects or self.face_defects)


@dataclass
class CssCode:
    n: int
    x_stabilizers: list[list[int]]  # indexed by cell id (= dual vertex id)
    z_stabilizers: list[list[int]]  # indexed by face id
    face_dual_edge: list[int]       # face id -> dual edge id in the lattice
    logical_x: list[list[int]]
    logical_z: list[list[int]]
    _xmasks: list[int] = field(repr=False, default_factory=list)
    _zmasks: list[int] = field(repr=False, default_factory=list)

    @property
    def k(self) -> int:
        return self.n - self.rank_x() - self.rank_z()

    def rank_x(self) -> int:
        return gf2.rank(self._xmasks)

    def rank_z(self) -> int:
        return gf2.rank(self._zmasks)

    def to_json_dict(self) -> dict:
        """Schema `code.v1`."""
        return {
            "format": "code.v1",
            "n": self.n,
            "k": self.k,
            "x_stabilizers": [list(s) for s in self.x_stabilizers],
            "z_stabilizers": [list(s) for s in self.z_stabilizers],
            "logical_x": [list(s) for s in self.logical_x],
            "logical_z": [list(s) for s in self.logical_z],
        }


def extract_code(lattice: ColorLattice) -> CssCode:
    """Stabilizers and logical operators of the lattice's CSS code."""
    p, dl = lattice.primal, lattice.dual
    border = set(dl.border_edges)
    xstabs = [list(qs) for qs in p.cells]
    zstabs = []
    face_dual_edge = []
    for i, e in enumerate(dl.edges):
        if i in border:
            continue
        face_dual_edge.append(i)
        zstabs.append(sorted(_edge_qubits(dl, e)))
    logical_x, logical_z = logical_operators(lattice)
    code = CssCode(
        n=lattice.n,
        x_stabilizers=xstabs,
        z_stabilizers=zstabs,
        face_dual_edge=face_dual_edge,
        logical_x=logical_x,
        logical_z=logical_z,
        _xmasks=[gf2.pack(s) for s in xstabs],
        _zmasks=[gf2.pack(s) for s in zstabs],
    )
    _check_commutation(code)
    return code


def _edge_qubits(dl, e) -> list[int]:
    a, b = e
    return [qi for qi, t in enumerate(dl.cells) if a in t and b in t]


def _check_commutation(code: CssCode) -> None:
    for xm in code._xmasks:
        for zm in code._zmasks:
            if (xm & zm).bit_count() & 1:
                raise CodeError("X and Z stabilizers fail to commute; lattice bug")
    lx = [gf2.pack(s) for s in code.logical_x]
    lz = [gf2.pack(s) for s in code.logical_z]
    for i, a in enumerate(lx):
        for j, b in enumerate(lz):
            want = 1 if i == j else 0
            if (a & b).bit_count() & 1 != want:
                raise CodeError(f"logical pairing violated at ({i},{j})")
    for m in code._zmasks:
        for l in lx:
            if (m & l).bit_count() & 1:
                raise CodeError("logical X anticommutes with a Z-stabilizer")
    for m in code._xmasks:
        for l in lz:
            if (m & l).bit_count() & 1:
                raise CodeError("logical Z anticommutes with an X-stabilizer")


def logical_operators(lattice: ColorLattice) -> tuple[list[list[int]], list[list[int]]]:
    """Logical X on boundaries, logical Z on borders.

    Tetrahedral: one pair; the lexicographically smallest boundary and border.
    Cubic: one pair per boundary color c; X on the smaller c-colored boundary,
    Z on the smallest border running between the two c-colored boundaries.
    """
    p = lattice.primal

    def boundary_vertices(bi: int) -> list[int]:
        qs: set[int] = set()
        for fi in p.boundaries[bi]:
            qs.update(p.faces[fi])
        return sorted(qs)

    def border_vertices(ei: int) -> list[int]:
        qs: set[int] = set()
        for edge_id in p.borders[ei]:
            qs.update(p.edges[edge_id])
        return sorted(qs)

    if lattice.family == "tetrahedral":
        return [boundary_vertices(0)], [border_vertices(0)]

    logical_x, logical_z = [], []
    for color in sorted(set(p.boundary_colors)):
        bids = [i for i, c in enumerate(p.boundary_colors) if c == color]
        logical_x.append(boundary_vertices(min(bids)))
        crossing = [
            i
            for i, (a, b) in enumerate(p.border_boundaries)
            if p.boundary_colors[a] != color and p.boundary_colors[b] != color
        ]
        logical_z.append(border_vertices(min(crossing)))
    return logical_x, logical_z


# --------------------------------------------------------------------------
# syndromes
# --------------------------------------------------------------------------

def syndrome_of(code: CssCode, frame: PauliFrame) -> Syndrome:
    """Flipped stabilizers of a Pauli frame, computed combinatorially."""
    for q in frame.z_support | frame.x_support:
        if not 0 <= q < code.n:
            raise CodeError(f"qubit index {q} out of range [0,{code.n})")
    zmask = gf2.pack(frame.z_support)
    xmask = gf2.pack(frame.x_support)
    cells = frozenset(
        i for i, m in enumerate(code._xmasks) if (m & zmask).bit_count() & 1
    )
    faces = frozenset(
        code.face_dual_edge[i]
        for i, m in enumerate(code._zmasks)
        if (m & xmask).bit_count() & 1
    )
    return Syndrome(cell_defects=cells, face_defects=faces)


def merge_face_to_cell(lattice: ColorLattice, face_defects) -> frozenset[int]:
    """Combine face-like defects into cell-like defects by parity.

    A cell is a merged defect iff an odd number of its incident faces
    (non-border dual edges) are defective. The result feeds the same
    cell-level decoder used for Z errors.
    """
    dl = lattice.dual
    border = set(dl.border_edges)
    ncells = len(lattice.primal.cells)
    flips = [0] * ncells
    for ei in face_defects:
        if not 0 <= ei < len(dl.edges) or ei in border:
            raise CodeError(f"dual edge {ei} carries no Z-stabilizer")
        for m in dl.edges[ei]:
            if m < ncells:
                flips[m] ^= 1
    return frozenset(c for c, f in enumerate(flips) if f)


def logical_outcome(
    code: CssCode, frame: PauliFrame, correction: PauliFrame
) -> list[bool]:
    """Per-logical-qubit failure flags after applying a correction.

    The residual frame must carry an empty syndrome; a violation is a decoder
    bug and raises.
    """
    residual = frame ^ correction
    if syndrome_of(code, residual):
        raise CodeError("correction does not cancel the syndrome")
    zres = gf2.pack(residual.z_support)
    xres = gf2.pack(residual.x_support)
    out = []
    for lx, lz in zip(code.logical_x, code.logical_z):
        fail = bool((gf2.pack(lx) & zres).bit_count() & 1) or bool(
            (gf2.pack(lz) & xres).bit_count() & 1
        )
        out.append(fail)
    return out


# --------------------------------------------------------------------------
# fast vectorized syndrome support for the sampling harness
# --------------------------------------------------------------------------

class SyndromeMaps:
    """Bit-matrix views of a code for batched syndrome computation."""

    def __init__(self, code: CssCode):
        self.n = code.n
        words = (code.n + 63) // 64
        self.x_mat = _to_bits(code._xmasks, words)
        self.z_mat = _to_bits(code._zmasks, words)
        self.lx = _to_bits([gf2.pack(s) for s in code.logical_x], words)
        self.lz = _to_bits([gf2.pack(s) for s in code.logical_z], words)
        self.face_dual_edge = np.asarray(code.face_dual_edge)

    def cell_defects(self, err_bits: np.ndarray) -> np.ndarray:
        """(shots, words) uint64 -> (shots, n_cells) bool parity matrix."""
        return _parity(err_bits, self.x_mat)

    def face_defects(self, err_bits: np.ndarray) -> np.ndarray:
        return _parity(err_bits, self.z_mat)

    def x_failures(self, zresidual_bits: np.ndarray) -> np.ndarray:
        return _parity(zresidual_bits, self.lx)

    def z_failures(self, xresidual_bits: np.ndarray) -> np.ndarray:
        return _parity(xresidual_bits, self.lz)


def _to_bits(masks, words: int) -> np.ndarray:
    out = np.zeros((len(masks), words), dtype=np.uint64)
    for i, m in enumerate(masks):
        w = 0
        while m:
            out[i, w] = m & 0xFFFFFFFFFFFFFFFF
            m >>= 64
            w += 1
    return out


def _parity(rows: np.ndarray, mat: np.ndarray) -> np.ndarray:
    # rows: (shots, words), mat: (k, words) -> (shots, k) parity of AND
    ands = rows[:, None, :] & mat[None, :, :]
    return (np.bitwise_count(ands).sum(axis=2) & 1).astype(bool)


def pack_supports(supports, n: int) -> np.ndarray:
    """List of index iterables -> (len, words) uint64 bit rows."""
    words = (n + 63) // 64
    out = np.zeros((len(supports), words), dtype=np.uint64)
    for i, sup in enumerate(supports):
        for q in sup:
            out[i, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
    return out
