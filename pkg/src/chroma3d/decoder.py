"""The 3D concatenated matching decoder.

Per decoding path (restricted color pair, then two lifting colors) the decoder
runs three matchings: on the restricted graph, then on two derived monochrome
graphs whose nodes are the previous stage's edges plus one color class of dual
vertices. Matched edges of the final stage are physical qubits; their mod-2
accumulation is the suggested correction. Twelve paths exist; the lowest
weight correction wins.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from .code import Syndrome, merge_face_to_cell
from .colors import MONO_COLORS
from .lattice import ColorLattice
from .matching import MatchingError, _solve_pairing


class DecoderError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class DecodingPath:
    restricted: tuple[str, str]  # alphabetical pair, e.g. ("b", "g")
    first: str                   # color of the first monochrome graph
    second: str                  # color of the second monochrome graph

    def __post_init__(self):
        cols = {*self.restricted, self.first, self.second}
        if cols != set(MONO_COLORS) or len(self.restricted) != 2:
            raise ValueError(f"not a valid decoding path: {self}")

    def label(self) -> str:
        return f"{self.restricted[0]}{self.restricted[1]}-{self.first}-{self.second}"

    @staticmethod
    def from_label(label: str) -> "DecodingPath":
        rest, first, second = label.split("-")
        return DecodingPath((rest[0], rest[1]), first, second)


def _all_paths() -> tuple[DecodingPath, ...]:
    out = []
    for pair in itertools.combinations(MONO_COLORS, 2):
        rest = sorted(set(MONO_COLORS) - set(pair))
        for first in rest:
            second = (set(rest) - {first}).pop()
            out.append(DecodingPath(tuple(pair), first, second))
    return tuple(out)


ALL_PATHS: tuple[DecodingPath, ...] = _all_paths()
assert len(ALL_PATHS) == 12

# the single-path default for cubic codes: a restricted graph containing the
# color whose stabilizers jointly cover every qubit
DEFAULT_SINGLE_PATH = DecodingPath(("b", "g"), "y", "r")


@dataclass(frozen=True)
class StageRecord:
    marks: tuple
    pairs: tuple  # ((node_key, node_key | None, weight, payload_path), ...)


@dataclass(frozen=True)
class Correction:
    qubits: frozenset[int]
    path: Optional[DecodingPath]
    stages: tuple[StageRecord, ...] = ()
    failed: bool = False

    @property
    def weight(self) -> int:
        return len(self.qubits)


class _StageGraph:
    """Unit-weight matching graph with cached all-pairs distances."""

    def __init__(self, keys, boundary_flags, edges):
        # keys sorted by construction; edges as (u_idx, v_idx, payload)
        self.keys = keys
        self.index = {k: i for i, k in enumerate(keys)}
        self.boundary = np.asarray(boundary_flags, dtype=bool)
        self.n = len(keys)
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        payload: dict[tuple[int, int], object] = {}
        rows, cols = [], []
        for u, v, pl in edges:
            if (min(u, v), max(u, v)) in payload:
                continue
            payload[(min(u, v), max(u, v))] = pl
            nbrs[u].append(v)
            nbrs[v].append(u)
            rows += [u, v]
            cols += [v, u]
        self.nbrs = [np.asarray(sorted(ns), dtype=np.int32) for ns in nbrs]
        self.payload = payload
        self._adj = scipy.sparse.csr_matrix(
            (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(self.n, self.n)
        )
        self._dist: Optional[np.ndarray] = None
        self._bdist: Optional[np.ndarray] = None
        self._bnear: Optional[np.ndarray] = None

    _UNREACHABLE = np.iinfo(np.uint16).max

    @property
    def dist(self) -> np.ndarray:
        if self._dist is None:
            d = scipy.sparse.csgraph.shortest_path(
                self._adj, method="D", unweighted=True, directed=False
            )
            d[np.isinf(d)] = self._UNREACHABLE
            self._dist = d.astype(np.uint16)
        return self._dist

    @property
    def bdist(self) -> np.ndarray:
        """Distance to the nearest boundary node (and which one)."""
        if self._bdist is None:
            bidx = np.flatnonzero(self.boundary)
            if len(bidx) == 0:
                self._bdist = np.full(self.n, self._UNREACHABLE, dtype=np.uint32)
                self._bnear = np.full(self.n, -1, dtype=np.int64)
            else:
                sub = self.dist[:, bidx].astype(np.uint32)
                arg = sub.argmin(axis=1)
                self._bdist = sub[np.arange(self.n), arg]
                self._bnear = bidx[arg]
        return self._bdist

    def realize(self, u: int, v: int):
        """Deterministic shortest path u -> v as a payload list."""
        dist = self.dist
        total = int(dist[u, v])
        path = []
        cur = u
        while cur != v:
            cand = self.nbrs[cur]
            dn = dist[cand, v].astype(np.int64)
            step = cand[int(np.flatnonzero(dn == dist[cur, v] - 1)[0])]
            path.append(self.payload[(min(cur, step), max(cur, step))])
            cur = int(step)
        assert len(path) == total
        return tuple(path)

    def realize_to_boundary(self, u: int):
        self.bdist
        target = int(self._bnear[u])
        if target < 0:
            raise MatchingError("no boundary reachable")
        return self.realize(u, target)

    def match(self, defect_idx: Sequence[int]):
        """Minimum-weight pairing of marked nodes; returns matched pairs.

        Each element is (u_idx, v_idx | None, weight, payload_path).
        """
        k = len(defect_idx)
        if k == 0:
            return []
        idx = np.asarray(sorted(defect_idx), dtype=np.int64)
        if self.boundary[idx].any():
            raise DecoderError("a boundary node was marked as a defect")
        dmat = self.dist[np.ix_(idx, idx)].astype(np.int64)
        bvec = self.bdist[idx].astype(np.int64)
        has_boundary = bool(self.boundary.any())

        UNREACH = self._UNREACHABLE

        def pw(i, j):
            w = dmat[i, j]
            return None if w >= UNREACH else int(w)

        def bw(i):
            if not has_boundary:
                return None
            w = bvec[i]
            return None if w >= UNREACH else int(w)

        if k == 1 and has_boundary and bw(0) is not None:
            pairing = [(0, None)]
        elif k == 2:
            w01, w0, w1 = pw(0, 1), bw(0), bw(1)
            bsum = w0 + w1 if (w0 is not None and w1 is not None) else None
            if w01 is None and bsum is None:
                raise MatchingError("defects unreachable")
            if bsum is None or (w01 is not None and w01 <= bsum):
                pairing = [(0, 1)]
            else:
                pairing = [(0, None), (1, None)]
        else:
            if not has_boundary and k % 2:
                raise MatchingError("odd defect count with no boundary")
            pairing = _solve_pairing(k, pw, bw)

        out = []
        for i, j in pairing:
            u = int(idx[i])
            if j is None:
                out.append((u, None, int(bvec[i]), self.realize_to_boundary(u)))
            else:
                v = int(idx[j])
                out.append((u, v, int(dmat[i, j]), self.realize(u, v)))
        return out


class Decoder:
    """Concatenated matching decoder bound to one lattice.

    Stateless per call; all stage graphs are precomputed and immutable, so a
    single instance may serve concurrent decode calls.
    """

    def __init__(self, lattice: ColorLattice):
        self.lattice = lattice
        dl = lattice.dual
        self.ncells = len(lattice.primal.cells)
        self.nverts = len(dl.vertex_coords)
        self.colors = dl.vertex_colors
        self.is_boundary_vertex = np.zeros(self.nverts, dtype=bool)
        self.is_boundary_vertex[list(dl.boundary_vertices)] = True

        self._adjacency: dict[int, set[int]] = {v: set() for v in range(self.nverts)}
        self._edge_id: dict[tuple[int, int], int] = {}
        for i, (a, b) in enumerate(dl.edges):
            self._adjacency[a].add(b)
            self._adjacency[b].add(a)
            self._edge_id[(a, b)] = i
        self._border = set(dl.border_edges)

        self._tet_by_quad = {
            tuple(sorted(t)): qi for qi, t in enumerate(dl.cells)
        }
        self._restricted: dict[tuple[str, str], _StageGraph] = {}
        self._mono1: dict[tuple[str, str, str], _StageGraph] = {}
        self._mono2: dict[tuple[str, str, str, str], _StageGraph] = {}

    # -- graph constructions ------------------------------------------------

    def restricted_graph(self, c: str, d: str) -> _StageGraph:
        key = (c, d)
        if key not in self._restricted:
            nodes = [
                v for v in range(self.nverts) if self.colors[v] in key
            ]
            flags = [bool(self.is_boundary_vertex[v]) for v in nodes]
            index = {v: i for i, v in enumerate(nodes)}
            edges = []
            for (a, b), eid in sorted(self._edge_id.items(), key=lambda kv: kv[1]):
                if a in index and b in index:
                    edges.append((index[a], index[b], eid))
            self._restricted[key] = _StageGraph(nodes, flags, edges)
        return self._restricted[key]

    def mono1_graph(self, c: str, d: str, e: str) -> _StageGraph:
        key = (c, d, e)
        if key not in self._mono1:
            rg = self.restricted_graph(c, d)
            edge_nodes = sorted(
                eid for (a, b), eid in self._edge_id.items()
                if self.colors[a] in (c, d) and self.colors[b] in (c, d)
            )
            vert_nodes = [v for v in range(self.nverts) if self.colors[v] == e]
            keys = [("e", eid) for eid in edge_nodes] + [("v", v) for v in vert_nodes]
            flags = [eid in self._border for eid in edge_nodes] + [
                bool(self.is_boundary_vertex[v]) for v in vert_nodes
            ]
            index = {k: i for i, k in enumerate(keys)}
            edges = []
            dl_edges = self.lattice.dual.edges
            for eid in edge_nodes:
                a, b = dl_edges[eid]
                for x in sorted(self._adjacency[a] & self._adjacency[b]):
                    if self.colors[x] == e:
                        tri = tuple(sorted((a, b, x)))
                        edges.append((index[("e", eid)], index[("v", x)], tri))
            self._mono1[key] = _StageGraph(keys, flags, edges)
        return self._mono1[key]

    def mono2_graph(self, c: str, d: str, e: str, f: str) -> _StageGraph:
        key = (c, d, e, f)
        if key not in self._mono2:
            m1 = self.mono1_graph(c, d, e)
            tri_nodes = sorted({pl for pl in m1.payload.values()})
            vert_nodes = [v for v in range(self.nverts) if self.colors[v] == f]
            keys = [("t", t) for t in tri_nodes] + [("v", v) for v in vert_nodes]
            flags = [
                all(self.is_boundary_vertex[m] for m in t) for t in tri_nodes
            ] + [bool(self.is_boundary_vertex[v]) for v in vert_nodes]
            index = {k: i for i, k in enumerate(keys)}
            edges = []
            for tri in tri_nodes:
                a, b, x = tri
                common = self._adjacency[a] & self._adjacency[b] & self._adjacency[x]
                for y in sorted(common):
                    if self.colors[y] != f:
                        continue
                    quad = tuple(sorted((a, b, x, y)))
                    qubit = self._tet_by_quad.get(quad)
                    if qubit is None and not all(
                        self.is_boundary_vertex[m] for m in quad
                    ):
                        raise DecoderError(
                            f"rainbow 4-clique {quad} is neither a qubit nor boundary"
                        )
                    edges.append((index[("t", tri)], index[("v", y)], qubit))
            self._mono2[key] = _StageGraph(keys, flags, edges)
        return self._mono2[key]

    # -- decoding -----------------------------------------------------------

    def decode_path(self, cell_defects: Iterable[int], path: DecodingPath) -> Correction:
        """Run the three-stage matching of one decoding path."""
        defects = sorted(set(cell_defects))
        for v in defects:
            if not 0 <= v < self.ncells:
                raise DecoderError(f"defect {v} is not a cell (dual vertex) id")
        if not defects:
            return Correction(frozenset(), path, ())
        c, d = path.restricted
        e, f = path.first, path.second
        rg = self.restricted_graph(c, d)
        m1 = self.mono1_graph(c, d, e)
        m2 = self.mono2_graph(c, d, e, f)
        try:
            # stage 1: restricted graph
            s1 = [rg.index[v] for v in defects if self.colors[v] in (c, d)]
            pairs1 = rg.match(s1)
            marks1: set = set()
            for _, _, _, payload_path in pairs1:
                for eid in payload_path:
                    if eid in self._border:
                        continue  # borders carry no stabilizer, mark nothing
                    marks1 ^= {("e", eid)}

            # stage 2: first monochrome graph
            s2_keys = sorted(marks1) + [("v", v) for v in defects if self.colors[v] == e]
            s2 = [m1.index[k] for k in s2_keys]
            pairs2 = m1.match(s2)
            marks2: set = set()
            for _, _, _, payload_path in pairs2:
                for tri in payload_path:
                    if all(self.is_boundary_vertex[m] for m in tri):
                        continue
                    marks2 ^= {("t", tri)}

            # stage 3: second monochrome graph
            s3_keys = sorted(marks2) + [("v", v) for v in defects if self.colors[v] == f]
            s3 = [m2.index[k] for k in s3_keys]
            pairs3 = m2.match(s3)
            qubits: set[int] = set()
            for _, _, _, payload_path in pairs3:
                for q in payload_path:
                    if q is not None:
                        qubits ^= {q}
        except MatchingError:
            return Correction(frozenset(), path, (), failed=True)

        stages = (
            _record(rg, s1, pairs1),
            _record(m1, s2, pairs2),
            _record(m2, s3, pairs3),
        )
        return Correction(frozenset(qubits), path, stages)

    def decode(
        self,
        defects: Union[Iterable[int], Syndrome],
        mode: str = "all_paths",
        path: Optional[DecodingPath] = None,
    ) -> Correction:
        """Correct a cell-level syndrome.

        mode "all_paths" evaluates all 12 decoding paths and returns the
        lowest-weight correction (ties: first path in the fixed enumeration);
        mode "single_path" evaluates one path only.
        """
        if isinstance(defects, Syndrome):
            defects = defects.cell_defects
        defects = frozenset(defects)
        if not defects:
            return Correction(frozenset(), None, ())
        if mode == "single_path":
            chosen = path or DEFAULT_SINGLE_PATH
            corr = self.decode_path(defects, chosen)
            if corr.failed:
                raise DecoderError(f"single decoding path {chosen.label()} failed")
            return corr
        if mode != "all_paths":
            raise ValueError(f"unknown decode mode {mode!r}")
        best: Optional[Correction] = None
        for p in ALL_PATHS:
            corr = self.decode_path(defects, p)
            if corr.failed:
                continue
            if best is None or corr.weight < best.weight:
                best = corr
        if best is None:
            raise DecoderError("all 12 decoding paths failed")
        return best

    def decode_x(
        self,
        face_defects: Iterable[int],
        mode: str = "all_paths",
        path: Optional[DecodingPath] = None,
    ) -> Correction:
        """Correct X errors by merging face defects into cell defects."""
        merged = merge_face_to_cell(self.lattice, face_defects)
        return self.decode(merged, mode=mode, path=path)


def _record(graph: _StageGraph, defect_idx, pairs) -> StageRecord:
    marks = tuple(graph.keys[i] for i in sorted(defect_idx))
    recs = []
    for u, v, w, payload_path in pairs:
        recs.append(
            (
                graph.keys[u],
                None if v is None else graph.keys[v],
                w,
                tuple(payload_path),
            )
        )
    return StageRecord(marks=marks, pairs=tuple(recs))


# --------------------------------------------------------------------------
# trace serialization (schema trace.v1) for the explorer UI
# --------------------------------------------------------------------------

def _key_json(key):
    if isinstance(key, int):
        return {"type": "vertex", "id": key}
    kind, val = key
    if kind == "v":
        return {"type": "vertex", "id": val}
    if kind == "e":
        return {"type": "edge", "id": val}
    return {"type": "triangle", "verts": list(val)}


def correction_trace(
    decoder: Decoder, defects: Iterable[int], corrections: Sequence[Correction]
) -> dict:
    return {
        "format": "trace.v1",
        "cell_defects": sorted(defects),
        "paths": [
            {
                "path": c.path.label() if c.path else None,
                "failed": c.failed,
                "weight": c.weight,
                "qubits": sorted(c.qubits),
                "stages": [
                    {
                        "marks": [_key_json(k) for k in st.marks],
                        "pairs": [
                            {
                                "from": _key_json(u),
                                "to": None if v is None else _key_json(v),
                                "weight": w,
                                "steps": [
                                    _key_json(p) if not isinstance(p, int) else p
                                    for p in pp
                                    if p is not None
                                ],
                            }
                            for u, v, w, pp in st.pairs
                        ],
                    }
                    for st in c.stages
                ],
            }
            for c in corrections
        ],
    }
