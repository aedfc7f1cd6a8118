"""Minimum-weight perfect matching over defect sets with boundary absorption.

The kernel is a blossom algorithm (primal-dual, O(V^3)) for maximum-weight
matching; minimum-weight perfect matching is obtained by the usual weight
reflection. Boundary absorption uses the standard clone reduction: every
defect gets a twin, twin-twin edges are free, and a defect pays its cheapest
route to the boundary to match its own twin.

All weights are non-negative integers; ties resolve deterministically from
the input edge order.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence

BOUNDARY = None  # sentinel partner for boundary-matched defects


class MatchingError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedGraph:
    num_nodes: int
    edges: tuple[tuple[int, int, int, Hashable], ...]  # (u, v, weight, payload)
    boundary: frozenset[int] = frozenset()

    def __post_init__(self):
        for u, v, w, _ in self.edges:
            if u == v:
                raise MatchingError(f"self-loop at node {u}")
            if w < 0:
                raise MatchingError(f"negative weight on edge ({u},{v})")
            if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
                raise MatchingError(f"edge ({u},{v}) out of range")

    def adjacency(self) -> list[list[tuple[int, int, int]]]:
        """node -> sorted list of (neighbor, weight, edge index)."""
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.num_nodes)]
        for idx, (u, v, w, _) in enumerate(self.edges):
            adj[u].append((v, w, idx))
            adj[v].append((u, w, idx))
        for lst in adj:
            lst.sort()
        return adj


DefectSet = Sequence[int]


@dataclass(frozen=True)
class MatchedPair:
    defect: int
    partner: Optional[int]  # None means matched to the boundary
    weight: int
    path: tuple[Hashable, ...]  # payloads of the realized shortest path


@dataclass(frozen=True)
class Matching:
    pairs: tuple[MatchedPair, ...]
    total_weight: int


@dataclass
class SyndromeGraph:
    """Complete graph over defects plus one virtual boundary node."""

    defects: tuple[int, ...]
    pair_weight: dict[tuple[int, int], int]
    pair_path: dict[tuple[int, int], tuple[Hashable, ...]]
    boundary_weight: dict[int, int]
    boundary_path: dict[int, tuple[Hashable, ...]]
    has_boundary: bool


def syndrome_graph(g: WeightedGraph, defects: DefectSet) -> SyndromeGraph:
    """Pairwise shortest-path weights among defects, plus boundary edges.

    Each weight carries its realizing path as a list of edge payloads. Raises
    if some defect cannot reach any other defect or the boundary.
    """
    defects = tuple(sorted(set(defects)))
    for v in defects:
        if not 0 <= v < g.num_nodes:
            raise MatchingError(f"defect {v} is not a node")
        if v in g.boundary:
            raise MatchingError(f"defect {v} is a boundary node")
    adj = g.adjacency()
    dist_rows = {}
    pred_rows = {}
    for v in defects:
        dist, pred = _dijkstra(adj, g.num_nodes, v)
        dist_rows[v] = dist
        pred_rows[v] = pred

    pair_weight, pair_path = {}, {}
    for a, b in itertools.combinations(defects, 2):
        d = dist_rows[a][b]
        if d is not None:
            pair_weight[(a, b)] = d
            pair_path[(a, b)] = _walk(pred_rows[a], g, b)
    boundary_weight, boundary_path = {}, {}
    if g.boundary:
        for v in defects:
            best = None
            for b in sorted(g.boundary):
                d = dist_rows[v][b]
                if d is not None and (best is None or d < dist_rows[v][best]):
                    best = b
            if best is not None:
                boundary_weight[v] = dist_rows[v][best]
                boundary_path[v] = _walk(pred_rows[v], g, best)
    for v in defects:
        reach = any((min(a, b), max(a, b)) in pair_weight for a, b in
                    ((v, u) for u in defects if u != v)) or v in boundary_weight
        if not reach and len(defects) > 1 or (len(defects) == 1 and v not in boundary_weight and g.boundary):
            raise MatchingError(f"defect {v} unreachable from defects and boundary")
    return SyndromeGraph(
        defects=defects,
        pair_weight=pair_weight,
        pair_path=pair_path,
        boundary_weight=boundary_weight,
        boundary_path=boundary_path,
        has_boundary=bool(g.boundary),
    )


def _dijkstra(adj, num_nodes, src):
    dist: list[Optional[int]] = [None] * num_nodes
    pred: list[int] = [-1] * num_nodes  # edge index used to reach the node
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if dist[u] is not None and d > dist[u]:
            continue
        for v, w, eidx in adj[u]:
            nd = d + w
            if dist[v] is None or nd < dist[v] or (nd == dist[v] and eidx < pred[v]):
                dist[v] = nd
                pred[v] = eidx
                heapq.heappush(heap, (nd, v))
    return dist, pred


def _walk(pred, g: WeightedGraph, target):
    path = []
    v = target
    while pred[v] != -1:
        a, b, _, payload = g.edges[pred[v]]
        path.append(payload)
        v = a if v == b else b
    path.reverse()
    return tuple(path)


def mwpm(sg: SyndromeGraph) -> Matching:
    """Minimum-weight pairing of defects, boundary absorbing if present."""
    defects = sg.defects
    k = len(defects)
    if k == 0:
        return Matching(pairs=(), total_weight=0)
    if not sg.has_boundary and k % 2:
        raise MatchingError("odd defect count with no boundary is infeasible")
    index = {v: i for i, v in enumerate(defects)}

    def pw(i: int, j: int) -> Optional[int]:
        a, b = defects[i], defects[j]
        return sg.pair_weight.get((min(a, b), max(a, b)))

    def bw(i: int) -> Optional[int]:
        return sg.boundary_weight.get(defects[i]) if sg.has_boundary else None

    pairing = _solve_pairing(k, pw, bw)

    pairs = []
    total = 0
    for i, j in pairing:
        if j is None:
            v = defects[i]
            w = sg.boundary_weight[v]
            pairs.append(MatchedPair(v, BOUNDARY, w, sg.boundary_path[v]))
        else:
            a, b = sorted((defects[i], defects[j]))
            w = sg.pair_weight[(a, b)]
            pairs.append(MatchedPair(a, b, w, sg.pair_path[(a, b)]))
        total += w
    pairs.sort(key=lambda p: (p.defect, -1 if p.partner is None else p.partner))
    return Matching(pairs=tuple(pairs), total_weight=total)


def _solve_pairing(k, pw, bw):
    """Pair k defects; a defect may pay bw(i) to be absorbed by the boundary.

    Clone reduction to a perfect matching instance solved with the blossom
    kernel; returns [(i, j)] with j=None for boundary-matched defects.
    """
    INF = None
    edges = []
    has_boundary = any(bw(i) is not None for i in range(k))
    for i in range(k):
        for j in range(i + 1, k):
            w = pw(i, j)
            if w is not None:
                edges.append((i, j, w))
    if has_boundary:
        # twins occupy ids k..2k-1
        for i in range(k):
            w = bw(i)
            if w is not None:
                edges.append((i, k + i, w))
        for i in range(k):
            for j in range(i + 1, k):
                edges.append((k + i, k + j, 0))
        size = 2 * k
    else:
        size = k
    mate = min_weight_perfect_matching(size, edges)
    out = []
    for i in range(k):
        m = mate[i]
        if m == -1:
            raise MatchingError("solver failed to produce a perfect matching")
        if m >= k:
            out.append((i, None))
        elif i < m:
            out.append((i, m))
    return out


# --------------------------------------------------------------------------
# blossom kernel
# --------------------------------------------------------------------------

def min_weight_perfect_matching(n: int, edges: list[tuple[int, int, int]]) -> list[int]:
    """Exact minimum-weight perfect matching on an n-vertex graph.

    Weight reflection onto the maximum-weight maximum-cardinality matching
    solved by `max_weight_matching`. Raises if no perfect matching exists.
    """
    if n == 0:
        return []
    if n % 2:
        raise MatchingError("perfect matching needs an even vertex count")
    wmax = max((w for _, _, w in edges), default=0)
    flipped = [(i, j, wmax - w) for i, j, w in edges]
    mate = max_weight_matching(n, flipped, maxcardinality=True)
    if any(m == -1 for m in mate):
        raise MatchingError("graph admits no perfect matching")
    return mate


def max_weight_matching(
    nvertex: int, edge_list: list[tuple[int, int, int]], maxcardinality: bool = False
) -> list[int]:
    """Galil-style O(V^3) blossom algorithm for maximum-weight matching.

    Returns mate[v] = matched partner or -1. Integer weights only, so all
    dual variables stay exact (scaled by 2 internally).
    """
    if not edge_list:
        return [-1] * nvertex
    edges = [(i, j, 2 * w) for i, j, w in edge_list]  # duals stay integral
    nedge = len(edges)
    maxweight = max(w for _, _, w in edges)

    endpoint = [edges[p // 2][p % 2] for p in range(2 * nedge)]
    neighbend: list[list[int]] = [[] for _ in range(nvertex)]
    for k, (i, j, _) in enumerate(edges):
        neighbend[i].append(2 * k + 1)
        neighbend[j].append(2 * k)

    mate = [-1] * nvertex
    label = [0] * (2 * nvertex)
    labelend = [-1] * (2 * nvertex)
    inblossom = list(range(nvertex))
    blossomparent = [-1] * (2 * nvertex)
    blossomchilds: list[Optional[list[int]]] = [None] * (2 * nvertex)
    blossombase = list(range(nvertex)) + [-1] * nvertex
    blossomendps: list[Optional[list[int]]] = [None] * (2 * nvertex)
    bestedge = [-1] * (2 * nvertex)
    blossombestedges: list[Optional[list[int]]] = [None] * (2 * nvertex)
    unusedblossoms = list(range(nvertex, 2 * nvertex))
    dualvar = [maxweight] * nvertex + [0] * nvertex
    allowedge = [False] * nedge
    queue: list[int] = []

    def slack(k):
        i, j, wt = edges[k]
        return dualvar[i] + dualvar[j] - wt

    def blossom_leaves(b):
        if b < nvertex:
            yield b
        else:
            for t in blossomchilds[b]:
                if t < nvertex:
                    yield t
                else:
                    yield from blossom_leaves(t)

    def assign_label(w, t, p):
        b = inblossom[w]
        assert label[w] == 0 and label[b] == 0
        label[w] = label[b] = t
        labelend[w] = labelend[b] = p
        bestedge[w] = bestedge[b] = -1
        if t == 1:
            queue.extend(blossom_leaves(b))
        elif t == 2:
            base = blossombase[b]
            assert mate[base] >= 0
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1)

    def scan_blossom(v, w):
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            assert label[b] == 1
            path.append(b)
            label[b] = 5
            assert labelend[b] == mate[blossombase[b]]
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                assert label[b] == 2
                assert labelend[b] >= 0
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(base, k):
        v, w, _ = edges[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        blossomchilds[b] = path = []
        blossomendps[b] = endps = []
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            assert label[bv] == 2 or (
                label[bv] == 1 and labelend[bv] == mate[blossombase[bv]]
            )
            assert labelend[bv] >= 0
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            assert label[bw] == 2 or (
                label[bw] == 1 and labelend[bw] == mate[blossombase[bw]]
            )
            assert labelend[bw] >= 0
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        assert label[bb] == 1
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        for leaf in blossom_leaves(b):
            if label[inblossom[leaf]] == 2:
                queue.append(leaf)
            inblossom[leaf] = b
        bestedgeto = [-1] * (2 * nvertex)
        for bv in path:
            if blossombestedges[bv] is None:
                nblists = [
                    [p // 2 for p in neighbend[leaf]] for leaf in blossom_leaves(bv)
                ]
            else:
                nblists = [blossombestedges[bv]]
            for nblist in nblists:
                for k2 in nblist:
                    i, j, _ = edges[k2]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if (
                        bj != b
                        and label[bj] == 1
                        and (bestedgeto[bj] == -1 or slack(k2) < slack(bestedgeto[bj]))
                    ):
                        bestedgeto[bj] = k2
            blossombestedges[bv] = None
            bestedge[bv] = -1
        blossombestedges[b] = [k2 for k2 in bestedgeto if k2 != -1]
        bestedge[b] = -1
        for k2 in blossombestedges[b]:
            if bestedge[b] == -1 or slack(k2) < slack(bestedge[b]):
                bestedge[b] = k2

    def expand_blossom(b, endstage):
        for s in blossomchilds[b]:
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expand_blossom(s, endstage)
            else:
                for leaf in blossom_leaves(s):
                    inblossom[leaf] = s
        if (not endstage) and label[b] == 2:
            assert labelend[b] >= 0
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = blossomchilds[b].index(entrychild)
            if j & 1:
                j -= len(blossomchilds[b])
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[blossomendps[b][j - endptrick] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[blossomendps[b][j - endptrick] // 2] = True
                j += jstep
                p = blossomendps[b][j - endptrick] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = blossomchilds[b][j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while blossomchilds[b][j] != entrychild:
                bv = blossomchilds[b][j]
                if label[bv] == 1:
                    j += jstep
                    continue
                for v in blossom_leaves(bv):
                    if label[v] != 0:
                        break
                if label[v] != 0:
                    assert label[v] == 2
                    assert inblossom[v] == bv
                    label[v] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(v, 2, labelend[v])
                j += jstep
        label[b] = labelend[b] = -1
        blossomchilds[b] = blossomendps[b] = None
        blossombase[b] = -1
        blossombestedges[b] = None
        bestedge[b] = -1
        unusedblossoms.append(b)

    def augment_blossom(b, v):
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= nvertex:
            augment_blossom(t, v)
        i = j = blossomchilds[b].index(t)
        if i & 1:
            j -= len(blossomchilds[b])
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = blossomchilds[b][j]
            p = blossomendps[b][j - endptrick] ^ endptrick
            if t >= nvertex:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = blossomchilds[b][j]
            if t >= nvertex:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        blossomchilds[b] = blossomchilds[b][i:] + blossomchilds[b][:i]
        blossomendps[b] = blossomendps[b][i:] + blossomendps[b][:i]
        blossombase[b] = blossombase[blossomchilds[b][0]]
        assert blossombase[b] == v

    def augment_matching(k):
        v, w, _ = edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                assert label[bs] == 1
                assert labelend[bs] == mate[blossombase[bs]]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                assert label[bt] == 2
                assert labelend[bt] >= 0
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                assert blossombase[bt] == t
                if bt >= nvertex:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    for _ in range(nvertex):
        label = [0] * (2 * nvertex)
        bestedge = [-1] * (2 * nvertex)
        for b in range(nvertex, 2 * nvertex):
            blossombestedges[b] = None
        allowedge = [False] * nedge
        queue = []
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)
        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                assert label[inblossom[v]] == 1
                for p in neighbend[v]:
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            assign_label(w, 2, p ^ 1)
                        elif label[inblossom[w]] == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            assert label[inblossom[w]] == 2
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break
            deltatype = -1
            delta = deltaedge = deltablossom = None
            if not maxcardinality:
                deltatype = 1
                delta = min(dualvar[:nvertex])
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(2 * nvertex):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    kslack = slack(bestedge[b])
                    d = kslack // 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(nvertex, 2 * nvertex):
                if (
                    blossombase[b] >= 0
                    and blossomparent[b] == -1
                    and label[b] == 2
                    and (deltatype == -1 or dualvar[b] < delta)
                ):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                deltatype = 1
                delta = max(0, min(dualvar[:nvertex]))
            for v in range(nvertex):
                lbl = label[inblossom[v]]
                if lbl == 1:
                    dualvar[v] -= delta
                elif lbl == 2:
                    dualvar[v] += delta
            for b in range(nvertex, 2 * nvertex):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta
            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                assert label[inblossom[i]] == 1
                queue.append(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                assert label[inblossom[i]] == 1
                queue.append(i)
            elif deltatype == 4:
                expand_blossom(deltablossom, False)
        if not augmented:
            break
        for b in range(nvertex, 2 * nvertex):
            if (
                blossomparent[b] == -1
                and blossombase[b] >= 0
                and label[b] == 1
                and dualvar[b] == 0
            ):
                expand_blossom(b, True)

    out = [-1] * nvertex
    for v in range(nvertex):
        if mate[v] >= 0:
            out[v] = endpoint[mate[v]]
    for v in range(nvertex):
        assert out[v] == -1 or out[out[v]] == v
    return out


# --------------------------------------------------------------------------
# exhaustive oracle (reference implementation for tests and small inputs)
# --------------------------------------------------------------------------

def brute_force_pairing_weight(k, pw, bw) -> Optional[int]:
    """Minimum pairing weight by exhaustive recursion; None if infeasible."""

    def rec(remaining: tuple[int, ...]) -> Optional[int]:
        if not remaining:
            return 0
        i, rest = remaining[0], remaining[1:]
        best = None
        w0 = bw(i)
        if w0 is not None:
            sub = rec(rest)
            if sub is not None:
                best = w0 + sub
        for idx, j in enumerate(rest):
            w = pw(i, j)
            if w is None:
                continue
            sub = rec(rest[:idx] + rest[idx + 1:])
            if sub is not None and (best is None or w + sub < best):
                best = w + sub
        return best

    return rec(tuple(range(k)))
