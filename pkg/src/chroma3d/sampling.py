"""Code-capacity noise experiments: direct Monte Carlo and subset sampling.

Syndromes are computed combinatorially from error supports (no circuit
simulation). Error draws use counter-based Philox streams keyed by
(seed, p-index, shot block), so results are byte-identical across repeated
runs and across worker counts.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import gf2
from .code import CssCode, extract_code
from .decoder import ALL_PATHS, Decoder, DecodingPath
from .lattice import ColorLattice

CHUNK = 1024
EXHAUSTIVE = "exhaustive"
EXHAUSTIVE_CAP = 10**6


@dataclass(frozen=True)
class NoiseSpec:
    """One Pauli type per run: z = phase-flips on |+>, x = bit-flips on |0>."""

    basis: str
    p_phys: float

    def __post_init__(self):
        if self.basis not in ("z", "x"):
            raise ValueError("basis must be 'z' or 'x'")
        if not 0.0 <= self.p_phys <= 1.0:
            raise ValueError("p_phys must lie in [0, 1]")


@dataclass
class ReportEntry:
    p_phys: float
    logical: int
    p_L: float
    eps: float
    lower: float
    upper: float
    method: str
    shots: int


@dataclass
class SamplingReport:
    family: str
    distance: int
    basis: str
    mode: str
    seed: int
    entries: list[ReportEntry]
    subsets: Optional[dict] = None  # per-omega details for subset sampling
    omega_max: Optional[int] = None

    def entries_for(self, p: float) -> list[ReportEntry]:
        return [e for e in self.entries if e.p_phys == p]

    def to_json_dict(self) -> dict:
        out = {
            "format": "report.v1",
            "family": self.family,
            "d": self.distance,
            "basis": self.basis,
            "mode": self.mode,
            "seed": self.seed,
            "edge_weights": "uniform-1",
            "entries": [e.__dict__ for e in self.entries],
        }
        if self.subsets is not None:
            out["subsets"] = self.subsets
            out["omega_max"] = self.omega_max
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    CSV_HEADER = "family,d,basis,mode,p_phys,k,p_L,eps,lower,upper,method,shots,seed"

    def to_csv_rows(self) -> list[str]:
        rows = [self.CSV_HEADER]
        for e in self.entries:
            rows.append(
                f"{self.family},{self.distance},{self.basis},{self.mode},"
                f"{e.p_phys:.10g},{e.logical},{e.p_L:.10g},{e.eps:.10g},"
                f"{e.lower:.10g},{e.upper:.10g},{e.method},{e.shots},{self.seed}"
            )
        return rows


# --------------------------------------------------------------------------
# the shot engine
# --------------------------------------------------------------------------

class Sampler:
    """Decodes batches of error supports for one lattice and decoder mode."""

    def __init__(
        self,
        lattice: ColorLattice,
        mode: str = "all_paths",
        path: Optional[DecodingPath] = None,
        code: Optional[CssCode] = None,
    ):
        self.lattice = lattice
        self.mode = mode
        self.path = path
        self.code = code or extract_code(lattice)
        self.decoder = Decoder(lattice)
        n = lattice.n
        ncells = len(lattice.primal.cells)
        dl = lattice.dual
        # per-qubit stabilizer incidences for sparse syndrome updates
        self.cells_of_qubit = [
            tuple(m for m in dl.cells[q] if m < ncells) for q in range(n)
        ]
        border = set(dl.border_edges)
        edge_ids = {e: i for i, e in enumerate(dl.edges)}
        self.faces_of_qubit = []
        for q in range(n):
            t = dl.cells[q]
            fs = []
            for i in range(4):
                for j in range(i + 1, 4):
                    ei = edge_ids[(t[i], t[j])]
                    if ei not in border:
                        fs.append(ei)
            self.faces_of_qubit.append(tuple(fs))
        # merged (face -> cell) incidences of a single X error
        self.merged_cells_of_qubit = []
        for q in range(n):
            cnt: dict[int, int] = {}
            for ei in self.faces_of_qubit[q]:
                for m in dl.edges[ei]:
                    if m < ncells:
                        cnt[m] = cnt.get(m, 0) + 1
            self.merged_cells_of_qubit.append(
                tuple(sorted(m for m, c in cnt.items() if c & 1))
            )
        self.logical_x_masks = [gf2.pack(s) for s in self.code.logical_x]
        self.logical_z_masks = [gf2.pack(s) for s in self.code.logical_z]
        self.k = len(self.logical_x_masks)
        self._memo: dict[frozenset[int], frozenset[int]] = {}

    def cell_defects_z(self, support: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for q in support:
            out ^= set(self.cells_of_qubit[q])
        return frozenset(out)

    def merged_defects_x(self, support: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for q in support:
            out ^= set(self.merged_cells_of_qubit[q])
        return frozenset(out)

    def _correct(self, defects: frozenset[int]) -> frozenset[int]:
        corr = self._memo.get(defects)
        if corr is None:
            corr = self.decoder.decode(defects, mode=self.mode, path=self.path).qubits
            if self.cell_defects_z(corr) != defects:
                raise RuntimeError("correction does not cancel the syndrome")
            if len(self._memo) < 1 << 20:
                self._memo[defects] = corr
        return corr

    def failures(self, support: Sequence[int], basis: str) -> list[bool]:
        """Per-logical-qubit failure flags for one error support."""
        if basis == "z":
            defects = self.cell_defects_z(support)
            logical_masks = self.logical_x_masks
        else:
            defects = self.merged_defects_x(support)
            logical_masks = self.logical_z_masks
        corr = self._correct(defects)
        residual = gf2.pack(support) ^ gf2.pack(corr)
        return [bool((residual & m).bit_count() & 1) for m in logical_masks]

    def failure_counts(self, supports: Iterable[Sequence[int]], basis: str) -> np.ndarray:
        counts = np.zeros(self.k, dtype=np.int64)
        for sup in supports:
            counts += np.asarray(self.failures(sup, basis), dtype=np.int64)
        return counts


def _bernoulli_supports(n: int, p: float, seed: int, p_index: int, block: int, size: int):
    rng = np.random.Generator(np.random.Philox(key=[seed, p_index, block]))
    draws = rng.random((size, n))
    hits = draws < p
    return [np.flatnonzero(row) for row in hits]


def _subset_supports(n: int, omega: int, seed: int, p_index: int, block: int, size: int):
    rng = np.random.Generator(np.random.Philox(key=[seed, p_index, block]))
    draws = rng.random((size, n))
    return list(np.argpartition(draws, omega - 1, axis=1)[:, :omega])


# worker-side state for process pools (populated by fork or initializer)
_WORKER: dict = {}


def _init_worker(lattice, mode, path_label, basis):
    path = DecodingPath.from_label(path_label) if path_label else None
    _WORKER["sampler"] = Sampler(lattice, mode=mode, path=path)
    _WORKER["basis"] = basis


def _mc_chunk(args):
    seed, p_index, p, block, size = args
    s: Sampler = _WORKER["sampler"]
    sups = _bernoulli_supports(s.lattice.n, p, seed, p_index, block, size)
    return s.failure_counts(sups, _WORKER["basis"])


def _subset_chunk(args):
    seed, p_index, omega, block, size = args
    s: Sampler = _WORKER["sampler"]
    sups = _subset_supports(s.lattice.n, omega, seed, p_index, block, size)
    return s.failure_counts(sups, _WORKER["basis"])


def _exhaustive_chunk(args):
    omega, start, stop = args
    import itertools

    s: Sampler = _WORKER["sampler"]
    combos = itertools.islice(
        itertools.combinations(range(s.lattice.n), omega), start, stop
    )
    return s.failure_counts(combos, _WORKER["basis"])


def num_workers() -> int:
    env = os.environ.get("CHROMA3D_THREADS", "")
    try:
        w = int(env)
    except ValueError:
        w = 0
    return max(1, w) if w else 1


def _run_chunks(sampler_args, chunk_fn, tasks, workers: int) -> np.ndarray:
    if workers <= 1:
        _init_worker(*sampler_args)
        results = [chunk_fn(t) for t in tasks]
        _WORKER.clear()
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=sampler_args
        ) as pool:
            results = list(pool.map(chunk_fn, tasks, chunksize=1))
    return np.sum(results, axis=0)


# --------------------------------------------------------------------------
# direct Monte Carlo
# --------------------------------------------------------------------------

def run_monte_carlo(
    lattice: ColorLattice,
    decoder_mode: str,
    noise: NoiseSpec,
    shots: int,
    seed: int,
    p_index: int = 0,
    path: Optional[DecodingPath] = None,
    workers: Optional[int] = None,
) -> SamplingReport:
    """Estimate logical failure rates by direct Monte Carlo sampling."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    workers = num_workers() if workers is None else max(1, workers)
    tasks = [
        (seed, p_index, noise.p_phys, block, min(CHUNK, shots - block * CHUNK))
        for block in range((shots + CHUNK - 1) // CHUNK)
    ]
    counts = _run_chunks(
        (lattice, decoder_mode, path.label() if path else None, noise.basis),
        _mc_chunk,
        tasks,
        workers,
    )
    entries = []
    for kq, fails in enumerate(counts):
        p_l = fails / shots
        eps = math.sqrt(p_l * (1.0 - p_l) / shots)
        entries.append(
            ReportEntry(
                p_phys=noise.p_phys,
                logical=kq,
                p_L=p_l,
                eps=eps,
                lower=max(0.0, p_l - eps),
                upper=min(1.0, p_l + eps),
                method="mc",
                shots=shots,
            )
        )
    return SamplingReport(
        family=lattice.family,
        distance=lattice.distance,
        basis=noise.basis,
        mode=decoder_mode,
        seed=seed,
        entries=entries,
    )


def mc_sweep(
    lattice: ColorLattice,
    decoder_mode: str,
    basis: str,
    p_list: Sequence[float],
    shots: int,
    seed: int,
    path: Optional[DecodingPath] = None,
    workers: Optional[int] = None,
) -> SamplingReport:
    """Monte Carlo over several physical error rates (one report)."""
    entries: list[ReportEntry] = []
    for pi, p in enumerate(p_list):
        rep = run_monte_carlo(
            lattice,
            decoder_mode,
            NoiseSpec(basis, p),
            shots,
            seed,
            p_index=pi,
            path=path,
            workers=workers,
        )
        entries.extend(rep.entries)
    return SamplingReport(
        family=lattice.family,
        distance=lattice.distance,
        basis=basis,
        mode=decoder_mode,
        seed=seed,
        entries=entries,
    )


# --------------------------------------------------------------------------
# subset sampling
# --------------------------------------------------------------------------

def subset_failure_rate(
    lattice: ColorLattice,
    decoder_mode: str,
    basis: str,
    omega: int,
    shots,
    seed: int,
    path: Optional[DecodingPath] = None,
    workers: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray, int, bool]:
    """Failure rate of the omega-error subset.

    Returns (p_L per logical, eps per logical, shots used, exact?). `shots`
    may be the string "exhaustive" to force enumeration of all supports;
    subsets with at most 10^6 supports are enumerated exactly regardless.
    """
    n = lattice.n
    if not 0 <= omega <= n:
        raise ValueError(f"omega must lie in [0, {n}]")
    workers = num_workers() if workers is None else max(1, workers)
    total = math.comb(n, omega)
    sampler_args = (lattice, decoder_mode, path.label() if path else None, basis)
    exact = shots == EXHAUSTIVE or total <= EXHAUSTIVE_CAP
    if exact:
        step = 4096
        tasks = [(omega, s, min(s + step, total)) for s in range(0, total, step)]
        counts = _run_chunks(sampler_args, _exhaustive_chunk, tasks, workers)
        p_l = counts / total
        return p_l, np.zeros_like(p_l, dtype=float), total, True
    m = int(shots)
    tasks = [
        (seed, omega, omega, block, min(CHUNK, m - block * CHUNK))
        for block in range((m + CHUNK - 1) // CHUNK)
    ]
    counts = _run_chunks(sampler_args, _subset_chunk, tasks, workers)
    p_l = counts / m
    eps = np.sqrt(p_l * (1.0 - p_l) / m)
    return p_l, eps, m, False


def binom_weight(n: int, omega: int, p: float) -> float:
    return math.comb(n, omega) * p**omega * (1.0 - p) ** (n - omega)


def run_subset_sampling(
    lattice: ColorLattice,
    decoder_mode: str,
    basis: str,
    p_list: Sequence[float],
    omega_max: int,
    shots_per_subset,
    seed: int,
    path: Optional[DecodingPath] = None,
    workers: Optional[int] = None,
) -> SamplingReport:
    """Stratified estimate of the logical failure rate with truncation bounds.

    Per subset weight the failure rate is exact (enumeration) or sampled;
    the binomial combination gives the estimate, the truncation term delta
    and the combined standard deviation give lower/upper bounds.
    """
    n = lattice.n
    if not 0 <= omega_max <= n:
        raise ValueError(f"omega_max must lie in [0, {n}]")
    per_omega = {}
    k = None
    for omega in range(omega_max + 1):
        p_l, eps, used, exact = subset_failure_rate(
            lattice, decoder_mode, basis, omega, shots_per_subset, seed,
            path=path, workers=workers,
        )
        per_omega[omega] = (p_l, eps, used, exact)
        k = len(p_l)

    entries: list[ReportEntry] = []
    for p in p_list:
        weights = {w: binom_weight(n, w, p) for w in range(omega_max + 1)}
        delta = 1.0 - sum(weights.values())
        for kq in range(k):
            est = sum(weights[w] * per_omega[w][0][kq] for w in weights)
            var = sum((weights[w] * per_omega[w][1][kq]) ** 2 for w in weights)
            eps = math.sqrt(var)
            entries.append(
                ReportEntry(
                    p_phys=p,
                    logical=kq,
                    p_L=est,
                    eps=eps,
                    lower=max(0.0, est - eps),
                    upper=min(1.0, est + delta + eps),
                    method="subset",
                    shots=sum(per_omega[w][2] for w in per_omega),
                )
            )
    subsets = {
        str(w): {
            "p_L": [float(x) for x in per_omega[w][0]],
            "eps": [float(x) for x in per_omega[w][1]],
            "shots": per_omega[w][2],
            "exact": per_omega[w][3],
        }
        for w in per_omega
    }
    return SamplingReport(
        family=lattice.family,
        distance=lattice.distance,
        basis=basis,
        mode=decoder_mode,
        seed=seed,
        entries=entries,
        subsets=subsets,
        omega_max=omega_max,
    )


def average_bases(rep_a: SamplingReport, rep_b: SamplingReport) -> SamplingReport:
    """Average the total logical failure rate over both logical input states.

    Only meaningful when both bases were run with identical p grids.
    """
    if {rep_a.basis, rep_b.basis} != {"x", "z"}:
        raise ValueError("need one report per basis")
    key = lambda e: (e.p_phys, e.logical)
    bx = {key(e): e for e in rep_b.entries}
    entries = []
    for e in rep_a.entries:
        o = bx[key(e)]
        p_l = 0.5 * (e.p_L + o.p_L)
        eps = 0.5 * math.sqrt(e.eps**2 + o.eps**2)
        entries.append(
            ReportEntry(
                p_phys=e.p_phys,
                logical=e.logical,
                p_L=p_l,
                eps=eps,
                lower=max(0.0, 0.5 * (e.lower + o.lower)),
                upper=min(1.0, 0.5 * (e.upper + o.upper)),
                method=e.method,
                shots=e.shots + o.shots,
            )
        )
    return SamplingReport(
        family=rep_a.family,
        distance=rep_a.distance,
        basis="xz",
        mode=rep_a.mode,
        seed=rep_a.seed,
        entries=entries,
    )
