"""Wavefront and sphere point clouds, export, and a self-intersection report.

A wavefront of radius R is the set Exp(lambda, R) over all unit covectors;
the sphere keeps only covectors whose cut time upper bound is >= R, so the
sphere cloud is always a subset of the wavefront cloud.  Points are stored
in rectifying coordinates (r1, r2, z) together with the generating covector
parameters, and can be exported as CSV, ASCII PLY or JSON.

Sampling is deterministic: strata are emitted in the order C1, C2, C3, C4,
C5; inside a stratum, sign blocks then modulus rows then the angular
coordinate.  The modulus grid is cosine-spaced on (0, 1), open at both
ends, so the separatrix and rest points are approached but never hit.

The self-intersection diagnostic reports sample pairs that land within
``eps`` of each other in (r1, r2, z) while their covectors are far apart
on the phase cylinder.  It is a report on the sampled cloud, not a
computation of the intersection locus.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .elliptic import DomainError, complete_K
from .expmap import _exp_c1, _exp_c2, _exp_c3
from .phase import CaseId
from .strata import first_maxwell_time
from .phase import CaseClass

__all__ = [
    "GridSpec",
    "FrontPoint",
    "FrontCloud",
    "IntersectionReport",
    "wavefront",
    "sphere",
    "export",
    "self_intersections",
]

_CASE_CODES = {CaseId.C1: 1, CaseId.C2: 2, CaseId.C3: 3, CaseId.C4: 4, CaseId.C5: 5}
_CODE_CASES = {v: k for k, v in _CASE_CODES.items()}

EXPORT_COLUMNS = ("r1", "r2", "z", "case", "k", "phi", "s1", "s2", "t")


@dataclass(frozen=True)
class GridSpec:
    """Sampling resolution: n_k modulus rows, n_phi angular samples per row,
    and the half-width of the separatrix parameter window."""

    n_k: int = 200
    n_phi: int = 400
    c3_span: float = 8.0

    def __post_init__(self):
        if self.n_k < 2 or self.n_phi < 2:
            raise DomainError("grid resolution must be >= 2 per axis")
        if not self.c3_span > 0.0:
            raise DomainError("c3_span must be positive")

    def k_values(self) -> np.ndarray:
        i = np.arange(self.n_k)
        return 0.5 * (1.0 - np.cos(math.pi * (i + 0.5) / self.n_k))


class FrontPoint(NamedTuple):
    r1: float
    r2: float
    z: float
    case_id: CaseId
    k: float
    phi: float
    s1: int
    s2: int
    t: float


@dataclass
class FrontCloud(Sequence):
    """Columnar cloud of front points; behaves as a sequence of FrontPoint."""

    r1: np.ndarray
    r2: np.ndarray
    z: np.ndarray
    case_code: np.ndarray
    k: np.ndarray
    phi: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    t: np.ndarray
    # covector position on the phase cylinder, kept for the diagnostics
    gamma: np.ndarray = field(repr=False, default=None)
    c: np.ndarray = field(repr=False, default=None)

    def __len__(self) -> int:
        return self.r1.shape[0]

    def __getitem__(self, i) -> FrontPoint:
        if isinstance(i, slice):
            raise TypeError("slicing a FrontCloud is not supported; use .select(mask)")
        return FrontPoint(
            float(self.r1[i]), float(self.r2[i]), float(self.z[i]),
            _CODE_CASES[int(self.case_code[i])], float(self.k[i]), float(self.phi[i]),
            int(self.s1[i]), int(self.s2[i]), float(self.t[i]),
        )

    def __iter__(self) -> Iterator[FrontPoint]:
        for i in range(len(self)):
            yield self[i]

    def points(self) -> np.ndarray:
        """(N, 3) array of (r1, r2, z)."""
        return np.column_stack((self.r1, self.r2, self.z))

    def select(self, mask: np.ndarray) -> "FrontCloud":
        return FrontCloud(*(a[mask] for a in self._arrays()))

    def _arrays(self):
        return (self.r1, self.r2, self.z, self.case_code, self.k, self.phi,
                self.s1, self.s2, self.t, self.gamma, self.c)

    def case_of(self, i: int) -> CaseClass:
        p = self[i]
        return CaseClass(p.case_id, p.k, p.phi, p.s1, p.s2)


def _rect_from_xyz(x, y, z):
    ch = np.cosh(0.5 * z)
    sh = np.sinh(0.5 * z)
    return y * ch - x * sh, x * ch - y * sh


def _block(case_code, x, y, z, k, phi, s1, s2, t, gamma, c):
    r1, r2 = _rect_from_xyz(x, y, z)
    n = x.shape[0]
    return dict(
        r1=r1, r2=r2, z=z,
        case_code=np.full(n, case_code, dtype=np.int8),
        k=np.asarray(k, dtype=float) * np.ones(n),
        phi=phi, s1=np.full(n, s1, dtype=np.int8), s2=np.full(n, s2, dtype=np.int8),
        t=np.full(n, t, dtype=float),
        gamma=gamma % (4.0 * math.pi), c=c,
    )


def _assemble(blocks) -> FrontCloud:
    cols = {name: np.concatenate([b[name] for b in blocks]) for name in blocks[0]}
    return FrontCloud(**cols)


def wavefront(radius: float, grid: GridSpec | None = None) -> FrontCloud:
    """Sample Exp(lambda, radius) over all five strata of covectors."""
    if not radius > 0.0:
        raise DomainError("radius must be positive")
    grid = grid or GridSpec()
    t = float(radius)
    blocks = []

    ks = grid.k_values()
    for s1 in (1, -1):
        for k in ks:
            K4 = 4.0 * complete_K(k)
            phi = np.linspace(0.0, K4, grid.n_phi, endpoint=False)
            x, y, z = _exp_c1(k, phi, s1, t)
            from .elliptic import jacobi  # local alias keeps module load cheap
            sn, cn, dn = jacobi(phi, k)
            gamma = 2.0 * np.arctan2(s1 * k * sn, s1 * dn)
            blocks.append(_block(1, x, y, z, k, phi, s1, 1, t, gamma, 2.0 * k * cn))

    for s2 in (1, -1):
        for k in ks:
            K4 = 4.0 * complete_K(k)
            psi = np.linspace(0.0, K4, grid.n_phi, endpoint=False)
            x, y, z = _exp_c2(k, psi, s2, t)
            from .elliptic import jacobi
            sn, cn, dn = jacobi(psi, k)
            gamma = 2.0 * np.arctan2(s2 * sn, cn)
            blocks.append(_block(2, x, y, z, k, psi, 1, s2, t, gamma, 2.0 * s2 * dn / k))

    for s1 in (1, -1):
        for s2 in (1, -1):
            phi = np.linspace(-grid.c3_span, grid.c3_span, grid.n_phi)
            x, y, z = _exp_c3(phi, s1, s2, t)
            sech = 1.0 / np.cosh(phi)
            gamma = 2.0 * np.arctan2(s1 * s2 * np.tanh(phi), s1 * sech)
            blocks.append(_block(3, x, y, z, 1.0, phi, s1, s2, t, gamma, 2.0 * s2 * sech))

    zeros = np.zeros(1)
    for s1 in (1, -1):
        q = (np.full(1, s1 * t), zeros, zeros)
        gamma = np.zeros(1) if s1 > 0 else np.full(1, 2.0 * math.pi)
        blocks.append(_block(4, *q, 0.0, zeros, s1, 1, t, gamma, zeros))
    for s2 in (1, -1):
        q = (zeros, zeros, np.full(1, s2 * t))
        gamma = np.full(1, math.pi if s2 > 0 else 3.0 * math.pi)
        blocks.append(_block(5, *q, 1.0, zeros, 1, s2, t, gamma, zeros))

    return _assemble(blocks)


def sphere(radius: float, grid: GridSpec | None = None) -> FrontCloud:
    """Wavefront points whose covectors are still optimal at ``radius``:
    those with cut_time_upper_bound >= radius."""
    cloud = wavefront(radius, grid)
    bound = np.full(len(cloud), np.inf)
    for code in (1, 2):
        sel = cloud.case_code == code
        if not np.any(sel):
            continue
        ks = cloud.k[sel]
        cid = CaseId.C1 if code == 1 else CaseId.C2
        uniq = np.unique(ks)
        table = {kv: first_maxwell_time(CaseClass(cid, kv, 0.0, 1, 1)) for kv in uniq}
        bound[sel] = np.array([table[kv] for kv in ks])
    return cloud.select(bound >= radius)


def _fmt(v: float) -> str:
    return format(v, ".17g")


def export(cloud: FrontCloud, fmt: str, path: str) -> int:
    """Write the cloud to ``path`` as 'csv', 'ply' or 'json'; returns the count."""
    n = len(cloud)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write(",".join(EXPORT_COLUMNS) + "\n")
            for i in range(n):
                p = cloud[i]
                fh.write(
                    f"{_fmt(p.r1)},{_fmt(p.r2)},{_fmt(p.z)},{p.case_id.value},"
                    f"{_fmt(p.k)},{_fmt(p.phi)},{p.s1},{p.s2},{_fmt(p.t)}\n"
                )
    elif fmt == "ply":
        with open(path, "w", newline="") as fh:
            fh.write(
                "ply\nformat ascii 1.0\n"
                f"element vertex {n}\n"
                "property double x\nproperty double y\nproperty double z\n"
                "end_header\n"
            )
            for i in range(n):
                p = cloud[i]
                fh.write(f"{_fmt(p.r1)} {_fmt(p.r2)} {_fmt(p.z)}\n")
    elif fmt == "json":
        records = [
            {
                "r1": p.r1, "r2": p.r2, "z": p.z, "case": p.case_id.value,
                "k": p.k, "phi": p.phi, "s1": p.s1, "s2": p.s2, "t": p.t,
            }
            for p in cloud
        ]
        with open(path, "w") as fh:
            json.dump(records, fh)
    else:
        raise DomainError(f"unknown export format {fmt!r}; expected csv, ply or json")
    return n


@dataclass
class IntersectionReport:
    """Close sample pairs with distant covectors, grouped into clusters."""

    pairs: np.ndarray           # (m, 2) indices into the cloud
    distances: np.ndarray       # (m,) pair distances in (r1, r2, z)
    midpoints: np.ndarray       # (m, 3)
    plane_distance: np.ndarray  # (m,) min(|r1|, |r2|, |z|) of the midpoint
    clusters: list[dict]        # size >= cluster_min, sorted by size
    eps: float
    cluster_min: int

    def summary(self) -> dict:
        return {
            "pair_count": int(self.pairs.shape[0]),
            "cluster_count": len(self.clusters),
            "max_plane_distance": float(np.max(self.plane_distance)) if len(self.plane_distance) else 0.0,
            "clusters": self.clusters,
        }


def _cylinder_gap(gamma_a, gamma_b, c_a, c_b) -> np.ndarray:
    dg = np.abs(gamma_a - gamma_b)
    dg = np.minimum(dg, 4.0 * math.pi - dg)
    return np.hypot(dg, c_a - c_b)


def self_intersections(
    cloud: FrontCloud,
    eps: float = 1e-3,
    min_cylinder_gap: float = 0.1,
    cluster_link: float | None = None,
    cluster_min: int = 10,
) -> IntersectionReport:
    """Report sample pairs within ``eps`` whose covectors are separated by
    more than ``min_cylinder_gap`` on the (gamma, c) cylinder.

    Pair midpoints are clustered as connected components of a voxel hash
    with side ``cluster_link`` (default 20*eps); only clusters of at
    least ``cluster_min`` pairs are listed.  Each cluster records its
    size, centroid and the largest distance of a midpoint from the
    nearest of the three planes r1 = 0, r2 = 0, z = 0.
    """
    pts = cloud.points()
    tree = cKDTree(pts)
    raw = tree.query_pairs(eps, output_type="ndarray")
    if raw.shape[0]:
        ia, ib = raw[:, 0], raw[:, 1]
        gap = _cylinder_gap(cloud.gamma[ia], cloud.gamma[ib], cloud.c[ia], cloud.c[ib])
        keep = gap > min_cylinder_gap
        pairs = raw[keep]
    else:
        pairs = raw.reshape(0, 2)

    m = pairs.shape[0]
    if m == 0:
        return IntersectionReport(
            pairs=pairs, distances=np.zeros(0), midpoints=np.zeros((0, 3)),
            plane_distance=np.zeros(0), clusters=[], eps=eps, cluster_min=cluster_min,
        )

    a = pts[pairs[:, 0]]
    b = pts[pairs[:, 1]]
    dist = np.linalg.norm(a - b, axis=1)
    mid = 0.5 * (a + b)
    plane = np.min(np.abs(mid), axis=1)

    # Cluster midpoints as connected components of a voxel hash at side
    # `link`: anything within `link` lands in the same or an adjacent
    # voxel.  Midpoints pile up on the intersection planes, so an exact
    # pair query over them is quadratic; the hash stays linear.
    link = 20.0 * eps if cluster_link is None else cluster_link
    vox = np.floor(mid / link).astype(np.int64)
    parent = np.arange(m)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    cells: dict[tuple[int, int, int], int] = {}
    for i in range(m):
        key = (int(vox[i, 0]), int(vox[i, 1]), int(vox[i, 2]))
        if key in cells:
            union(i, cells[key])
        else:
            cells[key] = i
    offsets = [
        (dx, dy, dz)
        for dx in (-1, 0, 1)
        for dy in (-1, 0, 1)
        for dz in (-1, 0, 1)
        if (dx, dy, dz) > (0, 0, 0)
    ]
    for key, rep in cells.items():
        for dx, dy, dz in offsets:
            nb = (key[0] + dx, key[1] + dy, key[2] + dz)
            if nb in cells:
                union(rep, cells[nb])
    roots = np.array([find(i) for i in range(m)])
    clusters = []
    for r in np.unique(roots):
        idx = np.nonzero(roots == r)[0]
        if idx.size < cluster_min:
            continue
        clusters.append(
            {
                "size": int(idx.size),
                "centroid": [float(v) for v in mid[idx].mean(axis=0)],
                "max_plane_distance": float(plane[idx].max()),
            }
        )
    clusters.sort(key=lambda d: -d["size"])
    return IntersectionReport(
        pairs=pairs, distances=dist, midpoints=mid, plane_distance=plane,
        clusters=clusters, eps=eps, cluster_min=cluster_min,
    )
