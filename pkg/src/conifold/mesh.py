"""Numerical link spectra from closed triangle meshes.

The stiffness matrix uses cotangent weights computed from edge lengths only,
so vertices may sit in any ambient R^k (a flat torus is conveniently meshed
in R^4).  The mass matrix is lumped: each vertex receives a third of the area
of every incident triangle.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import eigsh

from .errors import DomainError, NumericError, StructuralError
from .spectra import EigenvalueEntry, LinkSpectrum

__all__ = [
    "TriangleMesh",
    "MeshEigenpairs",
    "read_off",
    "write_off",
    "icosphere",
    "flat_torus_mesh",
    "assemble",
    "mesh_eigenpairs",
    "mesh_spectrum",
    "cluster_eigenvalues",
]

RESIDUAL_TOL = 1e-8
DENSE_LIMIT = 6000


@dataclass(frozen=True)
class TriangleMesh:
    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        t = np.asarray(self.triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] < 2:
            raise StructuralError("vertices must be an (n, k) array with k >= 2")
        if t.ndim != 2 or t.shape[1] != 3:
            raise StructuralError("triangles must be an (n, 3) index array")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def edge_lengths(self) -> np.ndarray:
        """Lengths opposite each corner, shape (n_tri, 3)."""
        p = self.vertices[self.triangles]
        return np.stack(
            [
                np.linalg.norm(p[:, 1] - p[:, 2], axis=1),
                np.linalg.norm(p[:, 2] - p[:, 0], axis=1),
                np.linalg.norm(p[:, 0] - p[:, 1], axis=1),
            ],
            axis=1,
        )

    def areas(self) -> np.ndarray:
        a, b, c = self.edge_lengths().T
        s = (a + b + c) / 2
        return np.sqrt(np.clip(s * (s - a) * (s - b) * (s - c), 0.0, None))

    def validate(self) -> None:
        """Raise :class:`StructuralError` unless the mesh is a closed 2-manifold."""
        t = self.triangles
        if len(t) == 0:
            raise StructuralError("mesh has no triangles")
        if t.min() < 0 or t.max() >= self.n_vertices:
            raise StructuralError("triangle references a missing vertex")
        if np.any((t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])):
            raise StructuralError("triangle with a repeated vertex")
        scale = max(float(np.max(self.edge_lengths())), 1e-300)
        if np.any(self.areas() <= 1e-14 * scale * scale):
            raise StructuralError("degenerate (zero-area) triangle")
        edges = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
        counts = Counter(map(tuple, edges.tolist()))
        bad = [e for e, c in counts.items() if c != 2]
        if bad:
            kind = "boundary" if counts[bad[0]] == 1 else "non-manifold"
            raise StructuralError(f"mesh is not closed: {kind} edge {bad[0]} ({len(bad)} offending edges)")
        used = np.unique(t)
        if len(used) != self.n_vertices:
            raise StructuralError("mesh has isolated vertices")


def read_off(path) -> TriangleMesh:
    """Read an ASCII OFF file (``OFF`` header, or ``nOFF`` with a dimension line)."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens:
        raise StructuralError(f"{path}: empty OFF file")
    head = tokens.pop(0)
    if head == "OFF":
        dim = 3
    elif head == "nOFF":
        dim = int(tokens.pop(0))
    else:
        raise StructuralError(f"{path}: expected OFF header, got {head!r}")
    try:
        nv, nf = int(tokens[0]), int(tokens[1])
        pos = 3
        verts = np.array(tokens[pos : pos + nv * dim], dtype=float).reshape(nv, dim)
        pos += nv * dim
        faces = []
        for _ in range(nf):
            k = int(tokens[pos])
            if k != 3:
                raise StructuralError(f"{path}: only triangular faces are supported")
            faces.append([int(x) for x in tokens[pos + 1 : pos + 4]])
            pos += 4
    except (IndexError, ValueError) as exc:
        raise StructuralError(f"{path}: truncated or malformed OFF data") from exc
    return TriangleMesh(verts, np.array(faces, dtype=np.int64).reshape(-1, 3))


def write_off(mesh: TriangleMesh, path) -> None:
    dim = mesh.vertices.shape[1]
    lines = ["OFF"] if dim == 3 else ["nOFF", str(dim)]
    lines.append(f"{mesh.n_vertices} {len(mesh.triangles)} 0")
    lines += [" ".join(repr(float(x)) for x in v) for v in mesh.vertices]
    lines += [f"3 {a} {b} {c}" for a, b, c in mesh.triangles]
    Path(path).write_text("\n".join(lines) + "\n")


def icosphere(subdivisions: int) -> TriangleMesh:
    """Unit sphere by repeated 4-to-1 subdivision of the icosahedron.

    ``subdivisions=4`` gives 2562 vertices.
    """
    phi = (1 + 5**0.5) / 2
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    pts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in verts]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def mid(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                p = pts[i] + pts[j]
                pts.append(p / np.linalg.norm(p))
                cache[key] = len(pts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return TriangleMesh(np.array(pts), np.array(faces, dtype=np.int64))


def flat_torus_mesh(nx: int, ny: int | None = None) -> TriangleMesh:
    """Square flat torus R^2/2*pi*Z^2 as a Clifford torus in R^4.

    Triangles are chords, so the intrinsic metric converges to the flat one
    as the grid is refined.
    """
    ny = nx if ny is None else ny
    if nx < 3 or ny < 3:
        raise DomainError("need at least a 3x3 grid")
    u = 2 * math.pi * np.arange(nx) / nx
    v = 2 * math.pi * np.arange(ny) / ny
    uu, vv = np.meshgrid(u, v, indexing="ij")
    verts = np.stack([np.cos(uu), np.sin(uu), np.cos(vv), np.sin(vv)], axis=-1).reshape(-1, 4)

    def idx(i, j):
        return (i % nx) * ny + (j % ny)

    tris = []
    for i in range(nx):
        for j in range(ny):
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            tris += [(a, b, c), (a, c, d)]
    return TriangleMesh(verts, np.array(tris, dtype=np.int64))


def assemble(mesh: TriangleMesh) -> tuple[sp.csr_matrix, np.ndarray]:
    """Cotangent stiffness matrix ``S`` and lumped mass diagonal ``M``.

    ``S`` is positive semi-definite with ``S @ ones == 0``.
    """
    t = mesh.triangles
    lengths = mesh.edge_lengths()
    area = mesh.areas()
    l2 = lengths**2
    # cot of the angle at corner k, opposite the edge of length lengths[:, k]
    cot = np.empty_like(l2)
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        cot[:, k] = (l2[:, i] + l2[:, j] - l2[:, k]) / (4 * area)
    rows, cols, vals = [], [], []
    for k in range(3):
        i, j = t[:, (k + 1) % 3], t[:, (k + 2) % 3]
        w = 0.5 * cot[:, k]
        rows += [i, j, i, j]
        cols += [j, i, i, j]
        vals += [-w, -w, w, w]
    n = mesh.n_vertices
    s = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    mass = np.bincount(t.ravel(), weights=np.repeat(area / 3, 3), minlength=n)
    return s, mass


@dataclass(frozen=True)
class MeshEigenpairs:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    components: int


def mesh_eigenpairs(mesh: TriangleMesh, count: int, residual_tol: float = RESIDUAL_TOL) -> MeshEigenpairs:
    """Smallest ``count`` eigenpairs of ``S x = e M x``.

    The lumped mass makes ``M^{-1/2} S M^{-1/2}`` an equivalent standard
    symmetric problem.  Small meshes are solved densely; large ones by
    shift-invert Lanczos with a fixed start vector, so results are
    reproducible either way.
    """
    mesh.validate()
    n = mesh.n_vertices
    if count < 1:
        raise DomainError("count must be positive")
    if count > n:
        raise DomainError(f"asked for {count} eigenvalues of a {n}-vertex mesh")
    s, mass = assemble(mesh)
    dinv = 1.0 / np.sqrt(mass)
    a = sp.diags(dinv) @ s @ sp.diags(dinv)
    a = (a + a.T) * 0.5
    if n <= DENSE_LIMIT:
        vals, y = scipy.linalg.eigh(a.toarray(), subset_by_index=[0, count - 1])
    else:
        v0 = np.sqrt(mass) / np.linalg.norm(np.sqrt(mass))
        shift = -1e-3 * float(abs(a).sum(axis=1).max()) / n
        try:
            vals, y = eigsh(a.tocsc(), k=count, sigma=shift, which="LM", v0=v0, tol=0.0)
        except Exception as exc:  # ARPACK raises its own exception types
            raise NumericError(f"shift-invert Lanczos failed: {exc}") from exc
        order = np.argsort(vals)
        vals, y = vals[order], y[:, order]
    x = dinv[:, None] * y
    mx = mass[:, None] * x
    res = np.linalg.norm(s @ x - mx * vals[None, :], axis=0) / np.linalg.norm(mx, axis=0)
    if np.any(res > residual_tol):
        raise NumericError(
            f"eigensolver residuals above {residual_tol:g}: max {res.max():.3e}", residuals=res.tolist()
        )
    graph = sp.csr_matrix((np.ones(3 * len(mesh.triangles)), (mesh.triangles.ravel(), np.roll(mesh.triangles, 1, axis=1).ravel())), shape=(n, n))
    ncomp, _ = connected_components(graph, directed=False)
    return MeshEigenpairs(vals, x, res, int(ncomp))


def cluster_eigenvalues(values, cluster_tol: float) -> list[tuple[float, int]]:
    """Group sorted eigenvalues whose relative gap is below ``cluster_tol``.

    The gap between neighbours ``e_i <= e_{i+1}`` is measured as
    ``(e_{i+1} - e_i) / max(e_i, 1)``.  Each cluster is reported by its mean.
    """
    values = sorted(float(v) for v in values)
    if not values:
        return []
    groups = [[values[0]]]
    for prev, nxt in zip(values, values[1:]):
        if (nxt - prev) / max(prev, 1.0) < cluster_tol:
            groups[-1].append(nxt)
        else:
            groups.append([nxt])
    return [(float(np.mean(g)), len(g)) for g in groups]


def mesh_spectrum(mesh: TriangleMesh, count: int, cluster_tol: float = 0.05) -> LinkSpectrum:
    """Clustered numerical spectrum of a closed triangle mesh.

    One eigenvalue beyond ``count`` is computed as a probe: if it joins the
    last cluster, that cluster may be truncated and is dropped, and the
    cutoff is lowered so the completeness claim stays true.
    """
    probe = count + 1 <= mesh.n_vertices
    pairs = mesh_eigenpairs(mesh, count + 1 if probe else count)
    values = [float(v) for v in pairs.values]
    clusters = cluster_eigenvalues(values, cluster_tol)
    top = values[-1]
    if probe:
        clusters.pop()
        kept = sum(c for _, c in clusters)
        if kept == 0:
            raise NumericError("count too small to resolve even the zero eigenspace")
        top = values[kept - 1]
    zero_tol = 1e-8 * max(1.0, top)
    if abs(clusters[0][0]) > zero_tol:
        raise NumericError(f"smallest eigenvalue {clusters[0][0]:.3e} is not numerically zero")
    entries = [EigenvalueEntry(0.0, clusters[0][1], False)]
    entries += [EigenvalueEntry(v, c, False) for v, c in clusters[1:]]
    return LinkSpectrum(2, tuple(entries), max(top, entries[-1].value), pairs.components == 1)
