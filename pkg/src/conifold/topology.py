"""Rational cohomology of compact models of conifolds.

A conifold ``L`` is modelled by a compact manifold with boundary ``K`` whose
boundary components are the links, each tagged ``CS`` or ``AC``.  Compactly
supported cohomology of ``L`` is ``H^*(K, dK)``; the variant that is compactly
supported only towards the singular points is ``H^*(K, Sigma_CS)``.

Every map on cohomology is computed at cochain level and its rank is taken
exactly over Q, so the long exact sequence of a pair can be checked node by
node instead of being assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import linalg
from .complexes import SimplicialComplex, empty, faces
from .errors import InputError, StructuralError

__all__ = [
    "BoundaryComponent",
    "ComplexPair",
    "ConifoldTopology",
    "LESNode",
    "coboundary",
    "betti",
    "relative_betti",
    "restriction_rank",
    "inclusion_rank",
    "connecting_rank",
    "long_exact_sequence",
    "assemble_topology",
    "pair_from_dict",
    "load_pair",
]

CS, AC = "CS", "AC"


def coboundary(k_complex: SimplicialComplex, k: int, sub: SimplicialComplex | None = None) -> tuple[list[list[int]], int]:
    """Matrix of ``delta: C^k -> C^{k+1}`` (rows: (k+1)-simplices).

    With ``sub`` given, cochains vanishing on ``sub`` are used, i.e. the
    relative complex ``C^*(K, A)``.  Returns ``(rows, ncols)``.
    """
    cols = _cells(k_complex, k, sub)
    rows_s = _cells(k_complex, k + 1, sub)
    col_index = {s: i for i, s in enumerate(cols)}
    rows = []
    for s in rows_s:
        row = [0] * len(cols)
        for i, f in enumerate(faces(s)):
            j = col_index.get(f)
            if j is not None:
                row[j] += -1 if i % 2 else 1
        rows.append(row)
    return rows, len(cols)


def _cells(k_complex: SimplicialComplex, k: int, sub: SimplicialComplex | None) -> list:
    if k < 0:
        return []
    cells = k_complex[k]
    if sub is None:
        return list(cells)
    skip = set(sub[k])
    return [s for s in cells if s not in skip]


def _rank_delta(k_complex, k, sub=None) -> int:
    rows, ncols = coboundary(k_complex, k, sub)
    return linalg.rank(rows, ncols) if rows and ncols else 0


def _dim_h(k_complex, k, sub=None) -> int:
    n = len(_cells(k_complex, k, sub))
    return n - _rank_delta(k_complex, k, sub) - (_rank_delta(k_complex, k - 1, sub) if k > 0 else 0)


def betti(k_complex: SimplicialComplex, k: int) -> int:
    """Rank of ``H^k(K; Q)``."""
    if k < 0:
        raise InputError("degree must be non-negative")
    return _dim_h(k_complex, k)


def relative_betti(pair, k: int) -> int:
    """Rank of ``H^k(K, A; Q)``; ``pair`` is a ComplexPair or ``(K, A)``."""
    ambient, sub = _unpack(pair)
    if k < 0:
        raise InputError("degree must be non-negative")
    return _dim_h(ambient, k, sub)


def _unpack(pair) -> tuple[SimplicialComplex, SimplicialComplex]:
    if isinstance(pair, ComplexPair):
        return pair.ambient, pair.boundary
    ambient, sub = pair
    sub = empty() if sub is None else sub
    if not ambient.contains(sub):
        raise StructuralError("boundary is not a subcomplex of the ambient complex")
    return ambient, sub


def _cocycles(k_complex, k, sub=None) -> list[list]:
    rows, ncols = coboundary(k_complex, k, sub)
    return linalg.nullspace(rows, ncols) if rows else [[int(i == j) for i in range(ncols)] for j in range(ncols)]


def _coboundaries(k_complex, k, sub=None) -> list[list[int]]:
    """Spanning set of ``B^k`` as row vectors."""
    if k == 0:
        return []
    rows, ncols = coboundary(k_complex, k - 1, sub)
    return linalg.transpose(rows, ncols) if rows else []


def _induced_rank(images: list[list], boundaries: list[list], width: int) -> int:
    if not images:
        return 0
    rb = linalg.rank(boundaries, width) if boundaries else 0
    return linalg.rank(images + boundaries, width) - rb


def restriction_rank(pair, k: int) -> tuple[int, int]:
    """Rank and nullity of ``H^k(K) -> H^k(A)`` induced by inclusion."""
    ambient, sub = _unpack(pair)
    target = list(sub[k])
    if not target:
        return 0, betti(ambient, k)
    src_index = ambient.index(k)
    images = [[z[src_index[s]] for s in target] for z in _cocycles(ambient, k)]
    r = _induced_rank(images, _coboundaries(sub, k), len(target))
    return r, betti(ambient, k) - r


def inclusion_rank(pair, k: int) -> int:
    """Rank of ``H^k(K, A) -> H^k(K)`` (extend relative cocycles by zero)."""
    ambient, sub = _unpack(pair)
    rel = _cells(ambient, k, sub)
    width = ambient.count(k)
    index = ambient.index(k)
    images = []
    for z in _cocycles(ambient, k, sub):
        v = [0] * width
        for s, x in zip(rel, z):
            v[index[s]] = x
        images.append(v)
    return _induced_rank(images, _coboundaries(ambient, k), width)


def connecting_rank(pair, k: int) -> int:
    """Rank of the connecting map ``H^k(A) -> H^{k+1}(K, A)``."""
    ambient, sub = _unpack(pair)
    if not sub[k]:
        return 0
    rel_next = _cells(ambient, k + 1, sub)
    if not rel_next:
        return 0
    kidx = {s: i for i, s in enumerate(sub[k])}
    images = []
    for z in _cocycles(sub, k):
        # extend z by zero to K and apply delta; it vanishes on A
        row = []
        for s in rel_next:
            acc = 0
            for i, f in enumerate(faces(s)):
                j = kidx.get(f)
                if j is not None:
                    acc += (-1 if i % 2 else 1) * z[j]
            row.append(acc)
        images.append(row)
    return _induced_rank(images, _coboundaries(ambient, k + 1, sub), len(rel_next))


@dataclass(frozen=True)
class LESNode:
    """One node ``H`` of the long exact sequence with the ranks of the maps
    into and out of it; exactness means ``dim == rank_in + rank_out``."""

    label: str
    degree: int
    dim: int
    rank_in: int
    rank_out: int

    @property
    def exact(self) -> bool:
        return self.dim == self.rank_in + self.rank_out


def long_exact_sequence(pair, top: int | None = None) -> list[LESNode]:
    """Nodes of ``... -> H^k(K,A) -> H^k(K) -> H^k(A) -> H^{k+1}(K,A) -> ...``."""
    ambient, sub = _unpack(pair)
    top = ambient.dim if top is None else top
    nodes = []
    for k in range(top + 1):
        j_k = inclusion_rank((ambient, sub), k)
        i_k = restriction_rank((ambient, sub), k)[0]
        d_prev = connecting_rank((ambient, sub), k - 1) if k > 0 else 0
        d_k = connecting_rank((ambient, sub), k)
        nodes.append(LESNode("H(K,A)", k, relative_betti((ambient, sub), k), d_prev, j_k))
        nodes.append(LESNode("H(K)", k, betti(ambient, k), j_k, i_k))
        nodes.append(LESNode("H(A)", k, betti(sub, k), i_k, d_k))
    return nodes


@dataclass(frozen=True)
class BoundaryComponent:
    tag: str
    complex: SimplicialComplex

    def __post_init__(self):
        if self.tag not in (CS, AC):
            raise StructuralError(f"boundary component tag must be CS or AC, got {self.tag!r}")


@dataclass(frozen=True)
class ComplexPair:
    """A compact model ``K`` of a conifold with its tagged boundary links."""

    ambient: SimplicialComplex
    components: tuple[BoundaryComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        seen: set[int] = set()
        for c in self.components:
            if not self.ambient.contains(c.complex):
                raise StructuralError("boundary component is not a subcomplex of the ambient complex")
            verts = set(c.complex.vertices)
            if not verts:
                raise StructuralError("empty boundary component")
            if verts & seen:
                raise StructuralError("boundary components must be disjoint")
            seen |= verts
            if betti(c.complex, 0) != 1:
                raise StructuralError("each boundary component must be a connected link")

    @property
    def boundary(self) -> SimplicialComplex:
        return self.subcomplex()

    def subcomplex(self, tag: str | None = None) -> SimplicialComplex:
        out = empty()
        for c in self.components:
            if tag is None or c.tag == tag:
                out = out.union(c.complex)
        return out


@dataclass(frozen=True)
class ConifoldTopology:
    """Betti-number inputs of the moduli dimension formulas."""

    b1: int
    b1_c: int
    b1_c_bullet: int
    e: int
    s: int
    l: int
    rank_restriction_to_cs_links: int | None = None
    b0: int = 1
    checks: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ints = (self.b1, self.b1_c, self.b1_c_bullet, self.e, self.s, self.l, self.b0)
        if any(int(x) != x or x < 0 for x in ints):
            raise InputError("Betti numbers and end counts must be non-negative integers")
        if self.e != self.s + self.l:
            raise InputError(f"e={self.e} but s+l={self.s + self.l}")
        if self.b0 == 1 and self.dim_h1c_tilde < 0:
            raise InputError("b1_c - e + 1 is negative for a connected conifold")

    @property
    def dim_h1c_tilde(self) -> int:
        """Dimension of the image of ``H^1_c(L) -> H^1(L)`` for connected ``L``."""
        return self.b1_c - self.e + (1 if self.e else 0)


def assemble_topology(pair: ComplexPair) -> ConifoldTopology:
    """Fill :class:`ConifoldTopology` from a tagged model and verify it.

    The image of ``H^1_c -> H^1`` is computed twice, from Betti numbers via
    the exact sequence and directly as a cochain-level rank, and every node
    of the long exact sequences of ``(K, dK)`` and ``(K, Sigma_CS)`` is
    checked for exactness.
    """
    k = pair.ambient
    if not pair.components and k.dim < 0:
        raise StructuralError("empty model")
    whole = (k, pair.boundary)
    cs = (k, pair.subcomplex(CS))
    s = sum(c.tag == CS for c in pair.components)
    l = sum(c.tag == AC for c in pair.components)
    b0 = betti(k, 0)
    topo = ConifoldTopology(
        b1=betti(k, 1),
        b1_c=relative_betti(whole, 1),
        b1_c_bullet=relative_betti(cs, 1),
        e=s + l,
        s=s,
        l=l,
        rank_restriction_to_cs_links=restriction_rank(cs, 1)[0],
        b0=b0,
    )
    image_direct = inclusion_rank(whole, 1)
    rank_h0 = restriction_rank(whole, 0)[0]
    image_from_sequence = topo.b1_c - (topo.e - rank_h0)
    les = long_exact_sequence(whole) + long_exact_sequence(cs)
    bad = [n for n in les if not n.exact]
    if image_direct != image_from_sequence or bad:
        raise StructuralError(
            f"cohomology bookkeeping failed: image(H1_c -> H1) = {image_direct} directly, "
            f"{image_from_sequence} from the sequence; non-exact nodes: {bad}"
        )
    if b0 == 1 and image_direct != topo.dim_h1c_tilde:
        raise StructuralError("dim of image(H1_c -> H1) disagrees with b1_c - e + 1")
    return ConifoldTopology(
        **{f: getattr(topo, f) for f in ("b1", "b1_c", "b1_c_bullet", "e", "s", "l", "rank_restriction_to_cs_links", "b0")},
        checks={
            "dim_h1c_tilde_direct": image_direct,
            "dim_h1c_tilde_sequence": image_from_sequence,
            "les_nodes_checked": len(les),
        },
    )


def _complex_from_listing(listing: dict, n_vertices: int | None, close: bool) -> SimplicialComplex:
    by_dim = {int(k): v for k, v in listing.items()}
    if n_vertices is not None:
        by_dim[0] = [[i] for i in range(n_vertices)]
    if close:
        return SimplicialComplex.from_maximal(s for level in by_dim.values() for s in level)
    return SimplicialComplex(by_dim)


def pair_from_dict(d: dict) -> ComplexPair:
    """Build a pair from the JSON layout
    ``{"vertices": n, "simplices": {"1": [...], ...}, "boundary_components": [{"tag", "simplices"}]}``."""
    try:
        n = int(d["vertices"])
        ambient = _complex_from_listing(d.get("simplices", {}), n, close=False)
        comps = [
            BoundaryComponent(c["tag"], _complex_from_listing(c["simplices"], None, close=True))
            for c in d.get("boundary_components", [])
        ]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructuralError):
            raise
        raise StructuralError(f"malformed complex description: {exc}") from exc
    return ComplexPair(ambient, tuple(comps))


def pair_to_dict(pair: ComplexPair) -> dict:
    simp = pair.ambient.to_dict()
    n = len(pair.ambient[0])
    simp.pop("0", None)
    return {
        "vertices": n,
        "simplices": simp,
        "boundary_components": [
            {"tag": c.tag, "simplices": {k: v for k, v in c.complex.to_dict().items() if k != "0"}}
            for c in pair.components
        ],
    }


def load_pair(path) -> ComplexPair:
    return pair_from_dict(json.loads(Path(path).read_text()))


def topology_from_betti(values: dict, ends: Sequence[str] | None = None) -> ConifoldTopology:
    """Topology from direct overrides; ``s`` and ``l`` default to the end kinds."""
    values = dict(values)
    if ends is not None:
        values.setdefault("s", sum(k == CS for k in ends))
        values.setdefault("l", sum(k == AC for k in ends))
    values.setdefault("e", values.get("s", 0) + values.get("l", 0))
    if values["e"] == 0 and "b1" in values:
        values.setdefault("b1_c", values["b1"])  # compact: compact support is no constraint
    values.setdefault("b1_c_bullet", values.get("b1_c", 0))
    try:
        return ConifoldTopology(**values)
    except TypeError as exc:
        raise InputError(f"bad topology overrides: {exc}") from exc
