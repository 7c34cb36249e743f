"""Finite simplicial complexes and a few standard triangulations.

Simplices are sorted vertex tuples.  The builders produce the small models
used throughout the test-suite: circles, disks, cylinders ``K x [0, 1]``,
Moebius' 7-vertex torus and the torus with an open triangle removed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import StructuralError

__all__ = [
    "SimplicialComplex",
    "circle",
    "disk",
    "torus7",
    "torus_minus_disk",
    "prism",
    "shift",
]

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices grouped by dimension; ``simplices[k]`` is a sorted tuple."""

    simplices: tuple[tuple[Simplex, ...], ...]

    def __init__(self, by_dim: Mapping[int, Iterable[Iterable[int]]] | Iterable[Iterable[Iterable[int]]]):
        if isinstance(by_dim, Mapping):
            items = {int(k): list(v) for k, v in by_dim.items()}
        else:
            items = dict(enumerate(by_dim))
        top = max((k for k, v in items.items() if v), default=-1)
        levels = []
        for k in range(top + 1):
            seen = set()
            for raw in items.get(k, []):
                s = tuple(int(v) for v in raw)
                if len(s) != k + 1:
                    raise StructuralError(f"{s} listed as a {k}-simplex")
                if len(set(s)) != len(s):
                    raise StructuralError(f"simplex {s} repeats a vertex")
                if any(v < 0 for v in s):
                    raise StructuralError(f"simplex {s} has a negative vertex label")
                s = tuple(sorted(s))
                if s in seen:
                    raise StructuralError(f"duplicate simplex {s}")
                seen.add(s)
            levels.append(tuple(sorted(seen)))
        object.__setattr__(self, "simplices", tuple(levels))
        for k in range(1, len(levels)):
            lower = set(levels[k - 1])
            for s in levels[k]:
                for f in faces(s):
                    if f not in lower:
                        raise StructuralError(f"face {f} of {s} is missing")

    @classmethod
    def from_maximal(cls, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Close a collection of simplices under taking faces."""
        out: dict[int, set] = {}
        for raw in simplices:
            s = tuple(sorted(int(v) for v in raw))
            for r in range(1, len(s) + 1):
                for f in itertools.combinations(s, r):
                    out.setdefault(r - 1, set()).add(f)
        return cls({k: sorted(v) for k, v in out.items()})

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def __getitem__(self, k: int) -> tuple[Simplex, ...]:
        return self.simplices[k] if 0 <= k < len(self.simplices) else ()

    def count(self, k: int) -> int:
        return len(self[k])

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for (v,) in self[0])

    def index(self, k: int) -> dict[Simplex, int]:
        return {s: i for i, s in enumerate(self[k])}

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(level) for k, level in enumerate(self.simplices))

    def contains(self, other: "SimplicialComplex") -> bool:
        return all(set(other[k]) <= set(self[k]) for k in range(other.dim + 1))

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        top = max(self.dim, other.dim)
        return SimplicialComplex({k: sorted(set(self[k]) | set(other[k])) for k in range(top + 1)})

    def relabel(self, perm: Mapping[int, int]) -> "SimplicialComplex":
        return SimplicialComplex({k: [[perm[v] for v in s] for s in level] for k, level in enumerate(self.simplices)})

    def to_dict(self) -> dict:
        return {str(k): [list(s) for s in level] for k, level in enumerate(self.simplices)}


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces; face ``i`` omits vertex ``i``."""
    return [s[:i] + s[i + 1 :] for i in range(len(s))]


def empty() -> SimplicialComplex:
    return SimplicialComplex({})


def circle(n: int = 3, offset: int = 0) -> SimplicialComplex:
    if n < 3:
        raise StructuralError("a triangulated circle needs at least 3 vertices")
    return SimplicialComplex.from_maximal((offset + i, offset + (i + 1) % n) for i in range(n))


def disk(n: int = 3) -> SimplicialComplex:
    """Cone over an ``n``-gon; the boundary is ``circle(n)`` and the apex is ``n``."""
    return SimplicialComplex.from_maximal((i, (i + 1) % n, n) for i in range(n))


def torus7() -> SimplicialComplex:
    """Moebius' minimal 7-vertex triangulation of the torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex.from_maximal(tris)


def torus_minus_disk() -> tuple[SimplicialComplex, SimplicialComplex]:
    """The 7-vertex torus with the open triangle ``(0, 1, 3)`` removed,
    together with its boundary circle."""
    t = torus7()
    tris = [s for s in t[2] if s != (0, 1, 3)]
    return SimplicialComplex.from_maximal(tris), SimplicialComplex.from_maximal([(0, 1), (1, 3), (0, 3)])


def shift(k: SimplicialComplex, offset: int) -> SimplicialComplex:
    return k.relabel({v: v + offset for v in k.vertices})


def prism(k: SimplicialComplex) -> tuple[SimplicialComplex, SimplicialComplex, SimplicialComplex]:
    """Triangulate ``K x [0, 1]``; returns ``(prism, bottom, top)``.

    Vertex ``v`` of ``K`` becomes ``v`` at height 0 and ``v + N`` at height 1,
    ``N = max vertex + 1``.  Each ``[v_0 < ... < v_q]`` is cut into the
    staircase simplices ``[v_0..v_i, v_i'..v_q']``, which glue consistently
    because they only depend on the global vertex order.
    """
    n = max(k.vertices) + 1
    tops = []
    for level in k.simplices:
        for s in level:
            for i in range(len(s)):
                tops.append(s[: i + 1] + tuple(v + n for v in s[i:]))
    return SimplicialComplex.from_maximal(tops), k, shift(k, n)
