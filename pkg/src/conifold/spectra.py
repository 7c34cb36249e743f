"""Laplace-Beltrami spectra of link manifolds.

Analytic families (round spheres, flat tori, circles, Riemannian products)
are produced in exact rational arithmetic.  Triangle-mesh spectra live in
:mod:`conifold.mesh` and produce the same :class:`LinkSpectrum` type with
``exact=False`` entries.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import CompletenessError, DomainError
from .surd import as_fraction

__all__ = [
    "EigenvalueEntry",
    "LinkSpectrum",
    "LatticeGram",
    "sphere_spectrum",
    "sphere_multiplicity",
    "circle_spectrum",
    "flat_torus_spectrum",
    "product_spectrum",
    "explicit_spectrum",
    "harvey_lawson_gram",
    "spectrum_to_json",
    "spectrum_from_json",
]

INF = math.inf


@dataclass(frozen=True)
class EigenvalueEntry:
    value: Fraction | float
    multiplicity: int
    exact: bool = True

    def __post_init__(self):
        if self.exact and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", as_fraction(self.value))
        if self.value < 0:
            raise DomainError(f"negative eigenvalue {self.value}")
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise DomainError(f"multiplicity must be a positive integer, got {self.multiplicity}")


@dataclass(frozen=True)
class LinkSpectrum:
    """Eigenvalues with multiplicities of the Laplacian on one link.

    Every eigenvalue ``<= cutoff`` is present; nothing beyond it is claimed.
    """

    dim_link: int
    entries: tuple[EigenvalueEntry, ...]
    cutoff: Fraction | float
    connected: bool = True

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if isinstance(self.cutoff, (int, str)) and not isinstance(self.cutoff, bool):
            object.__setattr__(self, "cutoff", as_fraction(self.cutoff))
        if self.dim_link < 1:
            raise DomainError("link dimension must be at least 1")
        if not self.entries:
            raise DomainError("a spectrum always contains the eigenvalue 0")
        if self.entries[0].value != 0:
            raise DomainError("the first eigenvalue must be 0 (constants)")
        if self.connected and self.entries[0].multiplicity != 1:
            raise DomainError("a connected link has a one-dimensional 0-eigenspace")
        for prev, nxt in zip(self.entries, self.entries[1:]):
            if not nxt.value > prev.value:
                raise DomainError("entries must be strictly increasing")
        if self.entries[-1].value > self.cutoff:
            raise DomainError("entry beyond the declared cutoff")

    @property
    def exact(self) -> bool:
        return all(e.exact for e in self.entries)

    @property
    def values(self) -> list:
        return [e.value for e in self.entries]

    def multiplicity_of(self, value) -> int:
        for e in self.entries:
            if e.value == value:
                return e.multiplicity
        return 0

    def require(self, needed, end_index: int | None = None) -> None:
        """Raise :class:`CompletenessError` unless complete up to ``needed``."""
        if needed > self.cutoff:
            raise CompletenessError(needed, self.cutoff, end_index)

    def truncate(self, cutoff) -> "LinkSpectrum":
        cutoff = _cutoff(cutoff)
        self.require(cutoff)
        return LinkSpectrum(
            self.dim_link, tuple(e for e in self.entries if e.value <= cutoff), cutoff, self.connected
        )

    def count_up_to(self, value) -> int:
        """Number of eigenvalues (with multiplicity) ``<= value``."""
        self.require(value)
        return sum(e.multiplicity for e in self.entries if e.value <= value)


def _cutoff(c) -> Fraction | float:
    if isinstance(c, float) and math.isinf(c):
        if c < 0:
            raise DomainError("cutoff must be non-negative")
        return INF
    c = as_fraction(c)
    if c < 0:
        raise DomainError("cutoff must be non-negative")
    return c


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def sphere_multiplicity(m: int, k: int) -> int:
    """Dimension of degree-``k`` harmonic polynomials on R^m."""
    return _binom(m - 1 + k, k) - _binom(m - 3 + k, k - 2)


def sphere_spectrum(m: int, cutoff) -> LinkSpectrum:
    """Spectrum of the round unit sphere S^{m-1}: ``k(k+m-2)``, k >= 0."""
    if int(m) != m or m < 3:
        raise DomainError(f"sphere links need m >= 3, got m={m}")
    cutoff = _cutoff(cutoff)
    if math.isinf(cutoff):
        raise DomainError("an infinite cutoff cannot be enumerated")
    entries = []
    k = 0
    while k * (k + m - 2) <= cutoff:
        entries.append(EigenvalueEntry(Fraction(k * (k + m - 2)), sphere_multiplicity(m, k)))
        k += 1
    return LinkSpectrum(m - 1, tuple(entries), cutoff, True)


@dataclass(frozen=True)
class LatticeGram:
    """Metric of the flat torus R^n / 2*pi*Z^n in angle coordinates."""

    gram: tuple[tuple[Fraction, ...], ...]
    inverse: tuple[tuple[Fraction, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = tuple(tuple(as_fraction(x) for x in row) for row in self.gram)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise DomainError("Gram matrix must be square and non-empty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise DomainError("Gram matrix must be symmetric")
        for k in range(1, n + 1):
            if linalg.det([row[:k] for row in g[:k]]) <= 0:
                raise DomainError("Gram matrix must be positive definite")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "inverse", tuple(tuple(r) for r in linalg.inverse(g)))

    @property
    def dim(self) -> int:
        return len(self.gram)

    def dual_form(self, n: Sequence[int]) -> Fraction:
        """The eigenvalue ``n G^{-1} n^T`` of the character ``exp(i n.theta)``."""
        inv = self.inverse
        return sum(inv[i][j] * n[i] * n[j] for i in range(len(n)) for j in range(len(n)))


def harvey_lawson_gram(m: int) -> LatticeGram:
    """Link metric of the Harvey-Lawson T^{m-1} cone: ``(I + J)/m``.

    The link is ``{(e^{i t_1}, ..., e^{i t_m})/sqrt(m) : sum t_j = 0}`` written
    in the coordinates ``t_1, ..., t_{m-1}``.
    """
    if m < 3:
        raise DomainError("m >= 3")
    return LatticeGram(tuple(tuple(Fraction(1 + (i == j), m) for j in range(m - 1)) for i in range(m - 1)))


def _as_gram(gram) -> LatticeGram:
    return gram if isinstance(gram, LatticeGram) else LatticeGram(tuple(tuple(r) for r in gram))


def flat_torus_spectrum(gram, cutoff) -> LinkSpectrum:
    """Spectrum of a flat torus by complete enumeration of dual-lattice vectors.

    Eigenvalues are ``n G^{-1} n^T`` over ``n`` in Z^k, each attained value
    having multiplicity equal to the number of lattice vectors attaining it.
    """
    gram = _as_gram(gram)
    cutoff = _cutoff(cutoff)
    if math.isinf(cutoff):
        raise DomainError("an infinite cutoff cannot be enumerated")
    inv = gram.inverse
    k = gram.dim
    den = math.lcm(*(x.denominator for row in inv for x in row))
    q = np.array([[int(x * den) for x in row] for row in inv], dtype=object)
    lam_min = float(np.linalg.eigvalsh(np.array([[float(x) for x in row] for row in inv])).min())
    if lam_min <= 0:
        raise DomainError("Gram matrix is numerically singular")
    bound = float(cutoff) / lam_min * (1 + 1e-9) + 1e-9
    radius = math.isqrt(math.floor(bound)) + 1
    limit_num = cutoff.numerator * den
    limit_den = cutoff.denominator

    counts: Counter[int] = Counter()
    big = int(np.abs(q).sum()) * radius * radius >= 2**62
    dtype = object if big else np.int64
    qq = q.astype(dtype)
    rng = np.arange(-radius, radius + 1, dtype=dtype)
    rest = k - 1
    if rest:
        tail = np.array(list(itertools.product(range(-radius, radius + 1), repeat=rest)), dtype=dtype)
    else:
        tail = np.zeros((1, 0), dtype=dtype)
    for first in rng:
        pts = np.concatenate([np.full((len(tail), 1), first, dtype=dtype), tail], axis=1)
        forms = np.einsum("ni,ij,nj->n", pts, qq, pts) if dtype is not object else (
            np.array([int(sum(qq[i, j] * p[i] * p[j] for i in range(k) for j in range(k))) for p in pts], dtype=object)
        )
        keep = forms * limit_den <= limit_num
        counts.update(int(v) for v in forms[keep])
    entries = tuple(EigenvalueEntry(Fraction(v, den), c) for v, c in sorted(counts.items()))
    return LinkSpectrum(k, entries, cutoff, True)


def circle_spectrum(cutoff, radius=1) -> LinkSpectrum:
    """Round circle of the given radius: eigenvalues ``(k/radius)^2``."""
    r = as_fraction(radius)
    return flat_torus_spectrum([[r * r]], cutoff)


def product_spectrum(a: LinkSpectrum, b: LinkSpectrum, cutoff=None) -> LinkSpectrum:
    """Spectrum of the Riemannian product: sums of eigenvalues, multiplicities multiply."""
    if cutoff is None:
        cutoff = min(a.cutoff, b.cutoff)
    cutoff = _cutoff(cutoff)
    a.require(cutoff)
    b.require(cutoff)
    exact = a.exact and b.exact
    acc: dict = {}
    for ea in a.entries:
        if ea.value > cutoff:
            break
        for eb in b.entries:
            v = ea.value + eb.value
            if v > cutoff:
                break
            acc[v] = acc.get(v, 0) + ea.multiplicity * eb.multiplicity
    entries = tuple(EigenvalueEntry(v if exact else float(v), c, exact) for v, c in sorted(acc.items()))
    return LinkSpectrum(a.dim_link + b.dim_link, entries, cutoff, a.connected and b.connected)


def explicit_spectrum(
    entries: Iterable[tuple], dim_link: int, cutoff, connected: bool = True, exact: bool = True
) -> LinkSpectrum:
    """Spectrum supplied by the user as ``(value, multiplicity)`` pairs."""
    if exact:
        items = [EigenvalueEntry(as_fraction(v), int(c), True) for v, c in entries]
        cutoff = _cutoff(cutoff)
    else:
        items = [EigenvalueEntry(float(v), int(c), False) for v, c in entries]
        cutoff = float(cutoff)
    items.sort(key=lambda e: e.value)
    return LinkSpectrum(dim_link, tuple(items), cutoff, connected)


def _num_out(x, exact: bool):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if exact:
        x = as_fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return float(f"{float(x):.12g}")


def spectrum_to_dict(s: LinkSpectrum) -> dict:
    exact = s.exact
    return {
        "dim_link": s.dim_link,
        "connected": s.connected,
        "cutoff": _num_out(s.cutoff, exact),
        "entries": [[_num_out(e.value, exact), e.multiplicity] for e in s.entries],
    }


def spectrum_from_dict(d: dict) -> LinkSpectrum:
    vals = [v for v, _ in d["entries"]]
    exact = all(isinstance(v, str) for v in vals)
    cutoff = d["cutoff"]
    if cutoff == "inf":
        cutoff = INF
    elif not exact:
        cutoff = float(cutoff)
    return explicit_spectrum(
        [(v, c) for v, c in d["entries"]], int(d["dim_link"]), cutoff, bool(d.get("connected", True)), exact
    )


def spectrum_to_json(s: LinkSpectrum) -> str:
    return json.dumps(spectrum_to_dict(s), sort_keys=True)


def spectrum_from_json(text: str) -> LinkSpectrum:
    return spectrum_from_dict(json.loads(text))
