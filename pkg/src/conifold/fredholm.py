"""Fredholm data of the weighted Laplacian on a conifold.

Conventions: a weight vector has one component per end.  On an AC end a
larger rate allows faster growth at infinity, on a CS end a larger rate
forces faster decay at the singular point.  Crossing an exceptional rate
``gamma`` therefore adds ``m(gamma)`` to the index on AC ends and removes it
on CS ends.

All indices are anchored at the window ``(2-m, 0)`` on every end, where the
index (onto the full target space) is zero, and moved from there by the
change-of-index rule.  Kernel and cokernel are split out of the index
wherever injectivity or surjectivity is known.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, ExceptionalWeightError, InputError
from .spectra import LinkSpectrum
from .topology import AC, CS, ConifoldTopology
from .weights import (
    DEFAULT_MATCH_TOL,
    as_weight,
    as_weight_vector,
    exceptional_at,
    exceptional_in_interval,
    require_nonexceptional,
)

__all__ = [
    "ConeEndSpec",
    "ConifoldModel",
    "FredholmReport",
    "index_change",
    "laplacian_index",
    "laplacian_dims",
    "cs_laplacian_dims",
    "ac_laplacian_dims",
    "csac_laplacian_dims",
    "ac_end_harmonic_count",
    "CONE_MODEL_CAVEAT",
]

CONE_MODEL_CAVEAT = (
    "cone-model kernel dimension: equals dim Ker on the manifold when no "
    "L2 obstruction is present; link data alone cannot decide this"
)


@dataclass(frozen=True)
class ConeEndSpec:
    """One end: CS or AC, its link spectrum, an optional default rate and,
    for special Lagrangian cones, the dimension of the symmetry group."""

    kind: str
    spectrum: LinkSpectrum
    rate: object = None
    sym_dim: int | None = None

    def __post_init__(self):
        if self.kind not in (CS, AC):
            raise InputError(f"end kind must be CS or AC, got {self.kind!r}")
        if not self.spectrum.connected:
            raise InputError("links of ends must be connected")
        if self.rate is not None:
            object.__setattr__(self, "rate", as_weight(self.rate))
        if self.sym_dim is not None and (int(self.sym_dim) != self.sym_dim or self.sym_dim < 0):
            raise InputError(f"sym_dim must be a non-negative integer, got {self.sym_dim}")

    @property
    def m(self) -> int:
        return self.spectrum.dim_link + 1


@dataclass(frozen=True)
class ConifoldModel:
    m: int
    ends: tuple[ConeEndSpec, ...]
    topology: ConifoldTopology | None = None

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(self.ends))
        if int(self.m) != self.m or self.m < 3:
            raise DomainError(f"m must be an integer >= 3, got {self.m}")
        if not self.ends:
            raise InputError("a conifold model needs at least one end")
        for j, end in enumerate(self.ends):
            if end.m != self.m:
                raise InputError(f"end {j} has a link of dimension {end.spectrum.dim_link}, expected {self.m - 1}")
        t = self.topology
        if t is not None and (t.s, t.l) != (self.s, self.l):
            raise InputError(f"topology has s={t.s}, l={t.l} but the ends give s={self.s}, l={self.l}")

    @property
    def s(self) -> int:
        return sum(e.kind == CS for e in self.ends)

    @property
    def l(self) -> int:
        return sum(e.kind == AC for e in self.ends)

    @property
    def e(self) -> int:
        return len(self.ends)

    def indices(self, kind: str) -> list[int]:
        return [j for j, e in enumerate(self.ends) if e.kind == kind]

    def pairs(self) -> list[tuple[LinkSpectrum, int]]:
        return [(e.spectrum, self.m) for e in self.ends]

    def default_rates(self) -> tuple:
        if any(e.rate is None for e in self.ends):
            raise InputError("no rate given and some end has no default rate")
        return tuple(e.rate for e in self.ends)


@dataclass
class FredholmReport:
    """``ker_dim``/``coker_dim`` are None where only the index is determined.

    ``target`` is ``"zero-mean"`` when the cokernel is measured against the
    functions with vanishing integral, which is the natural target when
    constants lie in the kernel on a model with only CS ends.
    """

    fredholm: bool
    ker_dim: int | None
    coker_dim: int | None
    index: int | None
    formula_trail: list[str] = field(default_factory=list)
    weights: tuple = ()
    target: str = "full"
    caveats: list[str] = field(default_factory=list)

    def __post_init__(self):
        if None not in (self.ker_dim, self.coker_dim, self.index):
            if self.index != self.ker_dim - self.coker_dim:
                raise ValueError("index must equal ker_dim - coker_dim")

    @property
    def full_target_index(self) -> int | None:
        """Index onto the full target, comparable across all models."""
        if self.index is None:
            return None
        return self.index - 1 if self.target == "zero-mean" else self.index


def _window_point(m: int) -> Fraction:
    return Fraction(2 - m, 2)


def _check(model: ConifoldModel, w, match_tol) -> tuple:
    w = as_weight_vector(w, model.e)
    require_nonexceptional(w, model.pairs(), match_tol)
    return w


def _crossings(model: ConifoldModel, w1: Sequence, w2: Sequence) -> tuple[int, list[str]]:
    total, trail = 0, []
    for j, (a, b, end) in enumerate(zip(w1, w2, model.ends)):
        if a == b:
            continue
        lo, hi = (a, b) if a < b else (b, a)
        up = b > a
        sign = 1 if (end.kind == AC) == up else -1
        for w in exceptional_in_interval(end.spectrum, model.m, lo, hi, j):
            total += sign * w.multiplicity
            trail.append(f"end {j} ({end.kind}) crosses gamma={w.gamma}: {'+' if sign > 0 else '-'}{w.multiplicity}")
    return total, trail


def index_change(model: ConifoldModel, w1, w2, match_tol: float = DEFAULT_MATCH_TOL) -> int:
    """``index(w2) - index(w1)`` by the change-of-index rule."""
    w1 = _check(model, w1, match_tol)
    w2 = _check(model, w2, match_tol)
    return _crossings(model, w1, w2)[0]


def laplacian_index(model: ConifoldModel, w, match_tol: float = DEFAULT_MATCH_TOL) -> tuple[int, list[str]]:
    """Index onto the full target, with the crossings used to reach it."""
    w = _check(model, w, match_tol)
    base = (_window_point(model.m),) * model.e
    idx, trail = _crossings(model, base, w)
    return idx, ["index 0 on the window (2-m, 0) on every end"] + trail


def _in_window(x, m) -> bool:
    return 2 - m < x < 0


def laplacian_dims(model: ConifoldModel, w, match_tol: float = DEFAULT_MATCH_TOL) -> FredholmReport:
    """Kernel, cokernel and index for any mix of ends at a non-exceptional weight."""
    w = _check(model, w, match_tol)
    m = model.m
    idx, trail = laplacian_index(model, w, match_tol)
    cs = [w[j] for j in model.indices(CS)]
    ac = [w[j] for j in model.indices(AC)]
    caveats: list[str] = []

    if all(_in_window(x, m) for x in w):
        if ac:
            trail.append("all rates in (2-m, 0): isomorphism")
            return FredholmReport(True, 0, 0, 0, trail, w)
        trail.append("all CS rates in (2-m, 0): kernel = constants, image = zero-mean functions")
        return FredholmReport(True, 1, 0, 1, trail, w, target="zero-mean")

    injective = all(x > 0 for x in cs) and all(x < 0 for x in ac)
    surjective = not cs and all(x > 2 - m for x in ac)
    if injective:
        trail.append("CS rates > 0 and AC rates < 0: injective, coker = -index")
        return FredholmReport(True, 0, -idx, idx, trail, w)
    if surjective:
        trail.append("AC rates > 2-m: surjective, ker = index")
        if any(x > 0 for x in ac):
            caveats.append(CONE_MODEL_CAVEAT)
        return FredholmReport(True, idx, 0, idx, trail, w, caveats=caveats)
    trail.append("neither injectivity nor surjectivity is known here: index only")
    return FredholmReport(True, None, None, idx, trail, w)


def _require_kinds(model: ConifoldModel, cs: bool, ac: bool) -> None:
    if (model.s > 0) != cs or (model.l > 0) != ac:
        want = {(True, False): "only CS", (False, True): "only AC", (True, True): "both CS and AC"}[(cs, ac)]
        raise InputError(f"this operation needs a model with {want} ends (s={model.s}, l={model.l})")


def cs_laplacian_dims(model: ConifoldModel, mu=None, match_tol: float = DEFAULT_MATCH_TOL) -> FredholmReport:
    _require_kinds(model, True, False)
    return laplacian_dims(model, model.default_rates() if mu is None else mu, match_tol)


def ac_laplacian_dims(model: ConifoldModel, lam=None, match_tol: float = DEFAULT_MATCH_TOL) -> FredholmReport:
    _require_kinds(model, False, True)
    return laplacian_dims(model, model.default_rates() if lam is None else lam, match_tol)


def combine_rates(model: ConifoldModel, mu, lam) -> tuple:
    """Merge CS rates ``mu`` and AC rates ``lam`` into one vector in end order."""
    cs, ac = model.indices(CS), model.indices(AC)
    mu = as_weight_vector(mu, len(cs))
    lam = as_weight_vector(lam, len(ac))
    out: list = [None] * model.e
    for j, x in zip(cs, mu):
        out[j] = x
    for j, x in zip(ac, lam):
        out[j] = x
    return tuple(out)


def csac_laplacian_dims(model: ConifoldModel, mu=None, lam=None, match_tol: float = DEFAULT_MATCH_TOL) -> FredholmReport:
    _require_kinds(model, True, True)
    if mu is None and lam is None:
        w = model.default_rates()
    else:
        if mu is None or lam is None:
            raise InputError("give both mu and lambda, or neither")
        w = combine_rates(model, mu, lam)
    return laplacian_dims(model, w, match_tol)


def ac_end_harmonic_count(end: ConeEndSpec, lam, end_index: int = 0, match_tol: float = DEFAULT_MATCH_TOL) -> int:
    """Number of harmonic functions ``r^gamma sigma`` on the end with ``gamma`` in ``[0, lam]``."""
    lam = as_weight(lam)
    hit = exceptional_at(end.spectrum, end.m, lam, end_index, match_tol)
    if hit is not None:
        raise ExceptionalWeightError(end_index, lam, hit, hit.eigenvalue)
    if lam < 0:
        return 0
    return sum(w.multiplicity for w in exceptional_in_interval(end.spectrum, end.m, 0, lam, end_index))
