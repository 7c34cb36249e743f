"""Exceptional weights of cone Laplacians.

On the cone ``Sigma x (0, inf)`` with metric ``dr^2 + r^2 g'`` the function
``r^gamma * sigma`` is harmonic exactly when ``sigma`` is an eigenfunction of
the link Laplacian with eigenvalue ``e = gamma * (gamma + m - 2)``.  Every
weight question here is therefore answered by looking ``gamma*(gamma+m-2)``
up in a link spectrum, which keeps rational inputs exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import DomainError, ExceptionalWeightError
from .spectra import LinkSpectrum
from .surd import QuadSurd, as_fraction

__all__ = [
    "DEFAULT_MATCH_TOL",
    "WeightValue",
    "ExceptionalSet",
    "Verdict",
    "gammas_from_eigenvalue",
    "indicial_value",
    "required_cutoff",
    "exceptional_in_interval",
    "exceptional_set",
    "exceptional_at",
    "is_nonexceptional",
    "nearest_exceptional",
    "as_weight",
    "as_weight_vector",
]

DEFAULT_MATCH_TOL = 1e-6


def as_weight(x):
    """Rates are kept exact when possible; floats go through their repr."""
    if isinstance(x, QuadSurd):
        return x
    try:
        return as_fraction(x)
    except (TypeError, ValueError):
        return float(x)


def as_weight_vector(values, n_ends: int) -> tuple:
    if isinstance(values, (int, float, Fraction, str)):
        values = [values] * n_ends
    out = tuple(as_weight(v) for v in values)
    if len(out) != n_ends:
        raise DomainError(f"weight vector has {len(out)} components for {n_ends} ends")
    return out


@dataclass(frozen=True)
class WeightValue:
    """An exceptional rate ``gamma`` together with the eigenvalue it comes from."""

    gamma: QuadSurd | float
    multiplicity: int
    end_index: int = 0
    eigenvalue: Fraction | float = 0
    approximate: bool = False

    def __float__(self):
        return float(self.gamma)


@dataclass
class ExceptionalSet:
    """Exceptional weights of each end inside ``[a, b]``."""

    a: object
    b: object
    per_end: list[list[WeightValue]] = field(default_factory=list)

    def multiplicity(self, weights: Sequence) -> int:
        """``m(gamma) = sum_j m^j(gamma_j)`` for a weight vector."""
        total = 0
        for j, g in enumerate(weights):
            total += sum(w.multiplicity for w in self.per_end[j] if w.gamma == g)
        return total

    def total(self, end_index: int | None = None) -> int:
        ends = self.per_end if end_index is None else [self.per_end[end_index]]
        return sum(w.multiplicity for lst in ends for w in lst)


class Verdict(NamedTuple):
    ok: bool
    end_index: int | None = None
    witness: WeightValue | None = None
    approximate: bool = False

    def __bool__(self):
        return self.ok


def _check_m(m: int) -> None:
    if int(m) != m or m < 3:
        raise DomainError(f"cone dimension m must be an integer >= 3, got {m}")


def gammas_from_eigenvalue(e, m: int):
    """Both roots of ``g*(g + m - 2) = e``, larger first.

    Exact surds for rational ``e``; floats otherwise.
    """
    _check_m(m)
    if isinstance(e, float):
        if e < 0:
            raise DomainError(f"negative eigenvalue {e}")
        return _numeric_gammas(e, m)
    e = as_fraction(e)
    if e < 0:
        raise DomainError(f"negative eigenvalue {e}")
    root = QuadSurd.sqrt((m - 2) ** 2 + 4 * e)
    half = Fraction(2 - m, 2)
    return half + root * Fraction(1, 2), half - root * Fraction(1, 2)


def _numeric_gammas(e: float, m: int) -> tuple[float, float]:
    disc = math.sqrt((m - 2) ** 2 + 4 * e)
    return (2 - m + disc) / 2, (2 - m - disc) / 2


def indicial_value(gamma, m: int):
    """``gamma * (gamma + m - 2)``, the link eigenvalue a rate corresponds to."""
    if isinstance(gamma, QuadSurd):
        return gamma * (gamma + (m - 2))
    if isinstance(gamma, float):
        return gamma * (gamma + m - 2)
    g = as_fraction(gamma)
    return g * (g + m - 2)


def _as_number(x):
    return x if isinstance(x, (QuadSurd, float)) else as_weight(x)


def required_cutoff(a, b, m: int):
    """Largest link eigenvalue that can produce an exceptional weight in ``[a, b]``.

    ``g*(g+m-2)`` is convex in ``g``, so its maximum on an interval sits at an
    endpoint.
    """
    a, b = _as_number(a), _as_number(b)
    va, vb = indicial_value(a, m), indicial_value(b, m)
    out = va if va >= vb else vb
    if out < 0:
        out = Fraction(0)
    return _plain(out)


def _plain(x):
    """Collapse rational surds to Fractions; irrational ones to floats rounded up."""
    if isinstance(x, QuadSurd):
        return x.a if x.is_rational else math.nextafter(float(x), math.inf)
    return x


def _matches(e_spec, target, match_tol: float) -> bool:
    return abs(float(target) - float(e_spec)) <= match_tol * max(1.0, float(e_spec))


def exceptional_in_interval(
    spectrum: LinkSpectrum, m: int, a, b, end_index: int = 0
) -> list[WeightValue]:
    """All exceptional ``gamma`` in ``[a, b]`` for one end, sorted ascending."""
    _check_m(m)
    a, b = _as_number(a), _as_number(b)
    if a > b:
        raise DomainError("interval endpoints out of order")
    need = required_cutoff(a, b, m)
    spectrum.require(need, end_index)
    lower, upper = [], []
    for entry in spectrum.entries:
        if entry.exact:
            gp, gm = gammas_from_eigenvalue(entry.value, m)
        else:
            gp, gm = _numeric_gammas(float(entry.value), m)
        approx = not entry.exact
        if a <= gp <= b:
            upper.append(WeightValue(gp, entry.multiplicity, end_index, entry.value, approx))
        if a <= gm <= b:
            lower.append(WeightValue(gm, entry.multiplicity, end_index, entry.value, approx))
    # gamma_+ increases and gamma_- decreases with e
    return lower[::-1] + upper


def exceptional_set(ends: Sequence[tuple[LinkSpectrum, int]], a, b) -> ExceptionalSet:
    return ExceptionalSet(a, b, [exceptional_in_interval(s, m, a, b, j) for j, (s, m) in enumerate(ends)])


def exceptional_at(
    spectrum: LinkSpectrum, m: int, beta, end_index: int = 0, match_tol: float = DEFAULT_MATCH_TOL
) -> WeightValue | None:
    """The exceptional weight equal to ``beta``, if there is one."""
    _check_m(m)
    beta = _as_number(beta)
    target = indicial_value(beta, m)
    spectrum.require(_plain(target if target >= 0 else Fraction(0)), end_index)
    for entry in spectrum.entries:
        if entry.exact and not isinstance(beta, float):
            hit = entry.value == target
        else:
            hit = _matches(entry.value, target, match_tol)
        if hit:
            gamma = beta if isinstance(beta, (QuadSurd, float)) else QuadSurd(beta)
            return WeightValue(gamma, entry.multiplicity, end_index, entry.value, not entry.exact or isinstance(beta, float))
    return None


def is_nonexceptional(
    weights: Sequence, ends: Sequence[tuple[LinkSpectrum, int]], match_tol: float = DEFAULT_MATCH_TOL
) -> Verdict:
    """True unless some ``beta_i`` is exceptional for end ``i``; else a witness."""
    weights = as_weight_vector(weights, len(ends))
    approximate = False
    for j, (beta, (spec, m)) in enumerate(zip(weights, ends)):
        hit = exceptional_at(spec, m, beta, j, match_tol)
        approximate = approximate or not spec.exact
        if hit is not None:
            return Verdict(False, j, hit, hit.approximate)
    return Verdict(True, None, None, approximate)


def require_nonexceptional(weights: Sequence, ends: Sequence[tuple[LinkSpectrum, int]], match_tol: float = DEFAULT_MATCH_TOL) -> None:
    """Raise :class:`ExceptionalWeightError` on the first exceptional component."""
    verdict = is_nonexceptional(weights, ends, match_tol)
    if not verdict.ok:
        j = verdict.end_index
        beta = as_weight_vector(weights, len(ends))[j]
        raise ExceptionalWeightError(j, beta, verdict.witness, verdict.witness.eigenvalue)


def nearest_exceptional(weights: Sequence, ends: Sequence[tuple[LinkSpectrum, int]], search_radius) -> list:
    """Per end, the distance from ``beta_i`` to the closest exceptional weight.

    ``None`` marks an end with nothing within ``search_radius``.
    """
    weights = as_weight_vector(weights, len(ends))
    r = _as_number(search_radius)
    if r < 0:
        raise DomainError("search radius must be non-negative")
    out = []
    for j, (beta, (spec, m)) in enumerate(zip(weights, ends)):
        found = exceptional_in_interval(spec, m, beta - r, beta + r, j)
        if not found:
            out.append(None)
            continue
        best = None
        for w in found:
            d = abs(w.gamma - beta) if not isinstance(w.gamma, float) else abs(w.gamma - float(beta))
            if best is None or d < best:
                best = d
        out.append(best)
    return out
