"""Stability of special Lagrangian cones and dimensions of moduli spaces.

Each ``dim_*`` function returns a :class:`ModuliReport`.  The infinitesimal
deformation space ``I`` always has a dimension given by topology plus
harmonic-function counts.  The obstruction space ``O`` vanishes for compact
and AC conifolds, and for CS conifolds whose cones are all stable when the
CS rates sit just above 2.  Outside that regime ``dim_O`` is a model value
from cokernel bookkeeping and ``moduli_dim`` is left unset.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .fredholm import (
    CONE_MODEL_CAVEAT,
    ConeEndSpec,
    ConifoldModel,
    FredholmReport,
    ac_end_harmonic_count,
    ac_laplacian_dims,
    combine_rates,
    laplacian_dims,
)
from .spectra import LinkSpectrum, sphere_spectrum
from .topology import AC, CS, ConifoldTopology
from .weights import (
    DEFAULT_MATCH_TOL,
    WeightValue,
    as_weight,
    as_weight_vector,
    exceptional_in_interval,
)

__all__ = [
    "StabilityReport",
    "ModuliReport",
    "stability_check",
    "expected_counts",
    "obstruction_model_dim",
    "moving_singularity_counts",
    "is_just_above_two",
    "dim_compact",
    "dim_ac",
    "dim_cs",
    "dim_csac",
]

UPPER_BOUND_CAVEAT = (
    "dim_O is a model value from cokernel bookkeeping, not a proven dimension; "
    "it is not claimed that the moduli space is obstructed"
)


def expected_counts(m: int, sym_dim: int) -> tuple[int, int, int]:
    """Forced harmonic modes at rates 0, 1, 2: constants, translations, rotations."""
    return 1, 2 * m, m * m - 1 - sym_dim


@dataclass
class StabilityReport:
    end_index: int
    m: int
    sym_dim: int
    expected_counts: tuple[int, int, int]
    observed_counts: tuple[int, int, int]
    extra_exceptional: list[WeightValue]
    approximate: bool = False

    @property
    def stable(self) -> bool:
        return self.observed_counts == self.expected_counts and not self.extra_exceptional

    @property
    def meets_moment_bound(self) -> bool:
        """Observed counts at rates 1 and 2 reach the moment-map lower bound."""
        return all(o >= e for o, e in zip(self.observed_counts[1:], self.expected_counts[1:]))


def _looks_like_round_sphere(spec: LinkSpectrum, m: int) -> bool:
    if spec.exact:
        cutoff = spec.cutoff if spec.cutoff != float("inf") else spec.entries[-1].value
        return spec.entries == sphere_spectrum(m, cutoff).entries
    ref = sphere_spectrum(m, spec.entries[-1].value * 1.05 + 1).entries
    if len(ref) < len(spec.entries):
        return False
    return all(
        a.multiplicity == b.multiplicity and abs(float(a.value) - float(b.value)) <= 0.05 * max(1.0, float(b.value))
        for a, b in zip(spec.entries, ref)
    )


def _same_eigenvalue(value, target, exact: bool, match_tol: float) -> bool:
    if exact:
        return value == target
    return abs(float(value) - float(target)) <= match_tol * max(1.0, float(target))


def stability_check(
    end: ConeEndSpec, m: int | None = None, end_index: int = 0, match_tol: float = DEFAULT_MATCH_TOL
) -> StabilityReport:
    m = end.m if m is None else m
    if end.m != m:
        raise InputError(f"link dimension {end.spectrum.dim_link} does not match m={m}")
    if end.sym_dim is None:
        raise InputError(f"end {end_index}: stability needs sym_dim (dimension of the symmetry group)")
    if end.sym_dim > m * m - 1:
        raise InputError(f"sym_dim={end.sym_dim} exceeds dim SU({m}) = {m * m - 1}")
    if _looks_like_round_sphere(end.spectrum, m):
        raise InputError(
            f"end {end_index}: the link spectrum is that of the round sphere; a cone over it is a plane, "
            "which is excluded from the stability notion"
        )
    found = exceptional_in_interval(end.spectrum, m, 0, 2, end_index)
    targets = [Fraction(k * (k + m - 2)) for k in (0, 1, 2)]
    observed = [0, 0, 0]
    extras = []
    for w in found:
        exact = not w.approximate
        for k, t in enumerate(targets):
            if _same_eigenvalue(w.eigenvalue, t, exact, match_tol):
                observed[k] += w.multiplicity
                break
        else:
            extras.append(w)
    return StabilityReport(
        end_index, m, int(end.sym_dim), expected_counts(m, end.sym_dim), tuple(observed), extras, not end.spectrum.exact
    )


def moving_singularity_counts(m: int, sym_dims) -> dict:
    """Parameter counts for moving singular points and their cones.

    Per end ``i``: ``m^2 + 2m - dim G_i`` for Lagrangian data and one fewer
    for special Lagrangian data.  ``d`` adds one per end for the point itself.
    """
    sym_dims = [int(g) for g in sym_dims]
    lag = [m * m + 2 * m - g for g in sym_dims]
    sl = [m * m + 2 * m - 1 - g for g in sym_dims]
    return {"lagrangian": lag, "special_lagrangian": sl, "d": sum(1 + x for x in sl)}


def obstruction_model_dim(coker_dim: int, m: int, sym_dims) -> int:
    """``coker - sum_i (2m + m^2 - dim G_i)``: the cokernel left after removing
    the directions absorbed by moving each singular point and its cone."""
    return coker_dim - sum(2 * m + m * m - int(g) for g in sym_dims)


def is_just_above_two(end: ConeEndSpec, mu, end_index: int = 0) -> bool:
    """``mu`` lies in ``(2, gamma')`` where ``gamma'`` is the next exceptional rate above 2."""
    mu = as_weight(mu)
    if not mu > 2:
        return False
    return not [w for w in exceptional_in_interval(end.spectrum, end.m, 2, mu, end_index) if w.gamma > 2]


@dataclass
class ModuliReport:
    case: str
    window: str | None
    dim_I: int
    dim_O: int | None
    moduli_dim: int | None
    stability: list[StabilityReport] = field(default_factory=list)
    formula_trail: list[str] = field(default_factory=list)
    caveats: list[str] = field(default_factory=list)
    fredholm: FredholmReport | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.moduli_dim is not None and self.dim_O != 0:
            raise ValueError("moduli_dim is only set when dim_O = 0")


def _need_topology(model: ConifoldModel) -> ConifoldTopology:
    if model.topology is None:
        raise InputError("this computation needs the topology of the conifold (Betti numbers)")
    return model.topology


def dim_compact(b1: int) -> ModuliReport:
    if int(b1) != b1 or b1 < 0:
        raise InputError("b1 must be a non-negative integer")
    b1 = int(b1)
    return ModuliReport("compact", None, b1, 0, b1, formula_trail=[f"compact: dim = b1 = {b1}"])


def _uniform_ac_window(lam, m: int) -> str:
    if all(2 - m < x < 0 for x in lam):
        return "(2-m,0)"
    if all(0 < x < 2 for x in lam):
        return "(0,2)"
    raise InputError(
        f"AC rates {[str(x) for x in lam]} are not all in (2-m,0) or all in (0,2); "
        "mixed or out-of-range windows are not covered"
    )


def dim_ac(model: ConifoldModel, lam=None, match_tol: float = DEFAULT_MATCH_TOL) -> ModuliReport:
    topo = _need_topology(model)
    rep = ac_laplacian_dims(model, lam, match_tol)
    window = _uniform_ac_window(rep.weights, model.m)
    if window == "(2-m,0)":
        d = topo.b1_c
        trail = [f"AC, lambda in (2-m,0): dim = b1_c = {d}"]
        caveats = []
    else:
        d = topo.b1 + rep.ker_dim - 1
        trail = [f"AC, lambda in (0,2): dim = b1 + dim Ker - 1 = {topo.b1} + {rep.ker_dim} - 1 = {d}"]
        caveats = [CONE_MODEL_CAVEAT]
    return ModuliReport("AC", f"lambda in {window}", d, 0, d, [], rep.formula_trail + trail, caveats, rep)


def _cs_obstruction(
    model: ConifoldModel, w: tuple, match_tol: float
) -> tuple[int | None, list[StabilityReport], list[str], list[str], bool]:
    """Stability reports of the CS ends and the obstruction dimension."""
    trail, caveats = [], []
    cs = model.indices(CS)
    for j in cs:
        if not w[j] > 2:
            msg = f"CS rate mu_{j} = {w[j]} <= 2 is outside the special Lagrangian range"
            warnings.warn(msg, stacklevel=3)
            caveats.append(msg)
    stab = [stability_check(model.ends[j], model.m, j, match_tol) for j in cs if model.ends[j].sym_dim is not None]
    have_all = len(stab) == len(cs)
    all_stable = have_all and all(r.stable for r in stab)
    near_two = all(is_just_above_two(model.ends[j], w[j], j) for j in cs)
    if all_stable and near_two:
        trail.append("all CS ends stable and mu = 2 + eps: O = {0}")
        return 0, stab, trail, caveats, True
    if not have_all:
        caveats.append("sym_dim missing on some CS end: stability and dim_O cannot be evaluated")
        return None, stab, trail, caveats, False
    coker = sum(_cs_cokernel_count(model.ends[j], w[j], j) for j in cs)
    sym = [model.ends[j].sym_dim for j in cs]
    d_o = obstruction_model_dim(coker, model.m, sym)
    trail.append(
        f"dim_O = s + sum_{{0<gamma<mu}} m(gamma) - sum_i (2m + m^2 - dim G_i) = {coker} - "
        f"{sum(2 * model.m + model.m ** 2 - g for g in sym)} = {d_o}"
    )
    caveats.append(UPPER_BOUND_CAVEAT)
    if not near_two:
        caveats.append("some CS rate is not in (2, next exceptional rate above 2)")
    return d_o, stab, trail, caveats, False


def _cs_cokernel_count(end: ConeEndSpec, mu, j: int) -> int:
    """``1 + sum_{0<gamma<mu} m(gamma)`` on one CS end with ``mu > 0``."""
    if not mu > 0:
        return 0
    return sum(w.multiplicity for w in exceptional_in_interval(end.spectrum, end.m, 0, mu, j))


def dim_cs(model: ConifoldModel, mu=None, match_tol: float = DEFAULT_MATCH_TOL) -> ModuliReport:
    topo = _need_topology(model)
    if model.l:
        raise InputError("dim_cs needs a model with only CS ends")
    w = as_weight_vector(model.default_rates() if mu is None else mu, model.e)
    rep = laplacian_dims(model, w, match_tol)
    dim_i = topo.b1_c - model.s + 1
    trail = rep.formula_trail + [f"CS: dim I = b1_c - s + 1 = {topo.b1_c} - {model.s} + 1 = {dim_i}"]
    d_o, stab, t2, caveats, ok = _cs_obstruction(model, w, match_tol)
    extras = {}
    if all(e.sym_dim is not None for e in model.ends):
        extras["moving_singularities"] = moving_singularity_counts(model.m, [e.sym_dim for e in model.ends])
    return ModuliReport(
        "CS", "mu = 2+eps" if ok else "mu", dim_i, d_o, dim_i if d_o == 0 else None,
        stab, trail + t2, caveats, rep, extras,
    )


def dim_csac(model: ConifoldModel, mu=None, lam=None, match_tol: float = DEFAULT_MATCH_TOL) -> ModuliReport:
    topo = _need_topology(model)
    if not (model.s and model.l):
        raise InputError("dim_csac needs at least one CS end and one AC end")
    if mu is None and lam is None:
        w = model.default_rates()
    elif mu is None or lam is None:
        raise InputError("give both mu and lambda, or neither")
    else:
        w = combine_rates(model, mu, lam)
    rep = laplacian_dims(model, w, match_tol)
    ac = model.indices(AC)
    window = _uniform_ac_window([w[j] for j in ac], model.m)
    if window == "(2-m,0)":
        dim_i = topo.b1_c - model.s
        trail = [f"CS/AC, lambda in (2-m,0): dim I = b1_c - s = {topo.b1_c} - {model.s} = {dim_i}"]
    else:
        ds = [ac_end_harmonic_count(model.ends[j], w[j], j, match_tol) for j in ac]
        dim_i = topo.b1_c_bullet - model.s + sum(ds)
        trail = [
            f"d_{j} = harmonic r^gamma sigma on end {j} with gamma in [0, {w[j]}] = {d}" for j, d in zip(ac, ds)
        ] + [f"CS/AC, lambda in (0,2): dim I = b1_c_bullet - s + sum d_i = {topo.b1_c_bullet} - {model.s} + {sum(ds)} = {dim_i}"]
    d_o, stab, t2, caveats, ok = _cs_obstruction(model, w, match_tol)
    return ModuliReport(
        "CSAC", f"lambda in {window}", dim_i, d_o, dim_i if d_o == 0 else None,
        stab, rep.formula_trail + trail + t2, caveats, rep,
    )
