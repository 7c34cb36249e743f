from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conifold.errors import ExceptionalWeightError, InputError
from conifold.fredholm import CONE_MODEL_CAVEAT, ConeEndSpec, ConifoldModel
from conifold.moduli import (
    dim_ac,
    dim_compact,
    dim_cs,
    dim_csac,
    expected_counts,
    is_just_above_two,
    moving_singularity_counts,
    obstruction_model_dim,
    stability_check,
)
from conifold.spectra import explicit_spectrum, flat_torus_spectrum, harvey_lawson_gram, sphere_spectrum
from conifold.surd import QuadSurd
from conifold.topology import assemble_topology, betti, topology_from_betti
from conifold.complexes import torus7

from oracles import stable_cone_spectrum

Q = Fraction
T2 = flat_torus_spectrum(harvey_lawson_gram(3), 30)
S2 = sphere_spectrum(3, 30)


def topo(**kw):
    return topology_from_betti(kw)


def test_stability_examples():
    rep = stability_check(ConeEndSpec("CS", T2, sym_dim=2), 3)
    assert rep.expected_counts == (1, 6, 6) and rep.observed_counts == (1, 6, 6)
    assert rep.extra_exceptional == [] and rep.stable and rep.meets_moment_bound
    rep = stability_check(ConeEndSpec("CS", T2, sym_dim=0), 3)
    assert rep.expected_counts == (1, 6, 8) and not rep.stable
    square = flat_torus_spectrum([[1, 0], [0, 1]], 10)
    rep = stability_check(ConeEndSpec("CS", square, sym_dim=2), 3)
    assert not rep.stable
    assert rep.extra_exceptional[0].gamma == (QuadSurd.sqrt(5) - 1) * Q(1, 2)


def test_stability_input_errors():
    with pytest.raises(InputError):
        stability_check(ConeEndSpec("CS", T2), 3)
    with pytest.raises(InputError, match="sphere"):
        stability_check(ConeEndSpec("CS", S2, sym_dim=3), 3)
    with pytest.raises(InputError):
        stability_check(ConeEndSpec("CS", T2, sym_dim=9), 3)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_harvey_lawson_cones(m):
    # T^{m-1} cones are stable exactly when m = 3; the moment-map bound always holds
    spec = flat_torus_spectrum(harvey_lawson_gram(m), 2 * m)
    rep = stability_check(ConeEndSpec("CS", spec, sym_dim=m - 1), m)
    assert rep.meets_moment_bound
    assert rep.stable == (m == 3)


def test_dim_compact():
    assert dim_compact(3).moduli_dim == 3
    assert dim_compact(0).moduli_dim == 0
    assert dim_compact(betti(torus7(), 1)).moduli_dim == 2


def test_dim_ac_examples():
    ac_t = ConifoldModel(3, [ConeEndSpec("AC", T2)], topo(b1=1, b1_c=1, s=0, l=1))
    assert dim_ac(ac_t, [Q(-1, 2)]).moduli_dim == 1
    ac_s = ConifoldModel(3, [ConeEndSpec("AC", S2)], topo(b1=0, b1_c=0, s=0, l=1))
    rep = dim_ac(ac_s, [Q(3, 2)])
    assert rep.moduli_dim == 3 and CONE_MODEL_CAVEAT in rep.caveats
    assert dim_ac(ac_s, [Q(1, 2)]).moduli_dim == 0


def test_dim_ac_mixed_windows_rejected():
    two = ConifoldModel(3, [ConeEndSpec("AC", T2)] * 2, topo(b1=1, b1_c=1, s=0, l=2))
    with pytest.raises(InputError):
        dim_ac(two, [Q(-1, 2), Q(1, 2)])
    with pytest.raises(ExceptionalWeightError):
        dim_ac(two, [1, Q(1, 2)])


def test_dim_cs_examples():
    one = ConifoldModel(3, [ConeEndSpec("CS", T2, sym_dim=2)], topo(b1=1, b1_c=1, s=1, l=0))
    rep = dim_cs(one, [Q(11, 5)])
    assert (rep.dim_I, rep.dim_O, rep.moduli_dim) == (1, 0, 1)
    assert rep.extras["moving_singularities"]["d"] == 1 + 12
    two = ConifoldModel(3, [ConeEndSpec("CS", T2, sym_dim=2)] * 2, topo(b1=2, b1_c=2, s=2, l=0))
    assert dim_cs(two, [Q(11, 5)] * 2).moduli_dim == 1


def test_dim_cs_outside_regime():
    one = ConifoldModel(3, [ConeEndSpec("CS", T2, sym_dim=2)], topo(b1=1, b1_c=1, s=1, l=0))
    rep = dim_cs(one, [Q(5, 2)])  # past (-1+sqrt(33))/2
    assert rep.moduli_dim is None and rep.dim_O == 6
    with pytest.warns(UserWarning):
        rep = dim_cs(one, [Q(3, 2)])
    assert rep.moduli_dim is None
    no_sym = ConifoldModel(3, [ConeEndSpec("CS", T2)], topo(b1=1, b1_c=1, s=1, l=0))
    rep = dim_cs(no_sym, [Q(11, 5)])
    assert rep.dim_O is None and rep.moduli_dim is None


def test_dim_csac_cone_example():
    cone = ConifoldModel(
        3, [ConeEndSpec("CS", T2, sym_dim=2), ConeEndSpec("AC", T2)], topo(b1=2, b1_c=1, b1_c_bullet=0, s=1, l=1)
    )
    got = [dim_csac(cone, [Q(11, 5)], [lam]).moduli_dim for lam in (Q(-1, 2), Q(1, 2), Q(3, 2))]
    assert got == [0, 0, 6]
    with pytest.raises(InputError):
        dim_csac(ConifoldModel(3, [ConeEndSpec("CS", T2)], topo(b1=1, b1_c=1, s=1, l=0)), [2.2], [])


def test_just_above_two():
    end = ConeEndSpec("CS", T2)
    assert is_just_above_two(end, Q(11, 5))
    assert not is_just_above_two(end, Q(12, 5))
    assert not is_just_above_two(end, 2)


def test_obstruction_identity_symbolic():
    m, g, s = sympy.symbols("m g s", integer=True, positive=True)
    coker = s + s * (2 * m + (m**2 - 1 - g))
    assert sympy.simplify(coker - s * (2 * m + m**2 - g)) == 0


@given(st.integers(3, 7), st.data())
@settings(max_examples=60, deadline=None)
def test_stable_implies_zero_obstruction(m, data):
    s = data.draw(st.integers(1, 3))
    syms = [data.draw(st.integers(0, m * m - 1)) for _ in range(s)]
    ends = [ConeEndSpec("CS", stable_cone_spectrum(m, g), sym_dim=g) for g in syms]
    mdl = ConifoldModel(m, ends, topo(b1=s, b1_c=s, s=s, l=0))
    mu = [Q(2) + Q(data.draw(st.integers(1, 49)), 100) for _ in range(s)]
    rep = dim_cs(mdl, mu)
    assert all(r.stable for r in rep.stability)
    assert rep.dim_O == 0 and rep.moduli_dim == rep.dim_I
    coker = rep.fredholm.coker_dim
    assert obstruction_model_dim(coker, m, syms) == 0


@given(st.integers(3, 6), st.data())
@settings(max_examples=40, deadline=None)
def test_monotone_in_lambda(m, data):
    g = data.draw(st.integers(0, m * m - 1))
    spec = stable_cone_spectrum(m, g)
    cone = ConifoldModel(
        m, [ConeEndSpec("CS", spec, sym_dim=g), ConeEndSpec("AC", spec)], topo(b1=0, b1_c=1, b1_c_bullet=0, s=1, l=1)
    )
    lams = sorted({Q(data.draw(st.integers(1, 199)), 100) for _ in range(4)})
    assume(all(x != 1 for x in lams))
    dims = [dim_csac(cone, [Q(11, 5)], [x]).moduli_dim for x in lams]
    assert dims == sorted(dims)
    for x, d in zip(lams, dims):
        assert d == (0 if x < 1 else 2 * m)


def test_moving_singularity_counts():
    c = moving_singularity_counts(3, [2, 0])
    assert c["lagrangian"] == [13, 15]
    assert c["special_lagrangian"] == [12, 14]
    assert c["d"] == 13 + 15
    assert expected_counts(4, 3) == (1, 8, 12)


def test_topology_fixture_feeds_dim():
    from conifold.complexes import prism
    from conifold.topology import BoundaryComponent, ComplexPair

    p, bot, top = prism(torus7())
    t = assemble_topology(ComplexPair(p, (BoundaryComponent("CS", bot), BoundaryComponent("AC", top))))
    cone = ConifoldModel(3, [ConeEndSpec("CS", T2, sym_dim=2), ConeEndSpec("AC", T2)], t)
    assert dim_csac(cone, [Q(11, 5)], [Q(3, 2)]).moduli_dim == 6
