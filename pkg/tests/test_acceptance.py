"""Acceptance suite: one test (or group) per criterion, each at its stated
tolerance and time budget.  The terminal summary prints a PASS/FAIL line per
criterion (see conftest.py)."""

import random
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from conifold.complexes import circle, disk, prism, torus7, torus_minus_disk
from conifold.config import build_model, load_config
from conifold.fredholm import ConeEndSpec, ConifoldModel, ac_laplacian_dims, index_change, laplacian_dims
from conifold.mesh import icosphere, mesh_eigenpairs, mesh_spectrum
from conifold.moduli import dim_cs, dim_csac, obstruction_model_dim, stability_check
from conifold.spectra import flat_torus_spectrum, harvey_lawson_gram, sphere_spectrum
from conifold.topology import BoundaryComponent, ComplexPair, assemble_topology, long_exact_sequence, topology_from_betti
from conifold.weights import exceptional_in_interval, is_nonexceptional

from oracles import fd_cone_harmonic_rates, harmonic_dim, hl_lattice_counts, stable_cone_spectrum

Q = Fraction
CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def criterion(number, text):
    return pytest.mark.criterion(number, text)


@criterion(1, "Harvey-Lawson T^2 cone stable, counts (1,6,6) against lattice enumeration")
def test_c1_hl_stability():
    t0 = time.perf_counter()
    spec = flat_torus_spectrum(harvey_lawson_gram(3), 6)
    rep = stability_check(ConeEndSpec("CS", spec, sym_dim=2), 3)
    elapsed = time.perf_counter() - t0
    oracle = hl_lattice_counts(10)
    # rates in [0, 2] are eigenvalues in [0, 2m] = [0, 6]
    low = {e: c for e, c in oracle.items() if e <= 6}
    assert low == {0: 1, 2: 6, 6: 6}
    assert rep.observed_counts == (low[0], low[2], low[6]) == rep.expected_counts == (1, 6, 6)
    assert rep.extra_exceptional == []
    assert rep.stable
    assert elapsed < 1.0


def _cone(spec, m, sym_dim, topo):
    return ConifoldModel(m, [ConeEndSpec("CS", spec, sym_dim=sym_dim), ConeEndSpec("AC", spec)], topo)


@criterion(2, "cone example: dims 0, 0, 2m on (2-m,0), (0,1), (1,2)")
def test_c2_cone_example():
    p, bot, top = prism(torus7())
    topo = assemble_topology(ComplexPair(p, (BoundaryComponent("CS", bot), BoundaryComponent("AC", top))))
    cfg, base = load_config(CONFIGS / "stable-cone-m4.json")
    fixture = build_model(cfg, base)
    t0 = time.perf_counter()
    hl = _cone(flat_torus_spectrum(harvey_lawson_gram(3), 12), 3, 2, topo)
    got_hl = [dim_csac(hl, [Q(11, 5)], [lam]).moduli_dim for lam in (Q(-1, 2), Q(1, 2), Q(3, 2))]
    got_fix = [dim_csac(fixture, [Q(11, 5)], [lam]).moduli_dim for lam in (Q(-3, 2), Q(1, 2), Q(3, 2))]
    elapsed = time.perf_counter() - t0
    assert got_hl == [0, 0, 6]
    assert got_fix == [0, 0, 8]
    assert elapsed < 1.0


@criterion(3, "sphere links: exceptional weights 0..K with harmonic-polynomial multiplicities")
@pytest.mark.parametrize("m", [3, 4, 5])
def test_c3_sphere_weights(m):
    for k_max in range(5):
        spec = sphere_spectrum(m, k_max * (k_max + m - 2))
        got = [(w.gamma, w.multiplicity) for w in exceptional_in_interval(spec, m, 0, k_max)]
        assert got == [(k, harmonic_dim(m, k)) for k in range(k_max + 1)]


@criterion(4, "icosphere (2562 vertices): S^2 clusters within 2%, residuals <= 1e-8")
def test_c4_icosphere():
    t0 = time.perf_counter()
    mesh = icosphere(4)
    assert mesh.n_vertices >= 2562
    pairs = mesh_eigenpairs(mesh, 9)
    spec = mesh_spectrum(mesh, 9, 0.05)
    elapsed = time.perf_counter() - t0
    assert np.all(pairs.residuals <= 1e-8)
    got = [(e.value, e.multiplicity) for e in spec.entries[:3]]
    assert [mult for _, mult in got] == [1, 3, 5]
    assert abs(got[0][0]) <= 1e-8
    for (v, _), ev in zip(got[1:], (2, 6)):
        assert abs(v - ev) <= 0.02 * ev
    assert elapsed < 30.0


def _random_model(rng: random.Random) -> ConifoldModel:
    ends = []
    for _ in range(rng.randint(1, 3)):
        a = Q(rng.randint(2, 8), 4)
        b = Q(rng.randint(-1, 1), 4)
        d = Q(rng.randint(2, 8), 4)
        ends.append(ConeEndSpec(rng.choice(["CS", "AC"]), flat_torus_spectrum([[a, b], [b, d]], 8)))
    return ConifoldModel(3, ends)


def _random_rates(rng, mdl, lo, hi):
    while True:
        w = [Q(rng.randint(lo, hi), 10) for _ in range(mdl.e)]
        if is_nonexceptional(w, mdl.pairs()):
            return w


@criterion(5, "200 random models: window isomorphism, additive index change, dims match index change")
def test_c5_fredholm_window():
    rng = random.Random(20240501)
    for _ in range(200):
        mdl = _random_model(rng)
        window = [Q(-rng.randint(1, 99), 100) for _ in range(mdl.e)]
        rep = laplacian_dims(mdl, window)
        # pure CS models act on the zero-mean target in the window
        assert (rep.ker_dim - (0 if mdl.l else 1), rep.coker_dim) == (0, 0)
        assert rep.full_target_index == 0
        w1, w2, w3 = (_random_rates(rng, mdl, -9, 19) for _ in range(3))
        assert index_change(mdl, w1, w3) == index_change(mdl, w1, w2) + index_change(mdl, w2, w3)
        assert index_change(mdl, w1, w2) == -index_change(mdl, w2, w1)
        rep = laplacian_dims(mdl, w1)
        assert rep.full_target_index == index_change(mdl, window, w1)
        if rep.ker_dim is not None:
            shift = 1 if rep.target == "zero-mean" else 0
            assert rep.ker_dim - rep.coker_dim - shift == index_change(mdl, window, w1)


@criterion(6, "stable synthetic cones: non-stable dim_O bookkeeping is 0 at mu = 2 + eps")
def test_c6_stability_identity():
    rng = random.Random(7)
    for _ in range(100):
        m = rng.randint(3, 7)
        s = rng.randint(1, 3)
        syms = [rng.randint(0, m * m - 1) for _ in range(s)]
        ends = [ConeEndSpec("CS", stable_cone_spectrum(m, g), sym_dim=g) for g in syms]
        mdl = ConifoldModel(m, ends, topology_from_betti({"b1": s, "b1_c": s}, ["CS"] * s))
        mu = [2 + Q(rng.randint(1, 49), 100) for _ in range(s)]
        rep = dim_cs(mdl, mu)
        assert all(r.stable for r in rep.stability)
        assert obstruction_model_dim(rep.fredholm.coker_dim, m, syms) == 0
        assert rep.dim_O == 0


def _fixtures():
    cyl, bot, top = prism(circle(4))
    tcyl, tbot, ttop = prism(torus7())
    tmd, rim = torus_minus_disk()
    return {
        "cylinder": ComplexPair(cyl, (BoundaryComponent("CS", bot), BoundaryComponent("AC", top))),
        "torus": ComplexPair(torus7(), ()),
        "torus_cylinder": ComplexPair(tcyl, (BoundaryComponent("CS", tbot), BoundaryComponent("AC", ttop))),
        "disk": ComplexPair(disk(6), (BoundaryComponent("AC", circle(6)),)),
        "torus_minus_disk": ComplexPair(tmd, (BoundaryComponent("CS", rim),)),
    }


@criterion(7, "topology: image(H1_c -> H1) = b1_c - e + 1 two ways, exact long sequences")
@pytest.mark.parametrize("name", list(_fixtures()))
def test_c7_topology(name):
    pair = _fixtures()[name]
    t = assemble_topology(pair)
    assert t.checks["dim_h1c_tilde_direct"] == t.checks["dim_h1c_tilde_sequence"] == t.dim_h1c_tilde
    if t.e:
        assert t.dim_h1c_tilde == t.b1_c - t.e + 1
    nodes = long_exact_sequence((pair.ambient, pair.boundary)) + long_exact_sequence((pair.ambient, pair.subcomplex("CS")))
    assert nodes and all(n.exact for n in nodes)


@criterion(8, "finite-difference cone oracle: separated harmonic modes match ac kernel (0.5, 1.2)")
def test_c8_fd_kernel_oracle():
    t0 = time.perf_counter()
    rates, residuals, vals = fd_cone_harmonic_rates(n=64, nz=200, T=2.0, m=3, count=20)
    square = ConifoldModel(3, [ConeEndSpec("AC", flat_torus_spectrum([[1, 0], [0, 1]], 12))])
    for lam in (0.5, 1.2):
        # every link eigenvalue below lam (lam + 1) must be among the computed ones
        assert vals.max() > lam * (lam + 1)
        detected = int(np.sum((residuals < 1e-6) & (rates >= 0) & (rates < lam)))
        assert detected == ac_laplacian_dims(square, [Q(lam).limit_denominator(10)]).ker_dim
    assert time.perf_counter() - t0 < 60.0
