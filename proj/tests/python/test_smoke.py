"""End-to-end smoke checks of the python bindings."""

import cmath
import math

import pytest

import tmcompose as tm


def test_matrix_basics():
    k0 = tm.k_matrix(0.0)
    assert k0.a11 == 1 and k0.a12 == 1 and k0.a21 == -1 and k0.a22 == -1
    prod = k0 @ k0
    assert tm.max_abs_norm(prod) < 1e-15
    assert abs(tm.det(tm.identity()) - 1) < 1e-15
    inv = tm.inverse_unimodular(tm.Mat2C(2, 1, 1, 1))
    assert inv.tolist() == [[1, -1], [-1, 2]]


def test_zero_potential_transfer_is_identity():
    res = tm.transfer_matrix(tm.Potential(), 1.0, 0.0, 1.0)
    assert tm.max_abs_diff(res.matrix, tm.identity()) < 1e-14
    assert res.det_drift < 1e-14


def test_barrier_matches_oracle():
    v0 = 1.2 + 0.4j
    v = tm.Potential([tm.PotentialPiece.constant(0.0, 1.0, v0)])
    res = tm.transfer_matrix(v, 0.9)
    oracle = tm.rectangular_barrier_oracle(v0, 1.0, 0.9)
    assert tm.max_abs_diff(res.matrix, oracle) < 1e-8
    amps = tm.amplitudes_from_transfer(res.matrix, 0.9)
    back = tm.transfer_from_amplitudes(amps)
    assert tm.max_abs_diff(back, res.matrix) < 1e-10


def test_overlap_correction_paths_agree():
    v1 = tm.Potential([tm.PotentialPiece.gaussian_bump(-1.2, 0.3, 1.1 - 0.4j, -0.5, 0.45)])
    v2 = tm.Potential([tm.PotentialPiece.gaussian_bump(0.0, 1.4, -0.7 + 0.9j, 0.6, 0.5)])
    kind, ell, start = tm.support_relation(v1, v2)
    assert kind == "weakly_precedes"
    assert ell == pytest.approx(0.3)
    assert start == pytest.approx(0.0)

    s0 = tm.exact_overlap_correction_on(v1, v2, 1.0, 0.0)
    assert tm.max_abs_diff(s0, tm.identity()) < 1e-14

    j1 = v1.endpoint_jet(0.3, "left", 3)
    j2 = v2.endpoint_jet(0.0, "right", 3)
    cfg = tm.PropagatorConfig(rel_tol=1e-12, abs_tol=1e-14)
    for ell_i in (0.05, 0.1):
        exact = tm.exact_overlap_correction_on(v1.translated(ell_i - 0.3), v2, 1.0, ell_i, cfg)
        series = tm.series_overlap_correction(j1, j2, 1.0, ell_i, 6)
        assert tm.max_abs_diff(exact, series) < 50 * ell_i**7


def test_series_routes_cross_check():
    j1 = tm.Jet([0.4 - 0.2j, 0.3 + 0.1j, -0.5j, 0.2])
    j2 = tm.Jet([-0.3 + 0.6j, 0.1, 0.4 - 0.4j, -0.1j])
    gen = tm.s_series_endpoint_form(j1, j2, 1.3, 6)
    ref = tm.overlap_series_coefficients(j1, j2, 1.3, 6)
    for n in range(3, 7):
        assert tm.max_abs_diff(gen[n], ref[n]) < 1e-12


def test_invisibility_amplitudes():
    spec = tm.UnidirectionalSpec(1e-3 + 0j, 1.0, 1)
    assert spec.length == pytest.approx(4 * math.pi)
    a = tm.perturbative_amplitudes(spec)
    assert a.r_left == 0
    assert a.r_right == pytest.approx(-4e-3j * math.pi + 8e-6j * math.pi, abs=1e-12)

    v = tm.build_potential(spec)
    res = tm.transfer_matrix(v, spec.resonant_k, cfg=tm.PropagatorConfig(1e-12, 1e-14))
    num = tm.amplitudes_from_transfer(res.matrix, spec.resonant_k)
    assert abs(num.r_right - a.r_right) < 1e-7
    assert abs(num.r_left) < 1e-7


def test_generalized_compose_identity():
    v1 = tm.Potential([tm.PotentialPiece.polynomial(-1.0, 0.0, [0.9 + 0.4j, 0.3])])
    v2 = tm.Potential([tm.PotentialPiece.polynomial(0.0, 1.0, [-0.7 + 0.6j, -0.2])])
    m = tm.generalized_compose(v1, v2, 1.0, method="exact")
    direct = tm.transfer_matrix_sum([v1, v2], 1.0, -1.0, 1.0)
    assert tm.max_abs_diff(m, direct.matrix) < 1e-8


def test_spectral_singularity_raises():
    with pytest.raises(Exception) as exc:
        tm.amplitudes_from_transfer(tm.Mat2C(1, 1, 0, 0), 1.0)
    assert "singular" in str(exc.value).lower()


def test_jet_arithmetic():
    j = tm.Jet([1.0, 1.0])
    sq = j * j
    assert sq[0] == 1 and sq[1] == 2
    shifted = tm.Jet([2.0, -1.0, 4.0, 0.5]).shifted(0.0)
    assert shifted.derivatives() == [2.0, -1.0, 4.0, 0.5]
    with pytest.raises(Exception):
        tm.Jet([1.0]).differentiated()
