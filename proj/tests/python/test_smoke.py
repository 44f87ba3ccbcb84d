import math

import numpy as np
import pytest

import grassgeo as gg


def scalar(z):
    return np.array([[z]], dtype=complex)


def test_exp_log_on_cp1():
    cp1 = gg.GrassmannSpace(1, 1)
    Z = gg.exp0(cp1, scalar(0.7))
    assert Z[0, 0] == pytest.approx(math.tan(0.7), abs=1e-15)
    assert gg.log0(cp1, Z)[0, 0] == pytest.approx(0.7, abs=1e-15)
    disk = gg.GrassmannSpace(1, 1, "noncompact")
    assert gg.exp0(disk, scalar(0.7))[0, 0] == pytest.approx(math.tanh(0.7), abs=1e-15)


def test_exp_matches_ode():
    s = gg.GrassmannSpace(2, 3)
    rng = np.random.default_rng(0)
    B = (rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))) * 0.3
    assert np.max(np.abs(gg.exp0(s, B) - gg.geodesic_ode(s, B, 1.0, 4000))) < 1e-6


def test_overlap_and_oracle():
    s = gg.GrassmannSpace(2, 2)
    rng = np.random.default_rng(1)
    Z1 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    Z2 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    raw, normalized = gg.normalized_overlap(s, Z1, Z2)
    assert raw == pytest.approx(np.linalg.det(np.eye(2) + Z1 @ Z2.conj().T))
    oracle = gg.plucker_overlap_oracle(s, gg.frame_of_chart(s, Z1), gg.frame_of_chart(s, Z2))
    assert abs(normalized) == pytest.approx(abs(oracle), abs=1e-10)
    D = gg.diastasis(s, Z1, Z2)
    assert D == pytest.approx(-2 * math.log(math.cos(gg.cayley_distance(s, Z1, Z2))), abs=1e-9)


def test_conjugate_times_example():
    times = gg.tangent_conjugate_times(gg.GrassmannSpace(2, 2), [0.8, 0.6], 3.0)
    assert [round(t, 4) for t, _, _ in times] == [1.9635, 2.244, 2.618]
    assert [f for _, _, f in times] == ["T2", "T1", "T2"]


def test_cut_locus_and_plucker():
    s = gg.GrassmannSpace(2, 2)
    F = np.zeros((4, 2), dtype=complex)
    F[2, 0] = F[3, 1] = 1
    assert gg.cut_locus_test(s, F)
    assert not gg.cut_locus_test(s, gg.random_plane(s, 7))
    subsets, comps = gg.plucker_embed(s, gg.random_plane(s, 7, 1))
    p = dict(zip(map(tuple, subsets), comps))
    assert abs(p[0, 1] * p[2, 3] - p[0, 2] * p[1, 3] + p[0, 3] * p[1, 2]) < 1e-12


def test_topology():
    assert gg.euler_characteristic(2, 2) == 6
    assert len(gg.schubert_cells(3, 2)) == 10
    report = gg.characteristic_report(1, 3, [1.0, 2.0, 3.5, 5.0])
    assert set(report.values()) == {4}


def test_errors_carry_kind():
    disk = gg.GrassmannSpace(1, 1, "noncompact")
    with pytest.raises(gg.GrassgeoError) as info:
        gg.log0(disk, scalar(1.5))
    assert info.value.args[1] == "domain"
    with pytest.raises(gg.GrassgeoError) as info:
        gg.critical_points(gg.GrassmannSpace(1, 1), [1.0, 1.0])
    assert info.value.args[1] == "degenerate_spec"
