import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factories import random_psh_weight, rng
from ptquad import (LagrangianPlane, PhaseVector, WeightForm, form_signature,
                    lift_involution, positivity_form, symplectic_form,
                    symplectic_matrix)
from ptquad.symplectic import (antilinear_as_real, complex_unstack,
                               graph_matrix, linear_as_real,
                               multiplication_by_i, plh_herm_split, real_stack)


def test_symplectic_matrix_squares_to_minus_one():
    for n in (1, 2, 5):
        J = symplectic_matrix(n)
        assert np.array_equal(J @ J, -np.eye(2 * n))


def test_symplectic_form_convention():
    # sigma((x, xi), (y, eta)) = xi . y - eta . x, no conjugation anywhere
    u = PhaseVector([1.0], [2.0j])
    v = PhaseVector([3.0], [5.0])
    assert symplectic_form(u, v) == pytest.approx(2.0j * 3.0 - 5.0 * 1.0)
    J = symplectic_matrix(1)
    assert symplectic_form(u, v) == pytest.approx(u.stacked @ J @ v.stacked)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_symplectic_form_is_antisymmetric_bilinear(seed):
    r = rng(seed)
    n = int(r.integers(1, 4))
    u = r.standard_normal(2 * n) + 1j * r.standard_normal(2 * n)
    v = r.standard_normal(2 * n) + 1j * r.standard_normal(2 * n)
    w = r.standard_normal(2 * n) + 1j * r.standard_normal(2 * n)
    s = symplectic_form
    assert s(u, v) == pytest.approx(-s(v, u))
    assert s(u, v + 2.5j * w) == pytest.approx(s(u, v) + 2.5j * s(u, w))


def test_phase_vector_stacking_roundtrip():
    u = PhaseVector([1.0, 2.0], [3.0j, 4.0])
    again = PhaseVector.from_stacked(u.stacked)
    assert np.array_equal(again.x, u.x)
    assert np.array_equal(again.xi, u.xi)
    with pytest.raises(ValueError):
        PhaseVector.from_stacked(np.ones(3))


def test_real_linear_representations():
    r = rng(7)
    m = r.standard_normal((3, 3)) + 1j * r.standard_normal((3, 3))
    z = r.standard_normal(3) + 1j * r.standard_normal(3)
    got = complex_unstack(linear_as_real(m) @ real_stack(z))
    assert np.allclose(got, m @ z)
    got = complex_unstack(antilinear_as_real(m) @ real_stack(z))
    assert np.allclose(got, m @ np.conj(z))
    assert np.allclose(multiplication_by_i(3), linear_as_real(1j * np.eye(3)))


def test_lift_involution_is_antisymplectic():
    kappa = np.array([[-1.0, 0.0], [0.0, 1.0]])
    K = lift_involution(kappa)
    assert np.allclose(K @ K, np.eye(4))
    r = rng(3)
    u = r.standard_normal(4) + 1j * r.standard_normal(4)
    v = r.standard_normal(4) + 1j * r.standard_normal(4)
    assert symplectic_form(K @ u, K @ v) == pytest.approx(-symplectic_form(u, v))
    assert symplectic_form(K @ u, v) == pytest.approx(-symplectic_form(u, K @ v))


def test_lift_involution_rejects_non_involutions():
    with pytest.raises(ValueError):
        lift_involution(np.array([[2.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        lift_involution(np.array([[1j, 0.0], [0.0, 1.0]]))


# ---------------------------------------------------------------------------
# Lagrangian planes


def test_graph_plane_roundtrip():
    r = rng(11)
    a = r.standard_normal((3, 3)) + 1j * r.standard_normal((3, 3))
    a = 0.5 * (a + a.T)
    plane = LagrangianPlane.from_graph(a)
    assert plane.isotropy_defect() < 1e-12
    assert np.allclose(plane.graph_matrix(), a)
    y = r.standard_normal(3)
    assert plane.contains(np.concatenate([y, a @ y]))
    assert not plane.contains(np.concatenate([y, a @ y + 0.1]))


def test_graph_matrix_requires_transversality():
    # the fiber {x = 0} is Lagrangian but has no graph over x
    fiber = np.vstack([np.zeros((2, 2)), np.eye(2)])
    with pytest.raises(ValueError, match="transversal"):
        graph_matrix(fiber)


def test_from_graph_rejects_asymmetric():
    with pytest.raises(ValueError, match="symmetric"):
        LagrangianPlane.from_graph(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_from_frame_rejects_non_isotropic():
    # span{e_x, e_xi} in n = 2: sigma(e_x, e_xi) = 1
    cols = np.zeros((4, 2))
    cols[0, 0] = 1.0
    cols[2, 1] = 1.0
    with pytest.raises(ValueError, match="isotropic"):
        LagrangianPlane.from_frame(cols)


def test_from_frame_rejects_rank_deficiency():
    cols = np.zeros((4, 2), dtype=complex)
    cols[0, 0] = 1.0
    cols[0, 1] = 1.0 + 1e-14
    with pytest.raises(ValueError, match="dependent"):
        LagrangianPlane.from_frame(cols)


# ---------------------------------------------------------------------------
# weights


def test_weight_value_matches_holomorphic_parts():
    # Phi(x) = x^T L xbar + Re(x^T P x), L indexed as Phi''_{x_j, xbar_k}
    r = rng(23)
    w = random_psh_weight(r, 3)
    L = w.levi()
    P = w.holomorphic_hessian()
    for _ in range(5):
        x = r.standard_normal(3) + 1j * r.standard_normal(3)
        expected = np.real(x @ L @ np.conj(x)) + np.real(x @ P @ x)
        assert w.value(x) == pytest.approx(expected)


def test_holomorphic_parts_roundtrip():
    r = rng(5)
    w = random_psh_weight(r, 2)
    again = WeightForm.from_holomorphic_parts(w.levi(), w.holomorphic_hessian())
    assert np.allclose(again.matrix, w.matrix)
    assert np.allclose(again.levi(), w.levi())
    assert np.allclose(again.holomorphic_hessian(), w.holomorphic_hessian())


def test_plh_herm_split():
    r = rng(31)
    w = random_psh_weight(r, 2)
    plh, herm = plh_herm_split(w)
    assert np.allclose(plh.matrix + herm.matrix, w.matrix)
    assert np.abs(plh.levi()).max() < 1e-12
    assert np.allclose(herm.levi(), w.levi())
    x = r.standard_normal(2) + 1j * r.standard_normal(2)
    assert plh.value(1j * x) == pytest.approx(-plh.value(x))
    assert herm.value(1j * x) == pytest.approx(herm.value(x))


def test_graph_plane_needs_pluriharmonic():
    r = rng(37)
    w = random_psh_weight(r, 2)
    with pytest.raises(ValueError, match="pluriharmonic"):
        w.graph_plane()
    plh, _ = plh_herm_split(w)
    plane = plh.graph_plane()
    x = r.standard_normal(2) + 1j * r.standard_normal(2)
    assert plane.contains(np.concatenate([x, plh.xi_section(x)]))


def test_iota_fixes_the_weight_plane():
    r = rng(41)
    for n in (1, 2, 3):
        w = random_psh_weight(r, n)
        N = w.iota_conjugation()
        # involution: applying twice is the identity
        assert np.allclose(N @ np.conj(N), np.eye(2 * n), atol=1e-10)
        x = r.standard_normal(n) + 1j * r.standard_normal(n)
        v = np.concatenate([x, w.xi_section(x)])
        assert np.allclose(N @ np.conj(v), v, atol=1e-10 * max(1, np.abs(v).max()))


def test_iota_frozen_quarter_weight():
    # Phi = |x|^2 / 4: iota(x, xi) = (-2i conj(xi), -(i/2) conj(x))
    w = WeightForm(0.25 * np.eye(2))
    N = w.iota_conjugation()
    expected = np.array([[0.0, -2.0j], [-0.5j, 0.0]])
    assert np.allclose(N, expected)


def test_iota_requires_nondegenerate_levi():
    w = WeightForm(np.diag([1.0, -1.0]))  # Re(x^2): pluriharmonic
    with pytest.raises(ValueError, match="Levi"):
        w.iota_conjugation()


# ---------------------------------------------------------------------------
# positivity


def test_positivity_form_on_graph_planes():
    # for the real-space pairing, the Gram of a graph plane is 2 Im A
    r = rng(43)
    for n in (1, 2, 3):
        a = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
        a = 0.5 * (a + a.T)
        plane = LagrangianPlane.from_graph(a)
        got = form_signature(positivity_form(plane))
        want = form_signature(2.0 * a.imag)
        assert got == want


def test_positivity_form_positive_plane():
    plane = LagrangianPlane.from_graph(1j * np.eye(2))
    gram = positivity_form(plane)
    w = np.linalg.eigvalsh(gram)
    assert w[0] > 0


def test_weighted_positivity_fiber_is_negative():
    r = rng(47)
    for n in (1, 2, 3):
        w = random_psh_weight(r, n)
        fiber = np.vstack([np.zeros((n, n)), np.eye(n)])
        gram = positivity_form(fiber, weight=w)
        assert np.linalg.eigvalsh(gram)[-1] < 0


def test_weighted_positivity_plh_plane_is_positive():
    r = rng(53)
    for n in (1, 2, 3):
        w = random_psh_weight(r, n)
        plh, _ = plh_herm_split(w)
        gram = positivity_form(plh.graph_plane(), weight=w)
        assert np.linalg.eigvalsh(gram)[0] > 0


def test_weight_plane_sigma_is_real():
    # Lambda_Phi is I-Lagrangian: sigma takes real values between its points
    r = rng(59)
    n = 3
    w = random_psh_weight(r, n)
    for _ in range(5):
        x = r.standard_normal(n) + 1j * r.standard_normal(n)
        y = r.standard_normal(n) + 1j * r.standard_normal(n)
        u = np.concatenate([x, w.xi_section(x)])
        v = np.concatenate([y, w.xi_section(y)])
        s = symplectic_form(u, v)
        assert abs(s.imag) < 1e-10 * max(1.0, abs(s))


def test_form_signature():
    assert form_signature(np.diag([2.0, -1.0, 0.0])) == (1, 1, 1)
    assert form_signature(np.zeros((2, 2))) == (0, 0, 2)
