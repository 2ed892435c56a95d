"""Symbol container, ellipticity scan, PT relations, fundamental matrix."""

import numpy as np
import pytest

from ptquad import (
    QuadraticSymbol,
    coefficient_matrix,
    coupled_oscillator_symbol,
    ellipticity_certificate,
    evaluate,
    fundamental_matrix,
    polarized,
    pt_check,
    ptf_check,
    symplectic_form,
)

from factories import rng, random_elliptic_symbol, random_signature


def osc(g=1.0):
    return coupled_oscillator_symbol(2.0, 1.0, g)


# ---------------------------------------------------------------------------
# construction and validation


def test_symbol_symmetrizes_storage():
    a = np.array([[1.0, 2.0 + 1e-12], [2.0, 3.0]])
    q = QuadraticSymbol(a, np.zeros((2, 2)), np.eye(2))
    assert np.array_equal(q.a, q.a.T)


def test_symbol_rejects_nonsquare():
    with pytest.raises(ValueError, match="square"):
        QuadraticSymbol(np.ones((2, 3)), np.zeros((2, 2)), np.eye(2))


def test_symbol_rejects_shape_mismatch():
    with pytest.raises(ValueError, match="n x n"):
        QuadraticSymbol(np.eye(2), np.zeros((3, 3)), np.eye(2))


@pytest.mark.parametrize("slot", ["A", "C"])
def test_symbol_rejects_asymmetric_blocks(slot):
    bad = np.array([[1.0, 1.0], [0.0, 1.0]])
    blocks = {"A": np.eye(2), "C": np.eye(2)}
    blocks[slot] = bad
    with pytest.raises(ValueError, match=f"{slot} must be symmetric"):
        QuadraticSymbol(blocks["A"], np.zeros((2, 2)), blocks["C"])


def test_symbol_rejects_complex_kappa():
    with pytest.raises(ValueError, match="real"):
        QuadraticSymbol(np.eye(2), np.zeros((2, 2)), np.eye(2),
                        kappa=1j * np.eye(2))


def test_symbol_rejects_non_involution_kappa():
    with pytest.raises(ValueError, match="involution"):
        QuadraticSymbol(np.eye(2), np.zeros((2, 2)), np.eye(2),
                        kappa=2.0 * np.eye(2))


def test_scaled_carries_kappa():
    q = osc().scaled(1j)
    assert q.kappa is not None
    assert np.allclose(q.a, 1j * osc().a)


def test_evaluate_matches_block_formula():
    r = rng(3)
    q = random_elliptic_symbol(r, 2)
    x = r.standard_normal(2)
    xi = r.standard_normal(2)
    direct = x @ q.a @ x + 2 * (q.b @ x) @ xi + xi @ q.c @ xi
    assert evaluate(q, np.concatenate([x, xi])) == pytest.approx(direct)


def test_polarized_recovers_evaluate():
    r = rng(4)
    q = random_elliptic_symbol(r, 3)
    u = r.standard_normal(6)
    v = r.standard_normal(6)
    assert polarized(q, u, u) == pytest.approx(evaluate(q, u))
    # polarization identity
    quad = 0.25 * (evaluate(q, u + v) - evaluate(q, u - v))
    assert polarized(q, u, v) == pytest.approx(quad)


def test_coefficient_matrix_blocks():
    q = osc()
    Q = coefficient_matrix(q)
    assert np.array_equal(Q[:2, :2], q.a)
    assert np.array_equal(Q[2:, 2:], q.c)
    assert np.array_equal(Q[2:, :2], q.b)
    assert np.array_equal(Q, Q.T)


# ---------------------------------------------------------------------------
# ellipticity


def test_oscillator_is_elliptic_at_z_one():
    cert = ellipticity_certificate(osc())
    assert cert.elliptic
    assert cert.z == 1
    # Re Q = diag(4, 1, 1, 1) minus nothing; coupling is purely imaginary
    assert cert.min_eig == pytest.approx(1.0)
    assert "positive definite" in cert.describe()


def test_rotated_symbol_certificate_rotates_back():
    theta = 0.7
    q = osc().scaled(np.exp(-1j * theta))
    cert = ellipticity_certificate(q)
    assert cert.elliptic
    assert cert.z == pytest.approx(np.exp(1j * theta), abs=1e-6)


def test_real_only_scan_sticks_to_real_axis():
    cert = ellipticity_certificate(osc(), real_only=True)
    assert cert.elliptic and cert.z == 1
    flipped = ellipticity_certificate(osc().scaled(-1), real_only=True)
    assert flipped.elliptic and flipped.z == -1


def test_indefinite_symbol_not_elliptic_with_witness():
    q = QuadraticSymbol(np.array([[1.0]]), np.zeros((1, 1)), np.array([[-1.0]]))
    cert = ellipticity_certificate(q)
    assert not cert.elliptic
    assert cert.witness is not None
    assert not cert.full_range
    assert cert.describe() == "not elliptic"
    # the witness direction really does pin the nonpositive minimum
    val = evaluate(q, cert.witness)
    assert abs(val) <= 1.0 + 1e-9


def test_squared_complex_line_has_full_range():
    # q = (x + i xi)^2 never vanishes on the real unit circle but its range
    # is the whole plane, so no half-plane rotation can work
    q = QuadraticSymbol(np.array([[1.0]]), np.array([[1j]]), np.array([[-1.0]]))
    cert = ellipticity_certificate(q)
    assert not cert.elliptic
    assert cert.full_range
    assert "full range" in cert.describe()


def test_certificate_value_positivity():
    r = rng(11)
    for seed in range(5):
        q = random_elliptic_symbol(rng(seed), 2)
        cert = ellipticity_certificate(q)
        assert cert.elliptic
        for _ in range(10):
            u = r.standard_normal(4)
            assert (cert.z * evaluate(q, u)).real >= cert.min_eig * (u @ u) - 1e-9


# ---------------------------------------------------------------------------
# PT relations


def test_oscillator_pt_holds():
    chk = pt_check(osc())
    assert chk.holds
    assert chk.max_residual == 0.0


def test_real_coupling_breaks_pt():
    a = np.array([[4.0, 1.0], [1.0, 1.0]], dtype=complex)
    q = QuadraticSymbol(a, np.zeros((2, 2)), np.eye(2), kappa=np.diag([-1.0, 1.0]))
    chk = pt_check(q)
    assert not chk.holds
    assert chk.residual_a == pytest.approx(2.0)
    assert chk.residual_b == 0.0 and chk.residual_c == 0.0


def test_pt_check_requires_kappa():
    q = QuadraticSymbol(np.eye(2), np.zeros((2, 2)), np.eye(2))
    with pytest.raises(ValueError, match="kappa"):
        pt_check(q)
    with pytest.raises(ValueError, match="kappa"):
        ptf_check(q)


def test_pt_projected_symbol_passes():
    r = rng(8)
    kappa = random_signature(r, 3)
    q = random_elliptic_symbol(r, 3, pt_kappa=kappa)
    assert pt_check(q).holds


# ---------------------------------------------------------------------------
# fundamental matrix


def test_fundamental_matrix_polarization():
    r = rng(5)
    q = random_elliptic_symbol(r, 3)
    f = fundamental_matrix(q)
    for _ in range(5):
        u = r.standard_normal(6)
        v = r.standard_normal(6)
        assert polarized(q, u, v) == pytest.approx(
            complex(symplectic_form(u, f @ v)))


def test_fundamental_matrix_skew_and_paired_spectrum():
    r = rng(6)
    q = random_elliptic_symbol(r, 2)
    f = fundamental_matrix(q)
    J = np.block([[np.zeros((2, 2)), -np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    assert np.allclose(J @ f, (J @ f).T)
    ev = np.linalg.eigvals(f)
    paired = sorted(np.round(-ev, 8).tolist(), key=lambda z: (z.real, z.imag))
    assert np.allclose(sorted(np.round(ev, 8).tolist(),
                              key=lambda z: (z.real, z.imag)), paired)


def test_oscillator_fundamental_eigenvalues_decoupled():
    f = fundamental_matrix(coupled_oscillator_symbol(2.0, 1.0, 0.0))
    ev = sorted(np.linalg.eigvals(f), key=lambda z: z.imag)
    assert np.allclose(ev, [-2j, -1j, 1j, 2j])


def test_ptf_holds_for_oscillator():
    holds, resid = ptf_check(osc())
    assert holds
    assert resid < 1e-14


def test_ptf_fails_without_symmetry():
    a = np.array([[4.0, 1.0], [1.0, 1.0]], dtype=complex)
    q = QuadraticSymbol(a, np.zeros((2, 2)), np.eye(2), kappa=np.diag([-1.0, 1.0]))
    holds, resid = ptf_check(q)
    assert not holds
    assert resid > 1e-2


def test_oscillator_symbol_layout():
    q = osc(0.5)
    assert q.a[0, 1] == 0.5j
    assert np.array_equal(q.c, np.eye(2))
    assert np.array_equal(q.kappa, np.diag([-1.0, 1.0]))
