"""Complex quadratic phase-space symbols q(x, xi) = Ax.x + 2Bx.xi + Cxi.xi.

A and C are complex symmetric n x n matrices, B is a general complex n x n
matrix entering through the pairing (Bx).xi = xi^T B x.  The coefficient
matrix of q as a form on stacked vectors (x, xi) is [[A, B^T], [B, C]].

An optional real involution kappa (kappa^2 = I) equips the symbol with the
antilinear phase-space symmetry K(x, xi) = (kappa x, -kappa^T xi) composed
with complex conjugation; pt_check verifies invariance of q under it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symplectic import PhaseVector, _stacked, lift_involution, symplectic_matrix
from .tolerances import Tolerances, resolve

__all__ = [
    "QuadraticSymbol",
    "EllipticityCertificate",
    "PTCheck",
    "evaluate",
    "polarized",
    "coefficient_matrix",
    "ellipticity_certificate",
    "pt_check",
    "fundamental_matrix",
    "ptf_check",
    "coupled_oscillator_symbol",
]

# z-grid resolution for the ellipticity phase scan
_PHASE_GRID = 720
_PHASE_REFINE = 1e-12


def _check_symmetric(m, name, tol):
    if np.abs(m - m.T).max() > tol.rel * max(1.0, np.abs(m).max()):
        raise ValueError(f"{name} must be symmetric")


@dataclass(frozen=True)
class QuadraticSymbol:
    """Coefficients (A, B, C) of a quadratic symbol, plus an optional kappa."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    kappa: np.ndarray | None = None

    def __post_init__(self):
        tol = resolve(None)
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        c = np.asarray(self.c, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("A must be square")
        n = a.shape[0]
        if b.shape != (n, n) or c.shape != (n, n):
            raise ValueError("A, B, C must all be n x n")
        _check_symmetric(a, "A", tol)
        _check_symmetric(c, "C", tol)
        object.__setattr__(self, "a", 0.5 * (a + a.T))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", 0.5 * (c + c.T))
        if self.kappa is not None:
            kappa = np.asarray(self.kappa)
            if np.iscomplexobj(kappa):
                if np.abs(kappa.imag).max() > tol.rel:
                    raise ValueError("kappa must be a real matrix")
                kappa = kappa.real
            kappa = kappa.astype(float)
            if kappa.shape != (n, n):
                raise ValueError("kappa must be n x n")
            defect = np.abs(kappa @ kappa - np.eye(n)).max()
            if defect > tol.rel * max(1.0, np.linalg.norm(kappa, 2) ** 2):
                raise ValueError(f"kappa is not an involution (|kappa^2 - I| = {defect:.3e})")
            object.__setattr__(self, "kappa", kappa)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def scaled(self, z: complex) -> "QuadraticSymbol":
        """The symbol z*q (kappa is carried along unchanged)."""
        return QuadraticSymbol(z * self.a, z * self.b, z * self.c, self.kappa)


def coefficient_matrix(q: QuadraticSymbol) -> np.ndarray:
    """2n x 2n complex symmetric Q with q(X) = X^T Q X on stacked X = (x, xi)."""
    return np.block([[q.a, q.b.T], [q.b, q.c]])


def evaluate(q: QuadraticSymbol, point) -> complex:
    u = _stacked(point)
    if u.shape[0] != 2 * q.n:
        raise ValueError("point dimension does not match the symbol")
    Q = coefficient_matrix(q)
    return complex(u @ Q @ u)


def polarized(q: QuadraticSymbol, u, v) -> complex:
    """Symmetric bilinear polarization q(U, V) with q(U, U) = q(U)."""
    uu, vv = _stacked(u), _stacked(v)
    Q = coefficient_matrix(q)
    return complex(uu @ Q @ vv)


# ---------------------------------------------------------------------------
# ellipticity


@dataclass(frozen=True)
class EllipticityCertificate:
    elliptic: bool
    z: complex | None
    min_eig: float
    witness: np.ndarray | None = None
    full_range: bool = False

    def describe(self) -> str:
        if self.elliptic:
            return f"elliptic: Re(z q) positive definite for z = {self.z}"
        if self.full_range:
            return "not elliptic (full range)"
        return "not elliptic"


def _min_eig_rotated(qre, qim, theta):
    m = np.cos(theta) * qre - np.sin(theta) * qim
    return float(np.linalg.eigvalsh(m)[0])


def ellipticity_certificate(q: QuadraticSymbol, tol: Tolerances | None = None,
                            real_only: bool = False) -> EllipticityCertificate:
    """Search for z on the unit circle with Re(z q) positive definite.

    Scans 720 grid angles and refines the best one by golden-section search
    down to an angular width of 1e-12; exact axis candidates z in
    {1, -1, i, -i} are preferred when they match the refined optimum.  With
    real_only=True the scan is restricted to z in {+1, -1}.

    Returns a certificate with the best z and min eigenvalue of Re(z q); when
    no z works the witness is a real direction attaining the nonpositive
    minimum, and for n = 1 the full_range flag distinguishes zero-free symbols
    whose range is the whole plane.
    """
    tol = resolve(tol)
    Q = np.block([[q.a, q.b.T], [q.b, q.c]])
    qre, qim = Q.real.copy(), Q.imag.copy()
    qre = 0.5 * (qre + qre.T)
    qim = 0.5 * (qim + qim.T)

    if real_only:
        candidates = [(1.0 + 0.0j, _min_eig_rotated(qre, qim, 0.0)),
                      (-1.0 + 0.0j, _min_eig_rotated(qre, qim, np.pi))]
        z, best = max(candidates, key=lambda zc: zc[1])
        theta_best = 0.0 if z == 1 else np.pi
    else:
        thetas = np.linspace(0.0, 2 * np.pi, _PHASE_GRID, endpoint=False)
        vals = np.array([_min_eig_rotated(qre, qim, t) for t in thetas])
        k = int(np.argmax(vals))
        # golden-section refinement of the grid maximum
        lo = thetas[k] - 2 * np.pi / _PHASE_GRID
        hi = thetas[k] + 2 * np.pi / _PHASE_GRID
        invphi = (np.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc = _min_eig_rotated(qre, qim, c)
        fd = _min_eig_rotated(qre, qim, d)
        while b - a > _PHASE_REFINE:
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = _min_eig_rotated(qre, qim, c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = _min_eig_rotated(qre, qim, d)
        theta_best = 0.5 * (a + b)
        best = _min_eig_rotated(qre, qim, theta_best)
        z = complex(np.cos(theta_best), np.sin(theta_best))
        # snap to an exact axis point when it does at least as well
        for zc, th in ((1 + 0j, 0.0), (-1 + 0j, np.pi), (1j, np.pi / 2), (-1j, -np.pi / 2)):
            f = _min_eig_rotated(qre, qim, th)
            if f >= best - 1e-12 * max(1.0, abs(best)):
                z, best, theta_best = zc, max(best, f), th
                break

    scale = max(1.0, float(np.abs(Q).max()))
    if best > tol.rank_rel * scale:
        return EllipticityCertificate(True, z, best)

    # not elliptic: produce a witness direction for the best rotation
    m = np.cos(theta_best) * qre - np.sin(theta_best) * qim
    w, vecs = np.linalg.eigh(m)
    witness = vecs[:, 0].copy()
    full_range = False
    if q.n == 1:
        # zero-free but non-normalizable symbols have range = C; detect by
        # the absence of real zeros on the unit circle
        phis = np.linspace(0.0, np.pi, 1440, endpoint=False)
        circle = np.stack([np.cos(phis), np.sin(phis)])
        qvals = np.einsum("ik,ij,jk->k", circle, Q, circle)
        full_range = bool(np.abs(qvals).min() > tol.rank_rel * scale)
    return EllipticityCertificate(False, None, best, witness, full_range)


# ---------------------------------------------------------------------------
# PT structure


@dataclass(frozen=True)
class PTCheck:
    holds: bool
    residual_a: float
    residual_b: float
    residual_c: float

    @property
    def max_residual(self) -> float:
        return max(self.residual_a, self.residual_b, self.residual_c)


def pt_check(q: QuadraticSymbol, tol: Tolerances | None = None) -> PTCheck:
    """Verify conj(q(kappa x, -kappa^T xi)) = q(x, xi) through the coefficient
    relations conj(A) = kappa^T A kappa, conj(B) = -kappa B kappa,
    conj(C) = kappa C kappa^T.
    """
    tol = resolve(tol)
    if q.kappa is None:
        raise ValueError("symbol carries no involution kappa")
    k = q.kappa
    scale = max(1.0, *(float(np.abs(m).max()) for m in (q.a, q.b, q.c)))
    ra = float(np.abs(np.conj(q.a) - k.T @ q.a @ k).max())
    rb = float(np.abs(np.conj(q.b) + k @ q.b @ k).max())
    rc = float(np.abs(np.conj(q.c) - k @ q.c @ k.T).max())
    thr = tol.rel * scale * max(1.0, np.linalg.norm(k, 2) ** 2)
    return PTCheck(bool(ra <= thr and rb <= thr and rc <= thr), ra, rb, rc)


# ---------------------------------------------------------------------------
# fundamental matrix


def fundamental_matrix(q: QuadraticSymbol) -> np.ndarray:
    """The matrix F with q(X, Y) = sigma(X, F Y) (half the Hamilton map).

    In coefficient blocks, F = [[B, C], [-A, -B^T]]; F is sigma-skew and its
    spectrum is symmetric under lambda -> -lambda.
    """
    return np.block([[q.b, q.c], [-q.a, -q.b.T]])


def ptf_check(q: QuadraticSymbol, f: np.ndarray | None = None,
              tol: Tolerances | None = None) -> tuple[bool, float]:
    """Check F = -(K C) F (K C) for the antilinear lift of kappa.

    With K = lift_involution(kappa) and C complex conjugation this reduces to
    the matrix identity F + K conj(F) K = 0; returns (holds, relative residual).
    """
    tol = resolve(tol)
    if q.kappa is None:
        raise ValueError("symbol carries no involution kappa")
    if f is None:
        f = fundamental_matrix(q)
    K = lift_involution(q.kappa, tol)
    resid = f + K @ np.conj(f) @ K
    scale = max(float(np.linalg.norm(f, 2)), 1e-300)
    rel = float(np.linalg.norm(resid, 2)) / scale
    return (rel <= 100 * tol.rel * max(1.0, np.linalg.norm(K, 2) ** 2), rel)


# ---------------------------------------------------------------------------
# reference family


def coupled_oscillator_symbol(omega1: float, omega2: float, g: float) -> QuadraticSymbol:
    """Two harmonic oscillators with an imaginary cross coupling.

    q = xi_1^2 + xi_2^2 + omega1^2 x_1^2 + omega2^2 x_2^2 + 2 i g x_1 x_2,
    with the sign-flip involution kappa = diag(-1, 1).  The spectrum is real
    exactly for |2 g| <= |omega1^2 - omega2^2| and the operator is similar to
    a self-adjoint one exactly when the inequality is strict.
    """
    a = np.array([[omega1 ** 2, 1j * g], [1j * g, omega2 ** 2]], dtype=complex)
    return QuadraticSymbol(a, np.zeros((2, 2)), np.eye(2),
                           kappa=np.diag([-1.0, 1.0]))
