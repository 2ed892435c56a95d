"""Complex symplectic linear algebra on C^{2n} = C^n_x x C^n_xi.

Phase-space vectors are stacked as (x, xi).  The complex symplectic form is

    sigma((x, xi), (y, eta)) = xi . y - eta . x,

bilinear (no complex conjugation).  Real quadratic weights on C^n are kept as
real symmetric matrices in the coordinates (Re x, Im x); antilinear maps are
represented either by their conjugation matrix N (the map z -> N conj(z)) or,
when a real-linear matrix is needed, by the (Re, Im)-stacked 4n x 4n form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tolerances import Tolerances, resolve

__all__ = [
    "PhaseVector",
    "LagrangianPlane",
    "WeightForm",
    "symplectic_matrix",
    "symplectic_form",
    "lift_involution",
    "positivity_form",
    "graph_matrix",
    "plh_herm_split",
    "form_signature",
    "real_stack",
    "complex_unstack",
    "linear_as_real",
    "antilinear_as_real",
    "multiplication_by_i",
]


# ---------------------------------------------------------------------------
# basic objects


def symplectic_matrix(n: int) -> np.ndarray:
    """Matrix J of the symplectic form: sigma(u, v) = u^T J v."""
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = -np.eye(n)
    J[n:, :n] = np.eye(n)
    return J


@dataclass(frozen=True)
class PhaseVector:
    """A point (x, xi) of complex phase space."""

    x: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=complex))
        xi = np.atleast_1d(np.asarray(self.xi, dtype=complex))
        if x.ndim != 1 or xi.ndim != 1 or x.shape != xi.shape:
            raise ValueError("x and xi must be 1d arrays of equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xi", xi)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def stacked(self) -> np.ndarray:
        return np.concatenate([self.x, self.xi])

    @classmethod
    def from_stacked(cls, u) -> "PhaseVector":
        u = np.asarray(u, dtype=complex)
        if u.ndim != 1 or u.shape[0] % 2:
            raise ValueError("stacked phase vector must have even length")
        n = u.shape[0] // 2
        return cls(u[:n], u[n:])


def _stacked(u) -> np.ndarray:
    if isinstance(u, PhaseVector):
        return u.stacked
    u = np.asarray(u, dtype=complex)
    if u.ndim != 1 or u.shape[0] % 2:
        raise ValueError("phase vector must be a PhaseVector or a 1d array of even length")
    return u


def symplectic_form(u, v) -> complex:
    """sigma(u, v) = xi . y - eta . x for u = (x, xi), v = (y, eta).

    Accepts PhaseVector instances or stacked 2n-arrays.  Bilinear: no
    conjugation is applied to either argument.
    """
    uu, vv = _stacked(u), _stacked(v)
    if uu.shape != vv.shape:
        raise ValueError("phase vectors must have equal dimension")
    n = uu.shape[0] // 2
    return complex(uu[n:] @ vv[:n] - vv[n:] @ uu[:n])


# ---------------------------------------------------------------------------
# real-linear representations of antilinear maps


def real_stack(z) -> np.ndarray:
    """C^m -> R^{2m}, z -> (Re z, Im z)."""
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag])


def complex_unstack(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    m = w.shape[0] // 2
    return w[:m] + 1j * w[m:]


def linear_as_real(m) -> np.ndarray:
    """Real 2m x 2m matrix of the complex-linear map z -> M z on (Re, Im)."""
    m = np.asarray(m, dtype=complex)
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def antilinear_as_real(n) -> np.ndarray:
    """Real 2m x 2m matrix of the antilinear map z -> N conj(z) on (Re, Im)."""
    n = np.asarray(n, dtype=complex)
    return np.block([[n.real, n.imag], [n.imag, -n.real]])


def multiplication_by_i(n: int) -> np.ndarray:
    """Real 2n x 2n matrix of x -> ix in (Re x, Im x) coordinates."""
    R = np.zeros((2 * n, 2 * n))
    R[:n, n:] = -np.eye(n)
    R[n:, :n] = np.eye(n)
    return R


# ---------------------------------------------------------------------------
# involutions


def lift_involution(kappa, tol: Tolerances | None = None) -> np.ndarray:
    """Lift a real involution kappa of x-space to phase space.

    Returns the real 2n x 2n matrix of K(x, xi) = (kappa x, -kappa^T xi).
    K is antisymplectic, sigma(KX, KY) = -sigma(X, Y), and skew-adjoint for
    sigma, sigma(KX, Y) = -sigma(X, KY).

    Raises ValueError unless kappa is real with kappa^2 = I.
    """
    tol = resolve(tol)
    kappa = np.asarray(kappa)
    if np.iscomplexobj(kappa):
        if np.abs(kappa.imag).max() > tol.rel:
            raise ValueError("kappa must be a real matrix")
        kappa = kappa.real
    kappa = kappa.astype(float)
    if kappa.ndim != 2 or kappa.shape[0] != kappa.shape[1]:
        raise ValueError("kappa must be square")
    n = kappa.shape[0]
    defect = np.abs(kappa @ kappa - np.eye(n)).max()
    if defect > tol.rel * max(1.0, np.linalg.norm(kappa, 2) ** 2):
        raise ValueError(f"kappa is not an involution: |kappa^2 - I| = {defect:.3e}")
    K = np.zeros((2 * n, 2 * n))
    K[:n, :n] = kappa
    K[n:, n:] = -kappa.T
    return K


# ---------------------------------------------------------------------------
# Lagrangian planes


@dataclass(frozen=True)
class LagrangianPlane:
    """An n-dimensional sigma-isotropic subspace of C^{2n}.

    The stored frame always has orthonormal columns; construction checks
    isotropy of the span and full column rank.
    """

    frame: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frame, dtype=complex)
        if f.ndim != 2 or f.shape[0] != 2 * f.shape[1]:
            raise ValueError("frame must be a 2n x n matrix")
        object.__setattr__(self, "frame", f)

    @classmethod
    def from_frame(cls, columns, tol: Tolerances | None = None) -> "LagrangianPlane":
        tol = resolve(tol)
        cols = np.asarray(columns, dtype=complex)
        if cols.ndim != 2 or cols.shape[0] != 2 * cols.shape[1]:
            raise ValueError("frame must be a 2n x n matrix")
        q, r = np.linalg.qr(cols)
        diag = np.abs(np.diag(r))
        if diag.min() <= tol.rank_rel * max(diag.max(), 1e-300):
            raise ValueError("frame columns are numerically dependent")
        plane = cls(q)
        defect = plane.isotropy_defect()
        if defect > 100 * tol.rel:
            raise ValueError(f"span is not sigma-isotropic: defect {defect:.3e}")
        return plane

    @classmethod
    def from_graph(cls, a, tol: Tolerances | None = None) -> "LagrangianPlane":
        """Plane {(y, A y)} for a symmetric matrix A."""
        tol = resolve(tol)
        a = np.asarray(a, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("graph matrix must be square")
        if np.abs(a - a.T).max() > tol.rel * max(1.0, np.abs(a).max()):
            raise ValueError("graph matrix must be symmetric")
        n = a.shape[0]
        return cls.from_frame(np.vstack([np.eye(n), a]), tol)

    @property
    def n(self) -> int:
        return self.frame.shape[1]

    def isotropy_defect(self) -> float:
        """max |sigma(v_i, v_j)| over frame columns (0 for a Lagrangian plane)."""
        J = symplectic_matrix(self.n)
        return float(np.abs(self.frame.T @ J @ self.frame).max())

    def graph_matrix(self, tol: Tolerances | None = None) -> np.ndarray:
        return graph_matrix(self.frame, tol)

    def contains(self, u, tol: Tolerances | None = None) -> bool:
        tol = resolve(tol)
        uu = _stacked(u)
        resid = uu - self.frame @ (self.frame.conj().T @ uu)
        scale = max(1.0, float(np.linalg.norm(uu)))
        return float(np.linalg.norm(resid)) <= 1e3 * tol.rel * scale


def graph_matrix(frame, tol: Tolerances | None = None) -> np.ndarray:
    """Graph matrix A with span(frame) = {(y, A y)}.

    Requires the plane to be transversal to the fiber {x = 0}; raises
    ValueError when the x-block of the frame is singular beyond the rank
    threshold.  For an isotropic plane A is symmetric; the result is
    symmetrized after the symmetry defect is checked.
    """
    tol = resolve(tol)
    f = np.asarray(frame, dtype=complex)
    n = f.shape[0] // 2
    vx, vxi = f[:n], f[n:]
    sv = np.linalg.svd(vx, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= tol.rank_rel * sv[0]:
        raise ValueError("plane is not transversal to the fiber {x = 0}")
    a = np.linalg.solve(vx.T, vxi.T).T
    defect = np.abs(a - a.T).max()
    if defect > 1e3 * tol.rel * max(1.0, np.abs(a).max()):
        raise ValueError(f"graph matrix is not symmetric (defect {defect:.3e}); "
                         "the input plane is not isotropic")
    return 0.5 * (a + a.T)


# ---------------------------------------------------------------------------
# weight forms on C^n


@dataclass(frozen=True)
class WeightForm:
    """Real quadratic form Phi on C^n, stored on (Re x, Im x) coordinates.

    Phi(x) = z^T M z with z = (Re x, Im x) and M = self.matrix real symmetric.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError("weight matrix must be 2n x 2n")
        if np.abs(m - m.T).max() > 1e-12 * max(1.0, np.abs(m).max()):
            raise ValueError("weight matrix must be symmetric")
        object.__setattr__(self, "matrix", 0.5 * (m + m.T))

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    def value(self, x) -> float:
        z = real_stack(np.asarray(x, dtype=complex))
        return float(z @ self.matrix @ z)

    # -- holomorphic second derivatives ------------------------------------

    def levi(self) -> np.ndarray:
        """Levi matrix Phi''_{x, xbar} (Hermitian n x n)."""
        n = self.n
        muu = self.matrix[:n, :n]
        mvv = self.matrix[n:, n:]
        muv = self.matrix[:n, n:]
        return 0.5 * (muu + mvv) + 0.5j * (muv - muv.T)

    def holomorphic_hessian(self) -> np.ndarray:
        """Holomorphic part Phi''_{x, x} (complex symmetric n x n)."""
        n = self.n
        muu = self.matrix[:n, :n]
        mvv = self.matrix[n:, n:]
        muv = self.matrix[:n, n:]
        return 0.5 * (muu - mvv) - 0.5j * (muv + muv.T)

    @classmethod
    def from_holomorphic_parts(cls, levi, holo) -> "WeightForm":
        """Rebuild Phi from Phi''_{x,xbar} (Hermitian) and Phi''_{x,x} (symmetric)."""
        L = np.asarray(levi, dtype=complex)
        P = np.asarray(holo, dtype=complex)
        lr, li = L.real, L.imag
        pr, pi = P.real, P.imag
        muu = lr + pr
        mvv = lr - pr
        muv = li - pi
        return cls(np.block([[muu, muv], [muv.T, mvv]]))

    # -- plurisubharmonicity and convexity ---------------------------------

    def is_strictly_convex(self, tol: Tolerances | None = None) -> bool:
        tol = resolve(tol)
        w = np.linalg.eigvalsh(self.matrix)
        return bool(w[0] > tol.rank_rel * max(1.0, w[-1]))

    def is_strictly_plurisubharmonic(self, tol: Tolerances | None = None) -> bool:
        tol = resolve(tol)
        w = np.linalg.eigvalsh(self.levi())
        return bool(w[0] > tol.rank_rel * max(1.0, w[-1]))

    # -- associated geometry ------------------------------------------------

    def xi_section(self, x) -> np.ndarray:
        """xi(x) = (2/i) dPhi/dx, the fiber coordinate of Lambda_Phi over x."""
        x = np.asarray(x, dtype=complex)
        return -2j * (self.holomorphic_hessian() @ x + self.levi() @ np.conj(x))

    def graph_plane(self, tol: Tolerances | None = None) -> LagrangianPlane:
        """For pluriharmonic Phi: the complex Lagrangian {xi = (2/i) Phi''_{xx} x}."""
        tol = resolve(tol)
        L = self.levi()
        if np.abs(L).max() > 1e3 * tol.rel * max(1.0, np.abs(self.matrix).max()):
            raise ValueError("graph_plane requires a pluriharmonic weight (zero Levi form)")
        return LagrangianPlane.from_graph(-2j * self.holomorphic_hessian(), tol)

    def iota_conjugation(self, tol: Tolerances | None = None) -> np.ndarray:
        """Conjugation matrix N of the antilinear involution fixing Lambda_Phi.

        The involution iota restricts to the identity on Lambda_Phi and is
        returned as the matrix N with iota(v) = N conj(v).  Requires a
        nondegenerate Levi form.
        """
        tol = resolve(tol)
        L = self.levi()
        P = self.holomorphic_hessian()
        w = np.abs(np.linalg.eigvalsh(L))
        if w.min() <= tol.rank_rel * max(w.max(), 1e-300):
            raise ValueError("iota is undefined: Levi form is degenerate")
        n = self.n
        Lbar_inv = np.linalg.inv(np.conj(L))
        N = np.zeros((2 * n, 2 * n), dtype=complex)
        N[:n, :n] = -Lbar_inv @ np.conj(P)
        N[:n, n:] = -0.5j * Lbar_inv
        N[n:, :n] = -2j * (L - P @ Lbar_inv @ np.conj(P))
        N[n:, n:] = -P @ Lbar_inv
        return N

    def compose_linear(self, c) -> "WeightForm":
        """Weight x -> Phi(C x) for an invertible complex matrix C."""
        creal = linear_as_real(c)
        return WeightForm(creal.T @ self.matrix @ creal)


def plh_herm_split(weight: WeightForm) -> tuple[WeightForm, WeightForm]:
    """Split Phi = Phi_plh + Phi_herm.

    Phi_plh(x) = (Phi(x) - Phi(ix))/2 is pluriharmonic (odd under x -> ix),
    Phi_herm(x) = (Phi(x) + Phi(ix))/2 satisfies Phi_herm(ix) = Phi_herm(x)
    and carries the full Levi form.
    """
    R = multiplication_by_i(weight.n)
    rotated = R.T @ weight.matrix @ R
    return (WeightForm(0.5 * (weight.matrix - rotated)),
            WeightForm(0.5 * (weight.matrix + rotated)))


# ---------------------------------------------------------------------------
# positivity


def positivity_form(plane, weight: WeightForm | None = None,
                    tol: Tolerances | None = None) -> np.ndarray:
    """Gram matrix of the Hermitian pairing b(v, w) = (1/i) sigma(v, iota(w)).

    iota is the antilinear involution fixing the maximal real-symplectic
    subspace: complex conjugation for the real phase space (weight=None), or
    the involution attached to Lambda_Phi when a weight is given.  The result
    is Hermitian; its signature classifies the plane (definite positive or
    negative, with a zero eigenvalue exactly when the plane meets the real
    subspace nontrivially).
    """
    tol = resolve(tol)
    V = plane.frame if isinstance(plane, LagrangianPlane) else np.asarray(plane, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    n = V.shape[0] // 2
    J = symplectic_matrix(n)
    if weight is None:
        W = np.conj(V)
    else:
        if weight.n != n:
            raise ValueError("weight dimension does not match the plane")
        W = weight.iota_conjugation(tol) @ np.conj(V)
    gram = (V.T @ J @ W) / 1j
    defect = np.abs(gram - gram.conj().T).max()
    if defect > 1e3 * tol.rel * max(1.0, np.abs(gram).max()):
        raise ValueError(f"positivity pairing is not Hermitian (defect {defect:.3e})")
    return 0.5 * (gram + gram.conj().T)


def form_signature(s, tol: Tolerances | None = None) -> tuple[int, int, int]:
    """Signature (n_pos, n_neg, n_zero) of a real symmetric or Hermitian matrix.

    Eigenvalues with |w| <= rank_rel * max|w| count as zero.
    """
    tol = resolve(tol)
    s = np.asarray(s)
    w = np.linalg.eigvalsh(0.5 * (s + s.conj().T))
    scale = np.abs(w).max() if w.size else 0.0
    if scale == 0.0:
        return (0, 0, w.size)
    thr = tol.rank_rel * scale
    n_pos = int(np.sum(w > thr))
    n_neg = int(np.sum(w < -thr))
    return (n_pos, n_neg, int(w.size) - n_pos - n_neg)
