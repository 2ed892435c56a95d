"""Reduction of a normalized elliptic symbol to its Bargmann-side normal form.

The trail: a real symplectic preparation brings the negative-half-plane
subspace to the graph {eta = -i y}; an explicit complex symplectic map
kappa_T then flattens it onto the fiber {x = 0} and the positive subspace
onto {xi = 0}, turning the symbol into a pure cross form q~(x, xi) = Mx.xi.
The strictly plurisubharmonic weight Phi0 describes the image of the real
phase space, and a final Jordan reduction of M fixes the model operator

    sum_j 2 lambda_j x_j D_j + (1/i) sum_j lambda_j + sum_j gamma_j x_{j+1} D_j

with gamma_j in {0, 1}.  Weight transport through quadratic phases provides
an independent cross-check on Phi0 and Phi1 = Phi0 o C.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .quadform import QuadraticSymbol, coefficient_matrix, fundamental_matrix
from .spectral import EigenAnalysis, HalfPlaneSplit, eigen_analysis, half_plane_split
from .symplectic import (LagrangianPlane, WeightForm, form_signature,
                         symplectic_matrix)
from .tolerances import Tolerances, resolve

__all__ = [
    "PreparationResult",
    "BargmannData",
    "TransformedSymbol",
    "JordanReduction",
    "NormalForm",
    "prepare_lambda_minus",
    "bargmann_data",
    "transformed_symbol",
    "jordan_reduce",
    "model_operator_matrix",
    "monomial_basis",
    "critical_value_weight",
    "substitution_phase",
    "bargmann_kernel_phase",
    "build_normal_form",
]


def _symplectic_defect(m: np.ndarray) -> float:
    n = m.shape[0] // 2
    J = symplectic_matrix(n)
    return float(np.abs(m.T @ J @ m - J).max())


# ---------------------------------------------------------------------------
# step 1: real symplectic preparation of the negative subspace


@dataclass(frozen=True)
class PreparationResult:
    prep: np.ndarray           # real symplectic 2n x 2n
    a_minus: np.ndarray        # graph matrix of the input plane
    graph_defect: float        # |graph(prep . Lambda-) + iI|, should be ~0


def prepare_lambda_minus(minus: LagrangianPlane,
                         tol: Tolerances | None = None) -> PreparationResult:
    """Real symplectic map taking the negative plane to the graph {eta = -i y}.

    The plane must be a graph eta = A- y with Im A- negative definite.  The
    map composes the shear (y, eta) -> (y, eta - (Re A-) y) with the
    congruence scaling (y, eta) -> (S^{-1} y, S^T eta) where
    S^T (-Im A-) S = I, S built from a Cholesky factorization.
    """
    tol = resolve(tol)
    a_minus = minus.graph_matrix(tol)
    n = a_minus.shape[0]
    im = a_minus.imag.copy()
    w = np.linalg.eigvalsh(im)
    if w[-1] >= -tol.rank_rel * max(1.0, abs(w[0])):
        raise ValueError("Im A- is not negative definite; "
                         "the input plane is not strictly negative")
    lo = np.linalg.cholesky(-im)                # -Im A- = lo lo^T
    shear = np.eye(2 * n)
    shear[n:, :n] = -a_minus.real
    scale = np.zeros((2 * n, 2 * n))
    scale[:n, :n] = lo.T                        # = S^{-1} for S = lo^{-T}
    scale[n:, n:] = np.linalg.inv(lo)           # = S^T
    prep = scale @ shear

    moved = prep @ minus.frame
    vx, vxi = moved[:n], moved[n:]
    graph = np.linalg.solve(vx.T, vxi.T).T
    defect = float(np.abs(graph + 1j * np.eye(n)).max())
    if _symplectic_defect(prep) > 1e3 * tol.rel * max(1.0, np.linalg.norm(prep, 2) ** 2):
        raise ValueError("preparation map lost symplecticity")
    return PreparationResult(prep, a_minus, defect)


# ---------------------------------------------------------------------------
# step 2: the Bargmann-side canonical map and its weight


@dataclass(frozen=True)
class BargmannData:
    a_plus: np.ndarray
    b_matrix: np.ndarray       # complex symmetric
    kappa_t: np.ndarray        # complex symplectic 2n x 2n
    phi0: WeightForm
    diagnostics: dict = field(default_factory=dict)


def bargmann_data(plus, tol: Tolerances | None = None) -> BargmannData:
    """Canonical map kappa_T and weight Phi0 from the positive plane.

    plus is the prepared positive plane (a LagrangianPlane) or its graph
    matrix A+ directly; Im A+ must be positive definite.  Then

        B = (I - iA+)^{-1} A+            (complex symmetric),
        kappa_T(y, eta) = (y - i eta, eta + iB eta - B y),
        Phi0(x) = ((Im x)^2 + Im(B x . x)) / 2.

    kappa_T maps {eta = -iy} to the fiber {x = 0}, the plus plane to
    {xi = 0}, and the real phase space to the graph of (2/i) dPhi0.
    """
    tol = resolve(tol)
    if isinstance(plus, LagrangianPlane):
        a_plus = plus.graph_matrix(tol)
    else:
        a_plus = np.asarray(plus, dtype=complex)
    n = a_plus.shape[0]
    w = np.linalg.eigvalsh(a_plus.imag)
    if w[0] <= tol.rank_rel * max(1.0, abs(w[-1])):
        raise ValueError("Im A+ is not positive definite; "
                         "the input plane is not strictly positive")

    b = np.linalg.solve(np.eye(n) - 1j * a_plus, a_plus)
    defect_b = float(np.abs(b - b.T).max())
    if defect_b > 1e3 * tol.rel * max(1.0, np.abs(b).max()):
        raise ValueError(f"B matrix lost symmetry (defect {defect_b:.3e})")
    b = 0.5 * (b + b.T)

    eye = np.eye(n)
    kappa_t = np.block([[eye, -1j * eye], [-b, eye + 1j * b]])
    phi0 = WeightForm.from_holomorphic_parts(levi=0.25 * eye,
                                             holo=-0.25 * eye - 0.5j * b)

    # the real phase space lands on the graph of (2/i) dPhi0: check on a basis
    real_basis = np.eye(2 * n)
    image = kappa_t @ real_basis
    graph_defect = 0.0
    for col in image.T:
        xi_expected = phi0.xi_section(col[:n])
        graph_defect = max(graph_defect, float(np.abs(col[n:] - xi_expected).max()))

    diag = {
        "b_symmetry_defect": defect_b,
        "kappa_t_symplectic_defect": _symplectic_defect(kappa_t),
        "real_space_graph_defect": graph_defect,
        "phi0_strictly_convex": phi0.is_strictly_convex(tol),
        "phi0_strictly_psh": phi0.is_strictly_plurisubharmonic(tol),
    }
    return BargmannData(a_plus, b, kappa_t, phi0, diag)


# ---------------------------------------------------------------------------
# step 3: the transformed symbol


@dataclass(frozen=True)
class TransformedSymbol:
    m_matrix: np.ndarray
    coefficient: np.ndarray    # full 2n x 2n coefficient matrix of q~
    residual_xx: float
    residual_xixi: float


def transformed_symbol(q: QuadraticSymbol, total_map: np.ndarray,
                       tol: Tolerances | None = None) -> TransformedSymbol:
    """Pull the symbol through the canonical map: q~ = q o total_map^{-1}.

    For the full Bargmann trail (total_map = kappa_T . prep) the result is a
    pure cross form q~(x, xi) = Mx.xi; the xx and xi-xi blocks are returned
    as residuals and must vanish at working precision.
    """
    resolve(tol)
    n = q.n
    inv = np.linalg.inv(np.asarray(total_map, dtype=complex))
    coeff = inv.T @ coefficient_matrix(q) @ inv
    coeff = 0.5 * (coeff + coeff.T)
    scale = max(1.0, float(np.abs(coeff).max()))
    res_xx = float(np.abs(coeff[:n, :n]).max()) / scale
    res_xixi = float(np.abs(coeff[n:, n:]).max()) / scale
    m = 2.0 * coeff[n:, :n]
    return TransformedSymbol(m, coeff, res_xx, res_xixi)


# ---------------------------------------------------------------------------
# step 4: Jordan reduction of M


@dataclass(frozen=True)
class JordanReduction:
    c_matrix: np.ndarray
    jordan: np.ndarray
    lambdas: tuple[complex, ...]   # per-slot model eigenvalues (= diag(J)/2)
    gammas: tuple[int, ...]
    segre: tuple[tuple[complex, tuple[int, ...]], ...]
    cond: float
    residual: float
    warnings: tuple[str, ...]


def _kernel_basis(mat: np.ndarray, threshold: float) -> np.ndarray:
    _, sv, vh = np.linalg.svd(mat)
    rank = int(np.sum(sv > threshold))
    return vh[rank:].conj().T


def _jordan_chains(nmat: np.ndarray, noise: float, rank_rel: float) -> list[list[np.ndarray]]:
    """Jordan chains [v_1 ... v_m] (N v_1 ~ 0, N v_{l+1} = v_l) of a
    numerically nilpotent matrix."""
    k = nmat.shape[0]
    if k == 1:
        return [[np.array([1.0 + 0j])]]
    scale = max(float(np.linalg.norm(nmat, 2)), noise, 1e-300)
    kernels = [np.zeros((k, 0), dtype=complex)]
    power = np.eye(k, dtype=complex)
    for j in range(1, k + 1):
        power = power @ nmat
        thr = max(rank_rel * scale ** j, 2.0 * noise * scale ** (j - 1))
        kernels.append(_kernel_basis(power, thr))
        if kernels[-1].shape[1] == k:
            break
    if kernels[-1].shape[1] != k:
        raise ValueError("kernel filtration did not exhaust the cluster; "
                         "rank decisions are inconsistent")
    s = len(kernels) - 1
    weyr = [kernels[j].shape[1] - kernels[j - 1].shape[1] for j in range(1, s + 1)]

    chains: list[list[np.ndarray]] = []
    passing: list[np.ndarray] = []
    for level in range(s, 0, -1):
        expected = weyr[level - 1] - (weyr[level] if level < s else 0)
        if expected < 0:
            raise ValueError("Weyr characteristic is not monotone")
        if expected:
            avoid_cols = [kernels[level - 1]]
            if passing:
                avoid_cols.append(np.stack(passing, axis=1))
            avoid = np.hstack(avoid_cols)
            if avoid.shape[1]:
                qa, _ = np.linalg.qr(avoid)
                resid = kernels[level] - qa @ (qa.conj().T @ kernels[level])
            else:
                resid = kernels[level]
            u, sv, _ = np.linalg.svd(resid, full_matrices=False)
            if sv[expected - 1] <= 1e-8:
                raise ValueError("could not separate new Jordan chain tops")
            tops = [u[:, i].copy() for i in range(expected)]
        else:
            tops = []
        for top in tops:
            members = [top]
            for _ in range(level - 1):
                members.append(nmat @ members[-1])
            chain = members[::-1]
            nv1 = float(np.linalg.norm(chain[0]))
            if nv1 <= 1e-12 * scale ** (level - 1):
                raise ValueError("Jordan chain collapsed under repeated application")
            chains.append([v / nv1 for v in chain])
        passing = [nmat @ v for v in passing] + [nmat @ t for t in tops]
    chains.sort(key=len, reverse=True)
    return chains


def jordan_reduce(m, tol: Tolerances | None = None) -> JordanReduction:
    """Similarity C^{-1} M C = J with J in Jordan form.

    Columns of C are scaled so every superdiagonal entry of J is exactly 1 or
    0.  Blocks are ordered by descending Im of the eigenvalue, then by
    descending block size; gamma_j = 1 marks slots coupled inside a block and
    is always 0 across block boundaries.  A condition number of C beyond the
    tolerance threshold flags the reduction as near-defective.
    """
    tol = resolve(tol)
    m = np.asarray(m, dtype=complex)
    analysis = eigen_analysis(m, tol)
    norm = float(np.linalg.norm(m, 2))

    blocks: list[tuple[complex, np.ndarray]] = []   # (eigenvalue, columns)
    segre_by_cluster = []
    warnings = list(analysis.warnings)
    for cluster in analysis.clusters:
        k = cluster.algebraic
        vsub = cluster.subspace
        # restricted matrix in the cluster coordinates (vsub is orthonormal)
        t11 = vsub.conj().T @ m @ vsub
        nmat = t11 - cluster.value * np.eye(k)
        noise = cluster.radius + 64 * np.finfo(float).eps * max(norm, 1.0)
        chains = _jordan_chains(nmat, noise, tol.rank_rel)
        segre_by_cluster.append((cluster.value, tuple(len(ch) for ch in chains)))
        for chain in chains:
            cols = np.stack([vsub @ v for v in chain], axis=1)
            blocks.append((cluster.value, cols))

    # already ordered: clusters by (-Im, Re), chains by size within cluster
    c_matrix = np.hstack([cols for _, cols in blocks])
    nslots = c_matrix.shape[1]
    jordan = np.zeros((nslots, nslots), dtype=complex)
    gammas = []
    pos = 0
    for value, cols in blocks:
        size = cols.shape[1]
        for i in range(size):
            jordan[pos + i, pos + i] = value
            if i + 1 < size:
                jordan[pos + i, pos + i + 1] = 1.0
        if pos:
            gammas.append(0)        # boundary to the previous block
        gammas.extend([1] * (size - 1))
        pos += size

    residual = float(np.linalg.norm(m @ c_matrix - c_matrix @ jordan, 2))
    scale = max(1.0, norm) * max(1.0, float(np.linalg.norm(c_matrix, 2)))
    cond = float(np.linalg.cond(c_matrix))
    if cond > tol.cond_max:
        warnings.append(f"near-defective Jordan basis: cond(C) = {cond:.3e}")
    if residual > 1e3 * tol.rel * scale:
        warnings.append(f"Jordan residual above tolerance: {residual:.3e}")

    lambdas = tuple(np.diag(jordan) / 2.0)
    return JordanReduction(c_matrix, jordan, lambdas, tuple(gammas),
                           tuple(segre_by_cluster), cond, residual / scale,
                           tuple(warnings))


# ---------------------------------------------------------------------------
# the model operator on monomials


def monomial_basis(n: int, degree: int) -> list[tuple[int, ...]]:
    """Multi-indices |a| <= degree, by total degree then lexicographically
    descending; this ordering makes the model matrix lower triangular."""
    idx: list[tuple[int, ...]] = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            idx.append(prefix + (remaining,))
            return
        for k in range(remaining, -1, -1):
            rec(prefix + (k,), remaining - k, slots - 1)

    out: list[tuple[int, ...]] = []
    for d in range(degree + 1):
        idx.clear()
        if n == 1:
            idx.append((d,))
        else:
            rec((), d, n)
        idx.sort(key=lambda a: tuple(-x for x in a))
        out.extend(idx)
    return out


def model_operator_matrix(lambdas, gammas, degree: int) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Matrix of the model operator on monomials x^a, |a| <= degree.

    The operator sum_j 2 lambda_j x_j D_j + (1/i) sum lambda_j
    + sum_j gamma_j x_{j+1} D_j acts degree by degree; on the returned basis
    the matrix is lower triangular with the lattice values
    sum_j (lambda_j / i)(2 a_j + 1) on the diagonal, and the gamma couplings
    contribute entries a_j / i between monomials a and a - e_j + e_{j+1}.
    When every gamma vanishes and every lambda_j is purely imaginary the
    matrix is diagonal with real entries.
    """
    lambdas = [complex(l) for l in lambdas]
    n = len(lambdas)
    gammas = [int(g) for g in gammas]
    if len(gammas) != max(n - 1, 0):
        raise ValueError("gammas must have length n - 1")
    mu = [l / 1j for l in lambdas]
    basis = monomial_basis(n, degree)
    index = {a: i for i, a in enumerate(basis)}
    dim = len(basis)
    assert dim == comb(n + degree, n)
    mat = np.zeros((dim, dim), dtype=complex)
    for a, col in index.items():
        mat[col, col] = sum(m * (2 * a[j] + 1) for j, m in enumerate(mu))
        for j in range(n - 1):
            if gammas[j] and a[j] > 0:
                target = list(a)
                target[j] -= 1
                target[j + 1] += 1
                row = index[tuple(target)]
                mat[row, col] = a[j] / 1j
    return mat, basis


# ---------------------------------------------------------------------------
# weight transport through quadratic phases


def substitution_phase(c) -> np.ndarray:
    """Phase phi(x, y, theta) = (Cx - y) . theta, with fiber dimension n.

    Generates the substitution map (y, eta) -> (C^{-1} y, C^T eta); transport
    through it takes a weight Phi to Phi o C.
    """
    c = np.asarray(c, dtype=complex)
    n = c.shape[0]
    p = np.zeros((3 * n, 3 * n), dtype=complex)
    x = slice(0, n)
    y = slice(n, 2 * n)
    th = slice(2 * n, 3 * n)
    p[x, th] = 0.5 * c.T
    p[th, x] = 0.5 * c
    p[y, th] = -0.5 * np.eye(n)
    p[th, y] = -0.5 * np.eye(n)
    return p


def bargmann_kernel_phase(b) -> np.ndarray:
    """Phase phi(x, y) = (i/2)(x - y)^2 - (1/2) B x . x (no fiber variables).

    Maximizing -Im phi(x, .) over real y recovers the weight Phi0 attached to
    B: use critical_value_weight with source_real=True and zero source weight.
    """
    b = np.asarray(b, dtype=complex)
    n = b.shape[0]
    eye = np.eye(n)
    p = np.zeros((2 * n, 2 * n), dtype=complex)
    p[:n, :n] = 0.5j * eye - 0.5 * b
    p[n:, n:] = 0.5j * eye
    p[:n, n:] = -0.5j * eye
    p[n:, :n] = -0.5j * eye
    return p


def critical_value_weight(phase, n: int, fiber_dim: int,
                          source_weight: WeightForm | None = None,
                          source_real: bool = False,
                          tol: Tolerances | None = None) -> tuple[WeightForm, tuple[int, int, int]]:
    """Transport a weight through a holomorphic quadratic phase.

    phase is the complex symmetric matrix of phi on (x, y, theta) in C^{n + n
    + fiber_dim}.  The target weight is the critical value

        Phi1(x) = vc_{y, theta} (Phi0(y) - Im phi(x, y, theta)),

    computed as a Schur complement of the real Hessian in the (y, theta)
    variables; with source_real=True the y variable ranges over R^n instead
    of C^n (then the critical value is a genuine extremum over real y).

    Returns (Phi1, signature of the (y, theta) Hessian).  Raises ValueError
    when that Hessian is degenerate at the rank tolerance.
    """
    tol = resolve(tol)
    p = np.asarray(phase, dtype=complex)
    m = 2 * n + fiber_dim
    if p.shape != (m, m):
        raise ValueError("phase matrix size does not match n and fiber_dim")
    if np.abs(p - p.T).max() > tol.rel * max(1.0, np.abs(p).max()):
        raise ValueError("phase matrix must be symmetric")

    # Im phi as a real form on (Re v, Im v)
    pr, pi = p.real, p.imag
    im_form = np.block([[pi, pr], [pr, -pi]])

    re_x = np.arange(n)
    re_y = n + np.arange(n)
    re_th = 2 * n + np.arange(fiber_dim)
    im_x, im_y, im_th = re_x + m, re_y + m, re_th + m

    g = -im_form.copy()
    if source_weight is not None:
        if source_weight.n != n:
            raise ValueError("source weight dimension mismatch")
        if source_real:
            g[np.ix_(re_y, re_y)] += source_weight.matrix[:n, :n]
        else:
            y_all = np.concatenate([re_y, im_y])
            g[np.ix_(y_all, y_all)] += source_weight.matrix

    z_idx = np.concatenate([re_x, im_x])
    if source_real:
        w_idx = np.concatenate([re_y, re_th, im_th])
    else:
        w_idx = np.concatenate([re_y, im_y, re_th, im_th])

    g_zz = g[np.ix_(z_idx, z_idx)]
    g_zw = g[np.ix_(z_idx, w_idx)]
    g_ww = g[np.ix_(w_idx, w_idx)]

    w = np.linalg.eigvalsh(g_ww)
    if np.abs(w).min() <= tol.rank_rel * max(np.abs(w).max(), 1e-300):
        raise ValueError("critical-point system is degenerate: "
                         "the phase does not pair the source to the target")
    target = g_zz - g_zw @ np.linalg.solve(g_ww, g_zw.T)
    return WeightForm(0.5 * (target + target.T)), form_signature(g_ww, tol)


# ---------------------------------------------------------------------------
# full pipeline


@dataclass(frozen=True)
class NormalForm:
    prep: np.ndarray
    a_minus: np.ndarray
    a_plus: np.ndarray
    b_matrix: np.ndarray
    kappa_t: np.ndarray
    total_map: np.ndarray
    phi0: WeightForm
    m_matrix: np.ndarray
    c_matrix: np.ndarray
    jordan: np.ndarray
    lambdas: tuple[complex, ...]
    gammas: tuple[int, ...]
    phi1: WeightForm
    diagnostics: dict
    warnings: tuple[str, ...]

    @property
    def model_self_adjoint(self) -> bool:
        if any(self.gammas):
            return False
        scale = max(1.0, max(abs(l) for l in self.lambdas))
        return all(abs(l.real) <= 1e-10 * scale for l in self.lambdas)


def build_normal_form(q: QuadraticSymbol, tol: Tolerances | None = None,
                      eigen: EigenAnalysis | None = None,
                      split: HalfPlaneSplit | None = None) -> NormalForm:
    """Run the whole reduction for a normalized elliptic symbol.

    The symbol must already satisfy Re q > 0 on the real phase space (apply
    the ellipticity certificate's z first).  Cross-checks performed along the
    way are recorded in diagnostics: the spectrum of M against twice the
    upper eigenvalues of the fundamental matrix, flattening of the two
    half-plane subspaces, and weight transport reproducing Phi0 and Phi1.
    """
    tol = resolve(tol)
    n = q.n
    f = fundamental_matrix(q)
    if eigen is None:
        eigen = eigen_analysis(f, tol)
    if split is None:
        split = half_plane_split(f, tol)
    warnings = list(eigen.warnings)

    prep_res = prepare_lambda_minus(split.minus, tol)
    plus_prepped = LagrangianPlane.from_frame(prep_res.prep @ split.plus.frame, tol)
    bdata = bargmann_data(plus_prepped, tol)
    total = bdata.kappa_t @ prep_res.prep

    # the two planes must flatten onto the coordinate planes
    minus_moved = total @ split.minus.frame
    plus_moved = total @ split.plus.frame
    flat_minus = float(np.abs(minus_moved[:n]).max() / max(np.abs(minus_moved).max(), 1e-300))
    flat_plus = float(np.abs(plus_moved[n:]).max() / max(np.abs(plus_moved).max(), 1e-300))

    trans = transformed_symbol(q, total, tol)
    jres = jordan_reduce(trans.m_matrix, tol)
    warnings.extend(w for w in jres.warnings if w not in warnings)
    phi1 = bdata.phi0.compose_linear(jres.c_matrix)

    # Spec(M) against 2 * (upper eigenvalues of F)
    target = []
    for c in eigen.upper():
        target.extend([2 * c.value] * c.algebraic)
    mevs = sorted(np.linalg.eigvals(trans.m_matrix), key=lambda v: (v.real, v.imag))
    remaining = list(target)
    max_dev = 0.0
    for ev in mevs:
        j = int(np.argmin([abs(ev - t) for t in remaining]))
        max_dev = max(max_dev, abs(ev - remaining.pop(j)))

    # weight transport cross-checks
    ident_w, ident_sig = critical_value_weight(
        substitution_phase(np.eye(n)), n, n, bdata.phi0, tol=tol)
    subst_w, subst_sig = critical_value_weight(
        substitution_phase(jres.c_matrix), n, n, bdata.phi0, tol=tol)
    kernel_w, kernel_sig = critical_value_weight(
        bargmann_kernel_phase(bdata.b_matrix), n, 0, None, source_real=True, tol=tol)
    wscale = max(1.0, float(np.abs(bdata.phi0.matrix).max()))
    transport = {
        "identity_weight_error": float(np.abs(ident_w.matrix - bdata.phi0.matrix).max()) / wscale,
        "identity_signature": ident_sig,
        "substitution_weight_error": float(np.abs(subst_w.matrix - phi1.matrix).max())
                                     / max(1.0, float(np.abs(phi1.matrix).max())),
        "substitution_signature": subst_sig,
        "kernel_weight_error": float(np.abs(kernel_w.matrix - bdata.phi0.matrix).max()) / wscale,
        "kernel_signature": kernel_sig,
    }

    diagnostics = {
        "prep_graph_defect": prep_res.graph_defect,
        "total_symplectic_defect": _symplectic_defect(total),
        "flatten_minus": flat_minus,
        "flatten_plus": flat_plus,
        "residual_xx": trans.residual_xx,
        "residual_xixi": trans.residual_xixi,
        "m_vs_doubled_upper_spectrum": float(max_dev),
        "jordan_residual": jres.residual,
        "jordan_cond": jres.cond,
        "phi1_strictly_convex": phi1.is_strictly_convex(tol),
        "phi1_strictly_psh": phi1.is_strictly_plurisubharmonic(tol),
        "weight_transport": transport,
        **bdata.diagnostics,
    }
    return NormalForm(
        prep=prep_res.prep, a_minus=prep_res.a_minus, a_plus=bdata.a_plus,
        b_matrix=bdata.b_matrix, kappa_t=bdata.kappa_t, total_map=total,
        phi0=bdata.phi0, m_matrix=trans.m_matrix, c_matrix=jres.c_matrix,
        jordan=jres.jordan, lambdas=jres.lambdas, gammas=jres.gammas,
        phi1=phi1, diagnostics=diagnostics, warnings=tuple(warnings),
    )
