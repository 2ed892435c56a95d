"""Spectral analysis of the fundamental matrix.

Eigenvalues are clustered at a resolution tied to the matrix norm, invariant
subspaces are extracted through ordered Schur factorizations (never through
explicit kernel computations of near-singular powers), and the Jordan block
structure of each cluster is decided by a singular-value rank staircase.

The discrete spectrum of the quantization is the lattice
sum_j mu_j (2 nu_j + 1), nu in N_0^n, built from the eigenvalues lambda_j of
the fundamental matrix with Im lambda_j > 0 via mu_j = lambda_j / i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .symplectic import LagrangianPlane
from .tolerances import Tolerances, resolve

__all__ = [
    "EigenCluster",
    "EigenAnalysis",
    "HalfPlaneSplit",
    "SpectrumLattice",
    "Classification",
    "eigen_analysis",
    "half_plane_split",
    "lattice_spectrum",
    "lattice_over_degrees",
    "classify",
    "VERDICT_SELF_ADJOINT",
    "VERDICT_NOT_SIMILAR",
    "VERDICT_NONREAL",
    "VERDICT_INDETERMINATE",
]

VERDICT_SELF_ADJOINT = "REAL_SPECTRUM_SELF_ADJOINT_SIMILAR"
VERDICT_NOT_SIMILAR = "REAL_SPECTRUM_NOT_SIMILAR"
VERDICT_NONREAL = "NONREAL_SPECTRUM"
VERDICT_INDETERMINATE = "INDETERMINATE_NEAR_EXCEPTIONAL_POINT"

WARN_CLUSTER_AMBIGUOUS = "cluster separation within 10x clustering tolerance"


@dataclass(frozen=True)
class EigenCluster:
    """One eigenvalue cluster of a matrix.

    value is the cluster mean, subspace an orthonormal frame of the invariant
    subspace (the span of all generalized eigenvectors of the cluster), and
    segre the Jordan block sizes in decreasing order.
    """

    value: complex
    algebraic: int
    geometric: int
    segre: tuple[int, ...]
    subspace: np.ndarray
    radius: float

    @property
    def diagonalizable(self) -> bool:
        return self.geometric == self.algebraic


@dataclass(frozen=True)
class EigenAnalysis:
    matrix: np.ndarray
    clusters: tuple[EigenCluster, ...]
    cluster_tol: float
    warnings: tuple[str, ...]

    @property
    def ambiguous(self) -> bool:
        return any(WARN_CLUSTER_AMBIGUOUS in w for w in self.warnings)

    def upper(self) -> tuple[EigenCluster, ...]:
        """Clusters with Im value > 0, in the stored order."""
        return tuple(c for c in self.clusters if c.value.imag > 0)


def _single_linkage(values: np.ndarray, threshold: float) -> list[list[int]]:
    m = len(values)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if abs(values[i] - values[j]) <= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _segre_from_weyr(weyr: list[int]) -> tuple[int, ...]:
    sizes = []
    for j, w in enumerate(weyr, start=1):
        nxt = weyr[j] if j < len(weyr) else 0
        sizes.extend([j] * (w - nxt))
    return tuple(sorted(sizes, reverse=True))


def _rank(m: np.ndarray, threshold: float) -> int:
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sv > threshold))


def _nilpotent_staircase(nmat: np.ndarray, noise: float, rank_rel: float) -> tuple[int, ...]:
    """Jordan partition of a numerically nilpotent matrix.

    noise is the eigenvalue spread that clustering already decided to ignore;
    singular values consistent with that spread are treated as zero.
    """
    k = nmat.shape[0]
    if k == 1:
        return (1,)
    scale = max(float(np.linalg.norm(nmat, 2)), noise)
    ranks = [k]
    power = np.eye(k, dtype=complex)
    for j in range(1, k + 1):
        power = power @ nmat
        thr = max(rank_rel * scale ** j, 2.0 * noise * scale ** (j - 1))
        r = _rank(power, thr)
        ranks.append(min(r, ranks[-1]))
        if r == 0:
            break
    dims = [k - r for r in ranks]
    weyr = [dims[j] - dims[j - 1] for j in range(1, len(dims))]
    # enforce monotonicity (any violation is rank-decision noise)
    for j in range(1, len(weyr)):
        weyr[j] = min(weyr[j], weyr[j - 1])
    segre = _segre_from_weyr(weyr)
    if sum(segre) != k:
        # rank decisions were inconsistent; pad with trivial blocks so the
        # partition still sums to the algebraic multiplicity
        segre = tuple(sorted([1] * (k - sum(segre)) + list(segre), reverse=True))
    return segre


def _cluster_subspace(f: np.ndarray, rep: complex, radius: float, size: int,
                      margin: float) -> tuple[np.ndarray, np.ndarray]:
    sel_radius = radius + margin

    def sel(w):
        return abs(w - rep) <= sel_radius

    t, zmat, sdim = scipy.linalg.schur(f, output="complex", sort=sel)
    if sdim != size:
        raise ValueError(
            f"failed to isolate invariant subspace for eigenvalue cluster at {rep}: "
            f"selected {sdim}, expected {size}")
    return zmat[:, :size], t[:size, :size]


def eigen_analysis(f, tol: Tolerances | None = None) -> EigenAnalysis:
    """Cluster the spectrum of f and resolve each cluster's Jordan structure.

    Clusters are formed by single linkage at max(1e-8, 1e-7 * ||f||); a
    warning is recorded when two distinct clusters lie within ten times that
    threshold, since the block structure is then trust-region limited.
    Clusters are ordered by descending Im, then ascending Re.
    """
    tol = resolve(tol)
    f = np.asarray(f, dtype=complex)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise ValueError("matrix must be square")
    norm = float(np.linalg.norm(f, 2))
    ctol = tol.cluster(norm)
    evs = np.linalg.eigvals(f)
    groups = _single_linkage(evs, ctol)

    warnings = []
    for gi in range(len(groups)):
        for gj in range(gi + 1, len(groups)):
            gap = min(abs(evs[i] - evs[j]) for i in groups[gi] for j in groups[gj])
            if gap < 10 * ctol:
                warnings.append(
                    f"{WARN_CLUSTER_AMBIGUOUS}: gap {gap:.3e} at tolerance {ctol:.3e}")

    margin = max(0.25 * ctol, 64 * np.finfo(float).eps * max(norm, 1.0))
    clusters = []
    for idx in groups:
        members = evs[idx]
        rep = complex(np.mean(members))
        radius = float(np.abs(members - rep).max()) if len(idx) > 1 else 0.0
        subspace, t11 = _cluster_subspace(f, rep, radius, len(idx), margin)
        nmat = t11 - rep * np.eye(len(idx))
        noise = radius + 64 * np.finfo(float).eps * max(norm, 1.0)
        segre = _nilpotent_staircase(nmat, noise, tol.rank_rel)
        clusters.append(EigenCluster(
            value=rep,
            algebraic=len(idx),
            geometric=len(segre),
            segre=segre,
            subspace=subspace,
            radius=radius,
        ))
    clusters.sort(key=lambda c: (-c.value.imag, c.value.real))
    return EigenAnalysis(f, tuple(clusters), ctol, tuple(warnings))


# ---------------------------------------------------------------------------
# half-plane splitting


@dataclass(frozen=True)
class HalfPlaneSplit:
    plus: LagrangianPlane
    minus: LagrangianPlane
    diagnostics: dict = field(default_factory=dict)


def half_plane_split(f, tol: Tolerances | None = None) -> HalfPlaneSplit:
    """Split C^{2n} into the invariant subspaces for Im lambda > 0 and < 0.

    Both subspaces of the fundamental matrix of a normalized elliptic symbol
    are Lagrangian; construction validates isotropy.  Raises ValueError when
    an eigenvalue sits within the clustering tolerance of the real axis, or
    when the two subspaces do not have dimension n each.
    """
    tol = resolve(tol)
    f = np.asarray(f, dtype=complex)
    n = f.shape[0] // 2
    norm = float(np.linalg.norm(f, 2))
    ctol = tol.cluster(norm)
    evs = np.linalg.eigvals(f)
    if np.abs(evs.imag).min() < ctol:
        raise ValueError("eigenvalue within tolerance of the real axis; "
                         "no stable half-plane splitting")

    frames = {}
    for name, sel in (("plus", lambda w: w.imag > 0), ("minus", lambda w: w.imag < 0)):
        t, zmat, sdim = scipy.linalg.schur(f, output="complex", sort=sel)
        if sdim != n:
            raise ValueError(f"half-plane subspace for {name} has dimension {sdim}, "
                             f"expected {n}")
        frames[name] = zmat[:, :n]

    plus = LagrangianPlane.from_frame(frames["plus"], tol)
    minus = LagrangianPlane.from_frame(frames["minus"], tol)
    diag = {
        "isotropy_plus": plus.isotropy_defect(),
        "isotropy_minus": minus.isotropy_defect(),
    }
    return HalfPlaneSplit(plus, minus, diag)


# ---------------------------------------------------------------------------
# spectrum lattice


@dataclass(frozen=True)
class SpectrumLattice:
    """Sorted lattice entries (value, multiplicity) up to a cutoff."""

    mu: tuple[complex, ...]
    entries: tuple[tuple[complex, int], ...]
    ground: complex
    cutoff: float
    mode: str  # "re" or "abs"


def _mu_from_clusters(analysis: EigenAnalysis) -> list[complex]:
    mu = []
    for c in analysis.upper():
        mu.extend([c.value / 1j] * c.algebraic)
    return mu


def lattice_spectrum(source, cutoff: float, tol: Tolerances | None = None,
                     merge_tol: float = 1e-9) -> SpectrumLattice:
    """Enumerate sum_j mu_j (2 nu_j + 1) up to the cutoff.

    source is either an EigenAnalysis (mu_j = lambda_j / i over the upper
    half-plane clusters, with algebraic multiplicity) or an explicit sequence
    of mu_j.  All Re mu_j must be positive.  The cutoff bounds Re(value) when
    every mu_j is real within tolerance, and |value| otherwise; values closer
    than merge_tol are merged and their multiplicities added.
    """
    tol = resolve(tol)
    if isinstance(source, EigenAnalysis):
        mu = _mu_from_clusters(source)
    else:
        mu = [complex(m) for m in source]
    if not mu:
        raise ValueError("no eigenvalues in the upper half-plane")
    if min(m.real for m in mu) <= 0:
        raise ValueError("all mu_j must have positive real part")
    mu.sort(key=lambda m: (-m.real, -m.imag))

    scale = max(1.0, max(abs(m) for m in mu))
    real_mode = all(abs(m.imag) <= tol.rel * scale for m in mu)
    mode = "re" if real_mode else "abs"

    ground = sum(mu)
    budget = (cutoff - ground.real) / 2.0
    slack = 1e-12 * max(1.0, abs(cutoff))
    values: list[complex] = []
    nmodes = len(mu)

    def recurse(j: int, acc: complex, rem: float):
        if j == nmodes:
            values.append(acc)
            return
        step = mu[j]
        k = 0
        while k * step.real <= rem + slack:
            recurse(j + 1, acc + 2 * k * step, rem - k * step.real)
            k += 1

    if budget >= -slack:
        recurse(0, ground, budget)
    if mode == "abs":
        values = [v for v in values if abs(v) <= cutoff + slack]

    values.sort(key=lambda v: (v.real, v.imag))
    entries: list[tuple[complex, int]] = []
    for v in values:
        if entries and abs(v - entries[-1][0]) <= merge_tol:
            prev, count = entries[-1]
            entries[-1] = (prev + (v - prev) / (count + 1), count + 1)
        else:
            entries.append((v, 1))
    return SpectrumLattice(tuple(mu), tuple(entries), complex(ground), float(cutoff), mode)


def lattice_over_degrees(mu, degree: int) -> list[complex]:
    """All values sum_j mu_j (2 a_j + 1) over multi-indices with |a| <= degree.

    Unmerged, sorted by (Re, Im); the index set matches the monomial basis of
    the model operator matrix at the same degree.
    """
    mu = [complex(m) for m in mu]
    values = []

    def recurse(j, acc, rem):
        if j == len(mu):
            values.append(acc)
            return
        for k in range(rem + 1):
            recurse(j + 1, acc + mu[j] * (2 * k + 1), rem - k)

    recurse(0, 0j, int(degree))
    values.sort(key=lambda v: (v.real, v.imag))
    return values


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    verdict: str
    real_spectrum: bool | None
    normal_similar: bool | None
    pt_symmetric: bool | None
    notes: tuple[str, ...] = ()


def classify(analysis: EigenAnalysis, pt_symmetric: bool | None = None,
             z: complex = 1.0, tol: Tolerances | None = None) -> Classification:
    """Three-way spectral verdict plus the orthogonal normality flag.

    The operator (before normalization by z) has real spectrum iff every
    lambda_j / (i z) is real; it is similar to a self-adjoint operator iff in
    addition no cluster carries a nontrivial Jordan block.  A diagonalizable
    fundamental matrix always yields similarity to a normal operator,
    regardless of reality or the presence of the antilinear symmetry.  When
    clustering was ambiguous the verdict is withheld as indeterminate (near
    an exceptional point).
    """
    tol = resolve(tol)
    if analysis.ambiguous:
        return Classification(VERDICT_INDETERMINATE, None, None, pt_symmetric,
                              ("similarity verdict withheld: eigenvalue clustering "
                               "is ambiguous near an exceptional point",))
    reps = [c.value for c in analysis.clusters]
    scale = max(1.0, max(abs(r) for r in reps))
    mu_orig = [r / (1j * z) for r in reps]
    real_spectrum = all(abs(m.imag) <= tol.rel * scale for m in mu_orig)
    diagonalizable = all(c.diagonalizable for c in analysis.clusters)
    if real_spectrum and diagonalizable:
        verdict = VERDICT_SELF_ADJOINT
    elif real_spectrum:
        verdict = VERDICT_NOT_SIMILAR
    else:
        verdict = VERDICT_NONREAL
    notes = []
    if not diagonalizable:
        blocks = [c.segre for c in analysis.clusters if not c.diagonalizable]
        notes.append(f"nontrivial Jordan blocks: {blocks}")
    return Classification(verdict, real_spectrum, diagonalizable, pt_symmetric,
                          tuple(notes))
