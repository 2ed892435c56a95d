"""Independent finite-dimensional checks of the quadratic quantization.

The Weyl quantization of a quadratic symbol acts on the span of the first
nmax Hermite functions per mode through exact integer-valued recurrences, so
the truncated matrix can be assembled without any numerical quadrature.  Its
low-lying eigenvalues converge to the lattice predicted by the fundamental
matrix, which gives an end-to-end cross-check that touches none of the
normal-form code paths.

Every block is written down directly from the ladder recurrences instead of
multiplying truncated ladder matrices; products like a a+ pick up a spurious
corner entry at the truncation edge, the explicit formulas do not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .quadform import QuadraticSymbol, fundamental_matrix

__all__ = [
    "MAX_DIM",
    "quantize",
    "truncated_spectrum",
    "SpectrumComparison",
    "compare_spectra",
    "ConditionRow",
    "condition_sweep",
    "condition_csv",
]

MAX_DIM = 10_000


def _mode_blocks(nmax: int) -> dict[str, sp.csr_matrix]:
    """Single-mode operator blocks on the first nmax Hermite functions.

    x = (a + a+)/sqrt(2), D = (a - a+)/(i sqrt(2)); the symmetrized product
    (xD + Dx)/2 equals (a^2 - (a+)^2)/(2i), with the a a+ terms cancelling.
    """
    m = np.arange(nmax, dtype=float)
    s1 = np.sqrt(m[1:] / 2.0)                                  # sqrt((m+1)/2)
    s2 = np.sqrt((m[:-2] + 1.0) * (m[:-2] + 2.0)) if nmax > 2 else np.zeros(0)

    def tri(diag, up, up2, lo, lo2):
        return sp.diags([lo2, lo, diag, up, up2], [-2, -1, 0, 1, 2],
                        shape=(nmax, nmax), dtype=complex, format="csr")

    zero1 = np.zeros(nmax - 1)
    zero2 = np.zeros(max(nmax - 2, 0))
    blocks = {
        "x": tri(m * 0.0, s1, zero2, s1, zero2),
        "d": tri(m * 0.0, -1j * s1, zero2, 1j * s1, zero2),
        "x2": tri(m + 0.5, zero1, s2 / 2.0, zero1, s2 / 2.0),
        "d2": tri(m + 0.5, zero1, -s2 / 2.0, zero1, -s2 / 2.0),
        "xdw": tri(m * 0.0, zero1, s2 / (2.0j), zero1, -s2 / (2.0j)),
    }
    return blocks


def _lift(block: sp.spmatrix, mode: int, n: int, nmax: int) -> sp.csr_matrix:
    """kron(I, ..., block, ..., I) with block at the given mode slot."""
    out = sp.identity(1, dtype=complex, format="csr")
    for j in range(n):
        factor = block if j == mode else sp.identity(nmax, dtype=complex, format="csr")
        out = sp.kron(out, factor, format="csr")
    return out


def quantize(q: QuadraticSymbol, nmax: int) -> np.ndarray:
    """Dense matrix of the Weyl quantization on nmax Hermite levels per mode.

    Refuses truncations below 4 levels and total dimensions beyond MAX_DIM.
    The cross terms x_j xi_j quantize to the symmetrized product; mixed-mode
    terms commute, so plain operator products are exact there.
    """
    nmax = int(nmax)
    if nmax < 4:
        raise ValueError("nmax must be at least 4")
    n = q.n
    dim = nmax ** n
    if dim > MAX_DIM:
        raise ValueError(f"truncated dimension {dim} exceeds the {MAX_DIM} cap")

    blocks = _mode_blocks(nmax)
    x1 = [_lift(blocks["x"], j, n, nmax) for j in range(n)]
    d1 = [_lift(blocks["d"], j, n, nmax) for j in range(n)]

    h = sp.csr_matrix((dim, dim), dtype=complex)
    for j in range(n):
        if q.a[j, j] != 0:
            h = h + q.a[j, j] * _lift(blocks["x2"], j, n, nmax)
        if q.c[j, j] != 0:
            h = h + q.c[j, j] * _lift(blocks["d2"], j, n, nmax)
        if q.b[j, j] != 0:
            h = h + 2.0 * q.b[j, j] * _lift(blocks["xdw"], j, n, nmax)
        for k in range(n):
            if k != j and q.b[j, k] != 0:
                # symbol term 2 B_jk x_k xi_j, different modes commute
                h = h + 2.0 * q.b[j, k] * (x1[k] @ d1[j])
            if k > j:
                if q.a[j, k] != 0:
                    h = h + 2.0 * q.a[j, k] * (x1[j] @ x1[k])
                if q.c[j, k] != 0:
                    h = h + 2.0 * q.c[j, k] * (d1[j] @ d1[k])
    return h.toarray()


def truncated_spectrum(q: QuadraticSymbol, nmax: int, k: int | None = None) -> np.ndarray:
    """Eigenvalues of the truncated quantization, sorted by (Re, Im).

    A Hermitian truncation (real symbol) is detected and routed to the
    symmetric eigensolver.
    """
    h = quantize(q, nmax)
    herm_defect = np.abs(h - h.conj().T).max()
    if herm_defect <= 1e-12 * max(1.0, np.abs(h).max()):
        evs = np.linalg.eigvalsh(0.5 * (h + h.conj().T)).astype(complex)
    else:
        evs = scipy.linalg.eigvals(h)
    order = np.lexsort((evs.imag, evs.real))
    evs = evs[order]
    return evs[:k] if k is not None else evs


@dataclass(frozen=True)
class ComparisonRow:
    reference: complex
    computed: complex
    error: float
    flagged: bool


@dataclass(frozen=True)
class SpectrumComparison:
    nmax: int
    rows: tuple[ComparisonRow, ...]
    flag_window: float

    @property
    def max_error(self) -> float:
        return max((r.error for r in self.rows), default=0.0)

    @property
    def any_flagged(self) -> bool:
        return any(r.flagged for r in self.rows)

    def describe(self) -> str:
        lines = [f"truncation nmax={self.nmax}, flag window {self.flag_window:g}"]
        for r in self.rows:
            mark = "  !" if r.flagged else ""
            lines.append(f"  ref {r.reference:.12g}  got {r.computed:.12g}  "
                         f"err {r.error:.3e}{mark}")
        return "\n".join(lines)


def compare_spectra(q: QuadraticSymbol, reference, nmax: int,
                    k: int | None = None,
                    flag_window: float = 1e-3) -> SpectrumComparison:
    """Match reference eigenvalues against the truncated spectrum.

    reference is a multiset of predicted eigenvalues (multiplicity by
    repetition).  The first k of them (sorted by (Re, Im)) are each matched
    greedily to the nearest unused truncated eigenvalue; errors above
    flag_window mark the row, signalling either a too-small truncation or a
    wrong prediction.
    """
    ref = sorted((complex(v) for v in reference), key=lambda v: (v.real, v.imag))
    if k is not None:
        ref = ref[:k]
    computed = list(truncated_spectrum(q, nmax))
    rows = []
    for target in ref:
        if not computed:
            raise ValueError("more reference values than truncated eigenvalues")
        j = min(range(len(computed)), key=lambda i: abs(computed[i] - target))
        got = computed.pop(j)
        err = abs(got - target)
        rows.append(ComparisonRow(target, got, err, err > flag_window))
    return SpectrumComparison(int(nmax), tuple(rows), float(flag_window))


@dataclass(frozen=True)
class ConditionRow:
    parameter: float
    eigenvalues: tuple[complex, ...]    # sorted by (-Im, Re)
    min_upper_gap: float
    eigenvector_cond: float


def condition_sweep(family, grid) -> list[ConditionRow]:
    """Eigenvector conditioning of the fundamental matrix along a family.

    family maps a float parameter to a QuadraticSymbol.  Each row records
    the full spectrum, the smallest gap between distinct upper-half-plane
    eigenvalues, and the condition number of an eigenvector matrix; a blowup
    of the latter with a closing gap is the numerical signature of an
    exceptional point.
    """
    rows = []
    for g in grid:
        q = family(float(g))
        f = fundamental_matrix(q)
        evs, vecs = np.linalg.eig(f)
        cond = float(np.linalg.cond(vecs))
        order = sorted(range(len(evs)), key=lambda i: (-evs[i].imag, evs[i].real))
        evs = evs[order]
        upper = [v for v in evs if v.imag > 0]
        if len(upper) >= 2:
            gap = min(abs(u - v) for i, u in enumerate(upper)
                      for v in upper[i + 1:])
        else:
            gap = float("inf")
        rows.append(ConditionRow(float(g), tuple(complex(v) for v in evs),
                                 float(gap), cond))
    return rows


def condition_csv(rows) -> str:
    """CSV rendering of condition_sweep rows.

    Columns: param, re_ev_1, im_ev_1, ..., gap, cond.
    """
    if not rows:
        return "param,gap,cond\n"
    nev = len(rows[0].eigenvalues)
    header = ["param"]
    for i in range(1, nev + 1):
        header += [f"re_ev_{i}", f"im_ev_{i}"]
    header += ["gap", "cond"]
    lines = [",".join(header)]
    for r in rows:
        cells = [repr(r.parameter)]
        for v in r.eigenvalues:
            cells += [repr(v.real), repr(v.imag)]
        cells += [repr(r.min_upper_gap), repr(r.eigenvector_cond)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
