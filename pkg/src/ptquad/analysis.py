"""End-to-end orchestration: certificate, verdicts, normal form, lattice, oracle.

analyze() runs the full pipeline on one symbol and returns a report tree;
any stage that cannot run is recorded as {"skipped": reason} instead of
aborting, so a report is produced for every valid input.  sweep() runs the
cheap spectral part of the pipeline over a one-parameter family.
"""

from __future__ import annotations

import numpy as np

from . import oracle as oracle_mod
from .bargmann import build_normal_form
from .config import RunConfig, SweepSpec
from .quadform import (QuadraticSymbol, ellipticity_certificate,
                       fundamental_matrix, pt_check, ptf_check)
from .spectral import (VERDICT_SELF_ADJOINT, Classification, classify,
                       eigen_analysis, lattice_spectrum)
from .tolerances import Tolerances, resolve

__all__ = ["analyze", "analyze_config", "sweep", "sweep_csv"]


def _statement(c: Classification) -> str:
    if c.real_spectrum is None:
        return ("verdict withheld: eigenvalue clusters are too close to "
                "separate at working precision (near an exceptional point)")
    if c.real_spectrum and c.normal_similar:
        return "spectrum is real and the operator is similar to a self-adjoint operator"
    if c.real_spectrum:
        return ("spectrum is real but the operator is not similar to any "
                "self-adjoint operator (nontrivial Jordan block)")
    return "spectrum is not real; the operator is not similar to any self-adjoint operator"


def _certificate(q: QuadraticSymbol, tol: Tolerances, warnings: list[str]):
    """Full-circle scan, then a rescan restricted to real z when the
    antilinear symmetry holds (a real normalization must then exist)."""
    cert = ellipticity_certificate(q, tol)
    pt = pt_check(q, tol) if q.kappa is not None else None
    restricted = False
    if cert.elliptic and pt is not None and pt.holds:
        cert_real = ellipticity_certificate(q, tol, real_only=True)
        if cert_real.elliptic:
            cert, restricted = cert_real, True
        else:
            warnings.append("antilinear symmetry holds but no real "
                            "normalization was found; keeping complex z")
    return cert, pt, restricted


def _lattice_section(eigen, z: complex, cutoff, tol: Tolerances) -> dict:
    mu = [c.value / 1j for c in eigen.upper() for _ in range(c.algebraic)]
    if not mu:
        return {"skipped": "no eigenvalues in the upper half-plane"}
    if cutoff is None:
        cutoff = sum(m.real for m in mu) + 8.0 * max(m.real for m in mu)
    lat = lattice_spectrum(eigen, float(cutoff), tol)
    original = sorted(((v / z, m) for v, m in lat.entries),
                      key=lambda e: (e[0].real, e[0].imag))
    return {
        "mu": list(lat.mu),
        "cutoff": lat.cutoff,
        "mode": lat.mode,
        "ground": lat.ground,
        "entries": [[v, m] for v, m in lat.entries],
        "entries_original": [[v, m] for v, m in original],
    }


def _normal_form_section(qn: QuadraticSymbol, eigen, tol: Tolerances,
                         warnings: list[str]) -> dict:
    try:
        nf = build_normal_form(qn, tol, eigen=eigen)
    except (ValueError, np.linalg.LinAlgError) as exc:
        return {"skipped": f"construction failed: {exc}"}
    warnings.extend(w for w in nf.warnings if w not in warnings)
    return {
        "prep": nf.prep,
        "a_minus": nf.a_minus,
        "a_plus": nf.a_plus,
        "b_matrix": nf.b_matrix,
        "kappa_t": nf.kappa_t,
        "total_map": nf.total_map,
        "phi0_hessian": nf.phi0.matrix,
        "m_matrix": nf.m_matrix,
        "c_matrix": nf.c_matrix,
        "jordan": nf.jordan,
        "lambdas": list(nf.lambdas),
        "gammas": list(nf.gammas),
        "phi1_hessian": nf.phi1.matrix,
        "model_self_adjoint": nf.model_self_adjoint,
        "diagnostics": nf.diagnostics,
        "warnings": list(nf.warnings),
    }


def _oracle_section(q: QuadraticSymbol, lattice: dict, nmax: int, k: int) -> dict:
    if nmax <= 0:
        return {"skipped": "disabled by oracle_cutoff = 0"}
    if "skipped" in lattice:
        return {"skipped": "no lattice prediction available"}
    dim = nmax ** q.n
    if dim > oracle_mod.MAX_DIM:
        return {"skipped": f"truncated dimension {dim} exceeds the "
                           f"{oracle_mod.MAX_DIM} cap"}
    ref = [v for v, m in lattice["entries_original"] for _ in range(m)]
    ref.sort(key=lambda v: (v.real, v.imag))
    k = min(k, len(ref))
    if k == 0:
        return {"skipped": "lattice produced no entries below the cutoff"}
    comp = oracle_mod.compare_spectra(q, ref[:k], nmax, k=k)
    return {
        "nmax": comp.nmax,
        "flag_window": comp.flag_window,
        "rows": [{"reference": r.reference, "computed": r.computed,
                  "error": r.error, "flagged": r.flagged} for r in comp.rows],
        "max_error": comp.max_error,
        "any_flagged": comp.any_flagged,
    }


def analyze(q: QuadraticSymbol, lattice_cutoff: float | None = None,
            oracle_cutoff: int = 24, k_compare: int = 6,
            tol: Tolerances | None = None) -> dict:
    """Full report for one symbol: normalization, verdicts, normal form,
    spectral lattice, and the truncated-quantization cross-check."""
    tol = resolve(tol)
    warnings: list[str] = []
    cert, pt, restricted = _certificate(q, tol, warnings)

    report: dict = {}
    report["normalization"] = {"z": cert.z, "restricted_to_real": restricted}
    report["ellipticity"] = {
        "elliptic": cert.elliptic,
        "z": cert.z,
        "min_eig": cert.min_eig,
        "full_range": cert.full_range,
        "witness": cert.witness,
        "description": cert.describe(),
    }
    report["pt"] = {
        "provided": pt is not None,
        "holds": pt.holds if pt is not None else None,
        "residuals": ({"A": pt.residual_a, "B": pt.residual_b, "C": pt.residual_c}
                      if pt is not None else None),
    }
    f_orig = fundamental_matrix(q)
    ptf = ptf_check(q, f_orig, tol) if q.kappa is not None else None
    report["fundamental_matrix"] = {
        "matrix": f_orig,
        "ptf_holds": ptf[0] if ptf is not None else None,
        "ptf_residual": ptf[1] if ptf is not None else None,
    }

    if not cert.elliptic:
        reason = "symbol is not elliptic: no z with Re(z q) positive definite"
        for section in ("spectral", "lattice", "normal_form", "oracle"):
            report[section] = {"skipped": reason}
        report["warnings"] = warnings
        return report

    qn = q.scaled(cert.z)
    eigen = eigen_analysis(fundamental_matrix(qn), tol)
    cls = classify(eigen, pt_symmetric=(pt.holds if pt is not None else None),
                   z=cert.z, tol=tol)
    warnings.extend(w for w in eigen.warnings if w not in warnings)
    report["spectral"] = {
        "cluster_tol": eigen.cluster_tol,
        "clusters": [{"value": c.value, "algebraic": c.algebraic,
                      "geometric": c.geometric, "segre": list(c.segre)}
                     for c in eigen.clusters],
        "verdict": cls.verdict,
        "real_spectrum": cls.real_spectrum,
        "self_adjoint_similar": (None if cls.real_spectrum is None
                                 else cls.verdict == VERDICT_SELF_ADJOINT),
        "normal_similar": cls.normal_similar,
        "statement": _statement(cls),
        "notes": list(cls.notes),
    }
    try:
        report["lattice"] = _lattice_section(eigen, cert.z, lattice_cutoff, tol)
    except ValueError as exc:
        report["lattice"] = {"skipped": str(exc)}
    report["normal_form"] = _normal_form_section(qn, eigen, tol, warnings)
    report["oracle"] = _oracle_section(q, report["lattice"], oracle_cutoff, k_compare)
    report["warnings"] = warnings
    return report


def analyze_config(cfg: RunConfig) -> dict:
    report = {"input": cfg.echo}
    report.update(analyze(cfg.symbol, cfg.lattice_cutoff, cfg.oracle_cutoff,
                          cfg.k_compare, cfg.tol))
    return report


# ---------------------------------------------------------------------------
# parameter sweeps


def sweep(base: QuadraticSymbol, spec: SweepSpec,
          tol: Tolerances | None = None) -> dict:
    """Reality and similarity flags along a one-parameter family.

    Each grid point is certified (real z first when the antilinear symmetry
    holds, full scan otherwise), normalized, and classified; the summary
    reports the largest parameter with real spectrum and the largest with
    similarity to a self-adjoint operator, at grid resolution.
    """
    tol = resolve(tol)
    rows = []
    for idx, g in enumerate(spec.grid()):
        q = spec.symbol_at(base, float(g))
        pt = pt_check(q, tol) if q.kappa is not None else None
        cert = None
        if pt is not None and pt.holds:
            cert = ellipticity_certificate(q, tol, real_only=True)
        if cert is None or not cert.elliptic:
            cert = ellipticity_certificate(q, tol)
        f = fundamental_matrix(q)
        evs = np.linalg.eigvals(f)
        evs = sorted((complex(v) for v in evs), key=lambda v: (-v.imag, v.real))
        row = {
            "index": idx,
            "param": float(g),
            "elliptic": cert.elliptic,
            "z": cert.z,
            "eigenvalues": evs,
        }
        if cert.elliptic:
            eigen = eigen_analysis(fundamental_matrix(q.scaled(cert.z)), tol)
            cls = classify(eigen, pt_symmetric=(pt.holds if pt else None),
                           z=cert.z, tol=tol)
            row["verdict"] = cls.verdict
            row["real"] = cls.real_spectrum
            row["similar"] = (None if cls.real_spectrum is None
                              else cls.verdict == VERDICT_SELF_ADJOINT)
        else:
            row["verdict"] = "NOT_ELLIPTIC"
            row["real"] = None
            row["similar"] = None
        rows.append(row)

    real_params = [r["param"] for r in rows if r["real"]]
    similar_params = [r["param"] for r in rows if r["similar"]]
    summary = {
        "parameter": spec.parameter,
        "grid": {"start": spec.start, "stop": spec.stop, "count": spec.count},
        "last_real": max(real_params) if real_params else None,
        "last_similar": max(similar_params) if similar_params else None,
        "count_real": len(real_params),
        "count_similar": len(similar_params),
        "count_indeterminate": sum(1 for r in rows if r["real"] is None
                                   and r["elliptic"]),
    }
    return {"rows": rows, "summary": summary}


def sweep_csv(result: dict) -> str:
    """CSV rendering of sweep rows.

    Columns: param, real, similar, verdict, re_ev_1, im_ev_1, ...; flags are
    1/0 and empty when indeterminate or not elliptic.
    """
    rows = result["rows"]
    if not rows:
        return "param,real,similar,verdict\n"
    nev = len(rows[0]["eigenvalues"])
    header = ["param", "real", "similar", "verdict"]
    for i in range(1, nev + 1):
        header += [f"re_ev_{i}", f"im_ev_{i}"]
    lines = [",".join(header)]

    def flag(v):
        return "" if v is None else str(int(v))

    for r in rows:
        cells = [repr(r["param"]), flag(r["real"]), flag(r["similar"]),
                 r["verdict"]]
        for v in r["eigenvalues"]:
            cells += [repr(v.real), repr(v.imag)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
