"""Central numerical tolerances.

Every comparison in the package goes through a Tolerances instance so the
thresholds live in one place.  The environment variable QSYMM_TOL_OVERRIDE
(a decimal, e.g. "1e-12") overrides the relative identity tolerance ``rel``
globally; it is read on every call to default_tol, not cached at import.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_TOL_OVERRIDE = "QSYMM_TOL_OVERRIDE"


@dataclass(frozen=True)
class Tolerances:
    #: relative tolerance for algebraic identities (symmetry, symplecticity, ...)
    rel: float = 1e-10
    #: singular values below rank_rel * sigma_max count as zero in rank decisions
    rank_rel: float = 1e-8
    #: condition numbers beyond this trigger a near-defective warning
    cond_max: float = 1e12
    #: eigenvalue clustering threshold is max(cluster_floor, cluster_rel * scale)
    cluster_floor: float = 1e-8
    cluster_rel: float = 1e-7

    def cluster(self, scale: float) -> float:
        """Eigenvalue clustering threshold for a matrix of the given norm."""
        return max(self.cluster_floor, self.cluster_rel * float(scale))


def default_tol() -> Tolerances:
    """Default tolerances, honouring QSYMM_TOL_OVERRIDE if set."""
    override = os.environ.get(ENV_TOL_OVERRIDE)
    if override is None:
        return Tolerances()
    try:
        rel = float(override)
    except ValueError as exc:
        raise ValueError(
            f"{ENV_TOL_OVERRIDE} must be a decimal number, got {override!r}"
        ) from exc
    if not 0.0 < rel < 1.0:
        raise ValueError(f"{ENV_TOL_OVERRIDE} must lie in (0, 1), got {rel}")
    return Tolerances(rel=rel)


def resolve(tol: Tolerances | None) -> Tolerances:
    return default_tol() if tol is None else tol
