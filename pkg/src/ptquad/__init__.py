"""Classification and normal forms of elliptic quadratic differential
operators with an antilinear (PT-type) symmetry.

The library decides, for a quadratic symbol q on R^{2n}, whether the Weyl
quantization of q has real spectrum and whether it is similar to a
self-adjoint operator, and it constructs the Bargmann-side normal form
realizing that decision.  An independent Hermite-basis truncation serves as
a numerical oracle for the predicted spectrum.
"""

from .analysis import analyze, analyze_config, sweep, sweep_csv
from .bargmann import (BargmannData, JordanReduction, NormalForm,
                       bargmann_data, bargmann_kernel_phase, build_normal_form,
                       critical_value_weight, jordan_reduce,
                       model_operator_matrix, monomial_basis,
                       prepare_lambda_minus, substitution_phase,
                       transformed_symbol)
from .config import ConfigError, RunConfig, SweepSpec, parse_config, parse_config_data
from .oracle import (compare_spectra, condition_csv, condition_sweep, quantize,
                     truncated_spectrum)
from .quadform import (EllipticityCertificate, PTCheck, QuadraticSymbol,
                       coefficient_matrix, coupled_oscillator_symbol,
                       ellipticity_certificate, evaluate, fundamental_matrix,
                       polarized, pt_check, ptf_check)
from .report import dumps, jsonify, write_report
from .spectral import (VERDICT_INDETERMINATE, VERDICT_NONREAL,
                       VERDICT_NOT_SIMILAR, VERDICT_SELF_ADJOINT,
                       Classification, EigenAnalysis, EigenCluster,
                       HalfPlaneSplit, classify, eigen_analysis,
                       half_plane_split, lattice_over_degrees, lattice_spectrum)
from .symplectic import (LagrangianPlane, PhaseVector, WeightForm,
                         form_signature, lift_involution, plh_herm_split,
                         positivity_form, symplectic_form, symplectic_matrix)
from .tolerances import Tolerances, default_tol

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Tolerances", "default_tol",
    "PhaseVector", "LagrangianPlane", "WeightForm", "symplectic_matrix",
    "symplectic_form", "lift_involution", "positivity_form", "form_signature",
    "plh_herm_split",
    "QuadraticSymbol", "coefficient_matrix", "evaluate", "polarized",
    "EllipticityCertificate", "ellipticity_certificate", "PTCheck", "pt_check",
    "fundamental_matrix", "ptf_check", "coupled_oscillator_symbol",
    "EigenAnalysis", "EigenCluster", "eigen_analysis", "HalfPlaneSplit",
    "half_plane_split", "lattice_spectrum", "lattice_over_degrees",
    "Classification", "classify",
    "VERDICT_SELF_ADJOINT", "VERDICT_NOT_SIMILAR", "VERDICT_NONREAL",
    "VERDICT_INDETERMINATE",
    "prepare_lambda_minus", "bargmann_data", "BargmannData",
    "transformed_symbol", "jordan_reduce", "JordanReduction",
    "model_operator_matrix", "monomial_basis", "critical_value_weight",
    "substitution_phase", "bargmann_kernel_phase", "build_normal_form",
    "NormalForm",
    "quantize", "truncated_spectrum", "compare_spectra", "condition_sweep",
    "condition_csv",
    "ConfigError", "RunConfig", "SweepSpec", "parse_config", "parse_config_data",
    "analyze", "analyze_config", "sweep", "sweep_csv",
    "jsonify", "dumps", "write_report",
]
