"""Sparse approximation and joint multi-task feature selection.

Greedy (OMP/SOMP) and convex (LASSO, mixed-norm row sparsity) solvers
for linear models that share one feature support across many related
tasks, plus the surrounding pipeline: Gabor feature extraction for face
verification, synthetic planted-support benchmarks, ROC evaluation, and
a command-line driver.
"""

from ._backend import BACKEND
from .convex import (ConvexConfig, ConvexFit, group_lambda_max, group_solver,
                     lasso, lasso_kkt_violation, lasso_lambda_max,
                     ridge_refit, solve_all_single_task)
from .evaluate import (AverageReport, RocCurve, auc_pairwise,
                       average_protocol, person_curves, roc_curve,
                       tpr_at_fpr, write_roc_csv, write_summary_csv)
from .gabor import (AlignedFace, FilterBank, align_and_crop,
                    build_filter_bank, extract)
from .greedy import GreedyConfig, GreedyFit, omp, somp
from .images import load_image, read_pgm, register_loader, write_pgm
from .matio import load_labels, load_matrix, save_labels, save_matrix
from .model import (Coefficients, Indicator, build_indicator,
                    check_data_matrix, mixed_norm, multitask_loss, predict,
                    row_l0, row_l0_eps, squared_error, support_rows)
from .modelio import TrainedModel, load_model, save_model
from .prox import project_l1_ball, prox_l2_rows, prox_linf, prox_linf_rows
from .rng import PortableRng
from .synth import (SynthSpec, VerificationSplit, synth_classification,
                    synth_regression)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvexConfig", "ConvexFit", "group_lambda_max", "group_solver",
    "lasso", "lasso_kkt_violation", "lasso_lambda_max", "ridge_refit",
    "solve_all_single_task",
    "AverageReport", "RocCurve", "auc_pairwise", "average_protocol",
    "person_curves", "roc_curve", "tpr_at_fpr", "write_roc_csv",
    "write_summary_csv",
    "AlignedFace", "FilterBank", "align_and_crop", "build_filter_bank",
    "extract",
    "GreedyConfig", "GreedyFit", "omp", "somp",
    "load_image", "read_pgm", "register_loader", "write_pgm",
    "load_labels", "load_matrix", "save_labels", "save_matrix",
    "Coefficients", "Indicator", "build_indicator", "check_data_matrix",
    "mixed_norm", "multitask_loss", "predict", "row_l0", "row_l0_eps",
    "squared_error", "support_rows",
    "TrainedModel", "load_model", "save_model",
    "project_l1_ball", "prox_l2_rows", "prox_linf", "prox_linf_rows",
    "PortableRng",
    "SynthSpec", "VerificationSplit", "synth_classification",
    "synth_regression",
    "__version__",
]
