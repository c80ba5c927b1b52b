from .bounds import BoundReport, ellipse_bound, global_bound, low_freq_bound
from .contours import GridResult, Metric, Region, contour_grid, evaluate_metric
from .response import (hinf_norm, max_over_chain, nyquist_locus, refined_sup,
                       worst_case_hinf)
from .stability import StabilityReport, stability_check

__all__ = [
    "BoundReport", "GridResult", "Metric", "Region", "StabilityReport",
    "contour_grid", "ellipse_bound", "evaluate_metric", "global_bound",
    "hinf_norm", "low_freq_bound", "max_over_chain", "nyquist_locus",
    "refined_sup", "stability_check", "worst_case_hinf",
]
