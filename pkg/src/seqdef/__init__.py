"""Percolation thresholds and sequential attack detection for complex networks."""

from .degree_models import DegreeModel, MomentSummary, giant_component_exists, moments, sample_degree_sequence, thin
from .errors import ConfigError, InfeasibleError, NoRootError, NumericalError, SeqdefError, SubcriticalError
from .graph_engine import (
    NetworkGraph,
    QcEstimate,
    RemovalCurve,
    average_random_attack,
    betweenness,
    estimate_qc,
    generate,
    generate_from_sequence,
    largest_component,
    load_edge_list,
    removal_order,
    simulate_attack,
)
from .percolation_analytic import CriticalValueReport, cutoff_degree, qc_intentional, qc_random
from .robust_design import BaselineCheck, OperationPoint, baseline_check, feasible, min_detection, operation_curve
from .sprt_engine import (
    AttackPlan,
    DetectionSummary,
    DetectorProfile,
    RiskBudget,
    SprtTrace,
    WorstCaseBounds,
    decision_by_counts,
    expected_reports_intentional,
    expected_reports_random,
    normal_cdf,
    per_report_llr,
    simulate_detection,
    step,
    truncate,
    worst_case_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "AttackPlan",
    "BaselineCheck",
    "ConfigError",
    "CriticalValueReport",
    "DegreeModel",
    "DetectionSummary",
    "DetectorProfile",
    "InfeasibleError",
    "MomentSummary",
    "NetworkGraph",
    "NoRootError",
    "NumericalError",
    "OperationPoint",
    "QcEstimate",
    "RemovalCurve",
    "RiskBudget",
    "SeqdefError",
    "SprtTrace",
    "SubcriticalError",
    "WorstCaseBounds",
    "average_random_attack",
    "baseline_check",
    "betweenness",
    "cutoff_degree",
    "decision_by_counts",
    "estimate_qc",
    "expected_reports_intentional",
    "expected_reports_random",
    "feasible",
    "generate",
    "generate_from_sequence",
    "giant_component_exists",
    "largest_component",
    "load_edge_list",
    "min_detection",
    "moments",
    "normal_cdf",
    "operation_curve",
    "per_report_llr",
    "qc_intentional",
    "qc_random",
    "removal_order",
    "sample_degree_sequence",
    "simulate_attack",
    "simulate_detection",
    "step",
    "thin",
    "truncate",
    "worst_case_bounds",
]
