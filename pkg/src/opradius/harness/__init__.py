"""Random ensembles, property campaigns, equality conditions and reports."""
from .campaign import VerificationReport, parse_properties, run_campaign, run_trial
from .ensembles import EnsembleSpec, Trial, default_specs, draw, generate, kind_residual
from .equality import EqualityCheck, check_equality_conditions
from .properties import PROPERTIES
from .report import emit_report, load_csv, load_report

__all__ = ["EnsembleSpec", "EqualityCheck", "PROPERTIES", "Trial", "VerificationReport",
           "check_equality_conditions", "default_specs", "draw", "emit_report", "generate",
           "kind_residual", "load_csv", "load_report", "parse_properties", "run_campaign",
           "run_trial"]
