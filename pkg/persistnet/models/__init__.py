from .reports import REPORT_FIELDS, EstimateReport, ExperimentConfig

__all__ = ["EstimateReport", "ExperimentConfig", "REPORT_FIELDS"]
