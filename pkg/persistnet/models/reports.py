from typing import Optional

from pydantic import BaseModel, Field

REPORT_FIELDS = [
    "model", "n", "t", "t0", "z1", "zbar", "v1", "vbar", "alpha", "beta",
    "w_sd", "w_q1", "w_median", "w_q3",
]


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class EstimateReport(BaseModel):
    """Point estimates of one observed sequence plus the fitted persistence distribution."""
    model: str = Field(..., description="Model kind the derived parameters belong to")
    n: int = Field(..., ge=1, description="Number of nodes")
    t: int = Field(..., ge=0, description="Number of transitions T")
    t0: Optional[int] = Field(None, ge=1, description="Window length of the windowed estimators")
    z1: Optional[float] = Field(None, ge=0.0, le=1.0)
    zbar: Optional[float] = Field(None, ge=0.0, le=1.0)
    v1: Optional[float] = Field(None, ge=0.0, le=1.0)
    vbar: Optional[float] = Field(None, ge=0.0, le=1.0)
    # Model 2 edge-level or Model 3 node-level Beta shapes
    alpha: Optional[float] = Field(None, gt=0.0)
    beta: Optional[float] = Field(None, gt=0.0)
    # spread and quartiles of the fitted Beta
    w_sd: Optional[float] = Field(None, ge=0.0)
    w_q1: Optional[float] = Field(None, ge=0.0, le=1.0)
    w_median: Optional[float] = Field(None, ge=0.0, le=1.0)
    w_q3: Optional[float] = Field(None, ge=0.0, le=1.0)
    m_windows: Optional[int] = Field(None, ge=0, description="m = floor(T / T0)")

    def to_record(self) -> str:
        """Flat ``key=value`` text record."""
        return " ".join(f"{key}={_format(getattr(self, key))}" for key in REPORT_FIELDS)

    @staticmethod
    def csv_header() -> str:
        return ",".join(REPORT_FIELDS)

    def to_csv_row(self) -> str:
        return ",".join(_format(getattr(self, key)) for key in REPORT_FIELDS)


class ExperimentConfig(BaseModel):
    """One cell of a replication experiment."""
    model: str = Field(..., description="Model spec, e.g. 'm1:0.8' or 'm2:1,4@2'")
    n: int = Field(..., ge=1, description="Number of nodes")
    t: int = Field(..., ge=1, description="Number of transitions T")
    t0: Optional[int] = Field(None, ge=1, description="Window overriding the model spec's @T0")
    degree: str = Field("poisson:6", description="Degree law spec")
    replications: int = Field(100, ge=1)
    seed: int = Field(0, ge=0, description="Master seed")
    output_dir: str = Field(".", description="Directory receiving per-replication CSVs")
