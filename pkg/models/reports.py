from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, computed_field

from config import settings

IdentityName = Literal[
    "property1",
    "derivative_special_case",
    "induction_step",
    "symmetric_coeff",
    "avg_det_bound",
    "constant_term",
    "subset_det_average",
]


class IdentityReport(BaseModel):
    """Вердикт численной проверки тождества или неравенства"""
    identity: IdentityName = Field(..., description="Проверяемое тождество")
    n: int = Field(..., ge=1, description="Размерность матрицы")
    k: int = Field(..., ge=0, description="Размер подмножеств")
    max_abs_error: float = Field(..., ge=0.0)
    max_rel_error: float = Field(..., ge=0.0)
    tolerance: float = Field(..., ge=0.0)
    passed: bool = Field(..., description="max_rel_error <= tolerance")
    slack: Optional[float] = Field(
        None, description="Запас неравенства (для проверок неравенств)")


class IdentityRun(BaseModel):
    """Вывод команды identity"""
    schema_version: str = Field(default_factory=lambda: settings.schema_version)
    n: int
    ks: List[int]
    trials: int
    seed: int
    power: float
    tolerance: float
    reports: List[IdentityReport] = Field(default_factory=list)
    passed: bool


class TrialFailure(BaseModel):
    """Нарушение границы в одном испытании"""
    trial: int = Field(..., ge=0)
    channel_seed: int = Field(..., description="Зерно генератора канала")
    n_t: int
    n_r: int
    k_t: int
    k_r: int
    power: float
    slack_bits: float


class VerificationRun(BaseModel):
    """Вывод команды verify"""
    schema_version: str = Field(default_factory=lambda: settings.schema_version)
    theorem: Literal[1, 2]
    method: Literal["exhaustive", "greedy"]
    seed: int
    trials: int
    dim_range: Tuple[int, int]
    power_set: List[float]
    asserted: bool = Field(
        True, description="Ведут ли нарушения к ненулевому коду выхода")
    checks: int = Field(0, description="Число проверенных пар (k_t, k_r)")
    failures: List[TrialFailure] = Field(default_factory=list)
    min_slack_bits: float

    @computed_field
    @property
    def passed(self) -> bool:
        return not self.failures


class TightnessReport(BaseModel):
    """Воспроизведение примера, на котором граница достигается"""
    schema_version: str = Field(default_factory=lambda: settings.schema_version)
    case: Literal["all_ones_low_snr", "parallel"]
    n_t: int
    n_r: int
    k_t: int
    k_r: int
    power: float
    full_capacity_bits: float
    best_capacity_bits: float
    ratio_observed: float
    ratio_predicted: float
    abs_error: float
