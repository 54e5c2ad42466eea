from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, field_validator, model_validator

from config import settings
from utils.errors import InvalidInputError
from utils.validators import validate_matrix


class MimoChannel(BaseModel):
    """Модель MIMO-канала: матрица H размера n_r x n_t"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    H: np.ndarray = Field(...,
                          description="Комплексная матрица коэффициентов, строки - приемники")

    @field_validator("H", mode="before")
    @classmethod
    def _check_matrix(cls, value):
        h = np.array(value, dtype=np.complex128, copy=True)
        is_valid, error = validate_matrix(h)
        if not is_valid:
            raise InvalidInputError(error)
        h.setflags(write=False)
        return h

    @property
    def n_r(self) -> int:
        return int(self.H.shape[0])

    @property
    def n_t(self) -> int:
        return int(self.H.shape[1])

    def reciprocal(self) -> "MimoChannel":
        """Обратный канал с матрицей H†"""
        return MimoChannel(H=self.H.conj().T)


class CapacityReport(BaseModel):
    """Отчет о пропускной способности канала"""
    schema_version: str = Field(default_factory=lambda: settings.schema_version,
                                description="Версия схемы отчета")
    capacity_bits: float = Field(..., ge=0.0,
                                 description="log2 det(I + P·HH†), бит на использование канала")
    power: float = Field(..., gt=0.0, description="Мощность P")
    n_t: int = Field(..., ge=1, description="Число передающих антенн")
    n_r: int = Field(..., ge=1, description="Число приемных антенн")
    spectrum: List[float] = Field(
        default_factory=list, description="Собственные значения формы Грама")


class ChannelFile(BaseModel):
    """JSON-схема файла канала"""
    n_r: int = Field(..., ge=1, description="Число приемных антенн")
    n_t: int = Field(..., ge=1, description="Число передающих антенн")
    power_hint: Optional[FiniteFloat] = Field(
        None, description="Рекомендуемая мощность")
    entries: List[Tuple[FiniteFloat, FiniteFloat]] = Field(...,
                                                         description="Пары (re, im) построчно")

    @model_validator(mode="after")
    def _check_size(self):
        if len(self.entries) != self.n_r * self.n_t:
            raise ValueError(
                f"entries содержит {len(self.entries)} элементов, ожидалось n_r·n_t = {self.n_r * self.n_t}")
        return self

    def to_matrix(self) -> np.ndarray:
        pairs = np.array(self.entries, dtype=np.float64).reshape(self.n_r, self.n_t, 2)
        return pairs[..., 0] + 1j * pairs[..., 1]

    @classmethod
    def from_channel(cls, channel: MimoChannel, power_hint: Optional[float] = None) -> "ChannelFile":
        flat = channel.H.reshape(-1)
        return cls(
            n_r=channel.n_r,
            n_t=channel.n_t,
            power_hint=power_hint,
            entries=[(float(z.real), float(z.imag)) for z in flat],
        )
