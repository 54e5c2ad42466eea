from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings
from utils.errors import InvalidInputError
from utils.validators import validate_subset


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class HermitianForm(BaseModel):
    """Эрмитова матрица (форма Грама I + P·HH† и ее подматрицы)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray = Field(...,
                                description="Элементы n x n, симметризованные как (A + A†)/2")
    spectrum: Optional[np.ndarray] = Field(
        None, description="Кэш собственных значений по невозрастанию")

    @field_validator("entries", mode="before")
    @classmethod
    def _check_entries(cls, value):
        a = np.array(value, dtype=np.complex128, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise InvalidInputError(
                f"Ожидалась непустая квадратная матрица, получена форма {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("Матрица содержит NaN или бесконечные значения")
        deviation = float(np.max(np.abs(a - a.conj().T)))
        if deviation > settings.hermitian_tolerance:
            raise InvalidInputError(
                f"Матрица не эрмитова: отклонение {deviation:.3e}")
        return _readonly((a + a.conj().T) / 2)

    @field_validator("spectrum", mode="before")
    @classmethod
    def _check_spectrum(cls, value):
        if value is None:
            return None
        return _readonly(np.sort(np.asarray(value, dtype=np.float64))[::-1].copy())

    @model_validator(mode="after")
    def _check_spectrum_size(self):
        if self.spectrum is not None and self.spectrum.shape != (self.dim,):
            raise InvalidInputError(
                f"Размер спектра {self.spectrum.shape} не совпадает с размерностью {self.dim}")
        return self

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)


class Polynomial(BaseModel):
    """Многочлен с вещественными коэффициентами, свободный член первым"""
    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[float, ...] = Field(...,
                                      description="Коэффициенты по возрастанию степени")

    @field_validator("coeffs", mode="before")
    @classmethod
    def _trim(cls, value):
        coeffs = np.atleast_1d(np.asarray(value, dtype=np.float64))
        if coeffs.size == 0:
            coeffs = np.zeros(1)
        trimmed = np.polynomial.polynomial.polytrim(coeffs, tol=0)
        return tuple(float(c) for c in trimmed)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.float64)

    def evaluate(self, x):
        """Значение многочлена в точке (или массиве точек)"""
        return np.polynomial.polynomial.polyval(x, self.as_array())


class SubsetIndex(BaseModel):
    """Подмножество антенн/строк: строго возрастающие индексы в [1, n]"""
    model_config = ConfigDict(frozen=True)

    universe: int = Field(..., description="Размер исходного множества n")
    members: Tuple[int, ...] = Field(...,
                                     description="Индексы 1-based по возрастанию")

    @model_validator(mode="after")
    def _check_members(self):
        if self.universe < 1:
            raise InvalidInputError(
                f"Размер множества должен быть положительным, получено {self.universe}")
        is_valid, error = validate_subset(self.members, self.universe)
        if not is_valid:
            raise InvalidInputError(error)
        return self

    @classmethod
    def of(cls, universe: int, members: Sequence[int]) -> "SubsetIndex":
        return cls(universe=universe, members=tuple(int(m) for m in members))

    @classmethod
    def full(cls, universe: int) -> "SubsetIndex":
        return cls(universe=universe, members=tuple(range(1, universe + 1)))

    def without(self, index: int) -> "SubsetIndex":
        """Подмножество без одного индекса"""
        return SubsetIndex.of(self.universe, [m for m in self.members if m != index])

    @property
    def size(self) -> int:
        return len(self.members)

    def zero_based(self) -> np.ndarray:
        return np.array(self.members, dtype=np.intp) - 1
