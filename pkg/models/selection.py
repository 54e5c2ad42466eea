from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from config import settings
from models.matrix import SubsetIndex
from utils.errors import InvalidInputError


class Selection(BaseModel):
    """Выбор подмножеств передающих и приемных антенн"""
    model_config = ConfigDict(frozen=True)

    tx: SubsetIndex = Field(..., description="Выбранные передающие антенны")
    rx: SubsetIndex = Field(..., description="Выбранные приемные антенны")

    @property
    def k_t(self) -> int:
        return self.tx.size

    @property
    def k_r(self) -> int:
        return self.rx.size


class RemovalStep(BaseModel):
    """Шаг жадного прореживания: удаление одной антенны"""
    side: Literal["tx", "rx"] = Field(..., description="Сторона удаления")
    removed: int = Field(..., ge=1, description="Исходный индекс удаленной антенны (1-based)")
    capacity_before: float = Field(..., description="Пропускная способность до удаления")
    capacity_after: float = Field(..., description="Пропускная способность после удаления")
    remaining: int = Field(..., ge=1,
                           description="Число антенн, оставшихся на этой стороне")


class SelectionResult(BaseModel):
    """Результат выбора антенн"""
    selection: Selection = Field(..., description="Выбранные подмножества")
    capacity_bits: float = Field(..., description="Пропускная способность подканала")
    method: Literal["exhaustive", "greedy"] = Field(..., description="Метод выбора")
    order: Optional[Literal["rx_first", "tx_first"]] = Field(
        None, description="Порядок прореживания для жадного метода")
    trace: List[RemovalStep] = Field(
        default_factory=list, description="Шаги удаления (пусто для перебора)")


class BoundReport(BaseModel):
    """Проверка нижней границы на пропускную способность подканала"""
    theorem: Literal[1, 2] = Field(..., description="Номер границы")
    case: Optional[str] = Field(
        None, description="Вариант границы для выбора только приемников")
    n_t: int = Field(..., ge=1)
    n_r: int = Field(..., ge=1)
    k_t: int = Field(..., ge=1)
    k_r: int = Field(..., ge=1)
    full_capacity_bits: float = Field(..., description="Пропускная способность полного канала C")
    fraction_numerator: int = Field(..., ge=1)
    fraction_denominator: int = Field(..., ge=1)
    gap_G_bits: float = Field(..., ge=0.0, description="Аддитивная константа G")
    bound_bits: float = Field(..., description="Значение нижней границы")
    achieved_bits: float = Field(..., description="Достигнутая пропускная способность")
    slack_bits: float = Field(..., description="achieved - bound")
    satisfied: bool = Field(..., description="slack >= -tolerance")

    @computed_field
    @property
    def fraction(self) -> float:
        return self.fraction_numerator / self.fraction_denominator

    @model_validator(mode="after")
    def _check_dims(self):
        if self.k_t > self.n_t or self.k_r > self.n_r:
            raise InvalidInputError(
                f"Размер подканала {self.k_t}x{self.k_r} превышает {self.n_t}x{self.n_r}")
        return self


class SelectionOutput(BaseModel):
    """Вывод команды select"""
    schema_version: str = Field(default_factory=lambda: settings.schema_version)
    power: float = Field(..., gt=0.0)
    full_capacity_bits: float
    result: SelectionResult
    bounds: List[BoundReport] = Field(default_factory=list)
