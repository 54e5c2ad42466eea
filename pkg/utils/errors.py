from typing import Optional


class MimoSelectError(Exception):
    """Базовая ошибка приложения; exit_code возвращается в оболочку"""
    exit_code = 2


class InvalidInputError(MimoSelectError):
    """Некорректные входные данные"""
    exit_code = 2


class ChannelParseError(InvalidInputError):
    """Ошибка разбора файла канала с указанием места"""

    def __init__(self, path: str, message: str, location: Optional[str] = None):
        self.path = str(path)
        self.location = location
        where = f"{self.path}:{location}" if location else self.path
        super().__init__(f"{where}: {message}")


class DomainError(InvalidInputError):
    """Матрица вне области определения операции (например, не положительно определена)"""


class NumericalFailureError(MimoSelectError):
    """Сбой численного метода"""
    exit_code = 2

    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = residual
        super().__init__(f"{message} (невязка {residual:.3e})")


class CapacityBudgetError(MimoSelectError):
    """Превышен лимит перебора"""
    exit_code = 3

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(
            f"Требуется {required} вычислений при лимите {cap}; "
            f"используйте --method greedy или увеличьте --cap")
