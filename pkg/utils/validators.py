import math
from typing import Optional, Sequence

import numpy as np


def validate_power(power: float) -> tuple[bool, Optional[str]]:
    """
    Валидирует мощность передатчика

    Args:
        power: Мощность P

    Returns:
        tuple: (is_valid, error_message)
    """
    if power is None or not math.isfinite(power):
        return False, "Мощность должна быть конечным числом"

    if power <= 0:
        return False, f"Мощность должна быть положительной, получено {power}"

    return True, None


def validate_matrix(entries: np.ndarray) -> tuple[bool, Optional[str]]:
    """
    Валидирует комплексную матрицу канала

    Args:
        entries: Двумерный массив коэффициентов

    Returns:
        tuple: (is_valid, error_message)
    """
    if entries.ndim != 2:
        return False, f"Ожидалась двумерная матрица, получено измерений: {entries.ndim}"

    rows, cols = entries.shape
    if rows < 1 or cols < 1:
        return False, f"Размеры матрицы должны быть положительными, получено {rows}x{cols}"

    if not np.all(np.isfinite(entries)):
        return False, "Матрица содержит NaN или бесконечные значения"

    return True, None


def validate_selection_size(k: int, n: int, side: str) -> tuple[bool, Optional[str]]:
    """
    Валидирует размер выбираемого подмножества антенн

    Args:
        k: Число выбираемых антенн
        n: Число доступных антенн
        side: Сторона ("tx" или "rx")

    Returns:
        tuple: (is_valid, error_message)
    """
    if k < 1:
        return False, f"k_{side[0]} должно быть не меньше 1, получено {k}"

    if k > n:
        return False, f"k_{side[0]}={k} превышает число антенн n_{side[0]}={n}"

    return True, None


def validate_subset(members: Sequence[int], universe: int) -> tuple[bool, Optional[str]]:
    """Проверяет подмножество индексов (1-based)"""
    if not members:
        return False, "Подмножество индексов не может быть пустым"

    for index in members:
        if index < 1 or index > universe:
            return False, f"Индекс {index} вне диапазона [1, {universe}]"

    if any(b <= a for a, b in zip(members, members[1:])):
        return False, "Индексы должны строго возрастать без повторов"

    return True, None


def validate_trials(trials: int, min_n: int, max_n: int, dim_cap: int) -> tuple[bool, Optional[str]]:
    """
    Валидирует параметры Монте-Карло прогона

    Args:
        trials: Число испытаний
        min_n: Минимальная размерность
        max_n: Максимальная размерность
        dim_cap: Допустимый предел размерности

    Returns:
        tuple: (is_valid, error_message)
    """
    if trials < 1:
        return False, f"Число испытаний должно быть не меньше 1, получено {trials}"

    if min_n < 1 or max_n < min_n:
        return False, f"Некорректный диапазон размерностей [{min_n}, {max_n}]"

    if max_n > dim_cap:
        return False, f"Размерность {max_n} превышает предел {dim_cap}"

    return True, None
