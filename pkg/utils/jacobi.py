import math

import numpy as np

from utils.errors import NumericalFailureError


def _off_norm(a: np.ndarray) -> float:
    """Норма Фробениуса внедиагональной части"""
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, p: int, q: int) -> None:
    """
    Зануляет элемент a[p, q] эрмитовой матрицы унитарным поворотом

    Сначала фазовый множитель делает a[p, q] вещественным, затем
    применяется вещественный поворот Якоби в плоскости (p, q).
    """
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return

    phase = apq / mag
    a[:, q] *= np.conj(phase)
    a[q, :] *= phase

    app, aqq = a[p, p].real, a[q, q].real
    phi = 0.5 * math.atan2(2.0 * mag, aqq - app)
    c, s = math.cos(phi), math.sin(phi)

    col_p, col_q = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q

    row_p, row_q = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q

    # нули по построению
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def jacobi_eigenvalues(entries: np.ndarray, tolerance: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """
    Собственные значения эрмитовой матрицы циклическим методом Якоби

    Args:
        entries: Эрмитова матрица n x n
        tolerance: Порог отношения внедиагональной нормы к полной норме Фробениуса
        max_sweeps: Максимальное число полных проходов

    Returns:
        np.ndarray: Собственные значения по невозрастанию
    """
    a = np.array(entries, dtype=np.complex128, copy=True)
    n = a.shape[0]
    total = float(np.linalg.norm(a))
    threshold = tolerance * total

    off = _off_norm(a)
    sweeps = 0
    while off > threshold:
        if sweeps >= max_sweeps:
            raise NumericalFailureError(
                f"Метод Якоби не сошелся за {max_sweeps} проходов", residual=off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, p, q)
        sweeps += 1
        off = _off_norm(a)

    return np.sort(np.diag(a).real)[::-1]
