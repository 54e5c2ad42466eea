from itertools import combinations
from math import comb, prod
from typing import Iterator, Sequence

import numpy as np


def lex_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """
    Перечисляет k-подмножества [n] в лексикографическом порядке

    Args:
        n: Размер множества
        k: Мощность подмножеств

    Returns:
        Iterator: Кортежи 1-based индексов
    """
    return combinations(range(1, n + 1), k)


def subset_array(n: int, k: int) -> np.ndarray:
    """Все k-подмножества [n] как массив 0-based индексов формы (C(n,k), k)"""
    if k == 0:
        return np.zeros((1, 0), dtype=np.intp)
    rows = list(combinations(range(n), k))
    return np.array(rows, dtype=np.intp).reshape(len(rows), k)


def count_supersets(n: int, base: int, k: int) -> int:
    """Считает перебором k-подмножества [n], содержащие [base]"""
    required = set(range(1, base + 1))
    return sum(1 for subset in lex_subsets(n, k) if required.issubset(subset))


def elementary_symmetric(values: Sequence[float], k: int) -> float:
    """Элементарный симметрический многочлен e_k прямым перебором"""
    if k == 0:
        return 1.0
    return float(sum(prod(group) for group in combinations(values, k)))


def binomial_product(n_t: int, k_t: int, n_r: int, k_r: int) -> int:
    """C(n_t,k_t)·C(n_r,k_r) в точной целочисленной арифметике"""
    return comb(n_t, k_t) * comb(n_r, k_r)
