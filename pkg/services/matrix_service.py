import logging
from typing import Optional, Union

import numpy as np

from config import settings
from models.channel import MimoChannel
from models.matrix import HermitianForm, Polynomial, SubsetIndex
from utils.errors import DomainError, InvalidInputError, NumericalFailureError
from utils.jacobi import jacobi_eigenvalues
from utils.validators import validate_matrix, validate_power

logger = logging.getLogger(__name__)

# Нижняя граница спектра формы Грама I + P·HH†
GRAM_FLOOR_TOLERANCE = 1e-9
EIGEN_ERROR_FACTOR = 64


class MatrixService:
    """Сервис плотной эрмитовой линейной алгебры: формы Грама, спектры, определители, характеристические многочлены"""

    def __init__(self, eigensolver: Optional[str] = None):
        self.eigensolver = eigensolver or settings.eigensolver
        if self.eigensolver not in ("lapack", "jacobi"):
            raise InvalidInputError(
                f"Неизвестный метод собственных значений: {self.eigensolver}")
        self.jacobi_tolerance = settings.jacobi_tolerance
        self.jacobi_max_sweeps = settings.jacobi_max_sweeps

    def gram(self, H: Union[MimoChannel, np.ndarray], power: float) -> HermitianForm:
        """
        Строит форму Грама F = I + P·HH† (n_r x n_r)

        Args:
            H: Матрица канала или канал
            power: Мощность P > 0

        Returns:
            HermitianForm: Форма с вычисленным спектром
        """
        h = self._as_matrix(H)
        return self._gram_form(h, power)

    def dual_gram(self, H: Union[MimoChannel, np.ndarray], power: float) -> HermitianForm:
        """
        Строит двойственную форму F̂ = I + P·H†H (n_t x n_t)

        Args:
            H: Матрица канала или канал
            power: Мощность P > 0

        Returns:
            HermitianForm: Форма с вычисленным спектром
        """
        h = self._as_matrix(H)
        return self._gram_form(h.conj().T, power)

    def principal_submatrix(self, form: HermitianForm, subset: SubsetIndex) -> HermitianForm:
        """
        Главная подматрица по строкам и столбцам из subset

        Args:
            form: Эрмитова форма
            subset: Индексы (1-based) над [form.dim]

        Returns:
            HermitianForm: Подматрица |subset| x |subset|
        """
        if subset.universe != form.dim:
            raise InvalidInputError(
                f"Подмножество над [{subset.universe}] не подходит к матрице размерности {form.dim}")
        idx = subset.zero_based()
        return HermitianForm(entries=form.entries[np.ix_(idx, idx)])

    def eigenvalues(self, form: HermitianForm) -> np.ndarray:
        """
        Собственные значения эрмитовой формы

        Args:
            form: Эрмитова форма

        Returns:
            np.ndarray: Вещественные значения по невозрастанию
        """
        if form.spectrum is not None:
            return form.spectrum.copy()
        return self._eigvals(form.entries)

    def log_det(self, form: HermitianForm) -> float:
        """
        log2 det формы как сумма log2 собственных значений

        Args:
            form: Положительно определенная форма

        Returns:
            float: Логарифм определителя в битах
        """
        spectrum = self.eigenvalues(form)
        smallest = float(spectrum[-1])
        if smallest <= 1e-12 * max(1.0, float(spectrum[0])):
            raise DomainError(
                f"Форма не положительно определена: минимальное собственное значение {smallest:.3e}")
        return float(np.sum(np.log2(spectrum)))

    def determinant(self, form: HermitianForm) -> float:
        """Определитель как произведение собственных значений"""
        return float(np.prod(self.eigenvalues(form)))

    def char_poly(self, form: HermitianForm) -> Polynomial:
        """
        Характеристический многочлен det(λI - A), разложенный по вычисленному спектру

        Args:
            form: Эрмитова форма

        Returns:
            Polynomial: Приведенный многочлен степени n
        """
        roots = self.eigenvalues(form)
        coeffs = np.polynomial.polynomial.polyfromroots(roots).real.copy()
        coeffs[-1] = 1.0
        return Polynomial(coeffs=coeffs)

    def poly_derivative(self, poly: Polynomial, order: int) -> Polynomial:
        """
        Формальная производная порядка order

        Args:
            poly: Многочлен
            order: Порядок производной (0 - тождество)

        Returns:
            Polynomial: Производная; нулевой многочлен, если order > degree
        """
        if order < 0:
            raise InvalidInputError(f"Порядок производной должен быть неотрицательным, получено {order}")
        if order == 0:
            return poly
        if order > poly.degree:
            return Polynomial(coeffs=[0.0])
        return Polynomial(coeffs=np.polynomial.polynomial.polyder(poly.as_array(), m=order))

    def stacked_capacity(self, stack: np.ndarray, power: float) -> np.ndarray:
        """
        Пропускные способности стопки подканалов формы (..., k_r, k_t)

        По теореме Сильвестра используется меньшая из форм I + P·XX† и I + P·X†X.

        Args:
            stack: Массив матриц подканалов
            power: Мощность P

        Returns:
            np.ndarray: log2 det для каждого подканала
        """
        k_r, k_t = stack.shape[-2], stack.shape[-1]
        x = stack if k_r <= k_t else np.swapaxes(stack.conj(), -1, -2)
        size = x.shape[-2]
        grams = np.eye(size) + power * (x @ np.swapaxes(x.conj(), -1, -2))

        if self.eigensolver == "lapack":
            try:
                spectra = np.linalg.eigvalsh(grams)
            except np.linalg.LinAlgError as e:
                raise NumericalFailureError(f"Ошибка LAPACK при вычислении спектров: {e}")
        else:
            flat = grams.reshape(-1, size, size)
            spectra = np.stack([self._eigvals(g) for g in flat]).reshape(grams.shape[:-1])

        # собственные значения I + P·XX† не меньше 1
        return np.sum(np.log2(np.maximum(spectra, 1.0)), axis=-1)

    def _gram_form(self, h: np.ndarray, power: float) -> HermitianForm:
        is_valid, error = validate_power(power)
        if not is_valid:
            raise InvalidInputError(error)

        size = h.shape[0]
        product = h @ h.conj().T
        entries = np.eye(size) + power * (product + product.conj().T) / 2
        spectrum = self._eigvals(entries)

        smallest = float(spectrum[-1])
        if smallest < 1.0 - self._floor_tolerance(size, float(spectrum[0])):
            raise NumericalFailureError(
                f"Собственное значение формы Грама {smallest!r} ниже 1",
                residual=1.0 - smallest)
        if smallest < 1.0:
            logger.debug(f"Спектр формы Грама поднят до 1: минимальное значение {smallest!r}")
            spectrum = np.maximum(spectrum, 1.0)
        return HermitianForm(entries=entries, spectrum=spectrum)

    @staticmethod
    def _floor_tolerance(size: int, largest: float) -> float:
        """Допуск на нижнюю границу спектра: ошибка решателя растет как eps·λ_max"""
        return max(GRAM_FLOOR_TOLERANCE, EIGEN_ERROR_FACTOR * size * np.finfo(np.float64).eps * abs(largest))

    def _eigvals(self, entries: np.ndarray) -> np.ndarray:
        if self.eigensolver == "jacobi":
            return jacobi_eigenvalues(
                entries, tolerance=self.jacobi_tolerance, max_sweeps=self.jacobi_max_sweeps)
        try:
            values = np.linalg.eigvalsh(entries)
        except np.linalg.LinAlgError as e:
            off = float(np.linalg.norm(entries - np.diag(np.diag(entries))))
            logger.error(f"LAPACK не сошелся: {e}")
            raise NumericalFailureError("Решатель собственных значений не сошелся", residual=off)
        return values[::-1].copy()

    @staticmethod
    def _as_matrix(H: Union[MimoChannel, np.ndarray]) -> np.ndarray:
        if isinstance(H, MimoChannel):
            return H.H
        h = np.asarray(H, dtype=np.complex128)
        is_valid, error = validate_matrix(h)
        if not is_valid:
            raise InvalidInputError(error)
        return h
