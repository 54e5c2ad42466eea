import logging
import math
from math import comb, factorial
from typing import Iterator, Optional, Tuple

import numpy as np

from config import settings
from models.matrix import HermitianForm, Polynomial, SubsetIndex
from models.reports import IdentityName, IdentityReport
from services.matrix_service import MatrixService
from utils.errors import CapacityBudgetError, DomainError, InvalidInputError
from utils.subsets import count_supersets, elementary_symmetric, lex_subsets

logger = logging.getLogger(__name__)


class IdentityService:
    """Сервис численной проверки тождеств для главных подматриц и характеристических многочленов"""

    def __init__(self, matrix_service: Optional[MatrixService] = None,
                 enumeration_cap: Optional[int] = None):
        self.matrix = matrix_service or MatrixService()
        self.enumeration_cap = settings.enumeration_cap if enumeration_cap is None else enumeration_cap

    def sum_subset_charpolys(self, form: HermitianForm, k: int) -> Polynomial:
        """
        Вычисляет (n-k)!·Σ ρ_Λ(λ) по всем Λ ⊆ [n], |Λ| = k

        Args:
            form: Эрмитова форма размерности n
            k: Размер подмножеств, 1 <= k <= n

        Returns:
            Polynomial: Многочлен степени k со старшим коэффициентом (n-k)!·C(n,k)
        """
        self._check_k(form, k, upper=form.dim)
        total = self._subset_charpoly_sum(form, k)
        return Polynomial(coeffs=factorial(form.dim - k) * total)

    def verify_property1(self, form: HermitianForm, k: int, tol: float) -> IdentityReport:
        """
        Сравнивает (n-k)!·Σ ρ_Λ с (n-k)-й производной ρ

        Args:
            form: Эрмитова форма
            k: Размер подмножеств
            tol: Допуск по относительной ошибке

        Returns:
            IdentityReport: Вердикт с максимальными ошибками по коэффициентам
        """
        lhs = self.sum_subset_charpolys(form, k)
        rhs = self.matrix.poly_derivative(self.matrix.char_poly(form), form.dim - k)
        name: IdentityName = "derivative_special_case" if k == form.dim - 1 else "property1"
        return self._report(name, form.dim, k, lhs.as_array(), rhs.as_array(), tol)

    def verify_induction_step(self, form: HermitianForm, k: int, tol: float) -> IdentityReport:
        """
        Проверяет Σ_{|Λ|=k+1} ρ'_Λ = (n-k)·Σ_{|Λ|=k} ρ_Λ

        Args:
            form: Эрмитова форма
            k: Размер подмножеств, 1 <= k <= n-1
            tol: Допуск

        Returns:
            IdentityReport: Вердикт
        """
        n = form.dim
        self._check_k(form, k, upper=n - 1)
        lhs = self._subset_charpoly_sum(form, k + 1, derivative=1)
        rhs = (n - k) * self._subset_charpoly_sum(form, k)
        return self._report("induction_step", n, k, lhs, rhs, tol)

    def verify_symmetric_coeff(self, form: HermitianForm, k: int, tol: float) -> IdentityReport:
        """
        Проверяет f_(n-k) = (-1)^k·e_k(λ_1, ..., λ_n)

        Args:
            form: Эрмитова форма
            k: Степень элементарного симметрического многочлена, 1 <= k <= n
            tol: Допуск

        Returns:
            IdentityReport: Вердикт
        """
        n = form.dim
        self._check_k(form, k, upper=n)
        coeffs = self.matrix.char_poly(form).as_array()
        reference = (-1) ** k * elementary_symmetric(self.matrix.eigenvalues(form), k)
        return self._report("symmetric_coeff", n, k,
                            np.array([coeffs[n - k]]), np.array([reference]), tol)

    def verify_avg_det_bound(self, form: HermitianForm, tol: float) -> IdentityReport:
        """
        Проверяет (1/n)·Σ_i det(A_{[n]\\i}) >= det(A)^((n-1)/n)

        Args:
            form: Положительно определенная форма, n >= 2
            tol: Допуск по относительному дефициту

        Returns:
            IdentityReport: Вердикт; slack - относительный запас неравенства
        """
        n = form.dim
        if n < 2:
            raise InvalidInputError(f"Неравенство требует n >= 2, получено {n}")
        det_full = self.matrix.determinant(form)
        if det_full <= 0:
            raise DomainError(f"Форма не положительно определена: det = {det_full:.3e}")

        full = SubsetIndex.full(n)
        minors = [self.matrix.determinant(self.matrix.principal_submatrix(form, full.without(i)))
                  for i in range(1, n + 1)]
        average = float(np.mean(minors))
        reference = det_full ** ((n - 1) / n)

        deficit = max(0.0, reference - average)
        report = IdentityReport(
            identity="avg_det_bound",
            n=n,
            k=n - 1,
            max_abs_error=deficit,
            max_rel_error=deficit / reference,
            tolerance=tol,
            passed=average >= reference * (1.0 - tol),
            slack=(average - reference) / reference,
        )
        if not report.passed:
            logger.warning(f"Неравенство средних определителей нарушено: {average} < {reference}")
        return report

    def verify_constant_term(self, form: HermitianForm, k: int, tol: float) -> IdentityReport:
        """Проверяет ρ_Λ(0) = (-1)^k·det(A_Λ) для всех |Λ| = k (определитель через LU)"""
        self._check_k(form, k, upper=form.dim)
        constants, determinants = [], []
        for sub in self._principal_submatrices(form, k):
            constants.append(self.matrix.char_poly(sub).coeffs[0])
            determinants.append((-1) ** k * float(np.linalg.det(sub.entries).real))
        return self._report("constant_term", form.dim, k,
                            np.array(constants), np.array(determinants), tol)

    def verify_subset_det_average(self, form: HermitianForm, k: int, tol: float) -> IdentityReport:
        """Проверяет Σ_{|Λ|=k} det(A_Λ) = e_k(λ)"""
        self._check_k(form, k, upper=form.dim)
        total = sum(float(np.linalg.det(sub.entries).real)
                    for sub in self._principal_submatrices(form, k))
        reference = elementary_symmetric(self.matrix.eigenvalues(form), k)
        return self._report("subset_det_average", form.dim, k,
                            np.array([total]), np.array([reference]), tol)

    def verify_case2_tuple_count(self, n_r: int, n_t: int, k_r: int) -> bool:
        """
        Сравнивает число k_r-подмножеств [n_r], содержащих [n_t], с C(n_r-n_t, k_r-n_t)

        Args:
            n_r: Число приемных антенн
            n_t: Число передающих антенн
            k_r: Размер подмножеств

        Returns:
            bool: Совпадает ли перебор с биномиальным коэффициентом
        """
        if not 1 <= n_t <= k_r <= n_r:
            raise InvalidInputError(
                f"Требуется 1 <= n_t <= k_r <= n_r, получено n_t={n_t}, k_r={k_r}, n_r={n_r}")
        self._check_cap(comb(n_r, k_r))
        return count_supersets(n_r, n_t, k_r) == comb(n_r - n_t, k_r - n_t)

    def _subset_charpoly_sum(self, form: HermitianForm, k: int, derivative: int = 0) -> np.ndarray:
        """Σ_{|Λ|=k} ρ_Λ^(derivative) как массив коэффициентов длины k + 1"""
        total = np.zeros(k + 1)
        for sub in self._principal_submatrices(form, k):
            poly = self.matrix.poly_derivative(self.matrix.char_poly(sub), derivative)
            coeffs = poly.as_array()
            total[:len(coeffs)] += coeffs
        return total

    def _principal_submatrices(self, form: HermitianForm, k: int) -> Iterator[HermitianForm]:
        self._check_cap(comb(form.dim, k))
        for members in lex_subsets(form.dim, k):
            yield self.matrix.principal_submatrix(form, SubsetIndex.of(form.dim, members))

    def _report(self, name: IdentityName, n: int, k: int,
                lhs: np.ndarray, rhs: np.ndarray, tol: float) -> IdentityReport:
        max_abs, max_rel = self._errors(lhs, rhs)
        report = IdentityReport(
            identity=name,
            n=n,
            k=k,
            max_abs_error=max_abs,
            max_rel_error=max_rel,
            tolerance=tol,
            passed=max_rel <= tol,
        )
        if not report.passed:
            logger.warning(f"Тождество {name} (n={n}, k={k}) не выполнено: "
                           f"относительная ошибка {max_rel:.3e} > {tol:.1e}")
        return report

    @staticmethod
    def _errors(lhs: np.ndarray, rhs: np.ndarray) -> Tuple[float, float]:
        """Максимальные абсолютная и относительная ошибки по коэффициентам"""
        size = max(len(lhs), len(rhs))
        a = np.pad(np.asarray(lhs, dtype=np.float64), (0, size - len(lhs)))
        b = np.pad(np.asarray(rhs, dtype=np.float64), (0, size - len(rhs)))
        diff = np.abs(a - b)
        rel = diff / np.maximum(1.0, np.abs(b))
        max_abs, max_rel = float(np.max(diff)), float(np.max(rel))
        if not (math.isfinite(max_abs) and math.isfinite(max_rel)):
            return math.inf, math.inf
        return max_abs, max_rel

    def _check_k(self, form: HermitianForm, k: int, upper: int) -> None:
        if k < 1 or k > upper:
            raise InvalidInputError(f"k должно быть в [1, {upper}] для n = {form.dim}, получено {k}")

    def _check_cap(self, count: int) -> None:
        if count > self.enumeration_cap:
            raise CapacityBudgetError(count, self.enumeration_cap)
