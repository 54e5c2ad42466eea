import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis import settings as hyp_settings

from models.matrix import HermitianForm
from services.channel_service import ChannelService
from services.identity_service import IdentityService
from utils.errors import CapacityBudgetError, DomainError, InvalidInputError

channel_service = ChannelService()
identity_service = IdentityService(channel_service.matrix)


def gaussian_form(n: int, seed: int, power: float = 1.0) -> HermitianForm:
    channel = channel_service.gen_gaussian(n, n, seed)
    return channel_service.matrix.gram(channel, power)


class TestIdentityService:
    """Тесты для IdentityService"""

    @pytest.fixture
    def service(self):
        """Фикстура для создания экземпляра IdentityService"""
        return IdentityService()

    @pytest.fixture
    def diagonal_form(self):
        """Фикстура: diag(1, 2, 3)"""
        return HermitianForm(entries=np.diag([1.0, 2.0, 3.0]))

    def test_sum_subset_charpolys_diagonal(self, service, diagonal_form):
        """Тест суммы по парам для diag(1, 2, 3): 1!·(3λ² - 12λ + 11)"""
        poly = service.sum_subset_charpolys(diagonal_form, 2)

        assert poly.degree == 2
        assert np.allclose(poly.as_array(), [11.0, -12.0, 3.0])

    def test_sum_subset_charpolys_leading_coefficient(self, service):
        """Тест старшего коэффициента (n-k)!·C(n,k)"""
        form = gaussian_form(4, seed=21)
        for k in range(1, 5):
            poly = service.sum_subset_charpolys(form, k)
            assert math.isclose(poly.leading, math.factorial(4 - k) * math.comb(4, k), rel_tol=1e-12)

    def test_property1_and_special_case_names(self, service, diagonal_form):
        """Тест имени отчета: k = n-1 - частный случай с первой производной"""
        general = service.verify_property1(diagonal_form, 1, 1e-10)
        special = service.verify_property1(diagonal_form, 2, 1e-10)

        assert general.identity == "property1" and general.passed
        assert special.identity == "derivative_special_case" and special.passed

    def test_property1_full_set_is_trivial(self, service):
        """Тест k = n: производная нулевого порядка"""
        form = gaussian_form(3, seed=2)
        report = service.verify_property1(form, 3, 1e-12)
        assert report.passed
        assert report.max_abs_error <= 1e-10

    def test_induction_step(self, service):
        """Тест шага индукции на случайной форме"""
        form = gaussian_form(5, seed=33)
        for k in range(1, 5):
            assert service.verify_induction_step(form, k, 1e-9).passed

    def test_induction_step_rejects_k_equal_n(self, service, diagonal_form):
        """Тест отклонения k = n для шага индукции"""
        with pytest.raises(InvalidInputError):
            service.verify_induction_step(diagonal_form, 3, 1e-9)

    def test_symmetric_coeff(self, service, diagonal_form):
        """Тест f_(n-k) = (-1)^k·e_k для diag(1, 2, 3)"""
        for k in range(1, 4):
            assert service.verify_symmetric_coeff(diagonal_form, k, 1e-12).passed

    def test_avg_det_bound(self, service):
        """Тест неравенства средних определителей"""
        form = gaussian_form(4, seed=44, power=10.0)
        report = service.verify_avg_det_bound(form, 1e-9)

        assert report.passed
        assert report.slack >= 0

    def test_avg_det_bound_equality_for_scalar_matrix(self, service):
        """Тест равенства для c·I: c^(n-1) = (c^n)^((n-1)/n)"""
        form = HermitianForm(entries=4.0 * np.eye(3))
        report = service.verify_avg_det_bound(form, 1e-12)

        assert report.passed
        assert abs(report.slack) < 1e-12

    def test_avg_det_bound_is_relative_for_small_determinants(self, service):
        """Тест относительного сравнения при det(A) < 1: дефицит 1e-6 при эталоне 0.1"""
        form = HermitianForm(entries=np.diag([0.1, 0.1]), spectrum=[0.100002, 0.1])

        strict = service.verify_avg_det_bound(form, 5e-6)
        assert not strict.passed
        assert math.isclose(strict.max_rel_error, strict.max_abs_error / math.sqrt(0.0100002),
                            rel_tol=1e-9)
        assert strict.slack < -5e-6

        assert service.verify_avg_det_bound(form, 2e-5).passed

    def test_repeated_eigenvalues(self, service):
        """Тест тождеств на форме с кратными собственными значениями 2, 2, 2, 5, 5"""
        rng = np.random.default_rng(7)
        basis, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
        entries = basis @ np.diag([2.0, 2.0, 2.0, 5.0, 5.0]) @ basis.conj().T
        form = HermitianForm(entries=(entries + entries.conj().T) / 2)

        for k in range(1, 6):
            assert service.verify_property1(form, k, 1e-8).passed
            if k < 5:
                assert service.verify_induction_step(form, k, 1e-8).passed

    @pytest.mark.parametrize("n,seed", [(3, 61), (4, 62), (5, 63)])
    def test_identities_at_high_power(self, service, n, seed):
        """Тест тождеств на формах Грама при P=1e4 с допуском 1e-6"""
        form = gaussian_form(n, seed=seed, power=1e4)
        for k in range(1, n + 1):
            assert service.verify_property1(form, k, 1e-6).passed
            if k < n:
                assert service.verify_induction_step(form, k, 1e-6).passed

    def test_avg_det_bound_requires_two_dims(self, service):
        """Тест отклонения n = 1"""
        with pytest.raises(InvalidInputError):
            service.verify_avg_det_bound(HermitianForm(entries=np.eye(1)), 1e-9)

    def test_avg_det_bound_rejects_indefinite(self, service):
        """Тест ошибки области для неположительно определенной формы"""
        with pytest.raises(DomainError):
            service.verify_avg_det_bound(HermitianForm(entries=np.diag([1.0, -1.0])), 1e-9)

    def test_constant_term_and_subset_det_average(self, service):
        """Тест свободных членов и суммы главных миноров"""
        form = gaussian_form(4, seed=55)
        for k in range(1, 5):
            assert service.verify_constant_term(form, k, 1e-9).passed
            assert service.verify_subset_det_average(form, k, 1e-9).passed

    def test_failure_is_reported(self, service, diagonal_form):
        """Тест отчета о невыполненном тождестве при искаженном кэше спектра"""
        distorted = HermitianForm(entries=diagonal_form.entries, spectrum=[3.5, 2.0, 1.0])
        report = service.verify_subset_det_average(distorted, 1, 1e-6)

        assert not report.passed
        assert report.max_rel_error > 1e-6

    @pytest.mark.parametrize("n_r,n_t,k_r", [(4, 2, 3), (5, 1, 1), (6, 3, 6), (5, 2, 4)])
    def test_case2_tuple_count(self, service, n_r, n_t, k_r):
        """Тест подсчета подмножеств, содержащих [n_t]"""
        assert service.verify_case2_tuple_count(n_r, n_t, k_r) is True

    def test_case2_tuple_count_exhaustive_sweep(self, service):
        """Тест подсчета для всех n_r <= 8, 1 <= n_t <= n_r, n_t <= k_r <= n_r"""
        for n_r in range(1, 9):
            for n_t in range(1, n_r + 1):
                for k_r in range(n_t, n_r + 1):
                    assert service.verify_case2_tuple_count(n_r, n_t, k_r) is True

    def test_case2_tuple_count_rejects_bad_sizes(self, service):
        """Тест отклонения k_r < n_t"""
        with pytest.raises(InvalidInputError):
            service.verify_case2_tuple_count(4, 3, 2)

    def test_enumeration_cap(self):
        """Тест лимита перебора подмножеств"""
        service = IdentityService(enumeration_cap=5)
        with pytest.raises(CapacityBudgetError):
            service.sum_subset_charpolys(gaussian_form(5, seed=1), 2)


@hyp_settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 6), seed=st.integers(0, 2**63 - 1),
       power=st.sampled_from([0.01, 1.0, 100.0]), data=st.data())
def test_property1_on_random_forms(n, seed, power, data):
    """Тест тождества для сумм характеристических многочленов на случайных формах"""
    k = data.draw(st.integers(1, n))
    form = gaussian_form(n, seed, power)
    assert identity_service.verify_property1(form, k, 1e-8).passed
