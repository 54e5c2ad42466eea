import asyncio
import logging
import math
import os
from typing import List, Literal, NamedTuple, Optional, Sequence

import numpy as np

from config import settings
from models.matrix import HermitianForm
from models.reports import IdentityReport, IdentityRun, TightnessReport, TrialFailure, VerificationRun
from services.identity_service import IdentityService
from services.selection_service import SelectionService
from utils.errors import DomainError, InvalidInputError
from utils.validators import validate_power, validate_selection_size, validate_trials

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1

# Ниже этого значения отношение C*/C определяется ошибкой округления
MIN_RATIO_CAPACITY_BITS = 1e-12

Method = Literal["exhaustive", "greedy"]


class TrialOutcome(NamedTuple):
    failures: List[TrialFailure]
    min_slack: float
    checks: int


class VerificationService:
    """Сервис Монте-Карло проверки границ, тождеств и примеров достижимости"""

    def __init__(self, selection_service: Optional[SelectionService] = None,
                 identity_service: Optional[IdentityService] = None,
                 threads: Optional[int] = None):
        self.selection = selection_service or SelectionService()
        self.channels = self.selection.channels
        self.identities = identity_service or IdentityService(self.channels.matrix)
        self.threads = threads or settings.threads or os.cpu_count() or 1
        self.max_dim = settings.max_dim

    async def verify_theorem(self, theorem: int, trials: int, max_n: int, powers: Sequence[float],
                             seed: int, method: Method = "exhaustive", min_n: int = 1) -> VerificationRun:
        """
        Проверяет границу на случайных гауссовских каналах для всех пар (k_t, k_r)

        Args:
            theorem: 1 - доля k_t·k_r/(n_t·n_r), 2 - доля min(k_t,k_r)/min(n_t,n_r) минус G
            trials: Число испытаний
            max_n: Максимальное число антенн на стороне
            powers: Набор мощностей
            seed: Главное зерно
            method: exhaustive или greedy
            min_n: Минимальное число антенн на стороне

        Returns:
            VerificationRun: Нарушения и минимальный запас
        """
        if theorem not in (1, 2):
            raise InvalidInputError(f"Неизвестная граница: {theorem}")
        if method not in ("exhaustive", "greedy"):
            raise InvalidInputError(f"Неизвестный метод: {method}")
        is_valid, error = validate_trials(trials, min_n, max_n, self.max_dim)
        if not is_valid:
            raise InvalidInputError(error)
        if not powers:
            raise InvalidInputError("Набор мощностей пуст")
        for power in powers:
            is_valid, error = validate_power(power)
            if not is_valid:
                raise InvalidInputError(error)

        logger.info(f"Проверка границы {theorem}: {trials} испытаний, n в [{min_n}, {max_n}], "
                    f"P = {list(powers)}, метод {method}, потоков {self.threads}")

        progress_step = max(1, trials // 10)

        def run_trial(trial: int) -> TrialOutcome:
            outcome = self._run_trial(trial, seed, min_n, max_n, powers, theorem, method)
            if (trial + 1) % progress_step == 0:
                logger.info(f"Испытание {trial + 1}/{trials} завершено")
            return outcome

        outcomes = await self._gather(run_trial, trials)

        failures = [failure for outcome in outcomes for failure in outcome.failures]
        run = VerificationRun(
            theorem=theorem,
            method=method,
            seed=seed,
            trials=trials,
            dim_range=(min_n, max_n),
            power_set=list(powers),
            asserted=not (theorem == 2 and method == "greedy"),
            checks=sum(outcome.checks for outcome in outcomes),
            failures=failures,
            min_slack_bits=min(outcome.min_slack for outcome in outcomes),
        )
        if failures:
            logger.warning(f"Граница {theorem} нарушена в {len(failures)} проверках")
        return run

    async def verify_identities(self, n: int, ks: Optional[Sequence[int]], trials: int, seed: int,
                                tol: float, power: float = 1.0) -> IdentityRun:
        """
        Проверяет тождества на случайных формах Грама размерности n

        Args:
            n: Размерность формы
            ks: Размеры подмножеств или None для всех k в [1, n-1]
            trials: Число случайных форм
            seed: Главное зерно
            tol: Допуск
            power: Мощность формы Грама

        Returns:
            IdentityRun: Все отчеты и общий вердикт
        """
        is_valid, error = validate_trials(trials, n, n, self.max_dim)
        if not is_valid:
            raise InvalidInputError(error)
        is_valid, error = validate_power(power)
        if not is_valid:
            raise InvalidInputError(error)
        ks = self._resolve_ks(n, ks)

        def run_trial(trial: int) -> List[IdentityReport]:
            channel_seed = self._trial_streams(seed, trial, n, n)[2]
            channel = self.channels.gen_gaussian(n, n, channel_seed)
            return self.check_forms([self.channels.matrix.gram(channel, power)], ks, tol)

        logger.info(f"Проверка тождеств: n={n}, k={ks}, {trials} форм, P={power}, допуск {tol:.1e}")
        batches = await self._gather(run_trial, trials)
        reports = [report for batch in batches for report in batch]

        return IdentityRun(
            n=n,
            ks=ks,
            trials=trials,
            seed=seed,
            power=power,
            tolerance=tol,
            reports=reports,
            passed=all(report.passed for report in reports),
        )

    def check_forms(self, forms: Sequence[HermitianForm], ks: Sequence[int], tol: float) -> List[IdentityReport]:
        """
        Прогоняет набор проверок тождеств на заданных формах

        Args:
            forms: Эрмитовы положительно определенные формы
            ks: Размеры подмножеств
            tol: Допуск

        Returns:
            List[IdentityReport]: Отчеты в порядке форм, затем k
        """
        reports: List[IdentityReport] = []
        for form in forms:
            n = form.dim
            for k in ks:
                if k > n:
                    continue
                reports.append(self.identities.verify_property1(form, k, tol))
                if k <= n - 1:
                    reports.append(self.identities.verify_induction_step(form, k, tol))
                reports.append(self.identities.verify_symmetric_coeff(form, k, tol))
                reports.append(self.identities.verify_constant_term(form, k, tol))
                reports.append(self.identities.verify_subset_det_average(form, k, tol))
            if n >= 2:
                reports.append(self.identities.verify_avg_det_bound(form, tol))
        return reports

    def tight(self, case: Literal["all_ones_low_snr", "parallel"], n_t: int, n_r: int,
              k_t: int, k_r: int, power: float) -> TightnessReport:
        """
        Воспроизводит пример, на котором граница достигается

        Args:
            case: all_ones_low_snr - канал из единиц, parallel - единичная матрица
            n_t: Число передающих антенн
            n_r: Число приемных антенн
            k_t: Число выбираемых передатчиков
            k_r: Число выбираемых приемников
            power: Мощность P

        Returns:
            TightnessReport: Наблюдаемое и предсказанное отношение C*/C
        """
        if case == "all_ones_low_snr":
            channel = self.channels.gen_all_ones(n_t, n_r)
            predicted = k_t * k_r / (n_t * n_r)
        elif case == "parallel":
            if n_t != n_r:
                raise InvalidInputError(f"Параллельный канал квадратный, получено {n_t}x{n_r}")
            channel = self.channels.gen_parallel(n_t)
            predicted = min(k_t, k_r) / n_t
        else:
            raise InvalidInputError(f"Неизвестный пример: {case}")

        for is_valid, error in (validate_selection_size(k_t, n_t, "tx"),
                                validate_selection_size(k_r, n_r, "rx")):
            if not is_valid:
                raise InvalidInputError(error)

        full = self.channels.capacity(channel, power)
        if full.capacity_bits < MIN_RATIO_CAPACITY_BITS:
            raise DomainError(
                f"Пропускная способность полного канала {full.capacity_bits!r} при P={power!r} "
                f"неотличима от 0; отношение C*/C не определено")
        best = self.selection.exhaustive_best(channel, power, k_t, k_r)
        observed = best.capacity_bits / full.capacity_bits

        return TightnessReport(
            case=case,
            n_t=n_t,
            n_r=n_r,
            k_t=k_t,
            k_r=k_r,
            power=power,
            full_capacity_bits=full.capacity_bits,
            best_capacity_bits=best.capacity_bits,
            ratio_observed=observed,
            ratio_predicted=predicted,
            abs_error=abs(observed - predicted),
        )

    def _run_trial(self, trial: int, seed: int, min_n: int, max_n: int, powers: Sequence[float],
                   theorem: int, method: Method) -> TrialOutcome:
        n_t, n_r, channel_seed = self._trial_streams(seed, trial, min_n, max_n)
        channel = self.channels.gen_gaussian(n_t, n_r, channel_seed)

        failures: List[TrialFailure] = []
        min_slack = math.inf
        checks = 0
        for power in powers:
            full = self.channels.capacity(channel, power)
            for k_t in range(1, n_t + 1):
                for k_r in range(1, n_r + 1):
                    if method == "exhaustive":
                        result = self.selection.exhaustive_best(channel, power, k_t, k_r)
                    else:
                        result = self.selection.greedy_prune(channel, power, k_t, k_r)
                    bound_fn = self.selection.theorem1_bound if theorem == 1 else self.selection.theorem2_bound
                    bound = bound_fn(full, k_t, k_r, result.capacity_bits)
                    checks += 1
                    min_slack = min(min_slack, bound.slack_bits)
                    if not bound.satisfied:
                        failures.append(TrialFailure(
                            trial=trial,
                            channel_seed=channel_seed,
                            n_t=n_t,
                            n_r=n_r,
                            k_t=k_t,
                            k_r=k_r,
                            power=power,
                            slack_bits=bound.slack_bits,
                        ))
        return TrialOutcome(failures, min_slack, checks)

    @staticmethod
    def _trial_streams(seed: int, trial: int, min_n: int, max_n: int) -> tuple:
        """Размеры и зерно канала, выведенные из (главное зерно, номер испытания)"""
        sequence = np.random.SeedSequence([int(seed) & SEED_MASK, trial])
        rng = np.random.default_rng(sequence)
        n_t = int(rng.integers(min_n, max_n + 1))
        n_r = int(rng.integers(min_n, max_n + 1))
        channel_seed = int(sequence.generate_state(1, dtype=np.uint64)[0])
        return n_t, n_r, channel_seed

    async def _gather(self, work, trials: int) -> list:
        """Запускает испытания в потоках с ограничением параллелизма; порядок результатов - по номеру"""
        semaphore = asyncio.Semaphore(self.threads)

        async def run(trial: int):
            async with semaphore:
                return await asyncio.to_thread(work, trial)

        return await asyncio.gather(*(run(trial) for trial in range(trials)))

    @staticmethod
    def _resolve_ks(n: int, ks: Optional[Sequence[int]]) -> List[int]:
        if ks is None:
            return list(range(1, n)) or [1]
        resolved = sorted(set(int(k) for k in ks))
        for k in resolved:
            if k < 1 or k > n:
                raise InvalidInputError(f"k должно быть в [1, {n}], получено {k}")
        return resolved
