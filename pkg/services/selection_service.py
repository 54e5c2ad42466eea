import logging
import math
from fractions import Fraction
from math import comb
from typing import List, Literal, Optional

import numpy as np

from config import settings
from models.channel import CapacityReport, MimoChannel
from models.matrix import SubsetIndex
from models.selection import BoundReport, RemovalStep, Selection, SelectionResult
from services.channel_service import ChannelService
from services.matrix_service import MatrixService
from utils.errors import CapacityBudgetError, InvalidInputError
from utils.subsets import binomial_product, subset_array
from utils.validators import validate_power, validate_selection_size

logger = logging.getLogger(__name__)

# Сколько подканалов вычислять одним стековым вызовом
CHUNK_SUBCHANNELS = 65536

Order = Literal["rx_first", "tx_first"]


class SelectionService:
    """Сервис выбора антенн: полный перебор, жадное прореживание и проверка границ"""

    def __init__(self, channel_service: Optional[ChannelService] = None,
                 enumeration_cap: Optional[int] = None):
        self.channels = channel_service or ChannelService()
        self.matrix: MatrixService = self.channels.matrix
        self.enumeration_cap = settings.enumeration_cap if enumeration_cap is None else enumeration_cap
        self.tie_tolerance = settings.tie_tolerance
        self.bound_tolerance = settings.bound_tolerance

    def exhaustive_best(self, channel: MimoChannel, power: float, k_t: int, k_r: int,
                        cap: Optional[int] = None) -> SelectionResult:
        """
        Лучший подканал k_t x k_r полным перебором

        Args:
            channel: MIMO-канал
            power: Мощность P
            k_t: Число передающих антенн
            k_r: Число приемных антенн
            cap: Лимит перебора (по умолчанию из настроек)

        Returns:
            SelectionResult: Лексикографически первый выбор с максимальной пропускной способностью
        """
        self._validate(channel, power, k_t, k_r)
        if cap is None:
            cap = self.enumeration_cap
        elif cap < 1:
            raise InvalidInputError(f"Лимит перебора должен быть не меньше 1, получено {cap}")
        total = binomial_product(channel.n_t, k_t, channel.n_r, k_r)
        if total > cap:
            raise CapacityBudgetError(total, cap)

        tx_sets = subset_array(channel.n_t, k_t)
        rx_sets = subset_array(channel.n_r, k_r)
        capacities = self._enumerate_capacities(channel.H, power, tx_sets, rx_sets)

        pick = self._first_tied(capacities)
        ti, ri = divmod(pick, len(rx_sets))
        selection = Selection(
            tx=SubsetIndex.of(channel.n_t, tx_sets[ti] + 1),
            rx=SubsetIndex.of(channel.n_r, rx_sets[ri] + 1),
        )
        logger.debug(f"Перебор {total} подканалов {k_t}x{k_r}: выбран tx={selection.tx.members}, "
                     f"rx={selection.rx.members}")

        return SelectionResult(
            selection=selection,
            capacity_bits=self._selection_capacity(channel, selection, power),
            method="exhaustive",
        )

    def greedy_prune(self, channel: MimoChannel, power: float, k_t: int, k_r: int,
                     order: Order = "rx_first") -> SelectionResult:
        """
        Жадное прореживание: по одной антенне за шаг, сохраняя максимальную пропускную способность

        Args:
            channel: MIMO-канал
            power: Мощность P
            k_t: Целевое число передающих антенн
            k_r: Целевое число приемных антенн
            order: rx_first - сначала приемники, tx_first - сначала передатчики

        Returns:
            SelectionResult: Выбор и трасса удалений
        """
        self._validate(channel, power, k_t, k_r)
        if order not in ("rx_first", "tx_first"):
            raise InvalidInputError(f"Неизвестный порядок прореживания: {order}")

        active = {"rx": list(range(channel.n_r)), "tx": list(range(channel.n_t))}
        targets = {"rx": k_r, "tx": k_t}
        sides = ("rx", "tx") if order == "rx_first" else ("tx", "rx")

        current = self.channels.capacity(channel, power).capacity_bits
        trace: List[RemovalStep] = []

        for side in sides:
            while len(active[side]) > targets[side]:
                candidates = self._removal_candidates(channel.H, active, side)
                capacities = self.matrix.stacked_capacity(candidates, power)
                pick = self._first_tied(capacities)

                removed = active[side].pop(pick)
                after = float(capacities[pick])
                trace.append(RemovalStep(
                    side=side,
                    removed=removed + 1,
                    capacity_before=current,
                    capacity_after=after,
                    remaining=len(active[side]),
                ))
                current = after

        selection = Selection(
            tx=SubsetIndex.of(channel.n_t, [i + 1 for i in active["tx"]]),
            rx=SubsetIndex.of(channel.n_r, [i + 1 for i in active["rx"]]),
        )
        return SelectionResult(
            selection=selection,
            capacity_bits=self._selection_capacity(channel, selection, power),
            method="greedy",
            order=order,
            trace=trace,
        )

    def per_step_ratio_check(self, trace: List[RemovalStep], tolerance: Optional[float] = None) -> bool:
        """
        Проверяет гарантию каждого шага: C_after >= m/(m+1)·C_before

        Args:
            trace: Трасса жадного прореживания
            tolerance: Допуск (по умолчанию из настроек)

        Returns:
            bool: True, если все шаги удовлетворяют гарантии
        """
        tolerance = self.bound_tolerance if tolerance is None else tolerance
        for step in trace:
            m = step.remaining
            if step.capacity_after < m / (m + 1) * step.capacity_before - tolerance:
                logger.warning(f"Шаг удаления {step.side}{step.removed} нарушает гарантию: "
                               f"{step.capacity_after} < {m}/{m + 1}·{step.capacity_before}")
                return False
        return True

    def theorem1_bound(self, full: CapacityReport, k_t: int, k_r: int, achieved: float) -> BoundReport:
        """
        Граница (k_t·k_r)/(n_t·n_r)·C без аддитивной константы

        Args:
            full: Отчет о полном канале
            k_t: Число передающих антенн
            k_r: Число приемных антенн
            achieved: Достигнутая пропускная способность подканала

        Returns:
            BoundReport: Значение границы и запас
        """
        fraction = Fraction(k_t * k_r, full.n_t * full.n_r)
        return self._bound_report(1, full, k_t, k_r, fraction, 0.0, achieved)

    def theorem2_bound(self, full: CapacityReport, k_t: int, k_r: int, achieved: float) -> BoundReport:
        """
        Граница min(k_t,k_r)/min(n_t,n_r)·C - G, G = log2(C(n_t,k_t)·C(n_r,k_r))

        Args:
            full: Отчет о полном канале
            k_t: Число передающих антенн
            k_r: Число приемных антенн
            achieved: Достигнутая пропускная способность подканала

        Returns:
            BoundReport: Значение границы, константа G и запас
        """
        fraction = Fraction(min(k_t, k_r), min(full.n_t, full.n_r))
        gap = math.log2(binomial_product(full.n_t, k_t, full.n_r, k_r))
        return self._bound_report(2, full, k_t, k_r, fraction, gap, achieved)

    def receive_side_bound(self, full: CapacityReport, k_r: int, achieved: float) -> BoundReport:
        """
        Граница для выбора только приемников (k_t = n_t)

        При k_r <= m = min(n_t, n_r): (k_r/m)·C - log2(C(n_r,k_r)/C(m,k_r)).
        При n_t <= k_r <= n_r: C - log2(C(n_r,k_r)/C(n_r-n_t,k_r-n_t)).
        """
        n_t, n_r = full.n_t, full.n_r
        m = min(n_t, n_r)
        if k_r <= m:
            fraction = Fraction(k_r, m)
            gap = math.log2(comb(n_r, k_r)) - math.log2(comb(m, k_r))
            case = "k_r<=m"
        else:
            fraction = Fraction(1)
            gap = math.log2(comb(n_r, k_r)) - math.log2(comb(n_r - n_t, k_r - n_t))
            case = "k_r>=n_t"
        report = self._bound_report(2, full, n_t, k_r, fraction, max(0.0, gap), achieved)
        return report.model_copy(update={"case": case})

    def bounds_for(self, full: CapacityReport, result: SelectionResult) -> List[BoundReport]:
        """Все применимые границы для результата выбора"""
        k_t, k_r = result.selection.k_t, result.selection.k_r
        bounds = [
            self.theorem1_bound(full, k_t, k_r, result.capacity_bits),
            self.theorem2_bound(full, k_t, k_r, result.capacity_bits),
        ]
        if k_t == full.n_t:
            bounds.append(self.receive_side_bound(full, k_r, result.capacity_bits))
        return bounds

    def _bound_report(self, theorem: int, full: CapacityReport, k_t: int, k_r: int,
                      fraction: Fraction, gap: float, achieved: float) -> BoundReport:
        bound = float(fraction) * full.capacity_bits - gap
        slack = achieved - bound
        return BoundReport(
            theorem=theorem,
            n_t=full.n_t,
            n_r=full.n_r,
            k_t=k_t,
            k_r=k_r,
            full_capacity_bits=full.capacity_bits,
            fraction_numerator=fraction.numerator,
            fraction_denominator=fraction.denominator,
            gap_G_bits=gap,
            bound_bits=bound,
            achieved_bits=achieved,
            slack_bits=slack,
            satisfied=slack >= -self.bound_tolerance,
        )

    def _enumerate_capacities(self, h: np.ndarray, power: float,
                              tx_sets: np.ndarray, rx_sets: np.ndarray) -> np.ndarray:
        """Пропускные способности всех пар (tx, rx) в лексикографическом порядке"""
        chunk = max(1, CHUNK_SUBCHANNELS // len(rx_sets))
        rows = rx_sets[None, :, :, None]
        parts = []
        for start in range(0, len(tx_sets), chunk):
            cols = tx_sets[start:start + chunk][:, None, None, :]
            parts.append(self.matrix.stacked_capacity(h[rows, cols], power).reshape(-1))
        return np.concatenate(parts)

    @staticmethod
    def _removal_candidates(h: np.ndarray, active: dict, side: str) -> np.ndarray:
        """Стопка подканалов, получаемых удалением каждой активной антенны стороны side"""
        rx, tx = active["rx"], active["tx"]
        stack = []
        for pos in range(len(active[side])):
            if side == "rx":
                rows, cols = rx[:pos] + rx[pos + 1:], tx
            else:
                rows, cols = rx, tx[:pos] + tx[pos + 1:]
            stack.append(h[np.ix_(rows, cols)])
        return np.stack(stack)

    def _first_tied(self, capacities: np.ndarray) -> int:
        """Первый индекс среди значений, совпадающих с максимумом с точностью tie_tolerance"""
        best = float(np.max(capacities))
        window = self.tie_tolerance * max(1.0, abs(best))
        return int(np.flatnonzero(capacities >= best - window)[0])

    def _selection_capacity(self, channel: MimoChannel, selection: Selection, power: float) -> float:
        sub = self.channels.subchannel(channel, selection.tx, selection.rx)
        return self.channels.capacity(sub, power).capacity_bits

    @staticmethod
    def _validate(channel: MimoChannel, power: float, k_t: int, k_r: int) -> None:
        for is_valid, error in (
            validate_power(power),
            validate_selection_size(k_t, channel.n_t, "tx"),
            validate_selection_size(k_r, channel.n_r, "rx"),
        ):
            if not is_valid:
                raise InvalidInputError(error)
