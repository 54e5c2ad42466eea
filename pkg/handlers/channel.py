import argparse
import logging
from typing import Optional

from handlers.base import EXIT_OK, EXIT_VERIFICATION_FAILED, BaseHandler
from models.selection import SelectionOutput
from services.channel_service import ChannelService
from services.logger import ReportLogger
from services.selection_service import SelectionService

logger = logging.getLogger(__name__)


class ChannelHandler(BaseHandler):
    """Обработчик команд для отдельного канала: capacity и select"""

    def __init__(self, report_logger: Optional[ReportLogger] = None,
                 selection_service: Optional[SelectionService] = None):
        super().__init__(report_logger)
        self.selection = selection_service or SelectionService()
        self.channels: ChannelService = self.selection.channels

    def register(self, subparsers: argparse._SubParsersAction) -> None:
        """Регистрирует команды capacity и select"""
        capacity = self._add_command(subparsers, "capacity", self.capacity_command,
                                     "Пропускная способность log2 det(I + P·HH†)")
        capacity.add_argument("--channel", required=True, help="Файл канала (JSON или CSV)")
        capacity.add_argument("--power", required=True, type=float, help="Мощность P")

        select = self._add_command(subparsers, "select", self.select_command,
                                   "Лучший подканал k_t x k_r и проверка границ")
        select.add_argument("--channel", required=True, help="Файл канала (JSON или CSV)")
        select.add_argument("--power", required=True, type=float, help="Мощность P")
        select.add_argument("--kt", required=True, type=int, help="Число передающих антенн")
        select.add_argument("--kr", required=True, type=int, help="Число приемных антенн")
        select.add_argument("--method", choices=["exhaustive", "greedy"], default="exhaustive")
        select.add_argument("--order", choices=["rx-first", "tx-first"], default="rx-first",
                            help="Порядок жадного прореживания")
        select.add_argument("--cap", type=int, default=None, help="Лимит полного перебора")

    async def capacity_command(self, args: argparse.Namespace) -> int:
        """Обработчик команды capacity"""
        channel = self.channels.load_channel(args.channel)
        report = self.channels.capacity(channel, args.power)
        await self.publish(report, args)
        return EXIT_OK

    async def select_command(self, args: argparse.Namespace) -> int:
        """Обработчик команды select"""
        channel = self.channels.load_channel(args.channel)
        full = self.channels.capacity(channel, args.power)

        if args.method == "exhaustive":
            result = self.selection.exhaustive_best(channel, args.power, args.kt, args.kr, cap=args.cap)
        else:
            order = args.order.replace("-", "_")
            result = self.selection.greedy_prune(channel, args.power, args.kt, args.kr, order=order)

        bounds = self.selection.bounds_for(full, result)
        output = SelectionOutput(
            power=args.power,
            full_capacity_bits=full.capacity_bits,
            result=result,
            bounds=bounds,
        )
        await self.publish(output, args)

        # Для жадного выбора гарантирована только первая граница
        asserted = bounds if args.method == "exhaustive" else [b for b in bounds if b.theorem == 1]
        if not all(bound.satisfied for bound in asserted):
            logger.warning("Выбранный подканал нарушает гарантированную границу")
            return EXIT_VERIFICATION_FAILED
        return EXIT_OK
