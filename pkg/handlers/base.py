import argparse
import logging
from typing import Awaitable, Callable, Optional

from pydantic import BaseModel

from services.logger import ReportLogger
from utils.errors import MimoSelectError

logger = logging.getLogger(__name__)

# Коды выхода
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_RESOURCE_CAP = 3

Command = Callable[[argparse.Namespace], Awaitable[int]]

DESCRIPTION = """
Выбор антенн в гауссовском MIMO-канале и проверка универсальных границ.

Команды:
  capacity  пропускная способность канала из файла
  select    лучший подканал k_t x k_r (перебор или жадное прореживание) и границы
  verify    Монте-Карло проверка границы на случайных каналах
  identity  проверка тождеств для главных подматриц
  tight     примеры, на которых границы достигаются

Коды выхода: 0 - успех, 1 - нарушение границы или тождества,
2 - некорректный ввод, 3 - превышен лимит перебора.
"""


class BaseHandler:
    """Базовый обработчик команд: общие опции, вывод отчетов и коды выхода"""

    def __init__(self, report_logger: Optional[ReportLogger] = None):
        self.reports = report_logger or ReportLogger()

    def register(self, subparsers: argparse._SubParsersAction) -> None:
        """Регистрирует команды обработчика"""
        raise NotImplementedError

    def _add_command(self, subparsers: argparse._SubParsersAction, name: str,
                     command: Command, help_text: str) -> argparse.ArgumentParser:
        """Создает подкоманду с общей опцией --report"""
        parser = subparsers.add_parser(name, help=help_text, description=help_text)
        parser.add_argument("--report", type=str, default=None,
                            help="Дополнительно записать JSON-отчет в файл")
        parser.set_defaults(command=command, dispatcher=self)
        return parser

    async def dispatch(self, args: argparse.Namespace) -> int:
        """
        Выполняет команду и переводит ошибки в коды выхода

        Args:
            args: Разобранные аргументы

        Returns:
            int: Код выхода
        """
        try:
            return await args.command(args)

        except MimoSelectError as e:
            logger.error(f"{type(e).__name__}: {e}")
            return e.exit_code

    async def publish(self, report: BaseModel, args: argparse.Namespace) -> None:
        """Печатает отчет и, если задан --report, сохраняет его"""
        self.reports.emit(report)
        self.reports.summarize(report)
        if args.report:
            await self.reports.save_report(report, args.report)


def build_parser(*handlers: BaseHandler) -> argparse.ArgumentParser:
    """
    Собирает парсер командной строки из обработчиков

    Args:
        handlers: Обработчики, регистрирующие свои команды

    Returns:
        argparse.ArgumentParser: Готовый парсер
    """
    parser = argparse.ArgumentParser(
        prog="mimo-select",
        description=DESCRIPTION,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="name", required=True)
    for handler in handlers:
        handler.register(subparsers)
    return parser
