import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO, Union

from pydantic import BaseModel

from models.reports import IdentityRun, VerificationRun

logger = logging.getLogger(__name__)


class ReportLogger:
    """Сервис вывода отчетов: JSON в stdout и файл, краткая сводка в stderr"""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream

    def emit(self, report: BaseModel) -> str:
        """
        Печатает отчет как JSON в stdout

        Args:
            report: Модель отчета

        Returns:
            str: Выведенный JSON
        """
        payload = report.model_dump_json(indent=2)
        stream = self.stream or sys.stdout
        stream.write(payload + "\n")
        stream.flush()
        return payload

    async def save_report(self, report: BaseModel, path: Union[str, Path]) -> bool:
        """
        Сохраняет отчет в файл

        Args:
            report: Модель отчета
            path: Путь к файлу

        Returns:
            bool: Успешность записи
        """
        try:
            payload = report.model_dump_json(indent=2)
            await asyncio.to_thread(Path(path).write_text, payload + "\n", encoding="utf-8")
            logger.info(f"Отчет записан в {path}")
            return True

        except Exception as e:
            logger.error(f"Ошибка записи отчета в {path}: {e}")
            return False

    def summarize(self, report: BaseModel) -> None:
        """Пишет в журнал краткую сводку прогона"""
        if isinstance(report, VerificationRun):
            status = "выполнена" if report.passed else "НАРУШЕНА"
            logger.info(f"Граница {report.theorem} ({report.method}): {status}; "
                        f"проверок {report.checks}, минимальный запас {report.min_slack_bits:.6g} бит")
            for line in self._format_failures(report):
                logger.warning(line)
        elif isinstance(report, IdentityRun):
            failed = [r for r in report.reports if not r.passed]
            logger.info(f"Тождества n={report.n}: проверено {len(report.reports)}, "
                        f"не выполнено {len(failed)}")
            for r in failed[:3]:
                logger.warning(f"{r.identity} k={r.k}: относительная ошибка {r.max_rel_error:.3e}")

    def _format_failures(self, report: VerificationRun) -> List[str]:
        """
        Форматирует первые нарушения для журнала

        Args:
            report: Прогон проверки

        Returns:
            List[str]: Не более трех строк
        """
        lines = []

        # Берем только первые 3 нарушения
        for failure in report.failures[:3]:
            lines.append(
                f"Испытание {failure.trial} (зерно {failure.channel_seed}): "
                f"{failure.n_t}x{failure.n_r} -> {failure.k_t}x{failure.k_r}, "
                f"P={failure.power}, запас {failure.slack_bits:.3e}"
            )

        if len(report.failures) > 3:
            lines.append(f"... и еще {len(report.failures) - 3}")

        return lines
