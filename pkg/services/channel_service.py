import csv
import logging
import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from pydantic import ValidationError

from models.channel import CapacityReport, ChannelFile, MimoChannel
from models.matrix import SubsetIndex
from services.matrix_service import MatrixService
from utils.errors import ChannelParseError, InvalidInputError
from utils.validators import validate_power

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1


class ChannelService:
    """Сервис MIMO-каналов: пропускная способность, подканалы, генераторы, файлы"""

    def __init__(self, matrix_service: Optional[MatrixService] = None):
        self.matrix = matrix_service or MatrixService()

    def capacity(self, channel: MimoChannel, power: float) -> CapacityReport:
        """
        Вычисляет C = log2 det(I + P·HH†)

        Args:
            channel: MIMO-канал
            power: Мощность P > 0

        Returns:
            CapacityReport: Пропускная способность и спектр формы Грама
        """
        is_valid, error = validate_power(power)
        if not is_valid:
            raise InvalidInputError(error)

        form = self.matrix.gram(channel, power)
        capacity_bits = self.matrix.log_det(form)

        return CapacityReport(
            capacity_bits=max(0.0, capacity_bits),
            power=power,
            n_t=channel.n_t,
            n_r=channel.n_r,
            spectrum=[float(v) for v in self.matrix.eigenvalues(form)],
        )

    def subchannel(self, channel: MimoChannel, tx: SubsetIndex, rx: SubsetIndex) -> MimoChannel:
        """
        Выделяет подканал k_r x k_t со строками rx и столбцами tx

        Args:
            channel: Исходный канал
            tx: Передающие антенны над [n_t]
            rx: Приемные антенны над [n_r]

        Returns:
            MimoChannel: Копия подматрицы H
        """
        if tx.universe != channel.n_t:
            raise InvalidInputError(
                f"Подмножество передатчиков над [{tx.universe}], а n_t = {channel.n_t}")
        if rx.universe != channel.n_r:
            raise InvalidInputError(
                f"Подмножество приемников над [{rx.universe}], а n_r = {channel.n_r}")
        return MimoChannel(H=channel.H[np.ix_(rx.zero_based(), tx.zero_based())])

    def gen_all_ones(self, n_t: int, n_r: int) -> MimoChannel:
        """Канал n_r x n_t из единиц"""
        self._check_dims(n_t, n_r)
        return MimoChannel(H=np.ones((n_r, n_t), dtype=np.complex128))

    def gen_parallel(self, n: int) -> MimoChannel:
        """Параллельный канал с единичной матрицей n x n"""
        self._check_dims(n, n)
        return MimoChannel(H=np.eye(n, dtype=np.complex128))

    def gen_gaussian(self, n_t: int, n_r: int, seed: int) -> MimoChannel:
        """
        Канал с i.i.d. коэффициентами CN(0, 1)

        Args:
            n_t: Число передающих антенн
            n_r: Число приемных антенн
            seed: 64-битное зерно

        Returns:
            MimoChannel: Детерминированный при заданном зерне канал
        """
        self._check_dims(n_t, n_r)
        rng = np.random.default_rng(int(seed) & SEED_MASK)
        parts = rng.standard_normal((n_r, n_t, 2)) / math.sqrt(2.0)
        return MimoChannel(H=parts[..., 0] + 1j * parts[..., 1])

    def load_channel(self, path: Union[str, Path]) -> MimoChannel:
        """
        Загружает канал из JSON или CSV файла

        Args:
            path: Путь к файлу (.csv - CSV, иначе JSON)

        Returns:
            MimoChannel: Загруженный канал
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ChannelParseError(path, f"Не удалось прочитать файл: {e}")

        if path.suffix.lower() == ".csv":
            channel = self._parse_csv(path, text)
        else:
            channel = self._parse_json(path, text)

        logger.info(f"Загружен канал {channel.n_r}x{channel.n_t} из {path}")
        return channel

    def save_channel(self, channel: MimoChannel, path: Union[str, Path],
                     power_hint: Optional[float] = None) -> None:
        """
        Сохраняет канал в JSON или CSV файл

        Args:
            channel: Канал
            path: Путь к файлу
            power_hint: Рекомендуемая мощность (только JSON)
        """
        path = Path(path)
        if path.suffix.lower() == ".csv":
            rows = [[repr(channel.n_r), repr(channel.n_t)]]
            for row in channel.H:
                line: List[str] = []
                for z in row:
                    line.extend([repr(float(z.real)), repr(float(z.imag))])
                rows.append(line)
            with path.open("w", newline="", encoding="utf-8") as handle:
                csv.writer(handle).writerows(rows)
        else:
            document = ChannelFile.from_channel(channel, power_hint=power_hint)
            path.write_text(document.model_dump_json(exclude_none=True), encoding="utf-8")

    def _parse_json(self, path: Path, text: str) -> MimoChannel:
        try:
            document = ChannelFile.model_validate_json(text)
        except ValidationError as e:
            error = e.errors()[0]
            location = ".".join(str(part) for part in error["loc"]) or None
            raise ChannelParseError(path, error["msg"], location=location)
        return MimoChannel(H=document.to_matrix())

    def _parse_csv(self, path: Path, text: str) -> MimoChannel:
        rows = [(lineno, row) for lineno, row in enumerate(csv.reader(text.splitlines()), 1)
                if row and any(cell.strip() for cell in row)]
        if rows and [cell.strip() for cell in rows[0][1]] == ["n_r", "n_t"]:
            rows = rows[1:]
        if not rows:
            raise ChannelParseError(path, "Пустой файл")

        lineno, header = rows[0]
        try:
            n_r, n_t = (int(cell) for cell in header)
        except ValueError:
            raise ChannelParseError(path, "Ожидался заголовок 'n_r,n_t'", location=f"line {lineno}")
        if n_r < 1 or n_t < 1:
            raise ChannelParseError(path, f"Размеры должны быть положительными: {n_r}x{n_t}",
                                    location=f"line {lineno}")

        body = rows[1:]
        if len(body) != n_r:
            raise ChannelParseError(path, f"Ожидалось {n_r} строк матрицы, найдено {len(body)}")

        h = np.empty((n_r, n_t), dtype=np.complex128)
        for i, (lineno, row) in enumerate(body):
            if len(row) != 2 * n_t:
                raise ChannelParseError(path, f"Ожидалось {2 * n_t} чисел, найдено {len(row)}",
                                        location=f"line {lineno}")
            try:
                values = [float(cell) for cell in row]
            except ValueError as e:
                raise ChannelParseError(path, str(e), location=f"line {lineno}")
            if not all(math.isfinite(v) for v in values):
                raise ChannelParseError(path, "Нечисловое или бесконечное значение",
                                        location=f"line {lineno}")
            h[i] = np.array(values[0::2]) + 1j * np.array(values[1::2])

        return MimoChannel(H=h)

    @staticmethod
    def _check_dims(n_t: int, n_r: int) -> None:
        if n_t < 1 or n_r < 1:
            raise InvalidInputError(f"Размеры канала должны быть положительными: n_t={n_t}, n_r={n_r}")
