import asyncio
import logging
import sys
from typing import Optional, Sequence

from config import settings, validate_settings
from handlers import ChannelHandler, VerifyHandler, build_parser
from handlers.base import EXIT_INVALID_INPUT

# Настройка логирования: журнал в stderr, отчеты в stdout
logging.basicConfig(
    level=getattr(logging, settings.log_level),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)


async def main(argv: Optional[Sequence[str]] = None) -> int:
    """Главная функция приложения"""
    try:
        validate_settings()
    except ValueError as e:
        logger.error(str(e))
        return EXIT_INVALID_INPUT

    parser = build_parser(ChannelHandler(), VerifyHandler())
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse завершает работу кодом 2 при ошибке разбора и 0 для --help
        return e.code if isinstance(e.code, int) else EXIT_INVALID_INPUT

    logger.debug(f"Команда {args.name}: {vars(args)}")
    return await args.dispatcher.dispatch(args)


if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        logger.info("Остановлено пользователем")
        sys.exit(130)
