import argparse
import logging
from typing import List, Optional, Tuple

from config import settings
from handlers.base import EXIT_OK, EXIT_VERIFICATION_FAILED, BaseHandler
from services.logger import ReportLogger
from services.verification_service import VerificationService
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

CASES = {"all-ones": "all_ones_low_snr", "parallel": "parallel"}


def parse_powers(text: str) -> List[float]:
    """Разбирает список мощностей через запятую"""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Некорректный список мощностей: {text}")


def parse_dims(text: str) -> Tuple[int, int]:
    """Разбирает размеры вида 3x4 (n_t x n_r) или 4 (квадратный канал)"""
    try:
        parts = [int(part) for part in text.lower().split("x")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Некорректные размеры: {text}")
    if len(parts) == 1:
        return parts[0], parts[0]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"Ожидались размеры вида n_txn_r, получено {text}")
    return parts[0], parts[1]


class VerifyHandler(BaseHandler):
    """Обработчик команд проверки: verify, identity, tight"""

    def __init__(self, report_logger: Optional[ReportLogger] = None,
                 verification_service: Optional[VerificationService] = None):
        super().__init__(report_logger)
        self.verification = verification_service or VerificationService()

    def register(self, subparsers: argparse._SubParsersAction) -> None:
        """Регистрирует команды verify, identity и tight"""
        verify = self._add_command(subparsers, "verify", self.verify_command,
                                   "Монте-Карло проверка границы на гауссовских каналах")
        verify.add_argument("--theorem", type=int, choices=[1, 2], required=True)
        verify.add_argument("--trials", type=int, default=100)
        verify.add_argument("--max-n", type=int, default=6)
        verify.add_argument("--min-n", type=int, default=1)
        verify.add_argument("--powers", type=parse_powers, default=None,
                            help="Мощности через запятую (по умолчанию 0.01,1,100)")
        verify.add_argument("--seed", type=int, default=0)
        verify.add_argument("--method", choices=["exhaustive", "greedy"], default="exhaustive")

        identity = self._add_command(subparsers, "identity", self.identity_command,
                                     "Проверка тождеств для главных подматриц")
        identity.add_argument("--n", type=int, required=True)
        identity.add_argument("--k", type=str, default="all", help="Размер подмножеств или all")
        identity.add_argument("--trials", type=int, default=20)
        identity.add_argument("--seed", type=int, default=0)
        identity.add_argument("--tol", type=float, default=1e-8)
        identity.add_argument("--power", type=float, default=1.0)

        tight = self._add_command(subparsers, "tight", self.tight_command,
                                  "Примеры, на которых границы достигаются")
        tight.add_argument("--case", choices=sorted(CASES), required=True)
        tight.add_argument("--dims", type=parse_dims, required=True, help="n_txn_r, например 3x3")
        tight.add_argument("--kt", type=int, required=True)
        tight.add_argument("--kr", type=int, required=True)
        tight.add_argument("--power", type=float, required=True)

    async def verify_command(self, args: argparse.Namespace) -> int:
        """Обработчик команды verify"""
        run = await self.verification.verify_theorem(
            theorem=args.theorem,
            trials=args.trials,
            max_n=args.max_n,
            powers=settings.default_powers if args.powers is None else args.powers,
            seed=args.seed,
            method=args.method,
            min_n=args.min_n,
        )
        await self.publish(run, args)
        if run.failures and run.asserted:
            return EXIT_VERIFICATION_FAILED
        return EXIT_OK

    async def identity_command(self, args: argparse.Namespace) -> int:
        """Обработчик команды identity"""
        if args.k == "all":
            ks = None
        else:
            try:
                ks = [int(args.k)]
            except ValueError:
                raise InvalidInputError(f"--k должно быть числом или all, получено {args.k}")

        run = await self.verification.verify_identities(
            n=args.n, ks=ks, trials=args.trials, seed=args.seed, tol=args.tol, power=args.power)
        await self.publish(run, args)
        return EXIT_OK if run.passed else EXIT_VERIFICATION_FAILED

    async def tight_command(self, args: argparse.Namespace) -> int:
        """Обработчик команды tight"""
        n_t, n_r = args.dims
        report = self.verification.tight(CASES[args.case], n_t, n_r, args.kt, args.kr, args.power)
        await self.publish(report, args)
        return EXIT_OK
