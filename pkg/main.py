"""
Kit CSW-GEC
Entry point de la línea de comandos.

Uso:
    python main.py <comando> [opciones]

Comandos: tag, metrics, gen-llm, gen-translate, gen-parallel, corrupt,
extract-edits, score, decode, grid-search, assemble, dedup, split.
"""

import argparse
import sys
from typing import Optional

from pydantic import ValidationError

from models.exceptions import CswGecError, UsageError
from routers import datasets, decoding, errors, generation, text
from tools.run_config import build_run_config

ROUTERS = [text, generation, errors, decoding, datasets]


class CliParser(argparse.ArgumentParser):
    """argparse sale con 1 en los errores de uso."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"❌ {message}", file=sys.stderr)
        self.exit(UsageError.exit_code)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Semilla global")
    common.add_argument("--format", default=None, help="Formato de entrada o salida según el comando")
    common.add_argument("--manifest", default=None, help="Manifiesto de etapa (assemble)")
    common.add_argument("--config", default=None, help="Fichero dotenv cuyas claves pisan a los flags")
    common.add_argument("-o", "--output", default=None, help="Fichero o directorio de salida (stdout si se omite)")
    common.add_argument("--shuffle", action="store_true", help="Baraja los registros de salida con la semilla")
    return common


def build_parser() -> CliParser:
    parser = CliParser(prog="cswgec", description="Datos sintéticos y evaluación de GEC para texto code-switched")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)
    common = _common_flags()
    for router in ROUTERS:
        router.register(subparsers, common)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = build_run_config(args)
        args.handler(args, run)
    except ValidationError as e:
        print(f"❌ Configuración no válida: {e.errors()[0]['msg']}", file=sys.stderr)
        return UsageError.exit_code
    except CswGecError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
