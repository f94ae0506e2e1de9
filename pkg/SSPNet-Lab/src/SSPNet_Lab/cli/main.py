"""
Command-line entry point: ``sspnet-lab <subcommand> [flags]``.

Every setting of a subcommand can come from ``--config FILE`` or from a
flag of the same name (underscores become dashes); flags win.
"""

import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path

from ..core.errors import LabError
from .commands import COMMANDS
from .config import SCHEMAS, load_config_file, parse_bool, resolve

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
PROG = "sspnet-lab"


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format=LOG_FORMAT, force=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="SSP residual block lab")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key = value settings file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out-dir", "--out", dest="out_dir", default=None,
                       help="output directory (default ./runs/<timestamp>-<subcommand>)")
        p.add_argument("--verbose", "-v", action="store_true")
        for key, setting in SCHEMAS[name].items():
            flag = "--" + key.replace("_", "-")
            if setting.parse is parse_bool:
                p.add_argument(flag, dest=key, nargs="?", const="true", default=None, help=setting.help)
            else:
                p.add_argument(flag, dest=key, default=None, help=setting.help)
        p.set_defaults(func=func)
    return parser


def flag_settings(args: argparse.Namespace) -> dict[str, str]:
    settings = {key: getattr(args, key) for key in SCHEMAS[args.command] if getattr(args, key) is not None}
    if args.seed is not None:
        settings["seed"] = str(args.seed)
    return settings


def output_dir(args: argparse.Namespace) -> Path:
    if args.out_dir:
        return Path(args.out_dir)
    stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
    return Path("runs") / f"{stamp}-{args.command}"


def dispatch(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    configure_logging(args.verbose)
    try:
        file_settings = load_config_file(args.config) if args.config else {}
        run = resolve(args.command, file_settings, flag_settings(args))
        out_dir = None
        if args.command != "plot":
            out_dir = output_dir(args)
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / "config.txt").write_text(run.render(), encoding="utf-8")
        logger.info("%s: seed %d, output %s", args.command, run.seed, out_dir)
        args.func(run, out_dir)
    except (LabError, OSError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())
