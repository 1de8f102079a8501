import argparse
import sys
from typing import List, Optional

from liouville_fbm import _commands  # noqa: F401
from liouville_fbm._core.app import EXIT_CONFIG_ERROR, ExperimentApp
from liouville_fbm._core.command_registry import CommandRegistry
from liouville_fbm._core.errors import ConfigError
from liouville_fbm._core.experiment_config import ExperimentConfig, load_experiment_config
from liouville_fbm._version import __version__


def _flag(field_name: str) -> str:
    return "--" + field_name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfbm",
        description="Liouville fBm experiments: fractional calculus, Ito isometries and stochastic heat equations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    for name in CommandRegistry.names():
        doc = (CommandRegistry.resolve(name).__doc__ or "").strip().splitlines()
        sub = commands.add_parser(name, help=doc[0] if doc else None, allow_abbrev=False)
        sub.add_argument("--config", help="key=value experiment file")
        sub.add_argument("--settings-dir", default="config", help="directory of <APP_ENV>.json settings")
        sub.add_argument("--env", default=None, help="settings file name without .json")
        for field_name, field in ExperimentConfig.model_fields.items():
            default = field.get_default(call_default_factory=True)
            sub.add_argument(_flag(field_name), dest=field_name, default=None, metavar=field_name.upper(),
                             help=f"default: {default}")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {name: getattr(args, name) for name in ExperimentConfig.model_fields}
    try:
        config = load_experiment_config(args.config, overrides)
    except ConfigError as ex:
        print(f"config error: {ex}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    return ExperimentApp(settings_dir=args.settings_dir, env=args.env).run(args.command, config)


if __name__ == "__main__":
    sys.exit(main())
