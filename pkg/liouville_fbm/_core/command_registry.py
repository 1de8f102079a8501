from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List

from liouville_fbm._core.configuration import Settings
from liouville_fbm._core.experiment_config import ExperimentConfig
from liouville_fbm._io.report import RunReport


@dataclass
class CommandContext:
    """What a subcommand receives: its resolved config and the report it fills in."""

    config: ExperimentConfig
    settings: Settings
    report: RunReport
    output_dir: Path

    @property
    def z_threshold(self) -> float:
        return self.config.z_threshold if self.config.z_threshold is not None else self.settings.z_threshold

    def tolerance(self, default: float) -> float:
        return self.config.tolerance if self.config.tolerance is not None else default

    def artifact(self, name: str) -> Path:
        return self.output_dir / name


CommandHandler = Callable[[CommandContext], None]


class CommandRegistry:
    """
    Registry for subcommand handlers, allowing registration and retrieval by command name.
    """
    _handlers: Dict[str, CommandHandler] = {}

    @classmethod
    def register(cls, name: str):
        """
        Decorator to register a handler under a subcommand name.
        """
        if not isinstance(name, str) or not name:
            raise ValueError("command name must be a non-empty string.")

        def decorator(handler: CommandHandler):
            if name in cls._handlers:
                raise KeyError(f"Handler already registered for command: {name}")
            cls._handlers[name] = handler
            return handler
        return decorator

    @classmethod
    def resolve(cls, name: str) -> CommandHandler:
        if name not in cls._handlers:
            raise ValueError(f"No handler registered for command: {name}")
        return cls._handlers[name]

    @classmethod
    def names(cls) -> List[str]:
        return sorted(cls._handlers)
