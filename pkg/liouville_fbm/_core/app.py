import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from opentelemetry.trace import StatusCode

from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._core.configuration import Settings, get_settings, load_configurations, reset_configurations
from liouville_fbm._core.errors import ConfigError
from liouville_fbm._core.experiment_config import ExperimentConfig
from liouville_fbm._io.json_writer import write_json
from liouville_fbm._io.report import RunReport
from liouville_fbm._lmt.activity import Activity
from liouville_fbm._lmt.log_config import configure_logger, set_run_id
from liouville_fbm._lmt.tracing import configure_tracing, flush_tracing
from liouville_fbm._version import __version__

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_CONFIG_ERROR = 2

REPORT_FILE = "report.json"


class ExperimentApp:
    def __init__(self, name: str = "liouville_fbm", settings_dir: str = "config", env: Optional[str] = None):
        """
        Runs one registered subcommand per call.

        Args:
            name (str): Service name attached to exported spans.
            settings_dir (str): Directory holding ``<APP_ENV>.json`` settings files.
                When it does not exist the default settings are used.
            env (str, optional): Settings file to load; defaults to ``APP_ENV`` or ``dev``.
        """
        self.name = name
        self.settings_dir = settings_dir
        self.env = env
        self.logger = logging.getLogger(__name__)

    def _load_settings(self) -> Settings:
        if not Path(self.settings_dir).is_dir():
            reset_configurations()
            return get_settings()
        try:
            return load_configurations(self.settings_dir, self.env)
        except FileNotFoundError as ex:
            raise ConfigError(str(ex)) from ex

    @contextmanager
    def setup_services(self, command: str, config: ExperimentConfig) -> Iterator[Settings]:
        """
        Load settings, configure logging and optional span export, and tag
        every log record of the run with ``<command>:<seed>``.
        """
        try:
            settings = self._load_settings()
            configure_logger(settings.log_level)
            set_run_id(f"{command}:{config.seed}")
            self.logger.info("Settings loaded (env=%s, workers=%d)", self.env or "default", settings.workers)

            output_dir = Path(config.output_dir)
            output_dir.mkdir(parents=True, exist_ok=True)
            if settings.trace_spans:
                configure_tracing(self.name, str(output_dir))
                self.logger.info("Span export to %s configured", output_dir)
            yield settings
        finally:
            self.cleanup()

    def cleanup(self) -> None:
        flush_tracing()
        self.logger.debug("Spans flushed")

    def run(self, command: str, config: ExperimentConfig) -> int:
        """Execute ``command`` and write its report; returns the process exit code."""
        handler = CommandRegistry.resolve(command)
        try:
            with self.setup_services(command, config) as settings:
                report = RunReport(
                    command=command,
                    version=__version__,
                    config=config.echo(),
                    settings=settings.model_dump(),
                )
                ctx = CommandContext(config=config, settings=settings, report=report, output_dir=Path(config.output_dir))
                started = time.perf_counter()
                with Activity(f"command.{command}", {"seed": config.seed}) as activity:
                    try:
                        handler(ctx)
                    except ConfigError:
                        raise
                    except Exception as ex:
                        activity.set_status(StatusCode.ERROR, str(ex))
                        self.logger.exception(
                            "Unhandled exception in command Trace: [%s] Command: [%s] : %s",
                            Activity.get_trace_id(), command, ex,
                        )
                        return EXIT_FAILED
                write_json(ctx.artifact(REPORT_FILE), report.to_document())
                failed = [c.name for c in report.checks if not c.passed]
                self.logger.info("%s finished in %.2fs: %d checks, %d failed",
                                 command, time.perf_counter() - started, len(report.checks), len(failed))
                if failed:
                    self.logger.warning("Failed checks: %s", ", ".join(failed))
                print(report.summary_frame().to_string(index=False))
                return EXIT_PASSED if report.all_passed else EXIT_FAILED
        except ConfigError as ex:
            self.logger.error("Invalid configuration: %s", ex)
            return EXIT_CONFIG_ERROR
