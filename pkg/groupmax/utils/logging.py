import json
import logging
import sys
from datetime import date
from pathlib import Path

from loguru import logger

from groupmax.config.settings import settings
from groupmax.utils.context import get_run_id

DEFAULT_CONSOLE_FORMAT = (
    "<level>{level: <8}</level> <green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> "
    "run id: {extra[run_id]} - <cyan>{name}</cyan>:<cyan>{function}</cyan> - "
    "<level>{message}</level>"
)


def _stamp_run_id(record):
    record["extra"]["run_id"] = get_run_id() or record["extra"].get("run_id", "main")


class InterceptHandler(logging.Handler):
    loglevel_mapping = {
        50: "CRITICAL",
        40: "ERROR",
        30: "WARNING",
        20: "INFO",
        10: "DEBUG",
        0: "NOTSET",
    }

    def emit(self, record):
        try:
            level = logger.level(record.levelname).name
        except (AttributeError, ValueError):
            level = self.loglevel_mapping[record.levelno]

        frame, depth = logging.currentframe(), 2
        while frame and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        log = logger.bind(run_id=get_run_id() or "main")
        log.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


class CustomizeLogger:
    @classmethod
    def make_logger(
        cls,
        config_path: Path,
        environment: str = "logger",
        log_to_file: bool = False,
        level: str | None = None,
    ):
        config = cls.load_logging_config(config_path)
        logging_config = config.get(environment, config.get("logger", {}))

        return cls.customize_logging(
            log_dir=logging_config.get("log_dir", "logs"),
            filename=f"{date.today().strftime('%Y-%m-%d')}-{logging_config.get('filename', 'groupmax.log')}",
            level=level or logging_config.get("level", "info"),
            rotation=logging_config.get("rotation", "100 MB"),
            retention=logging_config.get("retention", "30 days"),
            console_format=logging_config.get("console_format", DEFAULT_CONSOLE_FORMAT),
            file_format=logging_config.get("file_format", "json"),
            use_json_logs=logging_config.get("use_json_logs", False),
            log_to_file=log_to_file,
        )

    @classmethod
    def customize_logging(
        cls,
        log_dir: str,
        filename: str,
        level: str,
        rotation: str,
        retention: str,
        console_format: str,
        file_format: str,
        use_json_logs: bool = False,
        log_to_file: bool = False,
    ):
        logger.remove()
        # module-level loggers are bound at import; the patcher stamps the live run id
        logger.configure(extra={"run_id": "main"}, patcher=_stamp_run_id)

        # stdout carries command output, logs go to stderr
        logger.add(
            sys.stderr,
            backtrace=True,
            level=level.upper(),
            format=console_format,
            colorize=True,
        )

        if log_to_file:
            if use_json_logs and file_format == "json":
                logger.add(
                    str(Path(log_dir) / filename),
                    rotation=rotation,
                    retention=retention,
                    enqueue=True,
                    backtrace=True,
                    level=level.upper(),
                    serialize=True,
                    colorize=False,
                )
            else:
                logger.add(
                    str(Path(log_dir) / filename),
                    rotation=rotation,
                    retention=retention,
                    enqueue=True,
                    backtrace=True,
                    level=level.upper(),
                    format=file_format,
                    colorize=False,
                )

        cls._setup_intercept_handlers()

        return logger

    @staticmethod
    def _setup_intercept_handlers():
        logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)

        for log_name in ["py.warnings", "numpy"]:
            _logger = logging.getLogger(log_name)
            _logger.handlers = [InterceptHandler()]

    @staticmethod
    def load_logging_config(config_path: Path) -> dict:
        if not Path(config_path).exists():
            return {}
        with open(config_path) as config_file:
            return json.load(config_file)


def configure_logging(level: str | None = None):
    """Install the console (and optional file) sinks. Called by the CLI only."""
    environment = "production" if settings.ENVIRONMENT == "production" else "logger"
    return CustomizeLogger.make_logger(
        Path(settings.LOGGING_CONFIG_PATH),
        environment,
        log_to_file=settings.LOG_TO_FILE,
        level=level or settings.LOG_LEVEL,
    )


def get_logger():
    """Get the logger bound to the current run ID."""
    return logger.bind(run_id=get_run_id() or "main")
